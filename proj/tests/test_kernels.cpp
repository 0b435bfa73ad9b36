#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "selmer/arith.hpp"
#include "selmer/kernels.hpp"

using namespace selmer;

namespace {

std::vector<std::int32_t> chi_table(std::uint32_t ell) {
    std::vector<std::int32_t> chi(ell);
    for (std::uint32_t x = 0; x < ell; ++x) chi[x] = arith::legendre(x, ell);
    return chi;
}

std::int64_t naive_sum(const std::vector<std::int32_t>& chi, std::uint32_t ell, const std::vector<std::uint32_t>& c) {
    std::int64_t s = 0;
    for (std::uint64_t x = 0; x < ell; ++x) {
        std::uint64_t v = 0;
        for (std::size_t k = c.size(); k-- > 0;) v = (v * x + c[k]) % ell;
        s += chi[v];
    }
    return s;
}

}  // namespace

TEST_CASE("legendre sums: scalar, avx2 and a naive loop agree") {
    std::mt19937 rng(11);
    for (std::uint32_t ell : {3u, 5u, 7u, 31u, 101u, 997u, 10007u, 65537u}) {
        auto chi = chi_table(ell);
        for (int deg = 1; deg <= 4; ++deg) {
            for (int t = 0; t < 4; ++t) {
                std::vector<std::uint32_t> c(static_cast<std::size_t>(deg) + 1);
                for (auto& x : c) x = rng() % ell;
                c.back() = 1 + rng() % (ell - 1);
                auto s = kernels::legendre_sum_scalar(chi.data(), ell, c.data(), deg);
                if (ell < 2000) CHECK(s == naive_sum(chi, ell, c));
                if (kernels::detected_isa() == kernels::Isa::avx2)
                    CHECK(kernels::legendre_sum_avx2(chi.data(), ell, c.data(), deg) == s);
                CHECK(kernels::legendre_sum(chi.data(), ell, c.data(), deg) == s);
            }
        }
    }
}

TEST_CASE("mod-m matvec: scalar, avx2 and a naive loop agree") {
    std::mt19937 rng(5);
    for (std::size_t n : {1u, 3u, 7u, 8u, 9u, 17u, 64u, 127u}) {
        for (std::uint32_t m : {2u, 17u, 289u, 65521u, 2147483629u}) {
            if (static_cast<long double>(n) * m * m > 9e18L) continue;
            std::vector<std::uint32_t> A(n * n), x(n), y1(n), y2(n), y3(n);
            for (auto& a : A) a = rng() % m;
            for (auto& a : x) a = rng() % m;
            kernels::matvec_mod_scalar(A.data(), x.data(), y1.data(), n, m);
            for (std::size_t i = 0; i < n; ++i) {
                unsigned __int128 s = 0;
                for (std::size_t j = 0; j < n; ++j) s += static_cast<unsigned __int128>(A[i * n + j]) * x[j];
                CHECK(y1[i] == static_cast<std::uint32_t>(s % m));
            }
            if (kernels::detected_isa() == kernels::Isa::avx2) {
                kernels::matvec_mod_avx2(A.data(), x.data(), y2.data(), n, m);
                CHECK(y1 == y2);
            }
            kernels::matvec_mod(A.data(), x.data(), y3.data(), n, m);
            CHECK(y1 == y3);
        }
    }
}

TEST_CASE("dispatch can be forced") {
    auto before = kernels::active_isa();
    kernels::force_isa(kernels::Isa::scalar);
    CHECK(kernels::active_isa() == kernels::Isa::scalar);
    kernels::force_isa(kernels::Isa::avx2);
    CHECK(kernels::active_isa() == kernels::detected_isa());
    kernels::force_isa(before);
    CHECK(std::string(kernels::isa_name(kernels::Isa::avx2)) == "avx2");
}
