#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "selmer/brandt.hpp"
#include "selmer/error.hpp"

using namespace selmer;
using arith::i64;
using arith::u64;

namespace {

const ec::EllipticCurveQ E11{{0, -1, 1, -10, -20}, 11};

std::map<u64, i64> traces(const ec::EllipticCurveQ& E, u64 bound) {
    std::map<u64, i64> t;
    for (u64 v = 2; v <= bound; v = arith::next_prime(v))
        if (E.conductor % static_cast<i64>(v)) t[v] = ec::ap_trace(E, v);
    return t;
}

brandt::Matrix mul(const brandt::Matrix& a, const brandt::Matrix& b) {
    std::size_t n = a.size();
    brandt::Matrix c(n, std::vector<i64>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

}  // namespace

TEST_CASE("Brandt matrices for D = 37") {
    auto cs = std::make_shared<const orders::ClassSetT>(orders::class_set_T(37, 1));
    brandt::BrandtT B(cs);
    std::vector<u64> ps = {2, 3, 5, 7, 11};
    for (u64 v : ps) {
        const auto& T = B.matrix(brandt::prime_key(v));
        for (std::size_t j = 0; j < T.size(); ++j) {
            i64 s = 0;
            for (std::size_t i = 0; i < T.size(); ++i) {
                CHECK(T[i][j] >= 0);
                s += T[i][j];
                CHECK(B.weights()[i] * T[i][j] == B.weights()[j] * T[j][i]);
            }
            CHECK(s == static_cast<i64>(v) + 1);
        }
    }
    for (u64 a : ps)
        for (u64 b : ps) CHECK(mul(B.matrix(brandt::prime_key(a)), B.matrix(brandt::prime_key(b))) ==
                               mul(B.matrix(brandt::prime_key(b)), B.matrix(brandt::prime_key(a))));
    // the trace of T_2 is 1 + a_2(37a) + a_2(37b) = 3 - 2 + 0
    const auto& T2 = B.matrix(brandt::prime_key(2));
    CHECK(T2[0][0] + T2[1][1] + T2[2][2] == 1);
}

TEST_CASE("eigenform of 11a on D = 11") {
    auto cs = std::make_shared<const orders::ClassSetT>(orders::class_set_T(11, 1));
    brandt::BrandtT B(cs);
    auto f = brandt::eigenform_from_traces(B, traces(E11, 200), 100);
    CHECK(f.cuspidal);
    // g is supported on both classes and pairs to zero against 1/w
    i64 s = 0;
    for (std::size_t i = 0; i < f.vector.size(); ++i) {
        CHECK(f.vector[i] % B.weights()[i] == 0);
        s += f.vector[i] / B.weights()[i];
    }
    CHECK(s == 0);
    for (auto [v, a] : f.eigenvalues) CHECK(a == ec::ap_trace(E11, v));
    CHECK(f.eigenvalues.size() >= 20);

    std::map<u64, i64> eis;
    for (auto [v, a] : traces(E11, 200)) eis[v] = static_cast<i64>(v) + 1;
    auto e = brandt::eigenform_from_traces(B, eis, 30);
    CHECK_FALSE(e.cuspidal);
    CHECK(e.vector == std::vector<i64>{1, 1});

    std::map<u64, i64> wrong = traces(E11, 200);
    wrong[2] = 1;
    CHECK_THROWS_AS(brandt::eigenform_from_traces(B, wrong, 50), Error);
}

TEST_CASE("eigenform over Q(sqrt 2) matches point counts") {
    auto F = quad::make_field(2);
    ec::EllipticCurveF A;
    A.a = {quad::OFElement{0, 1}, {1, 1}, {1, 1}, {-1, 1}, {-1, 0}};
    A.conductor_norm = 17;
    auto cs = std::make_shared<const orders::ClassSetS>(orders::class_set_S(F, quad::rational_ideal(F, 1)));
    (void)cs;
    quad::Ideal M;
    for (auto& P : quad::primes_above(F, 17))
        if (!ec::good_at(F, A, P)) M.factors.push_back({P, 1});
    auto S = std::make_shared<const orders::ClassSetS>(orders::class_set_S(F, M));
    brandt::BrandtS B(S);
    auto f = brandt::eigenform_pi(B, F, A, 50);
    CHECK(f.cuspidal);
    for (auto& P : quad::primes_up_to_norm(F, 50)) {
        if (!ec::good_at(F, A, P) || B.divides_level(brandt::prime_key(F, P))) continue;
        const auto& T = B.matrix(brandt::prime_key(F, P));
        i64 a = ec::trace_at(F, A, P);
        for (std::size_t j = 0; j < T.size(); ++j) {
            i64 s = 0;
            for (std::size_t i = 0; i < T.size(); ++i) s += T[i][j] * f.vector[i];
            CHECK(s == a * f.vector[j]);
        }
    }
}

TEST_CASE("level raising at 127") {
    auto m = brandt::level_raise(E11, 11, 1, 127, 17, 1, -1, 60);
    CHECK(m.vector.size() == 126);
    CHECK(m.op_sign == -1);
    auto cs = std::make_shared<const orders::ClassSetT>(orders::class_set_T(127, 11));
    brandt::BrandtT B(cs);
    for (u64 v : {2ULL, 3ULL, 5ULL})
        CHECK(brandt::satisfies_mod(B.matrix(brandt::prime_key(v)), m.vector, ec::ap_trace(E11, v), 17));
    CHECK_FALSE(brandt::satisfies_mod(B.matrix(brandt::prime_key(2)), m.vector, ec::ap_trace(E11, 2) + 1, 17));
    // the wrong sign leaves no eigenform
    CHECK_THROWS_AS(brandt::level_raise(E11, 11, 1, 127, 17, 1, 1, 60, cs), Error);
}
