#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "selmer/arith.hpp"
#include "selmer/error.hpp"

using namespace selmer;
using arith::i64;
using arith::u64;

namespace {

bool trial_prime(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace

TEST_CASE("primality agrees with trial division") {
    for (u64 n = 0; n < 5000; ++n) CHECK(arith::is_prime(n) == trial_prime(n));
    CHECK(arith::is_prime(1000000007ULL));
    CHECK_FALSE(arith::is_prime(1000000007ULL * 3));
    CHECK(arith::next_prime(13) == 17);
    CHECK(arith::primes_up_to(30).size() == 10);
}

TEST_CASE("factorization round trips") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 300; ++t) {
        i64 n = static_cast<i64>(rng() % 1000000) + 1;
        auto f = arith::factor(n);
        CHECK(f.product() == static_cast<u64>(n));
        for (auto [p, e] : f.factors) {
            CHECK(arith::is_prime(p));
            CHECK(e >= 1);
        }
    }
    CHECK(arith::omega(2 * 3 * 5 * 7) == 4);
    CHECK(arith::is_squarefree(30));
    CHECK_FALSE(arith::is_squarefree(12));
    CHECK(arith::divisors(12) == std::vector<u64>{1, 2, 3, 4, 6, 12});
}

TEST_CASE("kronecker symbol matches Euler's criterion") {
    for (u64 p : arith::primes_up_to(200)) {
        if (p == 2) continue;
        for (i64 a = -30; a <= 30; ++a) {
            i64 r = arith::mod(a, static_cast<i64>(p));
            int want = r == 0 ? 0 : (arith::powmod(static_cast<u64>(r), (p - 1) / 2, p) == 1 ? 1 : -1);
            CHECK(arith::kronecker(a, static_cast<i64>(p)) == want);
            CHECK(arith::legendre(a, p) == want);
        }
    }
    // (d / 2) is determined by d mod 8
    CHECK(arith::kronecker(5, 2) == -1);
    CHECK(arith::kronecker(17, 2) == 1);
}

TEST_CASE("square roots and orders mod p") {
    for (u64 p : {3ULL, 5ULL, 13ULL, 17ULL, 97ULL, 1009ULL}) {
        for (u64 a = 1; a < p; ++a) {
            if (arith::legendre(static_cast<i64>(a), p) != 1) continue;
            u64 s = arith::sqrt_mod(a, p);
            CHECK(arith::mulmod(s, s, p) == a);
        }
        u64 o = arith::mult_order(2, p);
        CHECK(arith::powmod(2, o, p) == 1);
        CHECK((p - 1) % o == 0);
    }
    CHECK(arith::ord_p(48, 2) == 4);
    CHECK(!arith::ord_p(0, 3).has_value());
    CHECK(arith::inv_mod(3, 7) == 5);
    CHECK_THROWS_AS(arith::inv_mod(2, 4), Error);
    CHECK(arith::isqrt(99) == 9);
}
