#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "selmer/admissible.hpp"
#include "selmer/error.hpp"

using namespace selmer;
using arith::i64;
using arith::u64;

namespace {

const ec::EllipticCurveQ E11{{0, -1, 1, -10, -20}, 11};

admissible::PairContext odd_ctx() {
    auto F = quad::make_field(5);
    return admissible::make_context(E11, ec::base_change(ec::EllipticCurveQ{{1, 0, 1, 4, -6}, 14}, 196), F, 500);
}

}  // namespace

TEST_CASE("exceptional ratios: formula against enumeration of GL2") {
    for (u64 p : {5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL}) {
        CHECK(admissible::exceptional_ratios(p) == admissible::exceptional_ratios_bruteforce(p));
    }
    auto r11 = admissible::exceptional_ratios(11);
    CHECK(r11.count(0));
    CHECK(r11.count(4));
}

TEST_CASE("S3 trace avoidance") {
    // 2l and -2l are always excluded
    CHECK_FALSE(admissible::s3_ok(2 * 127, 127, 17));
    CHECK_FALSE(admissible::s3_ok(-2 * 127 + 17 * 5, 127, 17));
    CHECK_FALSE(admissible::s3_ok(127 * 127 + 1, 127, 17));
    // p = 17 is 1 mod 4, so a zero trace is excluded as well
    CHECK_FALSE(admissible::s3_ok(0, 127, 17));
    CHECK(admissible::s3_ok(0, 127, 19));
}

TEST_CASE("admissible primes for 11a over Q(sqrt 5), p = 17") {
    auto ctx = odd_ctx();
    auto adm = admissible::scan_n_admissible(ctx, 17, 1, 2000);
    REQUIRE(!adm.empty());
    CHECK(adm.front().ell == 127);
    CHECK(adm.front().epsilon_sigma == -1);
    for (auto& c : adm) {
        CHECK(quad::splitting(ctx.F, c.ell) == quad::Splitting::inert);
        CHECK((c.ell * c.ell - 1) % 17 != 0);
        i64 a = ec::ap_trace(E11, c.ell);
        CHECK(arith::mod(static_cast<i64>(c.ell) + 1 - c.epsilon_sigma * a, 17) == 0);
        CHECK(arith::mod(static_cast<i64>(c.ell) + 1 + c.epsilon_sigma * a, 17) != 0);
        CHECK((c.bitmap() & 31u) == 31u);
    }
    for (int eps : {1, -1}) {
        for (auto& c : admissible::scan_strongly_admissible(ctx, 17, 1, eps, 2000)) {
            REQUIRE(c.strong.has_value());
            CHECK(c.strong->epsilon == eps);
            CHECK(c.strong->s2);
            CHECK(c.strong->s3);
            i64 t = admissible::trace_Asq(ctx, c.ell);
            CHECK(arith::mod(t - 2 * static_cast<i64>(c.ell), 17) != 0);
            CHECK(arith::mod(t + 2 * static_cast<i64>(c.ell), 17) != 0);
        }
    }
}

TEST_CASE("good prime report") {
    auto ctx = odd_ctx();
    auto g = admissible::good_prime_report(ctx, 17, 500);
    CHECK(g.clauses.size() == 6);
    CHECK(g.clauses["P1"].verdict == admissible::Verdict::pass);
    CHECK(g.clauses["P3"].verdict == admissible::Verdict::pass);
    // 5 divides ord(Delta) at 11, the only bad prime, so P5 has no witness for p = 5
    auto g5 = admissible::good_prime_report(ctx, 5, 500);
    CHECK(g5.clauses["P5"].verdict == admissible::Verdict::inconclusive);
    CHECK_FALSE(g5.all_pass());
    auto r = admissible::check_assumption_R(ctx, 17, 2000);
    CHECK(r.clauses.size() == 6);
    CHECK(r.clauses["R5"].verdict == admissible::Verdict::pass);
}
