#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "selmer/error.hpp"
#include "selmer/kolyvagin.hpp"

using namespace selmer;
using arith::i64;
using arith::u64;
using kolyvagin::BigInt;
using kolyvagin::BigRational;

TEST_CASE("constants") {
    std::vector<u64> want = {1, 4, 10, 22, 46, 94};
    for (int r = 1; r <= 6; ++r) CHECK(kolyvagin::ff(r) == want[static_cast<std::size_t>(r - 1)]);
    CHECK(kolyvagin::fp_bad(11) == std::set<u64>{1, 10});
    CHECK(kolyvagin::fp_bad(17) == std::set<u64>{1, 4, 13, 16});
    CHECK(kolyvagin::fp_bad(13) == std::set<u64>{1, 3, 4, 5, 8, 9, 10, 12});
}

TEST_CASE("n_den") {
    CHECK(kolyvagin::n_den(BigRational(1, 2000), 11) == 3);
    CHECK(kolyvagin::n_den(BigRational(1, 1), 11) == 0);
    CHECK(kolyvagin::n_den(BigRational(1, 11), 11) == 1);  // 11^2 > 11 but 11^1 is not
    CHECK(kolyvagin::n_den(BigRational(1, 121), 11) == 2);
    CHECK(kolyvagin::n_den(BigRational(8, 27), 19) == 0);
    CHECK_THROWS_AS(kolyvagin::n_den(BigRational(0), 11), Error);
}

TEST_CASE("period sum on a toy configuration") {
    // two classes on each side, zeta the identity
    std::vector<i64> g{2, -3}, f{1, -2};
    std::vector<int> delta{0, 1, 1}, gamma{1, 0}, zeta{0, 1, 0};
    // t=0: f(gamma(0)) g(0) = -2*2; t=1: f(0) g(1) = -3; t=2: f(1) g(1) = 6
    CHECK(kolyvagin::period_sum(g, delta, f, gamma, zeta) == BigInt(-4 - 3 + 6));
    CHECK(kolyvagin::period_sum_mod({2, 16}, 19, delta, f, gamma, zeta) == 18);
    CHECK_THROWS_AS(kolyvagin::period_sum(g, {0, 5, 1}, f, gamma, zeta), Error);
}

TEST_CASE("congruence right-hand side") {
    BigInt per = 22;  // 11 * 2
    // ord_11 of the value is the ord of the period off the hyperplane nu_c + eps nu_b = 0
    CHECK(kolyvagin::congruence_rhs_bis(43, 1, 0, -58, 1, BigInt(1), 19, 1) ==
          static_cast<u64>(arith::mod((-58 - 86) * 1, 19)));
    CHECK(kolyvagin::congruence_rhs_bis(43, 1, -1, -58, 1, per, 11, 2) == 0);
    CHECK(kolyvagin::congruence_rhs_bis(43, 2, 5, -58, 1, per, 11, 1) == 0);
    CHECK_THROWS_AS(kolyvagin::congruence_rhs_bis(43, 1, 0, 0, 2, per, 11, 1), Error);
    CHECK(kolyvagin::congruence_rhs_even(kolyvagin::EvenCase::unramified_l1, 3, 5, 1, 1, -1, 1, 0, 7, 11, 1) == 0);
    CHECK(kolyvagin::congruence_rhs_even(kolyvagin::EvenCase::unramified_l1, 3, 5, 1, 2, 1, 1, 0, 7, 11, 1) == 21 % 11);
    CHECK_THROWS_AS(kolyvagin::congruence_rhs_even(kolyvagin::EvenCase::singular_l2, 3, 3, 1, 1, 1, 1, 0, 7, 11, 1), Error);
}

TEST_CASE("verdicts") {
    kolyvagin::PeriodReport r;
    r.entries.push_back({1, {}, "(1)", BigInt(2)});
    r.chosen = 0;
    kolyvagin::PredictInputs in;
    in.type = ec::ParityType::even;
    in.period = &r;
    CHECK(kolyvagin::predict(in, 19).status == "dimension-0");
    r.entries[0].value = 38;
    CHECK(kolyvagin::predict(in, 19).status == "undetermined");
    r.chosen.reset();
    CHECK(kolyvagin::predict(in, 19).status == "undetermined");
    in.type = ec::ParityType::odd;
    CHECK(kolyvagin::predict(in, 19).status == "conditional-rank-1");
    in.failed_clauses.push_back("P5");
    CHECK(kolyvagin::predict(in, 19).status == "out-of-hypotheses");
    in.failed_clauses.clear();
    in.assumption_E = false;
    CHECK(kolyvagin::predict(in, 19).status == "out-of-hypotheses");
}

TEST_CASE("testing factors on the desk pair") {
    auto F = quad::make_field(2);
    ec::EllipticCurveF A;
    A.a = {quad::OFElement{0, 1}, {1, 1}, {1, 1}, {-1, 1}, {-1, 0}};
    A.conductor_norm = 17;
    ec::EllipticCurveQ E{{0, -1, 1, -10, -20}, 11};
    auto ctx = admissible::make_context(E, A, F, 500);
    quad::Ideal fM;
    for (auto& P : quad::primes_above(F, 17))
        if (!ec::good_at(F, A, P)) fM.factors.push_back({P, 1});
    auto s = kolyvagin::prepare_period(ctx, fM, {});
    CHECK(s.T_top->size() == 16);
    CHECK(s.T_base->size() == 2);
    auto r = kolyvagin::find_testing_factors(s);
    REQUIRE(r.entries.size() == 4);
    std::vector<BigInt> want{2, 32, 32, 2};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(r.entries[i].value == want[i]);
        CHECK(kolyvagin::replay_entry(s, r.entries[i]) == want[i]);
    }
    CHECK(r.chosen == std::optional<std::size_t>(0));
    CHECK(kolyvagin::n_div(r, 19) == 0);
    CHECK(kolyvagin::n_div(r, 2) == 1);
}
