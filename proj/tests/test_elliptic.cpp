#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "selmer/elliptic.hpp"
#include "selmer/error.hpp"

using namespace selmer;
using arith::i64;
using arith::u64;

namespace {

const ec::EllipticCurveQ E11{{0, -1, 1, -10, -20}, 11};
const ec::EllipticCurveQ E14{{1, 0, 1, 4, -6}, 14};
const ec::EllipticCurveQ E19{{0, 1, 1, -9, -15}, 19};

ec::EllipticCurveF A17() {
    ec::EllipticCurveF A;
    A.a = {quad::OFElement{0, 1}, {1, 1}, {1, 1}, {-1, 1}, {-1, 0}};
    A.conductor_norm = 17;
    return A;
}

}  // namespace

TEST_CASE("point counts agree with naive enumeration") {
    for (const auto* E : {&E11, &E14, &E19}) {
        for (u64 p : arith::primes_up_to(150)) {
            if (E->conductor % static_cast<i64>(p) == 0) continue;
            i64 total = static_cast<i64>(ec::count_points_naive(*E, p));
            CHECK(ec::ap_trace(*E, p) == static_cast<i64>(p) + 1 - total);
        }
    }
}

TEST_CASE("known traces of 11a") {
    std::vector<std::pair<u64, i64>> known = {{2, -2}, {3, -1}, {5, 1}, {7, -2}, {13, 4}, {17, -2}, {19, 0}, {23, -1}};
    for (auto [p, a] : known) CHECK(ec::ap_trace(E11, p) == a);
    CHECK_THROWS_AS(ec::ap_trace(E11, 11), Error);
}

TEST_CASE("invariants, j and CM") {
    auto inv = ec::invariants(E11);
    CHECK(inv.disc == -161051);
    CHECK(ec::j_invariant(E11) == ec::BigRational(-122023936, 161051));
    CHECK_FALSE(ec::has_cm(E11));
    ec::EllipticCurveQ cm{{0, 0, 0, -1, 0}, 32};
    CHECK(ec::has_cm(cm));
    CHECK(ec::cm_j_invariants().size() == 13);
}

TEST_CASE("reduction types and conductor validation") {
    CHECK(ec::reduction_type(E11, 11) == ec::Reduction::multiplicative);
    CHECK(ec::reduction_type(E11, 5) == ec::Reduction::good);
    CHECK(ec::reduction_type(E14, 2) == ec::Reduction::multiplicative);
    ec::EllipticCurveQ cm{{0, 0, 0, -1, 0}, 32};
    CHECK(ec::reduction_type(cm, 2) == ec::Reduction::additive);
    CHECK_NOTHROW(ec::validate_conductor(E11, 200));
    CHECK_NOTHROW(ec::validate_conductor(cm, 200));
    ec::EllipticCurveQ wrong = E11;
    wrong.conductor = 13;
    CHECK_THROWS_AS(ec::validate_conductor(wrong, 200), Error);
    wrong.conductor = 121;
    CHECK_THROWS_AS(ec::validate_conductor(wrong, 200), Error);
}

TEST_CASE("base change traces") {
    auto F = quad::make_field(5);
    auto A = ec::base_change(E14, 196);
    for (u64 l : arith::primes_up_to(60)) {
        if (l == 2 || l == 7 || l == 5) continue;
        auto s = quad::splitting(F, l);
        if (s == quad::Splitting::inert) {
            i64 a = ec::ap_trace(E14, l);
            CHECK(ec::trace_frob_sq(F, A, l) == a * a - 2 * static_cast<i64>(l));
        } else {
            for (auto& P : quad::primes_above(F, l)) CHECK(ec::trace_at(F, A, P) == ec::ap_trace(E14, l));
        }
    }
    auto Ac = ec::conjugate(F, A);
    for (int i = 0; i < 5; ++i) CHECK(Ac.a[i] == A.a[i]);
}

TEST_CASE("Hasse bound over F") {
    auto F = quad::make_field(2);
    auto A = A17();
    for (auto& P : quad::primes_up_to_norm(F, 300)) {
        if (!ec::good_at(F, A, P)) continue;
        i64 t = ec::trace_at(F, A, P);
        CHECK(static_cast<long double>(t) * t <= 4.0L * P.norm);
    }
}

TEST_CASE("pair classification on the desk pairs") {
    auto F5 = quad::make_field(5);
    auto pc = ec::classify_pair(E11, ec::base_change(E14, 196), F5, 500);
    CHECK(pc.kind == ec::PairKind::B);
    auto F2 = quad::make_field(2);
    auto pe = ec::classify_pair(E11, A17(), F2, 500);
    CHECK(pe.kind == ec::PairKind::AI_or_AII);
    CHECK(pe.confidence == "heuristic");
    auto ae = ec::check_assumption_E(E11, A17(), F2, 500);
    CHECK(ae.ok());
}

TEST_CASE("parity and the sign set") {
    auto p1 = ec::parity_from_minus(11);
    CHECK(p1.type == ec::ParityType::even);
    CHECK(p1.epsilon == 1);
    auto p0 = ec::parity_from_minus(1);
    CHECK(p0.type == ec::ParityType::odd);
    CHECK(p0.epsilon == -1);
    CHECK(ec::sigma_set_from_minus(3 * 7) == std::vector<u64>{0, 3, 7});
    auto F5 = quad::make_field(5);
    CHECK(ec::parity(E11, ec::base_change(E14, 196), F5).type == ec::ParityType::odd);
}
