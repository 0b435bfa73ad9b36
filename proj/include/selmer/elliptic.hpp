#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "selmer/quadfield.hpp"

namespace selmer::ec {

using arith::i64;
using arith::u64;
using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;
using quad::OFElement;
using quad::RealQuadraticField;

/// Long Weierstrass model over Q with a user-supplied conductor.
struct EllipticCurveQ {
    std::array<i64, 5> a{};  // a1 a2 a3 a4 a6
    i64 conductor = 1;
};

struct EllipticCurveF {
    std::array<OFElement, 5> a{};
    i64 conductor_norm = 1;
    std::optional<quad::Ideal> conductor_ideal;
};

struct Invariants {
    BigInt b2, b4, b6, b8, c4, c6, disc;
};

Invariants invariants(const EllipticCurveQ& E);
BigRational j_invariant(const EllipticCurveQ& E);

/// Invariants over O_F as (x, y) pairs for x + y*omega.
struct BigOF {
    BigInt x, y;
};
struct InvariantsF {
    BigOF b2, b4, b6, c4, c6, disc;
};
InvariantsF invariants(const RealQuadraticField& F, const EllipticCurveF& A);

enum class Reduction { good, multiplicative, additive };
const char* to_string(Reduction r);

/// Model minimal at ell, obtained by integral coordinate changes.
EllipticCurveQ minimal_model_at(const EllipticCurveQ& E, u64 ell);
Reduction reduction_type(const EllipticCurveQ& E, u64 ell);

/// Checks that conductor support matches minimal discriminant support (primes <= bound
/// and primes of N) and exponent 1 exactly at multiplicative primes.
void validate_conductor(const EllipticCurveQ& E, u64 bound);

i64 ap_trace(const EllipticCurveQ& E, u64 ell);
/// Frobenius trace at a prime of O_F (degree one or two).
i64 trace_at(const RealQuadraticField& F, const EllipticCurveF& A, const quad::PrimeIdeal& P);
i64 trace_frob_sq(const RealQuadraticField& F, const EllipticCurveF& A, u64 ell);
bool good_at(const RealQuadraticField& F, const EllipticCurveF& A, const quad::PrimeIdeal& P);

/// Projective point count (affine points plus infinity) by direct enumeration; slow, used as an oracle.
u64 count_points_naive(const EllipticCurveQ& E, u64 ell);

/// Base change of a rational curve and conjugate curve A^theta.
EllipticCurveF base_change(const EllipticCurveQ& E, i64 conductor_norm);
EllipticCurveF conjugate(const RealQuadraticField& F, const EllipticCurveF& A);

/// The 13 rational CM j-invariants.
const std::vector<BigInt>& cm_j_invariants();
bool has_cm(const EllipticCurveQ& E);

enum class PairKind { AI, AII, B, AI_or_AII, inconclusive };
const char* to_string(PairKind k);

struct PairClassification {
    PairKind kind = PairKind::inconclusive;
    std::string confidence;  // "proven-at-bound" or "heuristic"
    std::optional<i64> asai_character_disc;  // 1 denotes the trivial character
    std::optional<bool> breve_eta_is_trivial;
    int primes_scanned = 0;
    std::string note;
};

/// Candidate twisting discriminants examined by classify_pair (fundamental, |D| <= bound).
std::vector<i64> fundamental_discriminants(i64 bound);

PairClassification classify_pair(const EllipticCurveQ& E, const EllipticCurveF& A, const RealQuadraticField& F,
                                 u64 scan_bound, i64 twist_disc_bound = 200);

/// Value of breve-eta at Frobenius of a rational prime ell (sign convention used by S2).
int breve_eta(const PairClassification& pc, u64 ell);

enum class Check { pass, fail, heuristic_pass };
const char* to_string(Check c);

struct AssumptionE {
    Check e1 = Check::fail, e2 = Check::fail, e3 = Check::fail;
    std::string note;
    bool ok() const { return e1 != Check::fail && e2 != Check::fail && e3 != Check::fail; }
};
AssumptionE check_assumption_E(const EllipticCurveQ& E, const EllipticCurveF& A, const RealQuadraticField& F,
                               u64 scan_bound = 500);

enum class ParityType { even, odd };
struct Parity {
    ParityType type = ParityType::odd;
    int epsilon = -1;
};
Parity parity_from_minus(i64 n_minus);
Parity parity(const EllipticCurveQ& E, const EllipticCurveF& A, const RealQuadraticField& F);

/// {infinity} as 0, then the primes of N^-.
std::vector<u64> sigma_set_from_minus(i64 n_minus);
std::vector<u64> sigma_set(const EllipticCurveQ& E, const EllipticCurveF& A, const RealQuadraticField& F);

}  // namespace selmer::ec
