#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "selmer/elliptic.hpp"

namespace selmer::admissible {

using arith::i64;
using arith::u64;

enum class Verdict { pass, fail, inconclusive };
const char* to_string(Verdict v);

struct Clause {
    Verdict verdict = Verdict::inconclusive;
    std::string note;
};

/// The pair data every audit needs.
struct PairContext {
    ec::EllipticCurveQ E;
    ec::EllipticCurveF A;
    quad::RealQuadraticField F;
    i64 n_minus = 1;           // inert part of N
    i64 level_norm = 1;        // Nm(conductor of A)
    ec::PairClassification pc;
    std::vector<u64> exclusions;  // user-supplied additions to the A1 modulus
    std::shared_ptr<std::map<u64, i64>> asq_cache = std::make_shared<std::map<u64, i64>>();
};

/// tr(Frob_{l^2}; A) at an inert l, memoized in the context.
i64 trace_Asq(const PairContext& ctx, u64 ell);

PairContext make_context(const ec::EllipticCurveQ& E, const ec::EllipticCurveF& A, const quad::RealQuadraticField& F,
                         u64 classify_bound = 500, std::vector<u64> exclusions = {});

/// Values u = tr^2/det of elements of PGL2(F_p) with projective order in {1,..,5}.
std::set<u64> exceptional_ratios(u64 p);
/// The same set enumerated over all of GL2(F_p) (small p; oracle for the formula).
std::set<u64> exceptional_ratios_bruteforce(u64 p);

struct GoodPrimeReport {
    u64 p = 0;
    std::map<std::string, Clause> clauses;  // P1..P6
    bool all_pass() const;
};

GoodPrimeReport good_prime_report(const PairContext& ctx, u64 p, u64 scan_bound);

/// Auxiliary prime q: least prime not dividing p N M disc(F) with p not dividing q + 1 - a_q(E).
u64 auxiliary_prime(const PairContext& ctx, u64 p);
/// The A1 surrogate modulus 2 p q N M disc(F) (primes only).
std::vector<u64> a1_excluded(const PairContext& ctx, u64 p, u64 q);

struct StrongData {
    int epsilon = 1;
    bool s2 = false;
    bool s3 = false;
    i64 trace_Asq = 0;
    u64 trace_Asq_mod_p = 0;
};

struct AdmissiblePrimeCertificate {
    u64 ell = 0;
    int n = 1;
    u64 p = 0;
    int epsilon_sigma = 1;
    i64 a_ell = 0;
    std::map<std::string, std::string> clauses;  // A1..A5 witness text
    std::optional<StrongData> strong;
    /// clause bitmap A1..A5 (bits 0..4), S2, S3 (bits 5, 6)
    unsigned bitmap() const;
    std::string record() const;  // "ell, n, eps_sigma, eps, bitmap"
};

std::vector<AdmissiblePrimeCertificate> scan_n_admissible(const PairContext& ctx, u64 p, int n, u64 bound);
std::vector<AdmissiblePrimeCertificate> scan_strongly_admissible(const PairContext& ctx, u64 p, int n, int epsilon,
                                                                 u64 bound);

/// S3 check on a trace value (exposed for the kolyvagin unit-factor checks).
bool s3_ok(i64 trace_Asq, u64 ell, u64 p);

struct AssumptionR {
    std::map<std::string, Clause> clauses;  // R1..R6
};
AssumptionR check_assumption_R(const PairContext& ctx, u64 p, u64 bound);

}  // namespace selmer::admissible
