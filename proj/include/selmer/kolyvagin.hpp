#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "selmer/admissible.hpp"
#include "selmer/brandt.hpp"

namespace selmer::kolyvagin {

using arith::i64;
using arith::u64;
using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// ff(1) = 1, ff(2) = 4, ff(r + 1) = 2 (ff(r) + 1).
u64 ff(int r);
/// Residues mu mod p whose multiplicative order lies in {1, 2, 3, 4, 6}.
std::set<u64> fp_bad(u64 p);

/// Sum over t of f(gamma(zeta(t))) * g(delta(t)); exact over Z.
BigInt period_sum(const std::vector<i64>& g, const std::vector<int>& delta, const std::vector<i64>& f,
                  const std::vector<int>& gamma, const std::vector<int>& zeta);
/// The same with g a residue vector mod m.
u64 period_sum_mod(const std::vector<u64>& g, u64 m, const std::vector<int>& delta, const std::vector<i64>& f,
                   const std::vector<int>& gamma, const std::vector<int>& zeta);

/// All class sets and maps behind the period sums at level (N^+ M, N^-).
struct PeriodSetup {
    i64 n_plus = 1, n_minus = 1, M = 1;
    quad::Ideal fM;
    std::shared_ptr<const orders::ClassSetT> T_top, T_base;
    std::shared_ptr<const orders::ClassSetS> S_top, S_M;
    std::vector<int> zeta;
    brandt::Eigenform g, f;
};

struct SetupBounds {
    u64 hecke_verify = 0;       // 0: default bound
    u64 hecke_verify_F = 50;
    std::size_t neighbor_budget = 50000;
    // optional hooks for a persistent store; empty means compute directly
    std::function<std::shared_ptr<const orders::ClassSetT>(std::shared_ptr<const orders::TowerQ>, const orders::Level&)> class_set_T;
    std::function<std::shared_ptr<const orders::ClassSetS>(std::shared_ptr<const orders::TowerF>, const orders::Level&)> class_set_S;
    /// form(kind, class set key, compute) may return a stored eigenform instead of computing.
    std::function<brandt::Eigenform(const std::string&, const std::function<brandt::Eigenform()>&)> form;
};

/// Requires p(N^-) odd (definite), all primes of N^- inert in F, fM coprime to disc.
PeriodSetup prepare_period(const admissible::PairContext& ctx, const quad::Ideal& fM, const SetupBounds& b);

struct PeriodEntry {
    u64 d = 1;
    quad::Ideal dd;
    std::string dd_label;
    BigInt value;
};

struct PeriodReport {
    std::vector<PeriodEntry> entries;
    std::optional<std::size_t> chosen;
    i64 level_plus = 1;  // N^+ M
    i64 n_minus = 1;
    std::string note;
};

/// Entries in increasing d, then increasing norm of dd; chosen = first nonzero.
PeriodReport find_testing_factors(const PeriodSetup& s);
/// Recomputes one entry with the summation reversed (replay oracle).
BigInt replay_entry(const PeriodSetup& s, const PeriodEntry& e);

/// ord_p of the chosen value.
int n_div(const PeriodReport& r, u64 p);
/// Least n >= 0 with p^(n+1) > 1 / density.
int n_den(const BigRational& density, u64 p);

struct KolyvaginConstants {
    std::optional<int> n_div;
    std::optional<int> n_den;
    std::optional<BigRational> density_estimate;
    u64 admissible_seen = 0, strong_seen = 0;
    int n_bad = 0, n_red = 0;
    std::string note;
};

/// Empirical density of strongly (n,-)-admissible primes among n-admissible ones (>= 20 samples).
KolyvaginConstants constants(const admissible::PairContext& ctx, u64 p, int n, u64 bound,
                             const PeriodReport* report, int n_bad, int n_red);

/// (A_trace - 2 eps l)(nu_c + eps nu_b) period mod p^n.
u64 congruence_rhs_bis(u64 ell, i64 nu_b, i64 nu_c, i64 A_trace, int eps_sigma, const BigInt& period, u64 p, int n);

enum class EvenCase { unramified_l1, singular_l2 };
/// Right-hand sides of the odd-type congruences given the raised period sum mod p^n.
u64 congruence_rhs_even(EvenCase c, u64 ell1, u64 ell2, i64 nu_b, i64 nu_c, int eps1, int eps2, i64 trace_l2_sq,
                        u64 raised_sum, u64 p, int n);

struct Verdict {
    std::string status;  // "dimension-0", "conditional-rank-1", "out-of-hypotheses", "undetermined"
    std::string text;
    std::vector<std::string> assumptions;
};

struct PredictInputs {
    bool assumption_E = true;
    ec::ParityType type = ec::ParityType::even;
    const PeriodReport* period = nullptr;
    bool classification_heuristic = false;
    int n_bad = 0, n_red = 0;
    std::vector<std::string> extra;  // surrogate clauses and other caveats
    std::vector<std::string> failed_clauses;  // good-prime clauses that fail outright
};

Verdict predict(const PredictInputs& in, u64 p);

}  // namespace selmer::kolyvagin
