#include "selmer/kolyvagin.hpp"

#include <algorithm>
#include <numeric>
#include <map>

namespace selmer::kolyvagin {

u64 ff(int r) {
    if (r < 1) fail_pre("kolyvagin", "ff", "r must be positive");
    u64 v = 1;
    for (int k = 1; k < r; ++k) v = (k == 1) ? 4 : 2 * (v + 1);
    return v;
}

std::set<u64> fp_bad(u64 p) {
    if (p < 3 || !arith::is_prime(p)) fail_pre("kolyvagin", "fp_bad", "p must be an odd prime");
    std::set<u64> out;
    for (u64 mu = 1; mu < p; ++mu) {
        u64 o = arith::mult_order(static_cast<i64>(mu), p);
        if (o == 1 || o == 2 || o == 3 || o == 4 || o == 6) out.insert(mu);
    }
    return out;
}

namespace {

void check_maps(std::size_t ng, const std::vector<int>& delta, std::size_t nf, const std::vector<int>& gamma,
                const std::vector<int>& zeta) {
    if (delta.size() != zeta.size()) fail_pre("kolyvagin", "period_sum", "delta and zeta have different domains");
    for (int x : delta)
        if (x < 0 || static_cast<std::size_t>(x) >= ng) fail_pre("kolyvagin", "period_sum", "delta lands outside g's class set");
    for (int x : zeta)
        if (x < 0 || static_cast<std::size_t>(x) >= gamma.size()) fail_pre("kolyvagin", "period_sum", "zeta lands outside gamma's domain");
    for (int x : gamma)
        if (x < 0 || static_cast<std::size_t>(x) >= nf) fail_pre("kolyvagin", "period_sum", "gamma lands outside f's class set");
}

}  // namespace

BigInt period_sum(const std::vector<i64>& g, const std::vector<int>& delta, const std::vector<i64>& f,
                  const std::vector<int>& gamma, const std::vector<int>& zeta) {
    check_maps(g.size(), delta, f.size(), gamma, zeta);
    BigInt s = 0;
    for (std::size_t t = 0; t < delta.size(); ++t)
        s += BigInt(f[static_cast<std::size_t>(gamma[static_cast<std::size_t>(zeta[t])])]) * g[static_cast<std::size_t>(delta[t])];
    return s;
}

u64 period_sum_mod(const std::vector<u64>& g, u64 m, const std::vector<int>& delta, const std::vector<i64>& f,
                   const std::vector<int>& gamma, const std::vector<int>& zeta) {
    check_maps(g.size(), delta, f.size(), gamma, zeta);
    u64 s = 0;
    for (std::size_t t = 0; t < delta.size(); ++t) {
        i64 fv = f[static_cast<std::size_t>(gamma[static_cast<std::size_t>(zeta[t])])];
        u64 fm = static_cast<u64>(arith::mod(fv, static_cast<i64>(m)));
        s = (s + arith::mulmod(fm, g[static_cast<std::size_t>(delta[t])] % m, m)) % m;
    }
    return s;
}

namespace {

orders::Level level_of_ideal(const orders::TowerF& TF, const quad::Ideal& I) {
    orders::Level lv(TF.primes.size(), 0);
    for (auto& [P, e] : I.factors) {
        bool found = false;
        for (std::size_t j = 0; j < TF.primes.size(); ++j)
            if (TF.primes[j].ideal == P) {
                lv[j] = e;
                found = true;
            }
        if (!found) fail_pre("kolyvagin", "level", "ideal prime " + P.label() + " not in the tower");
    }
    return lv;
}

std::map<u64, i64> traces_of(const ec::EllipticCurveQ& E, u64 bound) {
    std::map<u64, i64> t;
    for (u64 v = 2; v <= bound; v = arith::next_prime(v))
        if (E.conductor % static_cast<i64>(v)) t[v] = ec::ap_trace(E, v);
    return t;
}

}  // namespace

PeriodSetup prepare_period(const admissible::PairContext& ctx, const quad::Ideal& fM, const SetupBounds& b) {
    PeriodSetup s;
    const auto& F = ctx.F;
    s.n_plus = quad::split_conductor(ctx.E.conductor, F).plus;
    s.n_minus = ctx.n_minus;
    if (arith::omega(s.n_minus) % 2 == 0)
        fail_pre("kolyvagin", "prepare_period", "period sums need an odd number of primes in N^-");
    std::map<u64, int> ex;
    for (auto& [P, e] : fM.factors) {
        if (P.kind == quad::Splitting::ramified) fail_pre("kolyvagin", "prepare_period", "level ideal meets disc(F)");
        ex[P.p] = std::max(ex[P.p], e);
    }
    s.M = 1;
    for (auto [p, e] : ex) s.M *= arith::ipow(static_cast<i64>(p), e);
    s.fM = fM;
    const i64 top = s.n_plus * s.M;
    if (std::gcd(top, s.n_minus) != 1) fail_pre("kolyvagin", "prepare_period", "N^+ M and N^- share a prime");
    auto tower = orders::build_tower(s.n_minus, top);
    auto make_T = [&](const orders::Level& lv) {
        if (b.class_set_T) return b.class_set_T(tower, lv);
        return std::make_shared<const orders::ClassSetT>(orders::enumerate_classes<4>(tower, lv, b.neighbor_budget));
    };
    s.T_top = make_T(tower->top);
    s.T_base = make_T(orders::level_from_int(*tower, s.n_plus));
    u64 vb = b.hecke_verify ? b.hecke_verify : brandt::default_verify_bound(s.n_minus, s.n_plus);
    auto compute_g = [&] {
        brandt::BrandtT BT(s.T_base);
        return brandt::eigenform_from_traces(BT, traces_of(ctx.E, std::max<u64>(vb, 100)), vb);
    };
    s.g = b.form ? b.form("g", compute_g) : compute_g();
    auto TF = orders::build_tower_F(*tower, F);
    auto make_S = [&](const orders::Level& lv) {
        if (b.class_set_S) return b.class_set_S(TF, lv);
        return std::make_shared<const orders::ClassSetS>(orders::enumerate_classes<8>(TF, lv, b.neighbor_budget));
    };
    s.S_top = make_S(orders::level_to_F(*tower, *TF, tower->top));
    s.S_M = make_S(level_of_ideal(*TF, fM));
    auto compute_f = [&] {
        brandt::BrandtS BS(s.S_M);
        return brandt::eigenform_pi(BS, F, ctx.A, b.hecke_verify_F);
    };
    s.f = b.form ? b.form("f", compute_f) : compute_f();
    s.zeta = orders::special_map(*s.T_top, *s.S_top);
    return s;
}

namespace {

struct Maps {
    std::vector<int> delta, gamma;
};

Maps maps_for(const PeriodSetup& s, u64 d, const quad::Ideal& dd) {
    const auto& T = *s.T_top->tower;
    const auto& TF = *s.S_top->tower;
    Maps m;
    m.delta = orders::degeneracy<4>(*s.T_top, *s.T_base, orders::level_from_int(T, s.M),
                                    orders::level_from_int(T, static_cast<i64>(d)));
    auto quotient = quad::ideal_quotient(quad::rational_ideal(*TF.field, s.n_plus * s.M), s.fM);
    m.gamma = orders::degeneracy<8>(*s.S_top, *s.S_M, level_of_ideal(TF, quotient), level_of_ideal(TF, dd));
    return m;
}

}  // namespace

PeriodReport find_testing_factors(const PeriodSetup& s) {
    PeriodReport r;
    r.level_plus = s.n_plus * s.M;
    r.n_minus = s.n_minus;
    const auto& F = *s.S_top->tower->field;
    auto quotient = quad::ideal_quotient(quad::rational_ideal(F, s.n_plus * s.M), s.fM);
    auto dds = quad::ideal_divisors(quotient);
    for (u64 d : arith::divisors(static_cast<u64>(s.M))) {
        for (auto& dd : dds) {
            auto m = maps_for(s, d, dd);
            PeriodEntry e;
            e.d = d;
            e.dd = dd;
            e.dd_label = dd.label();
            e.value = period_sum(s.g.vector, m.delta, s.f.vector, m.gamma, s.zeta);
            if (!r.chosen && e.value != 0) r.chosen = r.entries.size();
            r.entries.push_back(std::move(e));
        }
    }
    if (!r.chosen)
        r.note = "no testing factors found within level; existence is only guaranteed when the central value is nonzero";
    return r;
}

BigInt replay_entry(const PeriodSetup& s, const PeriodEntry& e) {
    auto m = maps_for(s, e.d, e.dd);
    // group by the class of g first, then sum in reverse
    std::map<int, BigInt> by_g;
    for (std::size_t t = s.zeta.size(); t-- > 0;)
        by_g[m.delta[t]] += s.f.vector[static_cast<std::size_t>(m.gamma[static_cast<std::size_t>(s.zeta[t])])];
    BigInt total = 0;
    for (auto it = by_g.rbegin(); it != by_g.rend(); ++it) total += it->second * s.g.vector[static_cast<std::size_t>(it->first)];
    return total;
}

int n_div(const PeriodReport& r, u64 p) {
    if (!r.chosen) fail_pre("kolyvagin", "n_div", "no chosen testing factors");
    BigInt v = r.entries[*r.chosen].value;
    if (v < 0) v = -v;
    int e = 0;
    while (v % p == 0) {
        v /= p;
        ++e;
    }
    return e;
}

int n_den(const BigRational& density, u64 p) {
    if (density <= 0) fail_pre("kolyvagin", "n_den", "density must be positive");
    BigInt inv_num = boost::multiprecision::denominator(density), inv_den = boost::multiprecision::numerator(density);
    // least n with p^(n+1) * inv_den > inv_num
    BigInt pw = p;
    int n = 0;
    while (pw * inv_den <= inv_num) {
        pw *= p;
        ++n;
    }
    return n;
}

KolyvaginConstants constants(const admissible::PairContext& ctx, u64 p, int n, u64 bound, const PeriodReport* report,
                             int n_bad, int n_red) {
    KolyvaginConstants k;
    k.n_bad = n_bad;
    k.n_red = n_red;
    auto adm = admissible::scan_n_admissible(ctx, p, n, bound);
    auto strong = admissible::scan_strongly_admissible(ctx, p, n, -1, bound);
    k.admissible_seen = adm.size();
    k.strong_seen = strong.size();
    if (adm.size() >= 20 && !strong.empty()) {
        k.density_estimate = BigRational(static_cast<long long>(strong.size()), static_cast<long long>(adm.size()));
        k.n_den = n_den(*k.density_estimate, p);
    } else {
        k.note = "n_den: insufficient data (" + std::to_string(adm.size()) + " admissible, " +
                 std::to_string(strong.size()) + " strongly (n,-)-admissible)";
    }
    if (report && report->chosen) k.n_div = n_div(*report, p);
    return k;
}

namespace {

u64 red(const BigInt& x, u64 m) {
    BigInt r = x % m;
    if (r < 0) r += m;
    return static_cast<u64>(r);
}

}  // namespace

u64 congruence_rhs_bis(u64 ell, i64 nu_b, i64 nu_c, i64 A_trace, int eps_sigma, const BigInt& period, u64 p, int n) {
    if (eps_sigma != 1 && eps_sigma != -1) fail_pre("kolyvagin", "congruence_rhs_bis", "eps_sigma must be +1 or -1");
    u64 m = static_cast<u64>(arith::ipow(static_cast<i64>(p), n));
    BigInt a = BigInt(A_trace) - 2 * eps_sigma * BigInt(ell);
    BigInt b = BigInt(nu_c) + eps_sigma * BigInt(nu_b);
    return red(a * b * period, m);
}

u64 congruence_rhs_even(EvenCase c, u64 ell1, u64 ell2, i64 nu_b, i64 nu_c, int eps1, int eps2, i64 trace_l2_sq,
                        u64 raised_sum, u64 p, int n) {
    if (ell1 == ell2) fail_pre("kolyvagin", "congruence_rhs_even", "l1 and l2 must differ");
    u64 m = static_cast<u64>(arith::ipow(static_cast<i64>(p), n));
    if (c == EvenCase::unramified_l1) return red((BigInt(nu_b) + eps1 * BigInt(nu_c)) * raised_sum, m);
    BigInt a = BigInt(trace_l2_sq) - 2 * eps2 * BigInt(ell2);
    return red(a * (BigInt(nu_c) + eps2 * BigInt(nu_b)) * raised_sum, m);
}

Verdict predict(const PredictInputs& in, u64 p) {
    Verdict v;
    v.assumptions.push_back("n_bad = " + std::to_string(in.n_bad) + " (assumed)");
    v.assumptions.push_back("n_red = " + std::to_string(in.n_red) + " (assumed)");
    v.assumptions.push_back("period relates to the central value only up to an uncomputed nonzero constant");
    if (in.classification_heuristic) v.assumptions.push_back("pair classification is heuristic");
    for (auto& x : in.extra) v.assumptions.push_back(x);
    const std::string ps = "p = " + std::to_string(p);
    if (!in.assumption_E) {
        v.status = "out-of-hypotheses";
        v.text = "out of hypotheses: Assumption E fails";
        return v;
    }
    if (!in.failed_clauses.empty()) {
        v.status = "out-of-hypotheses";
        v.text = ps + " is not a good prime:";
        for (auto& c : in.failed_clauses) v.text += " " + c;
        return v;
    }
    if (in.type == ec::ParityType::even) {
        if (in.period && in.period->chosen && n_div(*in.period, p) > 0) {
            v.status = "undetermined";
            v.text = "p divides the chosen period sum to order " + std::to_string(n_div(*in.period, p)) +
                     "; only a length bound is available at " + ps;
        } else if (in.period && in.period->chosen) {
            v.status = "dimension-0";
            v.text = "Selmer dimension 0 predicted for this good " + ps +
                     " (conditional on Ichino nonvanishing correspondence)";
        } else {
            v.status = "undetermined";
            v.text = "all period sums vanish within level: evidence of a vanishing central value, no prediction at " + ps;
        }
        return v;
    }
    v.status = "conditional-rank-1";
    v.text = "rank-1 prediction at " + ps +
             " requires nonvanishing of the Abel-Jacobi class, which is not computable by this tool";
    return v;
}

}  // namespace selmer::kolyvagin
