#include "selmer/admissible.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "selmer/error.hpp"

namespace selmer::admissible {

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

PairContext make_context(const ec::EllipticCurveQ& E, const ec::EllipticCurveF& A, const quad::RealQuadraticField& F,
                         u64 classify_bound, std::vector<u64> exclusions) {
    PairContext c;
    c.E = E;
    c.A = A;
    c.F = F;
    c.n_minus = quad::split_conductor(E.conductor, F).minus;
    c.level_norm = A.conductor_norm;
    c.pc = ec::classify_pair(E, A, F, classify_bound);
    c.exclusions = std::move(exclusions);
    return c;
}

i64 trace_Asq(const PairContext& ctx, u64 ell) {
    auto it = ctx.asq_cache->find(ell);
    if (it != ctx.asq_cache->end()) return it->second;
    i64 t = ec::trace_frob_sq(ctx.F, ctx.A, ell);
    ctx.asq_cache->emplace(ell, t);
    return t;
}

std::set<u64> exceptional_ratios(u64 p) {
    std::set<u64> out{0, 1 % p, 2 % p, 4 % p};
    // order 5: u^2 - 3u + 1 = 0, u = (3 +- sqrt 5) / 2
    if (p != 5 && arith::legendre(5, p) == 1) {
        u64 s = arith::sqrt_mod(5 % p, p);
        u64 inv2 = static_cast<u64>(arith::inv_mod(2, static_cast<i64>(p)));
        out.insert(arith::mulmod((3 + s) % p, inv2, p));
        out.insert(arith::mulmod((3 + p - s) % p, inv2, p));
    } else if (p == 5) {
        out.insert(arith::mulmod(3, static_cast<u64>(arith::inv_mod(2, 5)), 5));
    }
    return out;
}

std::set<u64> exceptional_ratios_bruteforce(u64 p) {
    std::set<u64> out;
    for (u64 a = 0; a < p; ++a)
        for (u64 b = 0; b < p; ++b)
            for (u64 c = 0; c < p; ++c)
                for (u64 d = 0; d < p; ++d) {
                    u64 det = (a * d % p + p - b * c % p) % p;
                    if (!det) continue;
                    // projective order up to 5
                    u64 x00 = a, x01 = b, x10 = c, x11 = d;
                    for (int k = 1; k <= 5; ++k) {
                        if (x01 == 0 && x10 == 0 && x00 == x11) {
                            u64 tr = (a + d) % p;
                            out.insert(arith::mulmod(arith::mulmod(tr, tr, p),
                                                     static_cast<u64>(arith::inv_mod(static_cast<i64>(det), static_cast<i64>(p))), p));
                            break;
                        }
                        u64 y00 = (x00 * a + x01 * c) % p, y01 = (x00 * b + x01 * d) % p;
                        u64 y10 = (x10 * a + x11 * c) % p, y11 = (x10 * b + x11 * d) % p;
                        x00 = y00;
                        x01 = y01;
                        x10 = y10;
                        x11 = y11;
                    }
                }
    return out;
}

bool GoodPrimeReport::all_pass() const {
    for (auto& [k, c] : clauses)
        if (c.verdict != Verdict::pass) return false;
    return true;
}

namespace {

int ord_min_disc(const ec::EllipticCurveQ& E, u64 ell) {
    auto inv = ec::invariants(ec::minimal_model_at(E, ell));
    ec::BigInt d = inv.disc;
    if (d < 0) d = -d;
    int e = 0;
    while (d != 0 && d % ell == 0) {
        d /= ell;
        ++e;
    }
    return e;
}

struct Witness {
    bool split = false, nonsplit = false, nonexc = false;
    u64 w_split = 0, w_nonsplit = 0, w_nonexc = 0;
    bool done() const { return split && nonsplit && nonexc; }
};

void feed(Witness& w, i64 tr, u64 det, u64 label, u64 p, const std::set<u64>& exc) {
    u64 t = static_cast<u64>(arith::mod(tr, static_cast<i64>(p)));
    u64 dm = det % p;
    if (!t || !dm) return;
    u64 disc = (arith::mulmod(t, t, p) + p - arith::mulmod(4, dm, p)) % p;
    int chi = arith::legendre(static_cast<i64>(disc), p);
    if (chi == 1 && !w.split) {
        w.split = true;
        w.w_split = label;
    }
    if (chi == -1 && !w.nonsplit) {
        w.nonsplit = true;
        w.w_nonsplit = label;
    }
    u64 u = arith::mulmod(arith::mulmod(t, t, p), static_cast<u64>(arith::inv_mod(static_cast<i64>(dm), static_cast<i64>(p))), p);
    if (!exc.count(u) && !w.nonexc) {
        w.nonexc = true;
        w.w_nonexc = label;
    }
}

Clause witness_clause(const Witness& w, const char* what) {
    Clause c;
    std::ostringstream os;
    if (w.done()) {
        c.verdict = Verdict::pass;
        os << what << " surjective: witnesses " << w.w_split << " (split), " << w.w_nonsplit << " (nonsplit), " << w.w_nonexc
           << " (non-exceptional ratio)";
    } else {
        c.verdict = Verdict::inconclusive;
        os << what << ": missing witness for";
        if (!w.split) os << " split";
        if (!w.nonsplit) os << " nonsplit";
        if (!w.nonexc) os << " non-exceptional";
    }
    c.note = os.str();
    return c;
}

Witness scan_E(const ec::EllipticCurveQ& E, u64 p, u64 bound) {
    Witness w;
    auto exc = exceptional_ratios(p);
    for (u64 ell = 2; ell <= bound && !w.done(); ell = arith::next_prime(ell)) {
        if (ell == p || E.conductor % static_cast<i64>(ell) == 0) continue;
        feed(w, ec::ap_trace(E, ell), ell, ell, p, exc);
    }
    return w;
}

// Witnesses for A over degree-one primes of F, restricted to norms where chi(norm) = 1.
Witness scan_A(const PairContext& ctx, u64 p, u64 bound, i64 chi_disc) {
    Witness w;
    auto exc = exceptional_ratios(p);
    for (auto& P : quad::primes_up_to_norm(ctx.F, bound)) {
        if (w.done()) break;
        if (P.kind != quad::Splitting::split || P.p == p) continue;
        if (chi_disc != 1 && arith::kronecker(chi_disc, static_cast<i64>(P.p)) != 1) continue;
        if (!ec::good_at(ctx.F, ctx.A, P)) continue;
        feed(w, ec::trace_at(ctx.F, ctx.A, P), P.norm, P.p, p, exc);
    }
    return w;
}

}  // namespace

GoodPrimeReport good_prime_report(const PairContext& ctx, u64 p, u64 scan_bound) {
    GoodPrimeReport r;
    r.p = p;
    const auto& E = ctx.E;
    {
        Clause c;
        c.verdict = (p >= 11 && p != 13 && arith::is_prime(p)) ? Verdict::pass : Verdict::fail;
        c.note = "p >= 11, p != 13";
        r.clauses["P1"] = c;
    }
    {
        Clause c;
        i64 m = E.conductor * ctx.level_norm * ctx.F.disc;
        c.verdict = (m % static_cast<i64>(p) != 0) ? Verdict::pass : Verdict::fail;
        c.note = "gcd(p, N * Nm(M) * disc) with N * Nm(M) * disc = " + std::to_string(m);
        r.clauses["P2"] = c;
    }
    r.clauses["P3"] = witness_clause(scan_E(E, p, scan_bound), "E[p]");
    {
        Clause c;
        c.verdict = Verdict::pass;
        std::ostringstream os;
        for (u64 ell : arith::factor(ctx.n_minus).primes()) {
            if ((ell * ell - 1) % p) continue;
            if (ec::reduction_type(E, ell) != ec::Reduction::multiplicative) {
                if (c.verdict == Verdict::pass) c.verdict = Verdict::inconclusive;
                os << ell << ": not multiplicative; ";
                continue;
            }
            int e = ord_min_disc(E, ell);
            if (e % static_cast<int>(p) == 0) {
                c.verdict = Verdict::fail;
                os << ell << ": p | ord(Delta) = " << e << "; ";
            } else {
                os << ell << ": ord(Delta) = " << e << "; ";
            }
        }
        c.note = os.str().empty() ? "no l | N^- with p | l^2 - 1" : os.str();
        r.clauses["P4"] = c;
    }
    {
        Clause c;
        c.verdict = Verdict::inconclusive;
        c.note = "no multiplicative prime with p not dividing ord(Delta)";
        for (u64 ell : arith::factor(E.conductor).primes()) {
            if (ell == p || ec::reduction_type(E, ell) != ec::Reduction::multiplicative) continue;
            int e = ord_min_disc(E, ell);
            if (e % static_cast<int>(p)) {
                c.verdict = Verdict::pass;
                c.note = "ramified at " + std::to_string(ell) + " (ord(Delta) = " + std::to_string(e) + ")";
                break;
            }
        }
        r.clauses["P5"] = c;
    }
    {
        Clause c;
        switch (ctx.pc.kind) {
        case ec::PairKind::B: {
            i64 dd = ctx.pc.asai_character_disc.value_or(1);
            c = witness_clause(scan_A(ctx, p, scan_bound, dd), "A[p] over the compositum");
            c.note += " (heuristic: Type B from trace scan)";
            break;
        }
        case ec::PairKind::AI:
        case ec::PairKind::AI_or_AII: {
            Witness w = scan_A(ctx, p, scan_bound, 1);
            c = witness_clause(w, "A[p]");
            // Goursat: A[p] and A^theta[p] must not be projectively related
            bool indep = false;
            auto At = ec::conjugate(ctx.F, ctx.A);
            for (auto& P : quad::primes_up_to_norm(ctx.F, scan_bound)) {
                if (P.kind != quad::Splitting::split || P.p == p) continue;
                if (!ec::good_at(ctx.F, ctx.A, P) || !ec::good_at(ctx.F, At, P)) continue;
                i64 a = ec::trace_at(ctx.F, ctx.A, P), b = ec::trace_at(ctx.F, At, P);
                if (arith::mod(a * a - b * b, static_cast<i64>(p)) != 0) {
                    indep = true;
                    c.note += "; A, A^theta separated at " + P.label();
                    break;
                }
            }
            if (!indep) c.verdict = Verdict::inconclusive;
            c.note += " (heuristic)";
            break;
        }
        default:
            c.verdict = Verdict::inconclusive;
            c.note = "type AII or unclassified: image over the isogeny field not examined";
        }
        r.clauses["P6"] = c;
    }
    return r;
}

u64 auxiliary_prime(const PairContext& ctx, u64 p) {
    i64 bad = static_cast<i64>(p) * ctx.E.conductor * ctx.level_norm * ctx.F.disc;
    for (u64 q = 2;; q = arith::next_prime(q)) {
        if (bad % static_cast<i64>(q) == 0) continue;
        i64 a = ec::ap_trace(ctx.E, q);
        if (arith::mod(static_cast<i64>(q) + 1 - a, static_cast<i64>(p)) != 0) return q;
    }
}

std::vector<u64> a1_excluded(const PairContext& ctx, u64 p, u64 q) {
    std::set<u64> s{2, p, q};
    for (i64 m : {ctx.E.conductor, ctx.level_norm, ctx.F.disc})
        for (u64 r : arith::factor(m < 0 ? -m : m).primes()) s.insert(r);
    for (u64 r : ctx.exclusions) s.insert(r);
    return {s.begin(), s.end()};
}

unsigned AdmissiblePrimeCertificate::bitmap() const {
    unsigned b = 0;
    const char* names[] = {"A1", "A2", "A3", "A4", "A5"};
    for (int i = 0; i < 5; ++i)
        if (clauses.count(names[i])) b |= 1u << i;
    if (strong) {
        if (strong->s2) b |= 1u << 5;
        if (strong->s3) b |= 1u << 6;
    }
    return b;
}

std::string AdmissiblePrimeCertificate::record() const {
    std::ostringstream os;
    os << ell << ", " << n << ", " << (epsilon_sigma > 0 ? "+" : "-") << ", ";
    if (strong) os << (strong->epsilon > 0 ? "+" : "-");
    else os << ".";
    os << ", " << bitmap();
    return os.str();
}

bool s3_ok(i64 trace_Asq, u64 ell, u64 p) {
    const i64 P = static_cast<i64>(p), L = static_cast<i64>(ell % p);
    i64 t = arith::mod(trace_Asq, P);
    std::vector<i64> bad{2 * L, -2 * L, L * L + 1, -L * L - 1};
    if ((p - 1) % 4 == 0) bad.push_back(0);
    if ((p - 1) % 3 == 0) bad.push_back(-L);
    if ((p - 1) % 6 == 0) bad.push_back(L);
    for (i64 b : bad)
        if (arith::mod(b, P) == t) return false;
    return true;
}

std::vector<AdmissiblePrimeCertificate> scan_n_admissible(const PairContext& ctx, u64 p, int n, u64 bound) {
    if (n < 1) fail_pre("admissible", "scan_n_admissible", "n must be positive");
    const u64 q = auxiliary_prime(ctx, p);
    const auto excl = a1_excluded(ctx, p, q);
    const i64 pn = arith::ipow(static_cast<i64>(p), n);
    std::vector<AdmissiblePrimeCertificate> out;
    for (u64 ell = 2; ell <= bound; ell = arith::next_prime(ell)) {
        if (std::binary_search(excl.begin(), excl.end(), ell)) continue;
        if ((ell % p) * (ell % p) % p == 1) continue;  // A2
        if (quad::splitting(ctx.F, ell) != quad::Splitting::inert) continue;  // A5
        if (arith::powmod(ell, p - 1, static_cast<u64>(pn)) != 1) continue;  // A4
        i64 a = ec::ap_trace(ctx.E, ell);
        i64 L = static_cast<i64>(ell);
        bool plus = (L + 1 - a) % pn == 0, minus = (L + 1 + a) % pn == 0;
        if (!plus && !minus) continue;
        SELMER_CHECK(!(plus && minus), "admissible", "scan_n_admissible", "both signs satisfy A3 despite A2");
        AdmissiblePrimeCertificate c;
        c.ell = ell;
        c.n = n;
        c.p = p;
        c.a_ell = a;
        c.epsilon_sigma = plus ? 1 : -1;
        c.clauses["A1"] = "l not dividing 2pqN M disc (q = " + std::to_string(q) + ")";
        c.clauses["A2"] = "l^2 - 1 = " + std::to_string(arith::mod(L * L - 1, static_cast<i64>(p))) + " mod p";
        c.clauses["A3"] = "l + 1 - eps a_l = " + std::to_string(L + 1 - c.epsilon_sigma * a) + " = 0 mod p^n";
        c.clauses["A4"] = "l^(p-1) = 1 mod p^n";
        c.clauses["A5"] = "inert: kronecker(disc, l) = -1";
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<AdmissiblePrimeCertificate> scan_strongly_admissible(const PairContext& ctx, u64 p, int n, int epsilon,
                                                                 u64 bound) {
    if (epsilon != 1 && epsilon != -1) fail_pre("admissible", "scan_strongly_admissible", "epsilon must be +1 or -1");
    std::vector<AdmissiblePrimeCertificate> out;
    for (auto& c : scan_n_admissible(ctx, p, n, bound)) {
        int want = -c.epsilon_sigma * ec::breve_eta(ctx.pc, c.ell);
        if (want != epsilon) continue;
        StrongData s;
        s.epsilon = epsilon;
        s.s2 = true;
        s.trace_Asq = trace_Asq(ctx, c.ell);
        s.trace_Asq_mod_p = static_cast<u64>(arith::mod(s.trace_Asq, static_cast<i64>(p)));
        s.s3 = s3_ok(s.trace_Asq, c.ell, p);
        if (!s.s3) continue;
        c.strong = s;
        out.push_back(std::move(c));
    }
    return out;
}

AssumptionR check_assumption_R(const PairContext& ctx, u64 p, u64 bound) {
    AssumptionR r;
    const i64 N = ctx.E.conductor, Md = ctx.level_norm * ctx.F.disc, P = static_cast<i64>(p);
    {
        Clause c;
        bool ok = arith::is_squarefree(ctx.n_minus) && std::gcd(P, N) == 1 && std::gcd(P, Md) == 1 && std::gcd(N, Md) == 1;
        c.verdict = ok ? Verdict::pass : Verdict::fail;
        c.note = "N^- squarefree and p, N, M disc pairwise coprime; neatness assumed";
        r.clauses["R1"] = c;
    }
    auto good = good_prime_report(ctx, p, bound);
    r.clauses["R2"] = good.clauses["P3"];
    r.clauses["R3"] = good.clauses["P4"];
    {
        Clause c;
        auto plus = scan_strongly_admissible(ctx, p, 1, 1, bound);
        auto minus = scan_strongly_admissible(ctx, p, 1, -1, bound);
        c.verdict = (!plus.empty() && !minus.empty()) ? Verdict::pass : Verdict::inconclusive;
        c.note = "strongly (1,+): " + (plus.empty() ? std::string("none") : std::to_string(plus[0].ell)) +
                 ", strongly (1,-): " + (minus.empty() ? std::string("none") : std::to_string(minus[0].ell)) +
                 " within " + std::to_string(bound);
        r.clauses["R4"] = c;
    }
    {
        Clause c;
        c.verdict = p >= 11 ? Verdict::pass : Verdict::fail;
        c.note = "p >= 11";
        r.clauses["R5"] = c;
    }
    {
        Clause c;
        c.verdict = Verdict::inconclusive;
        c.note = ctx.pc.kind == ec::PairKind::B ? "(b) expected (Type B); irreducibility not certified"
                                                : "(a) expected; irreducibility not certified";
        r.clauses["R6"] = c;
    }
    return r;
}

}  // namespace selmer::admissible
