#include "selmer/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "selmer/error.hpp"
#include "selmer/kernels.hpp"

namespace selmer::ec {

namespace {

template <class T, class Ops>
void long_invariants(const std::array<T, 5>& a, const Ops& o, T& b2, T& b4, T& b6, T& b8, T& c4, T& c6, T& disc) {
    const T &a1 = a[0], &a2 = a[1], &a3 = a[2], &a4 = a[3], &a6 = a[4];
    b2 = o.add(o.mul(a1, a1), o.scal(4, a2));
    b4 = o.add(o.scal(2, a4), o.mul(a1, a3));
    b6 = o.add(o.mul(a3, a3), o.scal(4, a6));
    b8 = o.sub(o.add(o.add(o.mul(o.mul(a1, a1), a6), o.scal(4, o.mul(a2, a6))), o.mul(a2, o.mul(a3, a3))),
               o.add(o.mul(a1, o.mul(a3, a4)), o.mul(a4, a4)));
    c4 = o.sub(o.mul(b2, b2), o.scal(24, b4));
    c6 = o.sub(o.add(o.scal(36, o.mul(b2, b4)), o.scal(-1, o.mul(b2, o.mul(b2, b2)))), o.scal(216, b6));
    disc = o.add(o.sub(o.sub(o.scal(-1, o.mul(o.mul(b2, b2), b8)), o.scal(8, o.mul(b4, o.mul(b4, b4)))),
                       o.scal(27, o.mul(b6, b6))),
                 o.scal(9, o.mul(b2, o.mul(b4, b6))));
}

struct IntOps {
    BigInt add(const BigInt& x, const BigInt& y) const { return x + y; }
    BigInt sub(const BigInt& x, const BigInt& y) const { return x - y; }
    BigInt mul(const BigInt& x, const BigInt& y) const { return x * y; }
    BigInt scal(int c, const BigInt& x) const { return x * c; }
};

struct OFOps {
    i64 tr, nm;
    BigOF add(const BigOF& p, const BigOF& q) const { return {p.x + q.x, p.y + q.y}; }
    BigOF sub(const BigOF& p, const BigOF& q) const { return {p.x - q.x, p.y - q.y}; }
    BigOF mul(const BigOF& p, const BigOF& q) const {
        BigInt yy = p.y * q.y;
        return {p.x * q.x + yy * nm, p.x * q.y + p.y * q.x + yy * tr};
    }
    BigOF scal(int c, const BigOF& p) const { return {p.x * c, p.y * c}; }
};

int val(BigInt x, u64 p) {
    if (x == 0) return 1 << 20;
    int v = 0;
    while (x % p == 0) { x /= p; ++v; }
    return v;
}

i64 to_i64(const BigInt& x, const char* op) {
    if (x > INT64_MAX || x < INT64_MIN) fail_pre("elliptic", op, "coefficient does not fit in 64 bits");
    return static_cast<i64>(x);
}

u64 residue(const BigInt& x, u64 p) {
    BigInt r = x % p;
    if (r < 0) r += p;
    return static_cast<u64>(r);
}

/// Transformed a-invariants for [u, r, s, t]; nullopt when not integral.
std::optional<std::array<BigInt, 5>> transform(const std::array<BigInt, 5>& a, const BigInt& u, const BigInt& r,
                                               const BigInt& s, const BigInt& t) {
    const BigInt &a1 = a[0], &a2 = a[1], &a3 = a[2], &a4 = a[3], &a6 = a[4];
    BigInt n1 = a1 + 2 * s;
    BigInt n2 = a2 - s * a1 + 3 * r - s * s;
    BigInt n3 = a3 + r * a1 + 2 * t;
    BigInt n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t;
    BigInt n6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
    BigInt u2 = u * u, u3 = u2 * u, u4 = u2 * u2, u6 = u3 * u3;
    if (n1 % u || n2 % u2 || n3 % u3 || n4 % u4 || n6 % u6) return std::nullopt;
    return std::array<BigInt, 5>{n1 / u, n2 / u2, n3 / u3, n4 / u4, n6 / u6};
}

std::vector<int32_t> chi_table(u64 ell) {
    std::vector<int32_t> chi(ell, -1);
    chi[0] = 0;
    for (u64 x = 1; x < ell; ++x) chi[x * x % ell] = 1;
    return chi;
}

/// a_ell of a model with good reduction at ell by the Legendre-sum kernel.
i64 trace_legendre(const std::array<u64, 5>& a, u64 ell) {
    if (ell == 2) {
        u64 n = 1;
        for (u64 x = 0; x < 2; ++x)
            for (u64 y = 0; y < 2; ++y) {
                u64 lhs = (y * y + a[0] * x * y + a[2] * y) % 2;
                u64 rhs = (x * x * x + a[1] * x * x + a[3] * x + a[4]) % 2;
                if (lhs == rhs) ++n;
            }
        return static_cast<i64>(ell + 1 - n);
    }
    // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    u64 b2 = (a[0] * a[0] + 4 * a[1]) % ell;
    u64 b4 = (2 * a[3] + a[0] * a[2]) % ell;
    u64 b6 = (a[2] * a[2] + 4 * a[4]) % ell;
    auto chi = chi_table(ell);
    std::uint32_t c[4] = {static_cast<uint32_t>(b6), static_cast<uint32_t>(2 * b4 % ell), static_cast<uint32_t>(b2),
                          static_cast<uint32_t>(4 % ell)};
    return -kernels::legendre_sum(chi.data(), static_cast<uint32_t>(ell), c, 3);
}

std::array<u64, 5> reduce_model(const EllipticCurveQ& E, u64 ell) {
    std::array<u64, 5> r{};
    for (int i = 0; i < 5; ++i) r[i] = static_cast<u64>(arith::mod(E.a[i], static_cast<i64>(ell)));
    return r;
}

void check_hasse(i64 a, u64 q, const char* op) {
    long double bound = 2.0L * std::sqrt(static_cast<long double>(q));
    SELMER_CHECK(std::fabs(static_cast<long double>(a)) <= bound + 1e-9L, "elliptic", op, "Hasse bound violated");
}

}  // namespace

Invariants invariants(const EllipticCurveQ& E) {
    std::array<BigInt, 5> a;
    for (int i = 0; i < 5; ++i) a[i] = E.a[i];
    Invariants v;
    long_invariants(a, IntOps{}, v.b2, v.b4, v.b6, v.b8, v.c4, v.c6, v.disc);
    return v;
}

BigRational j_invariant(const EllipticCurveQ& E) {
    auto v = invariants(E);
    if (v.disc == 0) fail_pre("elliptic", "j_invariant", "singular curve");
    BigInt num = v.c4 * v.c4 * v.c4, den = v.disc;
    // this Boost's rational ctor rejects negative denominators
    if (den < 0) {
        num = -num;
        den = -den;
    }
    return BigRational(num, den);
}

InvariantsF invariants(const RealQuadraticField& F, const EllipticCurveF& A) {
    std::array<BigOF, 5> a;
    for (int i = 0; i < 5; ++i) a[i] = {A.a[i].x, A.a[i].y};
    InvariantsF v;
    BigOF b8;
    long_invariants(a, OFOps{F.tr, F.nm}, v.b2, v.b4, v.b6, b8, v.c4, v.c6, v.disc);
    return v;
}

const char* to_string(Reduction r) {
    switch (r) {
    case Reduction::good: return "good";
    case Reduction::multiplicative: return "multiplicative";
    case Reduction::additive: return "additive";
    }
    return "?";
}

EllipticCurveQ minimal_model_at(const EllipticCurveQ& E, u64 ell) {
    auto inv = invariants(E);
    if (inv.disc == 0) fail_pre("elliptic", "minimal_model_at", "singular curve");
    std::array<BigInt, 5> a;
    for (int i = 0; i < 5; ++i) a[i] = E.a[i];
    if (ell >= 5) {
        if (val(inv.disc, ell) < 12 || val(inv.c4, ell) < 4 || val(inv.c6, ell) < 6) return E;
        BigInt c4 = inv.c4, c6 = inv.c6, dd = inv.disc;
        BigInt l = ell;
        while (val(dd, ell) >= 12 && val(c4, ell) >= 4 && val(c6, ell) >= 6) {
            c4 /= l * l * l * l;
            c6 /= l * l * l * l * l * l;
            dd /= pow(l, 12);
        }
        EllipticCurveQ M;
        M.conductor = E.conductor;
        M.a = {0, 0, 0, to_i64(-27 * c4, "minimal_model_at"), to_i64(-54 * c6, "minimal_model_at")};
        return M;
    }
    BigInt u = ell;
    for (;;) {
        auto cur = invariants(EllipticCurveQ{{to_i64(a[0], "m"), to_i64(a[1], "m"), to_i64(a[2], "m"),
                                             to_i64(a[3], "m"), to_i64(a[4], "m")}, 1});
        if (val(cur.disc, ell) < 12) break;
        bool found = false;
        const i64 L = static_cast<i64>(ell);
        for (i64 r = 0; r < L * L && !found; ++r)
            for (i64 s = 0; s < L && !found; ++s)
                for (i64 t = 0; t < L * L * L && !found; ++t) {
                    if (auto n = transform(a, u, r, s, t)) {
                        a = *n;
                        found = true;
                    }
                }
        if (!found) break;
    }
    EllipticCurveQ M;
    M.conductor = E.conductor;
    for (int i = 0; i < 5; ++i) M.a[i] = to_i64(a[i], "minimal_model_at");
    return M;
}

Reduction reduction_type(const EllipticCurveQ& E, u64 ell) {
    if (!arith::is_prime(ell)) fail_pre("elliptic", "reduction_type", "ell not prime");
    auto inv = invariants(minimal_model_at(E, ell));
    if (inv.disc % ell != 0) return Reduction::good;
    // at 2 and 3 a scaled short model is not integral, so use c4 of the long model
    if (inv.c4 % ell != 0) return Reduction::multiplicative;
    return Reduction::additive;
}

void validate_conductor(const EllipticCurveQ& E, u64 bound) {
    auto inv = invariants(E);
    if (inv.disc == 0) fail_pre("elliptic", "validate_conductor", "singular curve");
    if (E.conductor < 1) fail_pre("elliptic", "validate_conductor", "conductor must be positive");
    auto fN = arith::factor(E.conductor);
    for (auto [p, e] : fN.factors) {
        Reduction r = reduction_type(E, p);
        if (r == Reduction::good)
            fail_pre("elliptic", "validate_conductor", "good reduction at conductor prime " + std::to_string(p));
        if (r == Reduction::multiplicative && e != 1)
            fail_pre("elliptic", "validate_conductor", "multiplicative prime with exponent > 1");
        if (r == Reduction::additive && e < 2)
            fail_pre("elliptic", "validate_conductor", "additive prime with exponent 1");
    }
    for (u64 p : arith::primes_up_to(bound)) {
        if (inv.disc % p != 0 || E.conductor % static_cast<i64>(p) == 0) continue;
        if (reduction_type(E, p) != Reduction::good)
            fail_pre("elliptic", "validate_conductor", "bad prime " + std::to_string(p) + " missing from conductor");
    }
}

i64 ap_trace(const EllipticCurveQ& E, u64 ell) {
    if (!arith::is_prime(ell)) fail_pre("elliptic", "ap_trace", "ell not prime");
    if (E.conductor % static_cast<i64>(ell) == 0) fail_pre("elliptic", "ap_trace", "bad reduction prime");
    if (ell >= (1u << 26)) fail_pre("elliptic", "ap_trace", "prime beyond counting cap");
    EllipticCurveQ M = E;
    if (invariants(E).disc % ell == 0) {
        M = minimal_model_at(E, ell);
        if (invariants(M).disc % ell == 0)
            fail_pre("elliptic", "ap_trace", "model has bad reduction at a prime outside the conductor");
    }
    i64 a = trace_legendre(reduce_model(M, ell), ell);
    check_hasse(a, ell, "ap_trace");
    return a;
}

u64 count_points_naive(const EllipticCurveQ& E, u64 ell) {
    auto r = reduce_model(E, ell);
    u64 n = 1;
    for (u64 x = 0; x < ell; ++x)
        for (u64 y = 0; y < ell; ++y) {
            u64 lhs = (y * y + r[0] * x % ell * y + r[2] * y) % ell;
            u64 rhs = (x * x % ell * x + r[1] * x % ell * x + r[3] * x + r[4]) % ell;
            if (lhs == rhs) ++n;
        }
    return n;
}

bool good_at(const RealQuadraticField& F, const EllipticCurveF& A, const quad::PrimeIdeal& P) {
    auto inv = invariants(F, A);
    if (P.kind == quad::Splitting::inert) {
        return !(residue(inv.disc.x, P.p) == 0 && residue(inv.disc.y, P.p) == 0);
    }
    BigInt v = inv.disc.x + inv.disc.y * P.root;
    return residue(v, P.p) != 0;
}

i64 trace_frob_sq(const RealQuadraticField& F, const EllipticCurveF& A, u64 ell) {
    if (quad::splitting(F, ell) != quad::Splitting::inert) fail_pre("elliptic", "trace_frob_sq", "ell not inert");
    if (ell * ell > 100000000ULL) fail_pre("elliptic", "trace_frob_sq", "residue field beyond counting cap");
    quad::PrimeIdeal P{ell, quad::Splitting::inert, 0, {static_cast<i64>(ell), 0}, ell * ell};
    if (!good_at(F, A, P)) fail_pre("elliptic", "trace_frob_sq", "bad reduction");
    quad::Fp2 K = quad::residue_model(F, ell);
    std::array<quad::Fp2::El, 5> a;
    for (int i = 0; i < 5; ++i) a[i] = K.add(K.from_int(A.a[i].x), K.scal(arith::mod(A.a[i].y, ell), K.s()));
    const u64 q = ell * ell;
    i64 result;
    if (ell == 2) {
        u64 n = 1;
        for (u64 xi = 0; xi < 4; ++xi)
            for (u64 yi = 0; yi < 4; ++yi) {
                quad::Fp2::El x{xi & 1, xi >> 1}, y{yi & 1, yi >> 1};
                auto lhs = K.add(K.add(K.mul(y, y), K.mul(a[0], K.mul(x, y))), K.mul(a[2], y));
                auto rhs = K.add(K.add(K.mul(x, K.mul(x, x)), K.mul(a[1], K.mul(x, x))), K.add(K.mul(a[3], x), a[4]));
                if (lhs == rhs) ++n;
            }
        result = static_cast<i64>(q + 1 - n);
    } else {
        // g(X) = 4X^3 + b2 X^2 + 2 b4 X + b6 over F_q; chi_q(z) = legendre(Norm z)
        auto b2 = K.add(K.mul(a[0], a[0]), K.scal(4, a[1]));
        auto b4 = K.add(K.scal(2, a[3]), K.mul(a[0], a[2]));
        auto b6 = K.add(K.mul(a[2], a[2]), K.scal(4, a[4]));
        std::array<quad::Fp2::El, 4> g = {b6, K.scal(2, b4), b2, K.from_int(4)};
        auto chi = chi_table(ell);
        const i64 L = static_cast<i64>(ell);
        i64 total = 0;
        for (u64 b = 0; b < ell; ++b) {
            // coefficients in a of g(a + b t): Taylor shift by b t, then split into U + V t
            quad::Fp2::El bt = K.scal(b, K.s());
            std::array<quad::Fp2::El, 4> h = g;
            for (int i = 0; i < 3; ++i)
                for (int j = 2; j >= i; --j) h[j] = K.add(h[j], K.mul(bt, h[j + 1]));
            std::array<i64, 4> U, V;
            for (int k = 0; k < 4; ++k) {
                U[k] = static_cast<i64>(h[k].a);
                V[k] = static_cast<i64>(h[k].b);
            }
            // Norm(U + V t) = U^2 + alpha U V - beta V^2
            std::array<i64, 7> P{};
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    i64 t = (U[i] * U[j] + static_cast<i64>(K.alpha) * (U[i] * V[j] % L) -
                             static_cast<i64>(K.beta) * (V[i] * V[j] % L)) % L;
                    P[i + j] = arith::mod(P[i + j] + t, L);
                }
            std::uint32_t c[7];
            for (int k = 0; k < 7; ++k) c[k] = static_cast<uint32_t>(P[k]);
            total += kernels::legendre_sum(chi.data(), static_cast<uint32_t>(ell), c, 6);
        }
        result = -total;
    }
    check_hasse(result, q, "trace_frob_sq");
    return result;
}

i64 trace_at(const RealQuadraticField& F, const EllipticCurveF& A, const quad::PrimeIdeal& P) {
    if (P.kind == quad::Splitting::inert) return trace_frob_sq(F, A, P.p);
    if (!good_at(F, A, P)) fail_pre("elliptic", "trace_at", "bad reduction at " + P.label());
    std::array<u64, 5> r{};
    const i64 L = static_cast<i64>(P.p);
    for (int i = 0; i < 5; ++i) r[i] = static_cast<u64>(arith::mod(A.a[i].x % L + (A.a[i].y % L) * P.root, L));
    i64 a = trace_legendre(r, P.p);
    check_hasse(a, P.p, "trace_at");
    return a;
}

EllipticCurveF base_change(const EllipticCurveQ& E, i64 conductor_norm) {
    EllipticCurveF A;
    for (int i = 0; i < 5; ++i) A.a[i] = {E.a[i], 0};
    A.conductor_norm = conductor_norm;
    return A;
}

EllipticCurveF conjugate(const RealQuadraticField& F, const EllipticCurveF& A) {
    EllipticCurveF B = A;
    for (int i = 0; i < 5; ++i) B.a[i] = F.conj(A.a[i]);
    return B;
}

const std::vector<BigInt>& cm_j_invariants() {
    static const std::vector<BigInt> js = {
        BigInt(0), BigInt(1728), BigInt(-3375), BigInt(8000), BigInt(-32768), BigInt(54000), BigInt(287496),
        BigInt(-884736), BigInt(-12288000), BigInt(16581375), BigInt(-884736000), BigInt("-147197952000"),
        BigInt("-262537412640768000")};
    return js;
}

bool has_cm(const EllipticCurveQ& E) {
    BigRational j = j_invariant(E);
    if (denominator(j) != 1) return false;
    BigInt jn = numerator(j);
    for (auto& c : cm_j_invariants())
        if (c == jn) return true;
    return false;
}

const char* to_string(PairKind k) {
    switch (k) {
    case PairKind::AI: return "AI";
    case PairKind::AII: return "AII";
    case PairKind::B: return "B";
    case PairKind::AI_or_AII: return "AI-or-AII";
    case PairKind::inconclusive: return "inconclusive";
    }
    return "?";
}

std::vector<i64> fundamental_discriminants(i64 bound) {
    std::vector<i64> out;
    for (i64 m = 1; m <= bound; ++m) {
        for (i64 D : {-m, m}) {
            if (D == 1) continue;
            i64 r = arith::mod(D, 16);
            bool fund = false;
            if (arith::mod(D, 4) == 1) fund = arith::is_squarefree(std::abs(D));
            else if (r == 8 || r == 12) fund = arith::is_squarefree(std::abs(D) / 4);
            if (fund) out.push_back(D);
        }
    }
    return out;
}

PairClassification classify_pair(const EllipticCurveQ& E, const EllipticCurveF& A, const RealQuadraticField& F,
                                 u64 scan_bound, i64 twist_disc_bound) {
    (void)E;
    PairClassification pc;
    EllipticCurveF At = conjugate(F, A);
    const bool fixed = (At.a == A.a);
    struct Sample {
        u64 norm;
        i64 a, at;
    };
    std::vector<Sample> samples;
    for (auto& P : quad::primes_up_to_norm(F, scan_bound)) {
        if (P.kind == quad::Splitting::ramified) continue;
        if (!good_at(F, A, P) || !good_at(F, At, P)) continue;
        if (P.kind == quad::Splitting::inert && P.p * P.p > 100000000ULL) continue;
        samples.push_back({P.norm, trace_at(F, A, P), trace_at(F, At, P)});
    }
    pc.primes_scanned = static_cast<int>(samples.size());
    if (samples.empty()) {
        pc.kind = PairKind::inconclusive;
        pc.confidence = "heuristic";
        pc.note = "no good primes within scan bound";
        return pc;
    }
    auto matches = [&](i64 Dp) {
        for (auto& s : samples) {
            int chi = Dp == 1 ? 1 : arith::kronecker(Dp, static_cast<i64>(s.norm));
            if (chi == 0) continue;
            if (s.at != chi * s.a) return false;
        }
        return true;
    };
    std::vector<i64> cands{1};
    for (i64 Dp : fundamental_discriminants(twist_disc_bound)) cands.push_back(Dp);
    for (i64 Dp : cands) {
        if (!matches(Dp)) continue;
        pc.kind = PairKind::B;
        pc.asai_character_disc = Dp;
        pc.breve_eta_is_trivial = (Dp == 1);
        pc.confidence = (fixed && Dp == 1) ? "proven-at-bound" : "heuristic";
        pc.note = fixed ? "a-invariants fixed by the field automorphism" : "trace scan match";
        return pc;
    }
    pc.kind = PairKind::AI_or_AII;
    pc.confidence = "heuristic";
    pc.note = "no quadratic twist relates A and its conjugate within the scan; AII not searched";
    return pc;
}

int breve_eta(const PairClassification& pc, u64 ell) {
    if (pc.kind != PairKind::B || !pc.asai_character_disc || *pc.asai_character_disc == 1) return 1;
    return arith::kronecker(*pc.asai_character_disc, static_cast<i64>(ell));
}

const char* to_string(Check c) {
    switch (c) {
    case Check::pass: return "pass";
    case Check::fail: return "fail";
    case Check::heuristic_pass: return "heuristic-pass";
    }
    return "?";
}

AssumptionE check_assumption_E(const EllipticCurveQ& E, const EllipticCurveF& A, const RealQuadraticField& F,
                               u64 scan_bound) {
    AssumptionE r;
    // E1: E has no CM (exact); A has no CM (heuristic: j and vanishing-trace frequency)
    bool e_cm = has_cm(E);
    bool a_cm = false;
    auto inv = invariants(F, A);
    if (inv.disc.x == 0 && inv.disc.y == 0) fail_pre("elliptic", "check_assumption_E", "A is singular");
    {
        // j(A) = c4^3 / disc; rational iff c4^3 * conj(disc) has zero omega part
        OFOps o{F.tr, F.nm};
        BigOF c43 = o.mul(inv.c4, o.mul(inv.c4, inv.c4));
        BigOF dconj{inv.disc.x + inv.disc.y * F.tr, -inv.disc.y};
        BigOF num = o.mul(c43, dconj);
        if (num.y == 0) {
            BigInt nd = inv.disc.x * inv.disc.x + inv.disc.x * inv.disc.y * F.tr - inv.disc.y * inv.disc.y * F.nm;
            BigRational j(nd < 0 ? BigInt(-num.x) : num.x, nd < 0 ? BigInt(-nd) : nd);
            if (denominator(j) == 1)
                for (auto& c : cm_j_invariants())
                    if (c == numerator(j)) a_cm = true;
        }
        int zeros = 0, total = 0;
        for (auto& P : quad::primes_up_to_norm(F, scan_bound)) {
            if (P.kind != quad::Splitting::split || !good_at(F, A, P)) continue;
            ++total;
            if (trace_at(F, A, P) == 0) ++zeros;
        }
        if (total >= 20 && 3 * zeros > total) a_cm = true;
    }
    r.e1 = (e_cm || a_cm) ? Check::fail : Check::heuristic_pass;
    i64 g = static_cast<i64>(arith::gcd(static_cast<u64>(E.conductor), static_cast<u64>(A.conductor_norm * F.disc)));
    r.e2 = g == 1 ? Check::pass : Check::fail;
    if (r.e2 == Check::pass) {
        auto sc = quad::split_conductor(E.conductor, F);
        r.e3 = arith::is_squarefree(sc.minus) ? Check::pass : Check::fail;
    } else {
        r.e3 = Check::fail;
        r.note = "E3 not evaluated: N shares a factor with M*disc";
    }
    return r;
}

Parity parity_from_minus(i64 n_minus) {
    int w = arith::omega(n_minus);
    Parity p;
    p.type = (w % 2 == 1) ? ParityType::even : ParityType::odd;
    p.epsilon = ((w + 1) % 2 == 0) ? 1 : -1;
    return p;
}

Parity parity(const EllipticCurveQ& E, const EllipticCurveF& A, const RealQuadraticField& F) {
    auto chk = check_assumption_E(E, A, F);
    if (!chk.ok()) fail_pre("elliptic", "parity", "Assumption E fails");
    return parity_from_minus(quad::split_conductor(E.conductor, F).minus);
}

std::vector<u64> sigma_set_from_minus(i64 n_minus) {
    std::vector<u64> out{0};
    for (u64 p : arith::factor(n_minus).primes()) out.push_back(p);
    return out;
}

std::vector<u64> sigma_set(const EllipticCurveQ& E, const EllipticCurveF& A, const RealQuadraticField& F) {
    auto chk = check_assumption_E(E, A, F);
    if (!chk.ok()) fail_pre("elliptic", "sigma_set", "Assumption E fails");
    return sigma_set_from_minus(quad::split_conductor(E.conductor, F).minus);
}

}  // namespace selmer::ec
