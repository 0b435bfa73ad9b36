#include "selmer/quadfield.hpp"

#include <numeric>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "selmer/error.hpp"

namespace selmer::quad {

using arith::i128;

const char* to_string(Splitting s) {
    switch (s) {
    case Splitting::split: return "split";
    case Splitting::inert: return "inert";
    case Splitting::ramified: return "ramified";
    }
    return "?";
}

OFElement RealQuadraticField::mul(OFElement a, OFElement b) const {
    // (x1 + y1 w)(x2 + y2 w) with w^2 = tr w + nm
    i128 yy = static_cast<i128>(a.y) * b.y;
    i128 x = static_cast<i128>(a.x) * b.x + yy * nm;
    i128 y = static_cast<i128>(a.x) * b.y + static_cast<i128>(a.y) * b.x + yy * tr;
    if (x > INT64_MAX || x < INT64_MIN || y > INT64_MAX || y < INT64_MIN)
        fail_internal("quadfield", "mul", "overflow");
    return {static_cast<i64>(x), static_cast<i64>(y)};
}

i64 RealQuadraticField::norm(OFElement a) const {
    i128 n = static_cast<i128>(a.x) * a.x + static_cast<i128>(tr) * a.x * a.y - static_cast<i128>(nm) * a.y * a.y;
    if (n > INT64_MAX || n < INT64_MIN) fail_internal("quadfield", "norm", "overflow");
    return static_cast<i64>(n);
}

std::array<long double, 2> RealQuadraticField::embed(OFElement a) const {
    long double s = std::sqrt(static_cast<long double>(tr * tr + 4 * nm));
    long double w1 = (tr + s) / 2, w2 = (tr - s) / 2;
    return {a.x + a.y * w1, a.x + a.y * w2};
}

OFElement RealQuadraticField::pow(OFElement a, int e) const {
    OFElement r{1, 0};
    for (int i = 0; i < e; ++i) r = mul(r, a);
    return r;
}

int RealQuadraticField::narrow_class_number() const {
    if (h_plus_) return *h_plus_;
    // cycles of reduced indefinite forms (a, b, c), b^2 - 4ac = disc
    const i64 D = disc;
    const i64 s = arith::isqrt(D);
    std::set<std::array<i64, 3>> reduced;
    for (i64 b = 1; b <= s; ++b) {
        if (arith::mod(b - D, 2) != 0) continue;
        i64 ac = (b * b - D) / 4;  // negative
        for (i64 a = 1; a <= -ac; ++a) {
            if ((-ac) % a) continue;
            if (2 * a < s - b + 1 || 2 * a > s + b) continue;
            for (i64 sg : {1, -1}) {
                i64 aa = sg * a, cc = ac / aa;
                if (std::gcd(std::gcd(a, b), std::abs(cc)) != 1) continue;
                reduced.insert({aa, b, cc});
            }
        }
    }
    auto rho = [&](const std::array<i64, 3>& f) {
        i64 c = f[2], m = 2 * std::abs(c);
        i64 lo = s - m + 1;
        i64 bp = lo + arith::mod(-f[1] - lo, m);
        return std::array<i64, 3>{c, bp, (bp * bp - D) / (4 * c)};
    };
    std::set<std::array<i64, 3>> seen;
    int cycles = 0;
    for (auto& f : reduced) {
        if (seen.count(f)) continue;
        ++cycles;
        auto g = f;
        while (!seen.count(g)) {
            SELMER_CHECK(reduced.count(g), "quadfield", "narrow_class_number", "reduction left the reduced set");
            seen.insert(g);
            g = rho(g);
        }
    }
    h_plus_ = cycles;
    return cycles;
}

std::string RealQuadraticField::describe() const {
    std::ostringstream os;
    os << "Q(sqrt " << d << ")";
    return os.str();
}

RealQuadraticField make_field(i64 d) {
    if (d <= 1) fail_pre("quadfield", "make_field", "d must exceed 1");
    if (!arith::is_squarefree(d)) fail_pre("quadfield", "make_field", "d must be squarefree");
    RealQuadraticField F;
    F.d = d;
    if (arith::mod(d, 4) == 1) {
        F.disc = d;
        F.tr = 1;
        F.nm = (d - 1) / 4;
    } else {
        F.disc = 4 * d;
        F.tr = 0;
        F.nm = d;
    }
    return F;
}

Splitting splitting(const RealQuadraticField& F, u64 ell) {
    int k = arith::kronecker(F.disc, static_cast<i64>(ell));
    return k == 1 ? Splitting::split : (k == -1 ? Splitting::inert : Splitting::ramified);
}

int eta(const RealQuadraticField& F, u64 ell) { return arith::kronecker(F.disc, static_cast<i64>(ell)); }

SplitConductor split_conductor(i64 N, const RealQuadraticField& F) {
    if (N < 1) fail_pre("quadfield", "split_conductor", "N must be positive");
    SplitConductor sc;
    for (auto [p, e] : arith::factor(N).factors) {
        Splitting k = splitting(F, p);
        if (k == Splitting::ramified)
            fail_pre("quadfield", "split_conductor", "prime " + std::to_string(p) + " ramified in F");
        for (int i = 0; i < e; ++i) (k == Splitting::split ? sc.plus : sc.minus) *= static_cast<i64>(p);
    }
    return sc;
}

OFElement fundamental_unit(const RealQuadraticField& F) {
    for (i64 y = 1; y < 10000000; ++y) {
        for (i64 sgn : {-1, 1}) {
            // x^2 + tr x y - nm y^2 = sgn
            i128 disc = static_cast<i128>(F.tr) * F.tr * y * y + 4 * (static_cast<i128>(F.nm) * y * y + sgn);
            if (disc < 0) continue;
            i64 r = arith::isqrt(static_cast<i64>(disc));
            if (static_cast<i128>(r) * r != disc) continue;
            for (i64 x : {(-F.tr * y + r) / 2, (-F.tr * y - r) / 2}) {
                OFElement u{x, y};
                if (std::abs(F.norm(u)) != 1) continue;
                auto e = F.embed(u);
                if (e[0] > 1) return u;
                OFElement v = F.neg(u);
                if (F.embed(v)[0] > 1) return v;
            }
        }
    }
    fail_budget("quadfield", "fundamental_unit", "search bound exceeded");
}

Rational zeta_minus_one(const RealQuadraticField& F) {
    const i64 D = F.disc;
    i64 total = 0;
    for (i64 b = -arith::isqrt(D); b * b < D; ++b) {
        if (b * b >= D || arith::mod(b - D, 2) != 0) continue;
        i64 m = (D - b * b) / 4;
        i64 sigma = 0;
        for (u64 dv : arith::divisors(static_cast<u64>(m))) sigma += static_cast<i64>(dv);
        total += sigma;
    }
    return Rational(total, 60);
}

std::string PrimeIdeal::label() const {
    std::ostringstream os;
    if (kind == Splitting::split) os << "(" << p << ",w-" << root << ")";
    else os << "(" << p << ")";
    return os.str();
}

namespace {

OFElement find_generator(const RealQuadraticField& F, u64 p, Splitting kind, i64 root) {
    if (kind == Splitting::inert) return {static_cast<i64>(p), 0};
    // x + y w in the prime iff x = -y*root mod p; want |norm| = p, prefer totally positive.
    // Without narrow class number 1 some primes have no such generator; take trace > 0 then.
    const i64 P = static_cast<i64>(p);
    const bool narrow = F.narrow_class_number() == 1;
    std::optional<OFElement> best, any;
    for (i64 bound = 4; bound < 1 << 16; bound *= 2) {
        for (i64 y = -bound; y <= bound; ++y) {
            i64 x0 = arith::mod(-y * root, P);
            for (i64 x = x0 - ((x0 + bound) / P) * P; x <= bound; x += P) {
                if (x < -bound) continue;
                OFElement a{x, y};
                i64 n = F.norm(a);
                if (std::abs(n) != P) continue;
                if (n > 0 && F.trace(a) > 0) {
                    if (!best || F.trace(a) < F.trace(*best)) best = a;
                } else if (!narrow) {
                    OFElement b = F.trace(a) < 0 ? OFElement{-a.x, -a.y} : a;
                    if (F.trace(b) > 0 && (!any || F.trace(b) < F.trace(*any) || (F.trace(b) == F.trace(*any) && b.y > any->y)))
                        any = b;
                }
            }
        }
        if (best) return *best;
        if (any) return *any;
    }
    fail_budget("quadfield", "primes_above", "no totally positive generator found");
}

}  // namespace

std::vector<PrimeIdeal> primes_above(const RealQuadraticField& F, u64 p) {
    if (!arith::is_prime(p)) fail_pre("quadfield", "primes_above", "not a prime");
    Splitting k = splitting(F, p);
    std::vector<PrimeIdeal> out;
    if (k == Splitting::inert) {
        out.push_back({p, k, 0, find_generator(F, p, k, 0), p * p});
        return out;
    }
    i64 P = static_cast<i64>(p);
    for (i64 r = 0; r < P; ++r) {
        if (arith::mod(r * r - F.tr * r - F.nm, P) != 0) continue;
        out.push_back({p, k, r, find_generator(F, p, k, r), p});
    }
    SELMER_CHECK(!out.empty() && out.size() <= 2, "quadfield", "primes_above", "bad root count");
    return out;
}

std::vector<PrimeIdeal> primes_up_to_norm(const RealQuadraticField& F, u64 bound) {
    std::vector<PrimeIdeal> out;
    for (u64 p : arith::primes_up_to(bound)) {
        for (auto& P : primes_above(F, p))
            if (P.norm <= bound) out.push_back(P);
    }
    std::sort(out.begin(), out.end());
    return out;
}

int valuation(const RealQuadraticField& F, const PrimeIdeal& P, OFElement a) {
    if (a.x == 0 && a.y == 0) fail_pre("quadfield", "valuation", "zero element");
    int v = 0;
    i64 n = F.norm(P.gen);
    for (;;) {
        OFElement q = F.mul(a, F.conj(P.gen));
        if (q.x % n != 0 || q.y % n != 0) return v;
        a = {q.x / n, q.y / n};
        ++v;
    }
}

u64 Ideal::norm() const {
    u64 n = 1;
    for (auto& [P, e] : factors)
        for (int i = 0; i < e; ++i) n *= P.norm;
    return n;
}

std::string Ideal::label() const {
    if (factors.empty()) return "(1)";
    std::ostringstream os;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i) os << "*";
        os << factors[i].first.label();
        if (factors[i].second > 1) os << "^" << factors[i].second;
    }
    return os.str();
}

Ideal rational_ideal(const RealQuadraticField& F, i64 m) {
    Ideal I;
    if (m == 1) return I;
    for (auto [p, e] : arith::factor(m).factors) {
        auto ps = primes_above(F, p);
        int mult = (ps.size() == 1 && ps[0].kind == Splitting::ramified) ? 2 * e : e;
        for (auto& P : ps) I.factors.emplace_back(P, mult);
    }
    std::sort(I.factors.begin(), I.factors.end(), [](auto& a, auto& b) { return a.first < b.first; });
    return I;
}

OFElement ideal_generator(const RealQuadraticField& F, const Ideal& I) {
    OFElement g{1, 0};
    for (auto& [P, e] : I.factors) g = F.mul(g, F.pow(P.gen, e));
    return g;
}

std::vector<Ideal> ideal_divisors(const Ideal& I) {
    std::vector<Ideal> out{Ideal{}};
    for (auto& [P, e] : I.factors) {
        std::size_t cur = out.size();
        for (int k = 1; k <= e; ++k)
            for (std::size_t i = 0; i < cur; ++i) {
                Ideal J = out[i];
                J.factors.emplace_back(P, k);
                out.push_back(J);
            }
    }
    std::stable_sort(out.begin(), out.end(), [](const Ideal& a, const Ideal& b) {
        if (a.norm() != b.norm()) return a.norm() < b.norm();
        return a.label() < b.label();
    });
    return out;
}

bool divides(const Ideal& a, const Ideal& b) {
    for (auto& [P, e] : a.factors) {
        int eb = 0;
        for (auto& [Q, f] : b.factors)
            if (Q == P) eb = f;
        if (eb < e) return false;
    }
    return true;
}

Ideal ideal_quotient(const Ideal& a, const Ideal& b) {
    if (!divides(b, a)) fail_pre("quadfield", "ideal_quotient", "divisor does not divide");
    Ideal q;
    for (auto& [P, e] : a.factors) {
        int eb = 0;
        for (auto& [Q, f] : b.factors)
            if (Q == P) eb = f;
        if (e - eb > 0) q.factors.emplace_back(P, e - eb);
    }
    return q;
}

Fp2::El Fp2::mul(El x, El y) const {
    u64 ac = arith::mulmod(x.a, y.a, p), bd = arith::mulmod(x.b, y.b, p);
    u64 ad = arith::mulmod(x.a, y.b, p), bc = arith::mulmod(x.b, y.a, p);
    u64 a = (ac + arith::mulmod(bd, beta, p)) % p;
    u64 b = (ad + bc + arith::mulmod(bd, alpha, p)) % p;
    return {a, b};
}

Fp2::El Fp2::frob(El x) const {
    // s^p = alpha - s
    return {(x.a + arith::mulmod(x.b, alpha, p)) % p, (p - x.b) % p};
}

Fp2::El Fp2::pow(El x, u64 e) const {
    El r{1 % p, 0};
    while (e) {
        if (e & 1) r = mul(r, x);
        x = mul(x, x);
        e >>= 1;
    }
    return r;
}

Fp2 residue_model(const RealQuadraticField& F, u64 ell) {
    if (splitting(F, ell) != Splitting::inert) fail_pre("quadfield", "residue_model", "prime not inert");
    i64 L = static_cast<i64>(ell);
    return {ell, static_cast<u64>(arith::mod(F.tr, L)), static_cast<u64>(arith::mod(F.nm, L))};
}

Fp2 standalone_model(u64 v) {
    if (v == 2) return {2, 1, 1};
    u64 c = 2;
    while (arith::legendre(static_cast<i64>(c), v) != -1) ++c;
    return {v, 0, c};
}

Fp2::El tau_bullet_standalone(const RealQuadraticField& F, u64 v) {
    if (splitting(F, v) != Splitting::inert) fail_pre("quadfield", "tau_bullet", "prime not inert");
    Fp2 K = standalone_model(v);
    Fp2::El tr = K.from_int(F.tr), nm = K.from_int(F.nm);
    std::vector<Fp2::El> roots;
    for (u64 a = 0; a < v; ++a)
        for (u64 b = 1; b < v; ++b) {
            Fp2::El r{a, b};
            if (K.is_zero(K.sub(K.mul(r, r), K.add(K.mul(tr, r), nm)))) roots.push_back(r);
        }
    SELMER_CHECK(roots.size() == 2, "quadfield", "tau_bullet", "expected two conjugate roots");
    if (v == 2) return roots[0].a == 0 ? roots[0] : roots[1];
    for (auto& r : roots)
        if (r.b <= (v - 1) / 2) return r;
    fail_internal("quadfield", "tau_bullet", "no root in the normalized half");
}

}  // namespace selmer::quad
