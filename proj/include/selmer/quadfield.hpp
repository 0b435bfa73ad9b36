#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "selmer/arith.hpp"

namespace selmer::quad {

using arith::i64;
using arith::u64;
using Rational = boost::rational<i64>;

/// Element x + y*omega of O_F.
struct OFElement {
    i64 x = 0;
    i64 y = 0;
    friend bool operator==(const OFElement&, const OFElement&) = default;
};

enum class Splitting { split, inert, ramified };
const char* to_string(Splitting s);

/// Real quadratic field Q(sqrt d); omega^2 = tr*omega + nm.
class RealQuadraticField {
public:
    i64 d = 0;
    i64 disc = 0;
    i64 tr = 0;
    i64 nm = 0;

    /// Coefficients (c0, c1, c2) of t^2 - tr t - nm.
    std::array<i64, 3> omega_minpoly() const { return {-nm, -tr, 1}; }

    OFElement add(OFElement a, OFElement b) const { return {a.x + b.x, a.y + b.y}; }
    OFElement sub(OFElement a, OFElement b) const { return {a.x - b.x, a.y - b.y}; }
    OFElement neg(OFElement a) const { return {-a.x, -a.y}; }
    OFElement mul(OFElement a, OFElement b) const;
    OFElement conj(OFElement a) const { return {a.x + tr * a.y, -a.y}; }
    i64 norm(OFElement a) const;
    i64 trace(OFElement a) const { return 2 * a.x + tr * a.y; }
    bool totally_positive(OFElement a) const { return trace(a) > 0 && norm(a) > 0; }
    std::array<long double, 2> embed(OFElement a) const;
    OFElement pow(OFElement a, int e) const;

    int narrow_class_number() const;
    std::string describe() const;

private:
    mutable std::optional<int> h_plus_;
};

RealQuadraticField make_field(i64 d);
Splitting splitting(const RealQuadraticField& F, u64 ell);
int eta(const RealQuadraticField& F, u64 ell);

struct SplitConductor {
    i64 plus = 1;
    i64 minus = 1;
};
SplitConductor split_conductor(i64 N, const RealQuadraticField& F);

/// Fundamental unit (smallest > 1 under the first embedding).
OFElement fundamental_unit(const RealQuadraticField& F);

/// zeta_F(-1) by the finite divisor-sum formula.
Rational zeta_minus_one(const RealQuadraticField& F);

/// A prime of O_F. For split primes omega = root mod the prime; gen generates it.
struct PrimeIdeal {
    u64 p = 0;
    Splitting kind = Splitting::inert;
    i64 root = 0;
    OFElement gen;
    u64 norm = 0;
    bool operator==(const PrimeIdeal& o) const { return p == o.p && kind == o.kind && root == o.root; }
    bool operator<(const PrimeIdeal& o) const { return norm != o.norm ? norm < o.norm : (p != o.p ? p < o.p : root < o.root); }
    std::string label() const;
};

std::vector<PrimeIdeal> primes_above(const RealQuadraticField& F, u64 p);
/// All primes of O_F with norm <= bound, sorted by norm.
std::vector<PrimeIdeal> primes_up_to_norm(const RealQuadraticField& F, u64 bound);
/// Valuation of an O_F element at a prime (element nonzero).
int valuation(const RealQuadraticField& F, const PrimeIdeal& P, OFElement a);

/// Integral ideal as a product of primes with exponents.
struct Ideal {
    std::vector<std::pair<PrimeIdeal, int>> factors;
    u64 norm() const;
    std::string label() const;
    bool operator==(const Ideal& o) const { return factors == o.factors; }
};
Ideal rational_ideal(const RealQuadraticField& F, i64 m);
OFElement ideal_generator(const RealQuadraticField& F, const Ideal& I);
std::vector<Ideal> ideal_divisors(const Ideal& I);  // increasing norm, then label
bool divides(const Ideal& a, const Ideal& b);
Ideal ideal_quotient(const Ideal& a, const Ideal& b);  // a / b, b | a

/// F_{p^2} as F_p[s]/(s^2 - alpha s - beta).
struct Fp2 {
    u64 p = 0;
    u64 alpha = 0;
    u64 beta = 0;
    struct El {
        u64 a = 0;
        u64 b = 0;
        friend bool operator==(const El&, const El&) = default;
    };
    El add(El x, El y) const { return {(x.a + y.a) % p, (x.b + y.b) % p}; }
    El sub(El x, El y) const { return {(x.a + p - y.a) % p, (x.b + p - y.b) % p}; }
    El mul(El x, El y) const;
    El scal(u64 c, El x) const { return {arith::mulmod(c % p, x.a, p), arith::mulmod(c % p, x.b, p)}; }
    El frob(El x) const;
    El pow(El x, u64 e) const;
    El from_int(i64 c) const { return {static_cast<u64>(arith::mod(c, static_cast<i64>(p))), 0}; }
    bool is_zero(El x) const { return x.a == 0 && x.b == 0; }
    El s() const { return {0, 1}; }
};

/// Residue field model F_l[t]/(omega_minpoly) at an inert l.
Fp2 residue_model(const RealQuadraticField& F, u64 ell);
/// Standalone model F_v[s]/(s^2 - c) (c least non-residue), or s^2+s+1 at v = 2.
Fp2 standalone_model(u64 v);
/// Image of omega under tau-bullet in the standalone model at v (v inert in F).
Fp2::El tau_bullet_standalone(const RealQuadraticField& F, u64 v);

}  // namespace selmer::quad
