#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "selmer/algebra.hpp"
#include "selmer/lattice.hpp"
#include "selmer/quadfield.hpp"

namespace selmer::orders {

using BigRational = lat::BigRational;
using arith::i128;
/// Central value c0 + c1*omega (c1 = 0 over Q).
using Central = std::array<i64, 2>;
/// Exponent of each tower prime in a level.
using Level = std::vector<int>;

/// Arithmetic in the center Z (N = 4) or O_F (N = 8).
template <int N>
struct Center {
    i64 tr = 0, nm = 0;
    quad::OFElement eps{1, 0};  // fundamental unit (N = 8)

    Central mul(Central a, Central b) const {
        if constexpr (N == 4) return {a[0] * b[0], 0};
        i128 yy = static_cast<i128>(a[1]) * b[1];
        return {lat::narrow(static_cast<i128>(a[0]) * b[0] + yy * nm, "cmul"),
                lat::narrow(static_cast<i128>(a[0]) * b[1] + static_cast<i128>(a[1]) * b[0] + yy * tr, "cmul")};
    }
    Central conj(Central a) const {
        if constexpr (N == 4) return a;
        return {a[0] + tr * a[1], -a[1]};
    }
    i64 norm(Central a) const {
        if constexpr (N == 4) return a[0];
        return lat::narrow(static_cast<i128>(a[0]) * a[0] + static_cast<i128>(tr) * a[0] * a[1] -
                               static_cast<i128>(nm) * a[1] * a[1], "cnorm");
    }
    i64 trace(Central a) const {
        if constexpr (N == 4) return a[0];
        return 2 * a[0] + tr * a[1];
    }
    std::optional<Central> div(Central b, Central a) const {
        if constexpr (N == 4) {
            if (a[0] == 0 || b[0] % a[0]) return std::nullopt;
            return Central{b[0] / a[0], 0};
        }
        i64 n = norm(a);
        Central q = mul(b, conj(a));
        if (n == 0 || q[0] % n || q[1] % n) return std::nullopt;
        return Central{q[0] / n, q[1] / n};
    }
    long double max_embedding(Central a) const {
        if constexpr (N == 4) return static_cast<long double>(a[0]);
        long double s = std::sqrt(static_cast<long double>(tr * tr + 4 * nm));
        long double e1 = a[0] + a[1] * (tr + s) / 2, e2 = a[0] + a[1] * (tr - s) / 2;
        return std::max(e1, e2);
    }
    lat::Vec<N> elem(Central a) const {
        lat::Vec<N> v{};
        v[0] = a[0];
        if constexpr (N == 8) v[1] = a[1];
        return v;
    }
    /// Canonical positive generator: over Q the absolute value; over F totally positive with
    /// minimal trace among unit-square multiples.
    Central normalize(Central a) const {
        if constexpr (N == 4) return {a[0] < 0 ? -a[0] : a[0], 0};
        if (a[0] == 0 && a[1] == 0) return a;
        Central e{eps.x, eps.y};
        if (norm(a) < 0) {
            if (norm(e) > 0) fail_pre("orders", "normalize", "no unit of norm -1 (narrow class number > 1)");
            a = mul(a, e);
        }
        if (trace(a) < 0) a = {-a[0], -a[1]};
        Central e2 = mul(e, e), ei2 = conj(e2);
        for (;;) {
            Central b = mul(a, e2), c = mul(a, ei2);
            if (trace(b) < trace(a)) a = b;
            else if (trace(c) < trace(a)) a = c;
            else break;
        }
        return a;
    }
};

template <int N>
struct LocalPrime {
    u64 p = 0;          // rational prime below
    Central pi{};       // generator
    u64 norm = 0;
    std::string label;
    quad::PrimeIdeal ideal;  // N = 8
};

/// Residue orientation data at a ramified prime v (over Q).
struct RamifiedData {
    u64 v = 0;
    quad::Fp2 model;
    lat::Vec<4> z0{};  // element of O_0 (numerator over O_0.den)
    quad::Fp2::El lambda0;
    lat::Lattice<4> m_v;  // two-sided maximal ideal of O_0 above v
};

template <int N>
struct Tower {
    lat::Algebra<N> alg;
    Center<N> ctr;
    i64 D = 1;
    i64 qa = 0, qb = 0;  // B = (qa, qb)
    lat::Lattice<N> O0;
    std::vector<LocalPrime<N>> primes;
    Level top;
    std::vector<std::vector<lat::Lattice<N>>> R;  // R[i][a]: maximal orders along the geodesic
    std::vector<RamifiedData> ram;                // N = 4
    std::optional<quad::RealQuadraticField> field;  // N = 8
    std::vector<std::string> sharp_choice;        // N = 8: chosen kernel per ramified v

    lat::Lattice<N> order(const Level& lv) const;
    u64 level_norm(const Level& lv) const;
    Level zero_level() const { return Level(primes.size(), 0); }
    std::string level_label(const Level& lv) const;
};

using TowerQ = Tower<4>;
using TowerF = Tower<8>;

struct Orientation {
    u64 v = 0;
    lat::Vec<4> z{};
    i64 zden = 1;
    quad::Fp2::El image;
};

/// One class: a right ideal of the base Eichler order, its left order (the oriented order it
/// represents) and the distinguished maximal overorder O_L(I O_0).
template <int N>
struct ClassRecord {
    lat::Lattice<N> ideal;
    Central norm{};
    lat::Lattice<N> left;
    lat::Lattice<N> over;
    i64 unit_count = 0;
    i64 weight = 1;
    std::vector<i64> invariant;
    std::vector<Orientation> orient;
};

template <int N>
struct ClassSet {
    std::shared_ptr<const Tower<N>> tower;
    Level level;
    lat::Lattice<N> O;
    LocalPrime<N> neighbor_prime;
    std::vector<ClassRecord<N>> classes;
    BigRational mass;

    std::size_t size() const { return classes.size(); }
    /// Index of the class of a right O-ideal; internal error if absent.
    int identify(const lat::Lattice<N>& J) const;
    std::multimap<std::vector<i64>, int> by_invariant;
};

using ClassSetT = ClassSet<4>;
using ClassSetS = ClassSet<8>;

/// Maximal order containing Z<1, i, j, k> by saturation.
lat::Lattice<4> maximal_order(const QuaternionAlgebraQ& B);
/// Reduced discriminant of an order (absolute value; over F the Z-index based value).
BigRational reduced_discriminant(const lat::Algebra<4>& alg, const lat::Lattice<4>& O);

/// Tower of maximal orders for B_D at top level M (over Q).
std::shared_ptr<const TowerQ> build_tower(i64 D, i64 M);
/// Base change of a Q-tower to F (all v | D inert in F; gcd(M, disc) = 1).
std::shared_ptr<const TowerF> build_tower_F(const TowerQ& T, const quad::RealQuadraticField& F);
/// Base change of a lattice of B_D to the matching order in B_D (x) F, enlarged at v | D.
lat::Lattice<8> sharp(const TowerQ& T, const TowerF& TF, const lat::Lattice<4>& R);
/// Level over F induced by a level over Q.
Level level_to_F(const TowerQ& T, const TowerF& TF, const Level& lv);
/// Level of the tower from an exponent map keyed by tower prime index.
Level level_from_int(const TowerQ& T, i64 M);

BigRational mass_T(i64 D, i64 M);
BigRational mass_S(const quad::RealQuadraticField& F, const TowerF& T, const Level& lv);

template <int N>
ClassSet<N> enumerate_classes(std::shared_ptr<const Tower<N>> T, const Level& lv, std::size_t budget = 50000);

/// Rebuilds a class set from stored records; rechecks weights and the mass formula.
template <int N>
ClassSet<N> restore_classes(std::shared_ptr<const Tower<N>> T, const Level& lv, std::vector<ClassRecord<N>> records);
ClassSetT class_set_T(i64 D, i64 M, std::size_t budget = 50000);
/// Standalone S-class set for an ideal given as a product of primes (D0 = least inert prime).
ClassSetS class_set_S(const quad::RealQuadraticField& F, const quad::Ideal& level, std::size_t budget = 50000);

/// Degeneracy map from level lv to lv - d; d' <= d componentwise.
template <int N>
std::vector<int> degeneracy(const ClassSet<N>& src, const ClassSet<N>& dst, const Level& d, const Level& dprime);

/// Atkin-Lehner involution at tower prime index i (any positive exponent).
template <int N>
std::vector<int> op_level(const ClassSet<N>& S, std::size_t i);
/// Orientation switch at a ramified prime v | D (over Q).
std::vector<int> op_ramified(const ClassSetT& S, u64 v);
/// op_ell for any ell | DM.
std::vector<int> op_ell_T(const ClassSetT& S, u64 ell);

/// Orientation o_v on v-integral elements of B (numerator, denominator).
quad::Fp2::El orient_base(const TowerQ& T, const RamifiedData& rd, const lat::Vec<4>& num, i64 den);
/// Orientation of class record at v for an element z of its left order.
quad::Fp2::El class_orientation(const ClassSetT& S, const ClassRecord<4>& c, const RamifiedData& rd,
                                const lat::Vec<4>& z, i64 zden);

/// Special map zeta: T(M, D) -> S(M O_F).
std::vector<int> special_map(const ClassSetT& T, const ClassSetS& S);

/// Reduced norm ideal generator of a lattice (normalized).
template <int N>
Central norm_generator(const Tower<N>& T, const lat::Lattice<N>& L);

/// Elements y of J * conj(I) with nrd(y) = target, counted exactly.
template <int N>
bool isomorphic(const Tower<N>& T, const lat::Lattice<N>& J, Central nJ, const lat::Lattice<N>& I, Central nI);

/// Unit count: |R^x| over Q, |R^1| over F.
template <int N>
i64 unit_count(const Tower<N>& T, const lat::Lattice<N>& R);

}  // namespace selmer::orders
