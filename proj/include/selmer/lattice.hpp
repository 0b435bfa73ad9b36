#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <type_traits>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "selmer/arith.hpp"
#include "selmer/error.hpp"

namespace selmer::lat {

using arith::i128;
using arith::i64;
using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

template <int N>
using Vec = std::array<i64, N>;

inline i64 narrow(i128 v, const char* op) {
    if (v > INT64_MAX || v < INT64_MIN) fail_internal("lattice", op, "64-bit overflow");
    return static_cast<i64>(v);
}

inline i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

/// Finite-dimensional Q-algebra with integral structure constants on a basis e_0 = 1, ...
/// For N = 8 the center is spanned by e_0 and e_1 (= omega).
template <int N>
struct Algebra {
    std::array<std::array<Vec<N>, N>, N> mult{};  // e_a e_b
    std::array<Vec<N>, N> conj{};                 // conj(e_a)
    i64 tr_omega = 0, nm_omega = 0;               // N = 8 only: omega^2 = tr omega + nm
    std::array<std::array<i64, N>, N> polar{};    // form(x) = x^T polar x / 2
    std::array<std::array<i64, N>, N> trd_pair{}; // N = 4 only: trd(e_a conj(e_b))

    Vec<N> mul(const Vec<N>& x, const Vec<N>& y) const {
        std::array<i128, N> acc{};
        for (int a = 0; a < N; ++a) {
            if (!x[a]) continue;
            for (int b = 0; b < N; ++b) {
                if (!y[b]) continue;
                i128 c = static_cast<i128>(x[a]) * y[b];
                const Vec<N>& m = mult[a][b];
                for (int k = 0; k < N; ++k)
                    if (m[k]) acc[k] += c * m[k];
            }
        }
        Vec<N> out;
        for (int k = 0; k < N; ++k) out[k] = narrow(acc[k], "mul");
        return out;
    }
    Vec<N> bar(const Vec<N>& x) const {
        std::array<i128, N> acc{};
        for (int a = 0; a < N; ++a)
            if (x[a])
                for (int k = 0; k < N; ++k) acc[k] += static_cast<i128>(x[a]) * conj[a][k];
        Vec<N> out;
        for (int k = 0; k < N; ++k) out[k] = narrow(acc[k], "bar");
        return out;
    }
    /// Reduced norm as central coordinates (c0, c1); c1 = 0 when N = 4.
    std::array<i64, 2> nrd(const Vec<N>& x) const {
        Vec<N> n = mul(x, bar(x));
        return {n[0], N == 8 ? n[1] : 0};
    }
    std::array<i64, 2> trd(const Vec<N>& x) const {
        Vec<N> t;
        for (int k = 0; k < N; ++k) t[k] = x[k];
        Vec<N> b = bar(x);
        for (int k = 0; k < N; ++k) t[k] += b[k];
        return {t[0], N == 8 ? t[1] : 0};
    }
    /// Positive definite integral form: nrd over Q, Tr_{F/Q} nrd over F.
    i128 form(const Vec<N>& x) const {
        i128 s = 0;
        for (int a = 0; a < N; ++a) {
            if (!x[a]) continue;
            i128 r = 0;
            for (int b = 0; b < N; ++b) r += static_cast<i128>(polar[a][b]) * x[b];
            s += r * x[a];
        }
        return s / 2;
    }
    i128 bilinear(const Vec<N>& x, const Vec<N>& y) const {
        i128 s = 0;
        for (int a = 0; a < N; ++a) {
            if (!x[a]) continue;
            i128 r = 0;
            for (int b = 0; b < N; ++b) r += static_cast<i128>(polar[a][b]) * y[b];
            s += r * x[a];
        }
        return s;
    }
    Vec<N> one() const {
        Vec<N> o{};
        o[0] = 1;
        return o;
    }
    /// Central element c0 + c1 omega as an algebra element.
    Vec<N> central(i64 c0, i64 c1 = 0) const {
        Vec<N> o{};
        o[0] = c0;
        if constexpr (N == 8) o[1] = c1;
        return o;
    }
    /// x^{-1} = num / den with num integral (x given as integral numerator).
    std::pair<Vec<N>, i64> inverse(const Vec<N>& x) const {
        auto n = nrd(x);
        if constexpr (N == 4) {
            if (n[0] == 0) fail_internal("lattice", "inverse", "zero divisor");
            return {bar(x), n[0]};
        } else {
            // n^{-1} = conj_F(n) / Norm_F(n)
            i64 cx = n[0] + tr_omega * n[1], cy = -n[1];
            i128 nf = static_cast<i128>(n[0]) * n[0] + static_cast<i128>(tr_omega) * n[0] * n[1] -
                      static_cast<i128>(nm_omega) * n[1] * n[1];
            if (nf == 0) fail_internal("lattice", "inverse", "zero divisor");
            return {mul(bar(x), central(cx, cy)), narrow(nf, "inverse")};
        }
    }

    void finalize() {
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b) {
                Vec<N> ea{}, eb{};
                ea[a] = 1;
                eb[b] = 1;
                auto nab = [&](const Vec<N>& v) {
                    auto n = nrd(v);
                    return N == 8 ? 2 * n[0] + tr_omega * n[1] : n[0];
                };
                Vec<N> s = ea;
                s[b] += 1;
                polar[a][b] = nab(s) - nab(ea) - nab(eb);
                if (a == b) polar[a][b] = 2 * nab(ea);
                trd_pair[a][b] = trd(mul(ea, bar(eb)))[0];
            }
    }
};

namespace detail {

struct HnfOverflow {};

inline i128 chk_mul(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw HnfOverflow{};
    return r;
}
inline i128 chk_sub(i128 a, i128 b) {
    i128 r;
    if (__builtin_sub_overflow(a, b, &r)) throw HnfOverflow{};
    return r;
}
inline BigInt chk_mul(const BigInt& a, const BigInt& b) { return a * b; }
inline BigInt chk_sub(const BigInt& a, const BigInt& b) { return a - b; }
template <class Int>
Int iabs(const Int& a) {
    return a < 0 ? Int(-a) : a;
}

template <class Int, int C>
std::vector<std::array<Int, C>> hnf_core(std::vector<std::array<Int, C>> rows) {
    std::size_t piv = 0;
    std::vector<int> pivcol;
    for (int c = 0; c < C && piv < rows.size(); ++c) {
        for (;;) {
            std::size_t best = rows.size();
            for (std::size_t r = piv; r < rows.size(); ++r) {
                if (rows[r][c] == 0) continue;
                if (best == rows.size() || iabs(rows[r][c]) < iabs(rows[best][c])) best = r;
            }
            if (best == rows.size()) break;
            std::swap(rows[piv], rows[best]);
            bool clean = true;
            for (std::size_t r = piv + 1; r < rows.size(); ++r) {
                if (rows[r][c] == 0) continue;
                Int q = rows[r][c] / rows[piv][c];
                if (q != 0)
                    for (int k = c; k < C; ++k) rows[r][k] = chk_sub(rows[r][k], chk_mul(q, rows[piv][k]));
                if (rows[r][c] != 0) clean = false;
            }
            if (clean) break;
        }
        if (piv < rows.size() && rows[piv][c] != 0) {
            if (rows[piv][c] < 0)
                for (int k = c; k < C; ++k) rows[piv][k] = -rows[piv][k];
            pivcol.push_back(c);
            ++piv;
        }
    }
    rows.resize(piv);
    // bottom-up so that every row used for reduction is already reduced
    for (std::size_t i = piv; i-- > 0;) {
        for (std::size_t k = i + 1; k < piv; ++k) {
            int c = pivcol[k];
            Int q = rows[i][c] / rows[k][c];
            if (chk_sub(rows[i][c], chk_mul(q, rows[k][c])) < 0) q -= 1;
            if (q != 0)
                for (int j = c; j < C; ++j) rows[i][j] = chk_sub(rows[i][j], chk_mul(q, rows[k][j]));
        }
    }
    return rows;
}

}  // namespace detail

/// Integer row echelon form (Hermite normal form) of the given rows; zero rows removed.
/// Runs in checked 128-bit arithmetic and redoes the work with big integers on overflow.
template <int C>
std::vector<std::array<i128, C>> hnf_rows(std::vector<std::array<i128, C>> rows) {
    try {
        return detail::hnf_core<i128, C>(rows);
    } catch (const detail::HnfOverflow&) {
    }
    std::vector<std::array<BigInt, C>> big(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int k = 0; k < C; ++k) {
            i128 v = rows[i][k];
            bool neg = v < 0;
            unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
            BigInt b = static_cast<std::uint64_t>(u >> 64);
            b <<= 64;
            b += static_cast<std::uint64_t>(u);
            big[i][k] = neg ? BigInt(-b) : b;
        }
    auto h = detail::hnf_core<BigInt, C>(std::move(big));
    const BigInt lim = BigInt(1) << 120;
    std::vector<std::array<i128, C>> out(h.size());
    for (std::size_t i = 0; i < h.size(); ++i)
        for (int k = 0; k < C; ++k) {
            const BigInt& b = h[i][k];
            if (b > lim || b < -lim) fail_internal("lattice", "hnf", "entries exceed 120 bits");
            BigInt a = b < 0 ? BigInt(-b) : b;
            unsigned __int128 u = static_cast<std::uint64_t>(a >> 64);
            u = (u << 64) | static_cast<std::uint64_t>(a & BigInt(0xFFFFFFFFFFFFFFFFull));
            out[i][k] = b < 0 ? -static_cast<i128>(u) : static_cast<i128>(u);
        }
    return out;
}

/// Full-rank Z-lattice (1/den) * span(rows) in Q^N, rows in canonical HNF.
template <int N>
struct Lattice {
    i64 den = 1;
    std::array<Vec<N>, N> b{};

    bool operator==(const Lattice& o) const { return den == o.den && b == o.b; }
    bool operator!=(const Lattice& o) const { return !(*this == o); }
    bool operator<(const Lattice& o) const { return den != o.den ? den < o.den : b < o.b; }

    static Lattice identity() {
        Lattice L;
        for (int i = 0; i < N; ++i) L.b[i][i] = 1;
        return L;
    }

    /// HNF of generator numerators over a common denominator; throws unless rank N.
    static Lattice from_generators(const std::vector<std::array<i128, N>>& gens, i64 den) {
        auto rows = hnf_rows<N>(gens);
        if (static_cast<int>(rows.size()) != N) fail_internal("lattice", "from_generators", "rank deficient");
        i128 g = den;
        for (auto& r : rows)
            for (auto v : r) g = gcd128(g, v);
        Lattice L;
        L.den = narrow(den / g, "from_generators");
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) L.b[i][j] = narrow(rows[i][j] / g, "from_generators");
        return L;
    }
    static Lattice from_vecs(const std::vector<Vec<N>>& gens, i64 den) {
        std::vector<std::array<i128, N>> g;
        g.reserve(gens.size());
        for (auto& v : gens) {
            std::array<i128, N> w;
            for (int k = 0; k < N; ++k) w[k] = v[k];
            g.push_back(w);
        }
        return from_generators(g, den);
    }

    std::vector<Vec<N>> basis() const { return {b.begin(), b.end()}; }

    /// Volume numerator/denominator: covolume = prod(diag) / den^N.
    BigRational covolume() const {
        BigInt num = 1, d = 1;
        for (int i = 0; i < N; ++i) {
            num *= b[i][i];
            d *= den;
        }
        return BigRational(num, d);
    }

    std::string key() const {
        std::string s = std::to_string(den);
        for (auto& r : b)
            for (auto v : r) {
                s += ',';
                s += std::to_string(v);
            }
        return s;
    }
};

template <int N>
struct LatticeHash {
    std::size_t operator()(const Lattice<N>& L) const {
        std::size_t h = std::hash<i64>{}(L.den);
        for (auto& r : L.b)
            for (auto v : r) h = h * 1000003u ^ std::hash<i64>{}(v);
        return h;
    }
};

template <int N>
Lattice<N> lattice_sum(const Lattice<N>& A, const Lattice<N>& B) {
    i64 d = std::lcm(A.den, B.den);
    i64 fa = d / A.den, fb = d / B.den;
    std::vector<std::array<i128, N>> g;
    for (auto& r : A.b) {
        std::array<i128, N> w;
        for (int k = 0; k < N; ++k) w[k] = static_cast<i128>(r[k]) * fa;
        g.push_back(w);
    }
    for (auto& r : B.b) {
        std::array<i128, N> w;
        for (int k = 0; k < N; ++k) w[k] = static_cast<i128>(r[k]) * fb;
        g.push_back(w);
    }
    return Lattice<N>::from_generators(g, d);
}

template <int N>
Lattice<N> lattice_intersect(const Lattice<N>& A, const Lattice<N>& B) {
    i64 d = std::lcm(A.den, B.den);
    i64 fa = d / A.den, fb = d / B.den;
    std::vector<std::array<i128, 2 * N>> g;
    for (auto& r : A.b) {
        std::array<i128, 2 * N> w{};
        for (int k = 0; k < N; ++k) w[k] = w[N + k] = static_cast<i128>(r[k]) * fa;
        g.push_back(w);
    }
    for (auto& r : B.b) {
        std::array<i128, 2 * N> w{};
        for (int k = 0; k < N; ++k) w[k] = static_cast<i128>(r[k]) * fb;
        g.push_back(w);
    }
    auto rows = hnf_rows<2 * N>(g);
    std::vector<std::array<i128, N>> out;
    for (auto& r : rows) {
        bool zero = true;
        for (int k = 0; k < N; ++k)
            if (r[k]) zero = false;
        if (!zero) continue;
        std::array<i128, N> w;
        for (int k = 0; k < N; ++k) w[k] = r[N + k];
        out.push_back(w);
    }
    return Lattice<N>::from_generators(out, d);
}

template <int N>
bool contains(const Lattice<N>& big, const Lattice<N>& small) {
    return lattice_sum(big, small) == big;
}

template <int N>
bool contains_vec(const Lattice<N>& L, const std::type_identity_t<Vec<N>>& num, i64 den) {
    Lattice<N> P;
    // membership test by solving the triangular system
    i64 d = std::lcm(L.den, den);
    std::array<i128, N> x;
    for (int k = 0; k < N; ++k) x[k] = static_cast<i128>(num[k]) * (d / den);
    // L rows scaled to denominator d
    i128 f = d / L.den;
    for (int i = 0; i < N; ++i) {
        i128 piv = static_cast<i128>(L.b[i][i]) * f;
        if (x[i] % piv != 0) return false;
        i128 c = x[i] / piv;
        for (int k = i; k < N; ++k) x[k] -= c * static_cast<i128>(L.b[i][k]) * f;
    }
    (void)P;
    return true;
}

/// Coordinates of num/den in the HNF basis of L (must be a member).
template <int N>
std::array<i64, N> coords(const Lattice<N>& L, const std::type_identity_t<Vec<N>>& num, i64 den) {
    i64 d = std::lcm(L.den, den);
    std::array<i128, N> x;
    for (int k = 0; k < N; ++k) x[k] = static_cast<i128>(num[k]) * (d / den);
    i128 f = d / L.den;
    std::array<i64, N> c{};
    for (int i = 0; i < N; ++i) {
        i128 piv = static_cast<i128>(L.b[i][i]) * f;
        if (x[i] % piv != 0) fail_internal("lattice", "coords", "not a member");
        c[i] = narrow(x[i] / piv, "coords");
        for (int k = i; k < N; ++k) x[k] -= c[i] * static_cast<i128>(L.b[i][k]) * f;
    }
    return c;
}

template <int N>
Lattice<N> lattice_product(const Algebra<N>& alg, const Lattice<N>& A, const Lattice<N>& B) {
    std::vector<std::array<i128, N>> g;
    g.reserve(N * N);
    for (auto& x : A.b)
        for (auto& y : B.b) {
            Vec<N> z = alg.mul(x, y);
            std::array<i128, N> w;
            for (int k = 0; k < N; ++k) w[k] = z[k];
            g.push_back(w);
        }
    i128 d = static_cast<i128>(A.den) * B.den;
    return Lattice<N>::from_generators(g, narrow(d, "product"));
}

/// x * L (left = true) or L * x, with x = num / den.
template <int N>
Lattice<N> element_times(const Algebra<N>& alg, const std::type_identity_t<Vec<N>>& num, i64 den, const Lattice<N>& L, bool left = true) {
    std::vector<std::array<i128, N>> g;
    for (auto& y : L.b) {
        Vec<N> z = left ? alg.mul(num, y) : alg.mul(y, num);
        std::array<i128, N> w;
        for (int k = 0; k < N; ++k) w[k] = z[k];
        g.push_back(w);
    }
    return Lattice<N>::from_generators(g, narrow(static_cast<i128>(den) * L.den, "element_times"));
}

/// (num / den) * L + B in a single normal form; the product alone may not fit 64 bits.
template <int N>
Lattice<N> element_times_plus(const Algebra<N>& alg, const std::type_identity_t<Vec<N>>& num, i64 den, const Lattice<N>& L,
                              const Lattice<N>& B) {
    i64 da = narrow(static_cast<i128>(den) * L.den, "element_times_plus");
    i64 d = std::lcm(da, B.den);
    i128 fa = d / da, fb = d / B.den;
    std::vector<std::array<i128, N>> g;
    for (auto& y : L.b) {
        Vec<N> z = alg.mul(num, y);
        std::array<i128, N> w;
        for (int k = 0; k < N; ++k) w[k] = static_cast<i128>(z[k]) * fa;
        g.push_back(w);
    }
    for (auto& r : B.b) {
        std::array<i128, N> w;
        for (int k = 0; k < N; ++k) w[k] = static_cast<i128>(r[k]) * fb;
        g.push_back(w);
    }
    return Lattice<N>::from_generators(g, d);
}

template <int N>
Lattice<N> scale(const Lattice<N>& L, i64 num, i64 den) {
    std::vector<std::array<i128, N>> g;
    for (auto& y : L.b) {
        std::array<i128, N> w;
        for (int k = 0; k < N; ++k) w[k] = static_cast<i128>(y[k]) * num;
        g.push_back(w);
    }
    return Lattice<N>::from_generators(g, narrow(static_cast<i128>(den) * L.den, "scale"));
}

template <int N>
Lattice<N> conj_lattice(const Algebra<N>& alg, const Lattice<N>& L) {
    std::vector<Vec<N>> g;
    for (auto& y : L.b) g.push_back(alg.bar(y));
    return Lattice<N>::from_vecs(g, L.den);
}

/// {x : x L subset L} (left) or {x : L x subset L} (right).
template <int N>
Lattice<N> left_order(const Algebra<N>& alg, const Lattice<N>& L) {
    Lattice<N> acc;
    bool first = true;
    // short basis vectors keep the denominators of y^{-1} small
    for (auto& y : lll(alg, L.b)) {
        auto [inum, iden] = alg.inverse(y);
        // L * y^{-1}; y has denominator L.den so y^{-1} = inum * L.den / iden
        Lattice<N> t = element_times(alg, inum, 1, L, false);
        t = scale(t, L.den, iden);
        acc = first ? t : lattice_intersect(acc, t);
        first = false;
    }
    return acc;
}

template <int N>
Lattice<N> right_order(const Algebra<N>& alg, const Lattice<N>& L) {
    Lattice<N> acc;
    bool first = true;
    for (auto& y : lll(alg, L.b)) {
        auto [inum, iden] = alg.inverse(y);
        Lattice<N> t = element_times(alg, inum, 1, L, true);
        t = scale(t, L.den, iden);
        acc = first ? t : lattice_intersect(acc, t);
        first = false;
    }
    return acc;
}

template <int N>
bool is_order(const Algebra<N>& alg, const Lattice<N>& L) {
    if (!contains_vec(L, alg.one(), 1)) return false;
    return lattice_product(alg, L, L) == L;
}

/// [A : B] for B subset A.
template <int N>
BigRational index(const Lattice<N>& A, const Lattice<N>& B) {
    return B.covolume() / A.covolume();
}

/// Gram matrix of the algebra form on integer row vectors.
template <int N>
std::array<std::array<i128, N>, N> gram(const Algebra<N>& alg, const std::type_identity_t<std::array<Vec<N>, N>>& rows) {
    std::array<std::array<i128, N>, N> G;
    for (int i = 0; i < N; ++i)
        for (int j = i; j < N; ++j) G[i][j] = G[j][i] = alg.bilinear(rows[i], rows[j]);
    return G;
}

/// LLL-reduce integer rows with respect to the algebra form (delta = 0.99).
template <int N>
std::array<Vec<N>, N> lll(const Algebra<N>& alg, std::type_identity_t<std::array<Vec<N>, N>> B) {
    using ld = long double;
    auto G = gram(alg, B);
    std::array<std::array<ld, N>, N> mu{};
    std::array<ld, N> bstar{};
    auto gso = [&]() {
        for (int i = 0; i < N; ++i) {
            for (int j = 0; j < i; ++j) {
                ld s = static_cast<ld>(G[i][j]);
                for (int k = 0; k < j; ++k) s -= mu[j][k] * mu[i][k] * bstar[k];
                mu[i][j] = s / bstar[j];
            }
            ld s = static_cast<ld>(G[i][i]);
            for (int k = 0; k < i; ++k) s -= mu[i][k] * mu[i][k] * bstar[k];
            bstar[i] = s;
        }
    };
    gso();
    int k = 1, guard = 0;
    while (k < N) {
        if (++guard > 100000) fail_internal("lattice", "lll", "no convergence");
        for (int j = k - 1; j >= 0; --j) {
            ld r = std::nearbyint(mu[k][j]);
            if (r != 0) {
                i64 q = static_cast<i64>(r);
                for (int t = 0; t < N; ++t) B[k][t] = narrow(static_cast<i128>(B[k][t]) - static_cast<i128>(q) * B[j][t], "lll");
                G = gram(alg, B);
                gso();
            }
        }
        if (bstar[k] >= (0.99L - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1]) {
            ++k;
        } else {
            std::swap(B[k], B[k - 1]);
            G = gram(alg, B);
            gso();
            k = std::max(k - 1, 1);
        }
    }
    return B;
}

/// Enumerate all nonzero integer combinations x of rows with form(x) <= bound.
/// The callback receives (vector, form value); return false to stop early.
template <int N, class CB>
void enumerate(const Algebra<N>& alg, const std::type_identity_t<std::array<Vec<N>, N>>& rows_in, i128 bound, CB&& cb) {
    using ld = long double;
    auto rows = lll(alg, rows_in);
    auto G = gram(alg, rows);
    // q-form: form(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2, with G = 2 * form matrix
    std::array<std::array<ld, N>, N> q{};
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) q[i][j] = static_cast<ld>(G[i][j]) / 2;
    for (int i = 0; i < N; ++i) {
        for (int j = i + 1; j < N; ++j) {
            q[j][i] = q[i][j];
            q[i][j] = q[i][j] / q[i][i];
        }
        for (int k = i + 1; k < N; ++k)
            for (int l = k; l < N; ++l) q[k][l] -= q[k][i] * q[i][l];
    }
    const ld B = static_cast<ld>(bound) * (1 + 1e-12L) + 1e-6L;
    std::array<i64, N> x{};
    std::array<ld, N> T{}, U{};
    std::array<i64, N> UB{};
    int i = N - 1;
    T[i] = B;
    U[i] = 0;
    auto init = [&](int ii) {
        ld Z = std::sqrt(std::max<ld>(T[ii] / q[ii][ii], 0));
        UB[ii] = static_cast<i64>(std::floor(Z - U[ii]));
        x[ii] = static_cast<i64>(std::ceil(-Z - U[ii])) - 1;
    };
    init(i);
    for (;;) {
        ++x[i];
        if (x[i] > UB[i]) {
            ++i;
            if (i >= N) return;
            continue;
        }
        if (i > 0) {
            ld d = x[i] + U[i];
            T[i - 1] = T[i] - q[i][i] * d * d;
            --i;
            ld s = 0;
            for (int j = i + 1; j < N; ++j) s += q[i][j] * x[j];
            U[i] = s;
            init(i);
            continue;
        }
        bool zero = true;
        for (int j = 0; j < N; ++j)
            if (x[j]) zero = false;
        if (zero) continue;
        std::array<i128, N> v{};
        for (int r = 0; r < N; ++r)
            if (x[r])
                for (int t = 0; t < N; ++t) v[t] += static_cast<i128>(x[r]) * rows[r][t];
        Vec<N> vv;
        for (int t = 0; t < N; ++t) vv[t] = narrow(v[t], "enumerate");
        i128 val = alg.form(vv);
        if (val <= bound)
            if (!cb(vv, val)) return;
    }
}

/// Kernel mod p of the linear map Z^n -> F_p^m given by rows (n x m); returns basis of the
/// preimage lattice {x in Z^n : x M = 0 mod p} as integer rows.
std::vector<std::vector<i64>> kernel_mod_p_lattice(const std::vector<std::vector<i64>>& M, i64 p);

}  // namespace selmer::lat
