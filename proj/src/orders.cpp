#include "selmer/orders.hpp"

#include <map>
#include <mutex>
#include <set>
#include <cstdlib>

namespace selmer::orders {

using lat::Lattice;
using lat::Vec;

namespace {

// Gauss-reduce a 2D lattice (rows of coordinates (c0, c1)) for the form Tr(g^2).
template <int N>
std::array<Central, 2> gauss2(const Center<N>& C, Central u, Central w) {
    auto q = [&](Central a) { return static_cast<i128>(C.trace(C.mul(a, a))); };
    auto b = [&](Central a, Central c) { return static_cast<i128>(C.trace(C.mul(a, c))); };
    for (int it = 0; it < 200; ++it) {
        if (q(u) > q(w)) std::swap(u, w);
        i128 qu = q(u);
        if (qu == 0) break;
        long double r = static_cast<long double>(b(u, w)) / static_cast<long double>(qu);
        i64 k = static_cast<i64>(std::llround(r));
        if (k == 0) break;
        w = {w[0] - k * u[0], w[1] - k * u[1]};
    }
    return {u, w};
}

}  // namespace

// ---------------------------------------------------------------- norm ideals

template <int N>
Central norm_generator(const Tower<N>& T, const Lattice<N>& L) {
    const auto& alg = T.alg;
    std::vector<Central> vals;
    for (int i = 0; i < N; ++i) {
        vals.push_back(alg.nrd(L.b[i]));
        for (int j = i + 1; j < N; ++j) {
            Vec<N> s = L.b[i];
            for (int k = 0; k < N; ++k) s[k] += L.b[j][k];
            auto a = alg.nrd(s), x = alg.nrd(L.b[i]), y = alg.nrd(L.b[j]);
            vals.push_back({a[0] - x[0] - y[0], a[1] - x[1] - y[1]});
        }
    }
    i64 d2 = lat::narrow(static_cast<i128>(L.den) * L.den, "norm_generator");
    if constexpr (N == 4) {
        i64 g = 0;
        for (auto& v : vals) g = static_cast<i64>(arith::gcd(static_cast<u64>(std::abs(g)), static_cast<u64>(std::abs(v[0]))));
        if (g % d2 != 0) fail_internal("orders", "norm_generator", "non-integral norm");
        return {g / d2, 0};
    } else {
        std::vector<std::array<i128, 2>> rows;
        for (auto& v : vals) {
            rows.push_back({v[0], v[1]});
            Central w = T.ctr.mul(v, {0, 1});
            rows.push_back({w[0], w[1]});
        }
        auto h = lat::hnf_rows<2>(rows);
        SELMER_CHECK(h.size() == 2, "orders", "norm_generator", "degenerate norm ideal");
        i128 index = h[0][0] * h[1][1];
        auto red = gauss2(T.ctr, Central{lat::narrow(h[0][0], "ng"), lat::narrow(h[0][1], "ng")},
                          Central{0, lat::narrow(h[1][1], "ng")});
        std::optional<Central> gen;
        for (int K = 0; K <= 8 && !gen; ++K)
            for (i64 x = -K; x <= K && !gen; ++x)
                for (i64 y = -K; y <= K && !gen; ++y) {
                    if (std::max(std::abs(x), std::abs(y)) != K) continue;
                    Central g{x * red[0][0] + y * red[1][0], x * red[0][1] + y * red[1][1]};
                    i128 n = T.ctr.norm(g);
                    if (n == index || n == -index) gen = g;
                }
        if (!gen) fail_internal("orders", "norm_generator", "no generator found");
        auto q = T.ctr.div(*gen, {d2, 0});
        if (!q) fail_internal("orders", "norm_generator", "non-integral norm");
        return T.ctr.normalize(*q);
    }
}

// Left order of a locally principal ideal: I conj(I) / nrd(I).
template <int N>
Lattice<N> ideal_left_order(const Tower<N>& T, const Lattice<N>& I, Central nu) {
    Lattice<N> P = lat::lattice_product(T.alg, I, lat::conj_lattice(T.alg, I));
    if constexpr (N == 4) return lat::scale(P, 1, nu[0]);
    else return lat::element_times(T.alg, T.ctr.elem(T.ctr.conj(nu)), T.ctr.norm(nu), P, true);
}

// ---------------------------------------------------------------- isomorphism, units, invariants

template <int N>
bool isomorphic(const Tower<N>& T, const Lattice<N>& J, Central nJ, const Lattice<N>& I, Central nI) {
    Lattice<N> P = lat::lattice_product(T.alg, J, lat::conj_lattice(T.alg, I));
    Central t = T.ctr.mul(nJ, nI);
    i128 d2 = static_cast<i128>(P.den) * P.den;
    i128 target0 = t[0] * d2, target1 = t[1] * d2;
    i128 bound = static_cast<i128>(T.ctr.trace(t)) * d2;
    if constexpr (N == 4) bound = target0;
    bool found = false;
    lat::enumerate(T.alg, P.b, bound, [&](const Vec<N>& v, i128) {
        auto n = T.alg.nrd(v);
        if (n[0] == target0 && n[1] == target1) {
            found = true;
            return false;
        }
        return true;
    });
    return found;
}

template <int N>
i64 unit_count(const Tower<N>& T, const Lattice<N>& R) {
    i128 d2 = static_cast<i128>(R.den) * R.den;
    i128 bound = (N == 4 ? 1 : 2) * d2;
    i64 count = 0;
    lat::enumerate(T.alg, R.b, bound, [&](const Vec<N>& v, i128) {
        auto n = T.alg.nrd(v);
        if (n[0] == d2 && n[1] == 0) ++count;
        return true;
    });
    return count;
}

namespace {

constexpr int kInvariantDepth = 5;

template <int N>
std::vector<i64> invariant_of(const Tower<N>& T, const Lattice<N>& J, Central nu) {
    std::vector<i64> counts(kInvariantDepth + 1, 0);
    i128 d2 = static_cast<i128>(J.den) * J.den;
    i128 bound;
    if constexpr (N == 4) bound = static_cast<i128>(nu[0]) * kInvariantDepth * d2;
    else bound = static_cast<i128>(std::ceil(T.ctr.max_embedding(nu) * kInvariantDepth + 1e-9L)) * d2;
    lat::enumerate(T.alg, J.b, bound, [&](const Vec<N>& v, i128) {
        auto n = T.alg.nrd(v);
        auto m = T.ctr.div({lat::narrow(n[0] / d2, "inv"), lat::narrow(n[1] / d2, "inv")}, nu);
        if (!m) return true;
        i64 t = T.ctr.trace(*m);
        if (t >= 0 && t <= kInvariantDepth) ++counts[t];
        return true;
    });
    return counts;
}

// Replace J by conj(y) J / nu with y a shortest vector: an isomorphic ideal of small norm.
template <int N>
std::pair<Lattice<N>, Central> reduce_ideal(const Tower<N>& T, const Lattice<N>& J, Central nu) {
    auto rows = lat::lll(T.alg, J.b);
    i128 best = -1;
    Vec<N> y{};
    for (auto& r : rows) {
        i128 f = T.alg.form(r);
        if (best < 0 || f < best) {
            best = f;
            y = r;
        }
    }
    lat::enumerate(T.alg, J.b, best, [&](const Vec<N>& v, i128 f) {
        if (f < best || (f == best && v < y)) {
            best = f;
            y = v;
        }
        return true;
    });
    auto n = T.alg.nrd(y);
    i64 d2 = lat::narrow(static_cast<i128>(J.den) * J.den, "reduce");
    auto ny = T.ctr.div({n[0] / d2, n[1] / d2}, nu);
    SELMER_CHECK(ny && n[0] % d2 == 0 && n[1] % d2 == 0, "orders", "reduce_ideal", "norm not divisible");
    // one product: bar(y) J / nu would overflow the stored entries if divided afterwards
    Vec<N> z = T.alg.bar(y);
    i64 zden = nu[0];
    if constexpr (N == 8) {
        z = T.alg.mul(T.ctr.elem(T.ctr.conj(nu)), z);
        zden = T.ctr.norm(nu);
    }
    Lattice<N> out = lat::element_times(T.alg, z, lat::narrow(static_cast<i128>(J.den) * zden, "reduce"), J, true);
    Central nn = T.ctr.normalize(*ny);
    return {out, nn};
}

template <int N>
std::vector<Lattice<N>> neighbors(const Tower<N>& T, const Lattice<N>& O, const Lattice<N>& I, Central nu,
                                  const LocalPrime<N>& q) {
    const auto& alg = T.alg;
    Lattice<N> piI = lat::element_times(alg, T.ctr.elem(q.pi), 1, I, true);
    std::vector<std::array<i128, N>> H;
    for (auto& r : piI.b) {
        auto c = lat::coords(I, r, piI.den);
        std::array<i128, N> w;
        for (int k = 0; k < N; ++k) w[k] = c[k];
        H.push_back(w);
    }
    auto h = lat::hnf_rows<N>(H);
    std::array<i64, N> diag;
    for (int k = 0; k < N; ++k) diag[k] = lat::narrow(h[k][k], "neighbors");
    std::set<Lattice<N>> seen;
    std::vector<Lattice<N>> out;
    std::array<i64, N> c{};
    i64 d2 = lat::narrow(static_cast<i128>(I.den) * I.den, "neighbors");
    BigRational target = I.covolume() * BigRational(static_cast<i64>(q.norm * q.norm));
    for (;;) {
        int k = 0;
        while (k < N && ++c[k] == diag[k]) c[k++] = 0;
        if (k == N) break;
        Vec<N> a{};
        for (int i = 0; i < N; ++i)
            if (c[i])
                for (int t = 0; t < N; ++t) a[t] += c[i] * I.b[i][t];
        auto n = alg.nrd(a);
        if (n[0] % d2 || n[1] % d2) fail_internal("orders", "neighbors", "ideal not integral");
        auto mu = T.ctr.div({n[0] / d2, n[1] / d2}, nu);
        if (!mu || !T.ctr.div(*mu, q.pi)) continue;
        Lattice<N> J = lat::element_times_plus(alg, a, I.den, O, piI);
        if (J.covolume() != target) continue;
        if (seen.insert(J).second) out.push_back(J);
    }
    if (out.size() != q.norm + 1) fail_internal("orders", "neighbors", "wrong number of neighbours");
    return out;
}

}  // namespace

// ---------------------------------------------------------------- tower

template <int N>
Lattice<N> Tower<N>::order(const Level& lv) const {
    Lattice<N> O = O0;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        if (lv[i] < 0 || lv[i] > top[i]) fail_pre("orders", "order", "level exceeds tower");
        if (lv[i] > 0) O = lat::lattice_intersect(O, R[i][lv[i]]);
    }
    return O;
}

template <int N>
u64 Tower<N>::level_norm(const Level& lv) const {
    u64 n = 1;
    for (std::size_t i = 0; i < primes.size(); ++i)
        for (int e = 0; e < lv[i]; ++e) n *= primes[i].norm;
    return n;
}

template <int N>
std::string Tower<N>::level_label(const Level& lv) const {
    std::string s;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        if (!lv[i]) continue;
        if (!s.empty()) s += "*";
        s += primes[i].label;
        if (lv[i] > 1) s += "^" + std::to_string(lv[i]);
    }
    return s.empty() ? "1" : s;
}

BigRational reduced_discriminant(const lat::Algebra<4>& alg, const Lattice<4>& O) {
    std::vector<std::vector<BigRational>> m(4, std::vector<BigRational>(4));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m[i][j] = BigRational(alg.trd(alg.mul(O.b[i], O.b[j]))[0]);
    BigRational det = 1;
    for (int c = 0; c < 4; ++c) {
        int p = c;
        while (p < 4 && m[p][c] == 0) ++p;
        if (p == 4) return 0;
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (int r = c + 1; r < 4; ++r) {
            BigRational f = m[r][c] / m[c][c];
            for (int k = c; k < 4; ++k) m[r][k] -= f * m[c][k];
        }
    }
    lat::BigInt d8 = 1;
    for (int k = 0; k < 8; ++k) d8 *= O.den;
    BigRational disc = abs(det) / BigRational(d8);
    lat::BigInt num = boost::multiprecision::sqrt(numerator(disc));
    lat::BigInt den = boost::multiprecision::sqrt(denominator(disc));
    SELMER_CHECK(BigRational(num * num, den * den) == disc, "orders", "reduced_discriminant", "not a square");
    return BigRational(num, den);
}

namespace {

std::optional<Lattice<4>> ring_closure(const lat::Algebra<4>& alg, Lattice<4> L, i64 den_cap) {
    for (int it = 0; it < 8; ++it) {
        Lattice<4> P = lat::lattice_sum(L, lat::lattice_product(alg, L, L));
        if (P.den > den_cap) return std::nullopt;
        if (P == L) return L;
        L = P;
    }
    return std::nullopt;
}

}  // namespace

Lattice<4> maximal_order(const QuaternionAlgebraQ& B) {
    const auto& alg = B.alg;
    Lattice<4> O = Lattice<4>::identity();
    for (;;) {
        BigRational rd = reduced_discriminant(alg, O);
        BigRational ratio = rd / BigRational(B.D);
        SELMER_CHECK(denominator(ratio) == 1, "orders", "maximal_order", "discriminant below D");
        if (ratio == 1) return O;
        i64 r = static_cast<i64>(numerator(ratio));
        bool improved = false;
        for (u64 p : arith::factor(r).primes()) {
            i64 pd = static_cast<i64>(p) * O.den;
            std::array<i64, 4> c{};
            for (;;) {
                int k = 0;
                while (k < 4 && ++c[k] == static_cast<i64>(p)) c[k++] = 0;
                if (k == 4) break;
                Vec<4> x{};
                for (int i = 0; i < 4; ++i)
                    for (int t = 0; t < 4; ++t) x[t] += c[i] * O.b[i][t];
                if (alg.trd(x)[0] % pd) continue;
                if (static_cast<i128>(alg.nrd(x)[0]) % (static_cast<i128>(pd) * pd)) continue;
                std::vector<Vec<4>> gens(O.b.begin(), O.b.end());
                for (auto& g : gens)
                    for (int t = 0; t < 4; ++t) g[t] *= static_cast<i64>(p);
                gens.push_back(x);
                Lattice<4> L = Lattice<4>::from_vecs(gens, pd);
                auto cl = ring_closure(alg, L, pd * static_cast<i64>(p) * static_cast<i64>(p));
                if (!cl) continue;
                O = *cl;
                improved = true;
                break;
            }
            if (improved) break;
        }
        if (!improved) fail_internal("orders", "maximal_order", "saturation stalled");
    }
}

namespace {

std::mutex g_max_mutex;
std::map<i64, std::pair<QuaternionAlgebraQ, Lattice<4>>> g_max_cache;

const std::pair<QuaternionAlgebraQ, Lattice<4>>& cached_maximal(i64 D) {
    std::lock_guard<std::mutex> lk(g_max_mutex);
    auto it = g_max_cache.find(D);
    if (it != g_max_cache.end()) return it->second;
    auto B = make_definite_algebra(D);
    auto O = maximal_order(B);
    return g_max_cache.emplace(D, std::make_pair(B, O)).first->second;
}

// Root of X^2 - tX + n in the standalone model: s-coefficient in [1, (v-1)/2], or s at v = 2.
quad::Fp2::El normalized_root(const quad::Fp2& K, i64 t, i64 n) {
    u64 v = K.p;
    std::vector<quad::Fp2::El> roots;
    for (u64 a = 0; a < v; ++a)
        for (u64 b = 1; b < v; ++b) {
            quad::Fp2::El r{a, b};
            auto val = K.add(K.sub(K.mul(r, r), K.mul(K.from_int(t), r)), K.from_int(n));
            if (K.is_zero(val)) roots.push_back(r);
        }
    SELMER_CHECK(roots.size() == 2, "orders", "normalized_root", "expected two roots");
    if (v == 2) return roots[0].a == 0 ? roots[0] : roots[1];
    for (auto& r : roots)
        if (r.b <= (v - 1) / 2) return r;
    fail_internal("orders", "normalized_root", "no normalized root");
}

i64 rat_mod(i128 num, i128 den, u64 v) {
    i128 g = lat::gcd128(num, den);
    if (g) {
        num /= g;
        den /= g;
    }
    i64 vv = static_cast<i64>(v);
    if (den % vv == 0) fail_internal("orders", "orient", "element not v-integral");
    i64 nm = static_cast<i64>(((num % vv) + vv) % vv), dm = static_cast<i64>(((den % vv) + vv) % vv);
    return static_cast<i64>(arith::mulmod(static_cast<u64>(nm), static_cast<u64>(arith::inv_mod(dm, vv)), v));
}

RamifiedData make_ramified(const TowerQ& T, u64 v) {
    RamifiedData rd;
    rd.v = v;
    rd.model = quad::standalone_model(v);
    const auto& alg = T.alg;
    const auto& O = T.O0;
    i128 d2 = static_cast<i128>(O.den) * O.den;
    std::vector<std::vector<i64>> M(4, std::vector<i64>(4));
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) M[i][k] = rat_mod(alg.trd(alg.mul(O.b[i], O.b[k]))[0], d2, v);
    auto ker = lat::kernel_mod_p_lattice(M, static_cast<i64>(v));
    std::vector<std::array<i128, 4>> gens;
    for (auto& c : ker) {
        std::array<i128, 4> w{};
        for (int i = 0; i < 4; ++i)
            for (int t = 0; t < 4; ++t) w[t] += static_cast<i128>(c[i]) * O.b[i][t];
        gens.push_back(w);
    }
    rd.m_v = Lattice<4>::from_generators(gens, O.den);
    SELMER_CHECK(lat::index(O, rd.m_v) == BigRational(static_cast<i64>(v * v)), "orders", "make_ramified",
                 "maximal ideal has wrong index");
    std::array<i64, 4> c{};
    for (;;) {
        int k = 0;
        while (k < 4 && ++c[k] == 3) c[k++] = -2;
        if (k == 4) break;
        Vec<4> z{};
        for (int i = 0; i < 4; ++i)
            for (int t = 0; t < 4; ++t) z[t] += c[i] * O.b[i][t];
        i64 t = alg.trd(z)[0] / O.den;
        i64 n = static_cast<i64>(alg.nrd(z)[0] / d2);
        bool irred = v == 2 ? (arith::mod(t, 2) == 1 && arith::mod(n, 2) == 1)
                            : arith::legendre(t * t - 4 * n, v) == -1;
        if (!irred) continue;
        rd.z0 = z;
        rd.lambda0 = normalized_root(rd.model, t, n);
        return rd;
    }
    fail_internal("orders", "make_ramified", "no residue generator");
}

}  // namespace

quad::Fp2::El orient_base(const TowerQ& T, const RamifiedData& rd, const Vec<4>& num, i64 den) {
    const auto& alg = T.alg;
    const auto& O = T.O0;
    u64 v = rd.v;
    i64 A[4][3];
    for (int k = 0; k < 4; ++k) {
        A[k][0] = rat_mod(alg.trd(O.b[k])[0], O.den, v);
        A[k][1] = rat_mod(alg.trd(alg.mul(rd.z0, O.b[k]))[0], static_cast<i128>(O.den) * O.den, v);
        A[k][2] = rat_mod(alg.trd(alg.mul(num, O.b[k]))[0], static_cast<i128>(den) * O.den, v);
    }
    i64 vv = static_cast<i64>(v);
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
            i64 det = arith::mod(A[a][0] * A[b][1] - A[a][1] * A[b][0], vv);
            if (!det) continue;
            i64 di = arith::inv_mod(det, vv);
            i64 c0 = arith::mod(arith::mod(A[a][2] * A[b][1] - A[a][1] * A[b][2], vv) * di, vv);
            i64 c1 = arith::mod(arith::mod(A[a][0] * A[b][2] - A[a][2] * A[b][0], vv) * di, vv);
            for (int k = 0; k < 4; ++k)
                SELMER_CHECK(arith::mod(c0 * A[k][0] + c1 * A[k][1] - A[k][2], vv) == 0, "orders", "orient_base",
                             "inconsistent residue");
            const auto& K = rd.model;
            return K.add(K.from_int(c0), K.scal(static_cast<u64>(c1), rd.lambda0));
        }
    fail_internal("orders", "orient_base", "degenerate trace pairing");
}

std::shared_ptr<const TowerQ> build_tower(i64 D, i64 M) {
    if (M < 1) fail_pre("orders", "build_tower", "level must be positive");
    if (arith::gcd(static_cast<u64>(D), static_cast<u64>(M)) != 1) fail_pre("orders", "build_tower", "gcd(D, M) != 1");
    const auto& [B, O0] = cached_maximal(D);
    auto T = std::make_shared<TowerQ>();
    T->alg = B.alg;
    T->D = D;
    T->qa = B.a;
    T->qb = B.b;
    T->O0 = O0;
    const auto& alg = T->alg;
    auto fM = arith::factor(M);
    for (auto [p, e] : fM.factors) {
        LocalPrime<4> lp;
        lp.p = p;
        lp.pi = {static_cast<i64>(p), 0};
        lp.norm = p;
        lp.label = std::to_string(p);
        T->primes.push_back(lp);
        T->top.push_back(e);
    }
    if (!T->primes.empty()) {
        // alpha in O0 with M | nrd(alpha), primitive at each prime of M
        i128 d2 = static_cast<i128>(O0.den) * O0.den;
        std::optional<Vec<4>> alpha;
        for (i128 bound = M * d2; !alpha; bound *= 2) {
            if (bound > static_cast<i128>(M) * d2 * (1 << 20)) fail_budget("orders", "build_tower", "no primitive element");
            lat::enumerate(alg, O0.b, bound, [&](const Vec<4>& v, i128) {
                i128 n = alg.nrd(v)[0];
                if (n % d2) return true;
                if ((n / d2) % M) return true;
                for (auto& lp : T->primes) {
                    Vec<4> w = v;
                    bool divisible = lat::contains_vec(O0, w, O0.den * static_cast<i64>(lp.p));
                    if (divisible) return true;
                }
                alpha = v;
                return false;
            });
        }
        Lattice<4> aO = lat::element_times(alg, *alpha, O0.den, O0, true);
        for (std::size_t i = 0; i < T->primes.size(); ++i) {
            std::vector<Lattice<4>> chain;
            i64 pa = 1;
            for (int a = 0; a <= T->top[i]; ++a) {
                Lattice<4> R = a == 0 ? O0 : lat::left_order(alg, lat::lattice_sum(aO, lat::scale(O0, pa, 1)));
                SELMER_CHECK(lat::is_order(alg, R), "orders", "build_tower", "geodesic step is not an order");
                SELMER_CHECK(reduced_discriminant(alg, R) == BigRational(D), "orders", "build_tower", "not maximal");
                chain.push_back(R);
                pa *= static_cast<i64>(T->primes[i].p);
            }
            T->R.push_back(chain);
        }
        Lattice<4> O = T->order(T->top);
        SELMER_CHECK(reduced_discriminant(alg, O) == BigRational(D * M), "orders", "build_tower",
                     "Eichler order has wrong discriminant");
    }
    for (u64 v : arith::factor(D).primes()) T->ram.push_back(make_ramified(*T, v));
    return T;
}

Level level_from_int(const TowerQ& T, i64 M) {
    Level lv(T.primes.size(), 0);
    auto f = arith::factor(M);
    for (auto [p, e] : f.factors) {
        bool ok = false;
        for (std::size_t i = 0; i < T.primes.size(); ++i)
            if (T.primes[i].p == p) {
                lv[i] = e;
                ok = true;
            }
        if (!ok) fail_pre("orders", "level_from_int", "prime not in tower");
    }
    return lv;
}

BigRational mass_T(i64 D, i64 M) {
    BigRational m(1, 12);
    for (u64 p : arith::factor(D).primes()) m *= BigRational(static_cast<i64>(p) - 1);
    for (auto [l, e] : arith::factor(M).factors) m *= BigRational(arith::ipow(static_cast<i64>(l), e - 1) * (static_cast<i64>(l) + 1));
    return m;
}

// ---------------------------------------------------------------- class sets

namespace {

template <int N>
LocalPrime<N> pick_neighbor_prime(const Tower<N>& T, const Level& lv) {
    if constexpr (N == 4) {
        for (u64 q = 2;; q = arith::next_prime(q)) {
            if (T.D % static_cast<i64>(q) == 0) continue;
            bool bad = false;
            for (std::size_t i = 0; i < T.primes.size(); ++i)
                if (T.primes[i].p == q && lv[i] > 0) bad = true;
            if (bad) continue;
            LocalPrime<4> lp;
            lp.p = q;
            lp.pi = {static_cast<i64>(q), 0};
            lp.norm = q;
            lp.label = std::to_string(q);
            return lp;
        }
    } else {
        for (auto& P : quad::primes_up_to_norm(*T.field, 1000)) {
            bool bad = false;
            for (std::size_t i = 0; i < T.primes.size(); ++i)
                if (T.primes[i].ideal == P && lv[i] > 0) bad = true;
            if (bad) continue;
            LocalPrime<8> lp;
            lp.p = P.p;
            lp.pi = {P.gen.x, P.gen.y};
            lp.norm = P.norm;
            lp.label = P.label();
            lp.ideal = P;
            return lp;
        }
        fail_internal("orders", "pick_neighbor_prime", "no prime");
    }
}

template <int N>
BigRational mass_of(const Tower<N>& T, const Level& lv) {
    if constexpr (N == 4) {
        i64 M = 1;
        for (std::size_t i = 0; i < T.primes.size(); ++i) M *= arith::ipow(static_cast<i64>(T.primes[i].p), lv[i]);
        return mass_T(T.D, M);
    } else {
        return mass_S(*T.field, T, lv);
    }
}

template <int N>
ClassRecord<N> make_record(const Tower<N>& T, const Lattice<N>& I, Central nu, std::vector<i64> inv) {
    ClassRecord<N> c;
    c.ideal = I;
    c.norm = nu;
    c.left = ideal_left_order(T, I, nu);
    c.over = ideal_left_order(T, lat::lattice_product(T.alg, I, T.O0), nu);
    c.unit_count = unit_count(T, c.left);
    SELMER_CHECK(c.unit_count % 2 == 0 && c.unit_count > 0, "orders", "make_record", "odd unit count");
    c.weight = c.unit_count / 2;
    c.invariant = std::move(inv);
    return c;
}

void attach_orientations(ClassSetT& S) {
    const auto& T = *S.tower;
    for (auto& c : S.classes) {
        c.orient.clear();
        for (auto& rd : T.ram) {
            bool done = false;
            for (int k = 0; k < 4 && !done; ++k) {
                auto im = class_orientation(S, c, rd, c.left.b[k], c.left.den);
                if (im.b != 0) {
                    c.orient.push_back({rd.v, c.left.b[k], c.left.den, im});
                    done = true;
                }
            }
            SELMER_CHECK(done, "orders", "attach_orientations", "no residue generator in left order");
        }
    }
}

}  // namespace

template <int N>
int ClassSet<N>::identify(const Lattice<N>& J) const {
    const auto& T = *tower;
    Central nu = norm_generator(T, J);
    auto [Jr, nr] = reduce_ideal(T, J, nu);
    auto inv = invariant_of(T, Jr, nr);
    auto range = by_invariant.equal_range(inv);
    int found = -1;
    for (auto it = range.first; it != range.second; ++it) {
        const auto& c = classes[it->second];
        if (isomorphic(T, Jr, nr, c.ideal, c.norm)) {
            found = it->second;
            break;
        }
    }
    if (found < 0) fail_internal("orders", "identify", "ideal matches no class");
    return found;
}

template <int N>
ClassSet<N> enumerate_classes(std::shared_ptr<const Tower<N>> Tp, const Level& lv, std::size_t budget) {
    const auto& T = *Tp;
    ClassSet<N> S;
    S.tower = Tp;
    S.level = lv;
    S.O = T.order(lv);
    S.neighbor_prime = pick_neighbor_prime(T, lv);
    S.mass = mass_of(T, lv);
    BigRational acc = 0;
    auto add = [&](const Lattice<N>& I, Central nu) -> bool {
        auto inv = invariant_of(T, I, nu);
        auto range = S.by_invariant.equal_range(inv);
        for (auto it = range.first; it != range.second; ++it) {
            const auto& c = S.classes[it->second];
            if (isomorphic(T, I, nu, c.ideal, c.norm)) return false;
        }
        if (S.classes.size() >= budget) fail_budget("orders", "class_set", "class budget exceeded");
        S.classes.push_back(make_record(T, I, nu, inv));
        S.by_invariant.emplace(S.classes.back().invariant, static_cast<int>(S.classes.size() - 1));
        acc += BigRational(1, S.classes.back().weight);
        return true;
    };
    add(S.O, T.ctr.normalize(norm_generator(T, S.O)));
    for (std::size_t idx = 0; idx < S.classes.size() && acc < S.mass; ++idx) {
        auto base = S.classes[idx];
        for (auto& J : neighbors(T, S.O, base.ideal, base.norm, S.neighbor_prime)) {
            Central nJ = norm_generator(T, J);
            auto [Jr, nr] = reduce_ideal(T, J, nJ);
            add(Jr, nr);
            if (acc >= S.mass) break;
        }
    }
    if (acc != S.mass) {
        fail_internal("orders", "class_set", "mass formula not met");
    }
    if constexpr (N == 4) attach_orientations(S);
    return S;
}

ClassSetT class_set_T(i64 D, i64 M, std::size_t budget) {
    auto T = build_tower(D, M);
    return enumerate_classes<4>(T, T->top, budget);
}

// ---------------------------------------------------------------- maps between class sets

template <int N>
std::vector<int> degeneracy(const ClassSet<N>& src, const ClassSet<N>& dst, const Level& d, const Level& dprime) {
    const auto& T = *src.tower;
    SELMER_CHECK(src.tower == dst.tower, "orders", "degeneracy", "class sets from different towers");
    const std::size_t n = T.primes.size();
    Level e = src.level;
    for (std::size_t i = 0; i < n; ++i) {
        if (d[i] < 0 || dprime[i] < 0 || dprime[i] > d[i] || d[i] > e[i])
            fail_pre("orders", "degeneracy", "need d' | d | level");
        if (dst.level[i] != e[i] - d[i]) fail_pre("orders", "degeneracy", "target level mismatch");
    }
    const auto& alg = T.alg;
    Lattice<N> C = T.O0;
    for (std::size_t i = 0; i < n; ++i) {
        int f = d[i], fp = dprime[i], len = e[i] - f;
        if (e[i] == 0) continue;
        Central pif{1, 0};
        for (int k = 0; k < fp; ++k) pif = T.ctr.mul(pif, T.primes[i].pi);
        auto piece = [&](int a, int b) {
            Lattice<N> P = lat::lattice_product(alg, T.R[i][a], T.R[i][b]);
            return lat::element_times(alg, T.ctr.elem(pif), 1, P, true);
        };
        C = lat::lattice_intersect(C, lat::lattice_intersect(piece(fp, 0), piece(fp + len, len)));
    }
    SELMER_CHECK(lat::right_order(alg, C) == dst.O, "orders", "degeneracy", "connecting ideal has wrong right order");
    Level idx_level(n), dp_level(n);
    for (std::size_t i = 0; i < n; ++i) {
        idx_level[i] = e[i] - d[i] + dprime[i];
        dp_level[i] = dprime[i];
    }
    BigRational want1(static_cast<i64>(T.level_norm(idx_level))), want2(static_cast<i64>(T.level_norm(dp_level)));
    std::vector<int> out;
    out.reserve(src.size());
    for (const auto& c : src.classes) {
        Lattice<N> J = lat::lattice_product(alg, c.ideal, C);
        Central nJ = norm_generator(T, J);
        Lattice<N> R1 = ideal_left_order(T, J, nJ);
        Lattice<N> R1p = ideal_left_order(T, lat::lattice_product(alg, J, T.O0), nJ);
        SELMER_CHECK(lat::index(c.over, lat::lattice_intersect(c.over, R1)) == want1, "orders", "degeneracy",
                     "index check [R':R' cap R_1] failed");
        SELMER_CHECK(lat::index(c.over, lat::lattice_intersect(c.over, R1p)) == want2, "orders", "degeneracy",
                     "index check [R':R' cap R'_1] failed");
        out.push_back(dst.identify(J));
    }
    return out;
}

template <int N>
std::vector<int> op_level(const ClassSet<N>& S, std::size_t i) {
    const auto& T = *S.tower;
    int e = S.level.at(i);
    if (e < 1) fail_pre("orders", "op_level", "prime does not divide the level");
    Central pie{1, 0};
    for (int k = 0; k < e; ++k) pie = T.ctr.mul(pie, T.primes[i].pi);
    const auto& alg = T.alg;
    auto piece = [&](int a, int b) {
        return lat::element_times(alg, T.ctr.elem(pie), 1, lat::lattice_product(alg, T.R[i][a], T.R[i][b]), true);
    };
    Lattice<N> W = lat::lattice_intersect(lat::lattice_intersect(piece(e, 0), piece(0, e)), S.O);
    SELMER_CHECK(lat::left_order(alg, W) == S.O && lat::right_order(alg, W) == S.O, "orders", "op_level",
                 "Atkin-Lehner ideal is not two-sided");
    std::vector<int> out;
    for (const auto& c : S.classes) out.push_back(S.identify(lat::lattice_product(alg, c.ideal, W)));
    return out;
}

std::vector<int> op_ramified(const ClassSetT& S, u64 v) {
    const auto& T = *S.tower;
    const RamifiedData* rd = nullptr;
    for (auto& r : T.ram)
        if (r.v == v) rd = &r;
    if (!rd) fail_pre("orders", "op_ramified", "v does not divide D");
    Lattice<4> P = lat::lattice_intersect(S.O, rd->m_v);
    std::vector<int> out;
    std::size_t vi = 0;
    while (T.ram[vi].v != v) ++vi;
    for (const auto& c : S.classes) {
        Lattice<4> J = lat::lattice_product(T.alg, c.ideal, P);
        int j = S.identify(J);
        // the transported orientation at v is the Frobenius conjugate
        const auto& o = c.orient[vi];
        ClassRecord<4> tmp = c;
        tmp.ideal = J;
        tmp.norm = norm_generator(T, J);
        auto im = class_orientation(S, tmp, *rd, o.z, o.zden);
        SELMER_CHECK(im == rd->model.frob(o.image), "orders", "op_ramified", "orientation not switched");
        out.push_back(j);
    }
    return out;
}

std::vector<int> op_ell_T(const ClassSetT& S, u64 ell) {
    const auto& T = *S.tower;
    if (T.D % static_cast<i64>(ell) == 0) return op_ramified(S, ell);
    for (std::size_t i = 0; i < T.primes.size(); ++i)
        if (T.primes[i].p == ell) return op_level(S, i);
    fail_pre("orders", "op_ell", "ell does not divide DM");
}

quad::Fp2::El class_orientation(const ClassSetT& S, const ClassRecord<4>& c, const RamifiedData& rd,
                                const Vec<4>& z, i64 zden) {
    const auto& T = *S.tower;
    const auto& alg = T.alg;
    const auto& I = c.ideal;
    u64 v = rd.v;
    i64 NI = c.norm[0];
    int k = 0;
    while (NI % static_cast<i64>(v) == 0) {
        NI /= static_cast<i64>(v);
        ++k;
    }
    i64 vk = arith::ipow(static_cast<i64>(v), k);
    i128 d2 = static_cast<i128>(I.den) * I.den;
    std::optional<Vec<4>> alpha;
    auto ok = [&](const Vec<4>& a) {
        i128 n = alg.nrd(a)[0];
        if (n % d2) return false;
        i128 m = n / d2;
        if (m % vk) return false;
        return (m / vk) % static_cast<i128>(v) != 0;
    };
    auto rows = lat::lll(alg, I.b);
    for (auto& r : rows)
        if (!alpha && ok(r)) alpha = r;
    i128 bound = alg.form(rows[0]);
    while (!alpha) {
        bound *= 2;
        lat::enumerate(alg, I.b, bound, [&](const Vec<4>& a, i128) {
            if (ok(a)) {
                alpha = a;
                return false;
            }
            return true;
        });
    }
    Vec<4> w = alg.mul(alg.mul(alg.bar(*alpha), z), *alpha);
    i64 wden = lat::narrow(d2 * zden * vk, "class_orientation");
    auto im = orient_base(T, rd, w, wden);
    i64 u = rat_mod(alg.nrd(*alpha)[0] / d2 / vk, 1, v);
    return rd.model.scal(static_cast<u64>(arith::inv_mod(u, static_cast<i64>(v))), im);
}

template struct Tower<4>;
template struct Tower<8>;
template struct ClassSet<4>;
template struct ClassSet<8>;
template Central norm_generator<4>(const Tower<4>&, const Lattice<4>&);
template Central norm_generator<8>(const Tower<8>&, const Lattice<8>&);
template bool isomorphic<4>(const Tower<4>&, const Lattice<4>&, Central, const Lattice<4>&, Central);
template bool isomorphic<8>(const Tower<8>&, const Lattice<8>&, Central, const Lattice<8>&, Central);
template i64 unit_count<4>(const Tower<4>&, const Lattice<4>&);
template i64 unit_count<8>(const Tower<8>&, const Lattice<8>&);
template <int N>
ClassSet<N> restore_classes(std::shared_ptr<const Tower<N>> Tp, const Level& lv, std::vector<ClassRecord<N>> records) {
    const auto& T = *Tp;
    ClassSet<N> S;
    S.tower = Tp;
    S.level = lv;
    S.O = T.order(lv);
    S.neighbor_prime = pick_neighbor_prime(T, lv);
    S.mass = mass_of(T, lv);
    S.classes = std::move(records);
    BigRational acc = 0;
    for (std::size_t i = 0; i < S.classes.size(); ++i) {
        const auto& c = S.classes[i];
        if (c.weight <= 0 || c.unit_count != 2 * c.weight) fail_internal("orders", "restore_classes", "bad weight");
        acc += BigRational(1, c.weight);
        S.by_invariant.emplace(c.invariant, static_cast<int>(i));
    }
    if (acc != S.mass) fail_internal("orders", "restore_classes", "stored classes fail the mass formula");
    if (!S.classes.empty() && !isomorphic(T, S.O, T.ctr.normalize(norm_generator(T, S.O)), S.classes[0].ideal, S.classes[0].norm))
        fail_internal("orders", "restore_classes", "first class is not the trivial class");
    return S;
}

template ClassSet<4> restore_classes<4>(std::shared_ptr<const Tower<4>>, const Level&, std::vector<ClassRecord<4>>);
template ClassSet<8> restore_classes<8>(std::shared_ptr<const Tower<8>>, const Level&, std::vector<ClassRecord<8>>);
template ClassSet<4> enumerate_classes<4>(std::shared_ptr<const Tower<4>>, const Level&, std::size_t);
template ClassSet<8> enumerate_classes<8>(std::shared_ptr<const Tower<8>>, const Level&, std::size_t);
template std::vector<int> degeneracy<4>(const ClassSet<4>&, const ClassSet<4>&, const Level&, const Level&);
template std::vector<int> degeneracy<8>(const ClassSet<8>&, const ClassSet<8>&, const Level&, const Level&);
template std::vector<int> op_level<4>(const ClassSet<4>&, std::size_t);
template std::vector<int> op_level<8>(const ClassSet<8>&, std::size_t);

}  // namespace selmer::orders
