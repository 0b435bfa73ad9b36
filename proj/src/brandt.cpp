#include "selmer/brandt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "selmer/kernels.hpp"
#include "selmer/modpn.hpp"

namespace selmer::brandt {

using arith::i128;
using lat::Lattice;
using lat::Vec;
using orders::ClassSet;
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

namespace {

template <int N>
i64 key_norm(const orders::Tower<N>& T, Central g) {
    return T.ctr.norm(g);
}

Matrix product(const Matrix& A, const Matrix& B) {
    std::size_t n = A.size();
    Matrix C(n, std::vector<i64>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (!A[i][k]) continue;
            for (std::size_t j = 0; j < n; ++j) C[i][j] += A[i][k] * B[k][j];
        }
    return C;
}

}  // namespace

Central prime_key(u64 v) { return {static_cast<i64>(v), 0}; }

Central prime_key(const quad::RealQuadraticField& F, const quad::PrimeIdeal& P) {
    orders::Center<8> c;
    c.tr = F.tr;
    c.nm = F.nm;
    c.eps = quad::fundamental_unit(F);
    return c.normalize({P.gen.x, P.gen.y});
}

template <int N>
BrandtModule<N>::BrandtModule(std::shared_ptr<const ClassSet<N>> base) : base_(std::move(base)) {
    for (auto& c : base_->classes) w_.push_back(c.weight);
}

template <int N>
bool BrandtModule<N>::divides_level(Central gen) const {
    const auto& T = *base_->tower;
    if constexpr (N == 4) {
        if (T.D % gen[0] == 0) return true;
    }
    for (std::size_t i = 0; i < T.primes.size(); ++i)
        if (base_->level[i] > 0 && T.ctr.normalize(T.primes[i].pi) == gen) return true;
    return false;
}

template <int N>
void BrandtModule<N>::insert(Central gen, Matrix m) {
    const std::size_t h = size();
    const auto& T = *base_->tower;
    i64 deg = key_norm(T, gen) + 1;
    for (std::size_t j = 0; j < h; ++j) {
        i64 s = 0;
        for (std::size_t i = 0; i < h; ++i) {
            SELMER_CHECK(m[i][j] >= 0, "brandt", "brandt_matrix", "negative entry");
            SELMER_CHECK(w_[i] * m[i][j] == w_[j] * m[j][i], "brandt", "brandt_matrix", "weighted symmetry fails");
            s += m[i][j];
        }
        SELMER_CHECK(s == deg, "brandt", "brandt_matrix", "column sum is not Norm(v)+1");
    }
    // commutation against the first two cached operators
    int checked = 0;
    for (auto& [g, other] : cache_) {
        if (checked++ == 2) break;
        SELMER_CHECK(product(m, other) == product(other, m), "brandt", "brandt_matrix", "Hecke matrices do not commute");
    }
    cache_.emplace(gen, std::move(m));
}

template <int N>
void BrandtModule<N>::prepare(const std::vector<Central>& gens_in) {
    std::vector<Central> gens;
    for (auto g : gens_in) {
        if (divides_level(g)) fail_pre("brandt", "brandt_matrix", "prime divides the level");
        if (!cache_.count(g) && std::find(gens.begin(), gens.end(), g) == gens.end()) gens.push_back(g);
    }
    if (gens.empty()) return;
    const auto& S = *base_;
    const auto& T = *S.tower;
    const auto& ctr = T.ctr;
    const std::size_t h = size(), G = gens.size();
    std::vector<std::vector<std::vector<i64>>> count(G, std::vector<std::vector<i64>>(h, std::vector<i64>(h, 0)));
    for (std::size_t i = 0; i < h; ++i) {
        for (std::size_t j = i; j < h; ++j) {
            const auto& ci = S.classes[i];
            const auto& cj = S.classes[j];
            Lattice<N> L = lat::lattice_product(T.alg, cj.ideal, lat::conj_lattice(T.alg, ci.ideal));
            Central nu = ctr.mul(ci.norm, cj.norm);
            i128 d2 = static_cast<i128>(L.den) * L.den;
            std::map<std::array<i128, 2>, std::size_t> want;
            i128 bound = 0;
            for (std::size_t g = 0; g < G; ++g) {
                Central t = ctr.mul(gens[g], nu);
                want[{t[0] * d2, t[1] * d2}] = g;
                bound = std::max<i128>(bound, static_cast<i128>(ctr.trace(t)) * d2);
            }
            lat::enumerate(T.alg, L.b, bound, [&](const Vec<N>& y, i128) {
                auto n = T.alg.nrd(y);
                auto it = want.find({static_cast<i128>(n[0]), static_cast<i128>(n[1])});
                if (it != want.end()) ++count[it->second][i][j];
                return true;
            });
            for (std::size_t g = 0; g < G; ++g) count[g][j][i] = count[g][i][j];
        }
    }
    for (std::size_t g = 0; g < G; ++g) {
        Matrix m(h, std::vector<i64>(h, 0));
        for (std::size_t i = 0; i < h; ++i)
            for (std::size_t j = 0; j < h; ++j) {
                i64 u = S.classes[i].unit_count;
                SELMER_CHECK(count[g][i][j] % u == 0, "brandt", "brandt_matrix", "count not divisible by units");
                m[i][j] = count[g][i][j] / u;
            }
        insert(gens[g], std::move(m));
    }
}

template <int N>
const Matrix& BrandtModule<N>::matrix(Central gen) {
    prepare({gen});
    return cache_.at(gen);
}

template class BrandtModule<4>;
template class BrandtModule<8>;

u64 default_verify_bound(i64 D, i64 M) {
    i64 dm = D * M;
    return static_cast<u64>((dm + 5) / 6 + 1);
}

namespace {

// Row-reduced basis of a subspace of Q^h.
using RatMat = std::vector<std::vector<Rat>>;

// Null space of the r x k matrix C (right kernel).
RatMat nullspace(RatMat C, std::size_t k) {
    std::size_t r = C.size();
    std::vector<int> piv;
    std::size_t row = 0;
    for (std::size_t c = 0; c < k && row < r; ++c) {
        std::size_t s = row;
        while (s < r && C[s][c] == 0) ++s;
        if (s == r) continue;
        std::swap(C[row], C[s]);
        Rat inv = 1 / C[row][c];
        for (auto& x : C[row]) x *= inv;
        for (std::size_t t = 0; t < r; ++t) {
            if (t == row || C[t][c] == 0) continue;
            Rat f = C[t][c];
            for (std::size_t q = c; q < k; ++q) C[t][q] -= f * C[row][q];
        }
        piv.push_back(static_cast<int>(c));
        ++row;
    }
    std::vector<bool> is_piv(k, false);
    for (int c : piv) is_piv[c] = true;
    RatMat out;
    for (std::size_t f = 0; f < k; ++f) {
        if (is_piv[f]) continue;
        std::vector<Rat> v(k, 0);
        v[f] = 1;
        for (std::size_t t = 0; t < piv.size(); ++t) v[piv[t]] = -C[t][f];
        out.push_back(v);
    }
    return out;
}

// Intersect span(K) with ker(M^t - a).
RatMat restrict_kernel(const RatMat& K, const Matrix& M, i64 a) {
    const std::size_t h = M.size(), k = K.size();
    RatMat C(h, std::vector<Rat>(k, 0));
    for (std::size_t b = 0; b < k; ++b)
        for (std::size_t j = 0; j < h; ++j) {
            Rat s = 0;
            for (std::size_t i = 0; i < h; ++i)
                if (M[i][j] && K[b][i] != 0) s += Rat(M[i][j]) * K[b][i];
            s -= Rat(a) * K[b][j];
            C[j][b] = s;
        }
    RatMat coeff = nullspace(std::move(C), k);
    RatMat out;
    for (auto& c : coeff) {
        std::vector<Rat> v(h, 0);
        for (std::size_t b = 0; b < k; ++b)
            if (c[b] != 0)
                for (std::size_t i = 0; i < h; ++i) v[i] += c[b] * K[b][i];
        out.push_back(v);
    }
    return out;
}

std::vector<i64> primitive(const std::vector<Rat>& v) {
    BigInt l = 1;
    for (auto& x : v) l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(x));
    std::vector<BigInt> z;
    BigInt g = 0;
    for (auto& x : v) {
        z.push_back(boost::multiprecision::numerator(x) * (l / boost::multiprecision::denominator(x)));
        g = boost::multiprecision::gcd(g, z.back());
    }
    SELMER_CHECK(g != 0, "brandt", "eigenform", "zero vector");
    std::vector<i64> out;
    int sign = 0;
    for (auto& x : z) {
        BigInt q = x / g;
        if (!sign && q != 0) sign = q > 0 ? 1 : -1;
        out.push_back(static_cast<i64>(q) * (sign ? sign : 1));
    }
    return out;
}

std::vector<i64> primitive_int(std::vector<i64> v) {
    i64 g = 0;
    for (auto x : v) g = std::gcd(g, x < 0 ? -x : x);
    if (!g) return v;
    int sign = 0;
    for (auto& x : v) {
        x /= g;
        if (!sign && x) sign = x > 0 ? 1 : -1;
    }
    for (auto& x : v) x *= sign;
    return v;
}

struct Step {
    Central key;
    i64 a;
    std::string label;
};

template <int N>
Eigenform extract(BrandtModule<N>& mod, const std::vector<Step>& steps, const char* op) {
    std::vector<Central> keys;
    for (auto& s : steps) keys.push_back(s.key);
    mod.prepare(keys);
    const std::size_t h = mod.size();
    RatMat K(h, std::vector<Rat>(h, 0));
    for (std::size_t i = 0; i < h; ++i) K[i][i] = 1;
    Eigenform ef;
    for (auto& s : steps) {
        const Matrix& M = mod.matrix(s.key);
        K = restrict_kernel(K, M, s.a);
        if (K.empty()) fail_pre("brandt", op, "no such eigenform at this level (failed at " + s.label + ")");
        ef.table.push_back({s.label, s.a});
    }
    if (K.size() >= 2) fail_budget("brandt", op, "eigenspace of dimension " + std::to_string(K.size()) + " after all verification primes");
    ef.vector = primitive(K[0]);
    // g / w is an eigenvector of the matrix itself; cusp forms have sum(g_i / w_i) = 0
    i64 L = 1;
    for (auto w : mod.weights()) L = std::lcm(L, w);
    std::vector<i64> wg(h);
    i64 pairing = 0;
    for (std::size_t i = 0; i < h; ++i) {
        wg[i] = ef.vector[i] * (L / mod.weights()[i]);
        pairing += wg[i];
    }
    ef.weighted = primitive_int(wg);
    ef.cuspidal = pairing == 0;
    // exact re-check of every recorded eigenvalue
    for (auto& s : steps) {
        const Matrix& M = mod.matrix(s.key);
        for (std::size_t j = 0; j < h; ++j) {
            i64 acc = 0;
            for (std::size_t i = 0; i < h; ++i) acc += M[i][j] * ef.vector[i];
            SELMER_CHECK(acc == s.a * ef.vector[j], "brandt", op, "eigen equation fails");
        }
    }
    return ef;
}

}  // namespace

Eigenform eigenform_from_traces(BrandtT& mod, const std::map<u64, i64>& traces, u64 verify_bound) {
    std::vector<Step> steps;
    for (u64 v = 2; steps.size() < 20 || v <= verify_bound; v = arith::next_prime(v)) {
        if (mod.divides_level(prime_key(v))) continue;
        auto it = traces.find(v);
        if (it == traces.end()) fail_pre("brandt", "eigenform_from_traces", "missing trace at " + std::to_string(v));
        steps.push_back({prime_key(v), it->second, std::to_string(v)});
    }
    Eigenform ef = extract(mod, steps, "eigenform_from_traces");
    for (auto& s : steps) ef.eigenvalues[static_cast<u64>(s.key[0])] = s.a;
    return ef;
}

Eigenform eigenform_pi(BrandtS& mod, const quad::RealQuadraticField& F, const ec::EllipticCurveF& A,
                       u64 verify_norm_bound) {
    std::vector<Step> steps;
    for (auto& P : quad::primes_up_to_norm(F, verify_norm_bound)) {
        Central key = prime_key(F, P);
        if (mod.divides_level(key) || !ec::good_at(F, A, P)) continue;
        steps.push_back({key, ec::trace_at(F, A, P), P.label()});
    }
    if (steps.empty()) fail_pre("brandt", "eigenform_pi", "no good primes within the norm bound");
    return extract(mod, steps, "eigenform_pi");
}

bool satisfies_mod(const Matrix& T, const std::vector<u64>& g, i64 a, u64 modulus) {
    const std::size_t h = T.size();
    std::vector<std::uint32_t> At(h * h), x(h), y(h);
    for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < h; ++j) At[j * h + i] = static_cast<std::uint32_t>(modpn::reduce(T[i][j], modulus));
    for (std::size_t i = 0; i < h; ++i) x[i] = static_cast<std::uint32_t>(g[i] % modulus);
    kernels::matvec_mod(At.data(), x.data(), y.data(), h, static_cast<std::uint32_t>(modulus));
    u64 am = modpn::reduce(a, modulus);
    for (std::size_t i = 0; i < h; ++i)
        if (y[i] != arith::mulmod(am, x[i], modulus)) return false;
    return true;
}

ModPnEigenform level_raise(const ec::EllipticCurveQ& E, i64 level, i64 n_minus, u64 ell, u64 p, int n, int sign,
                           u64 bound, std::shared_ptr<const orders::ClassSetT> cs) {
    if (sign != 1 && sign != -1) fail_pre("brandt", "level_raise", "sign must be +1 or -1");
    i64 D = n_minus * static_cast<i64>(ell);
    if (arith::omega(D) % 2 == 0) fail_pre("brandt", "level_raise", "N^- * ell must have an odd number of prime factors");
    if (!cs) cs = std::make_shared<const orders::ClassSetT>(orders::class_set_T(D, level));
    SELMER_CHECK(cs->tower->D == D && static_cast<i64>(cs->tower->level_norm(cs->level)) == level, "brandt", "level_raise",
                 "class set does not match the requested level");
    BrandtT mod(cs);
    const std::size_t h = mod.size();
    u64 q = static_cast<u64>(arith::ipow(static_cast<i64>(p), n));
    if (q >= (1u << 31) || static_cast<long double>(h) * q * q > 9e18L) fail_pre("brandt", "level_raise", "p^n too large");
    std::vector<u64> primes;
    for (u64 v = 2; v <= bound; v = arith::next_prime(v))
        if (!mod.divides_level(prime_key(v)) && E.conductor % static_cast<i64>(v) != 0) primes.push_back(v);
    std::vector<Central> keys;
    for (u64 v : primes) keys.push_back(prime_key(v));
    mod.prepare(keys);
    auto sigma = orders::op_ell_T(*cs, ell);
    std::vector<std::vector<u64>> rows;
    for (std::size_t i = 0; i < h; ++i) {
        std::vector<u64> r(h, 0);
        r[static_cast<std::size_t>(sigma[i])] = (r[static_cast<std::size_t>(sigma[i])] + 1) % q;
        r[i] = (r[i] + modpn::reduce(-sign, q)) % q;
        rows.push_back(r);
    }
    std::vector<bool> used(primes.size(), false);
    auto add_prime = [&](std::size_t k) {
        const Matrix& M = mod.matrix(prime_key(primes[k]));
        i64 a = ec::ap_trace(E, primes[k]);
        for (std::size_t j = 0; j < h; ++j) {
            std::vector<u64> r(h);
            for (std::size_t i = 0; i < h; ++i) r[i] = modpn::reduce(M[i][j] - (i == j ? a : 0), q);
            rows.push_back(r);
        }
        used[k] = true;
    };
    modpn::Kernel K = modpn::kernel(rows, p, n);
    for (std::size_t k = 0; k < primes.size() && K.rank() > 1; ++k) {
        add_prime(k);
        K = modpn::kernel(rows, p, n);
    }
    for (;;) {
        if (K.rank() == 0) fail_internal("brandt", "level_raise", "level raising failed: mod p^n eigenspace is zero");
        if (K.rank() >= 2) fail_budget("brandt", "level_raise", "eigenspace needs more than one generator; raise the bound");
        if (!K.free_rank_one()) fail_internal("brandt", "level_raise", "eigenspace is cyclic but not free");
        // verify the remaining primes with matvec; fold in any that fail
        bool again = false;
        for (std::size_t k = 0; k < primes.size(); ++k) {
            if (used[k]) continue;
            if (!satisfies_mod(mod.matrix(prime_key(primes[k])), K.gens[0], ec::ap_trace(E, primes[k]), q)) {
                add_prime(k);
                again = true;
            }
        }
        if (!again) break;
        K = modpn::kernel(rows, p, n);
    }
    ModPnEigenform out;
    out.p = p;
    out.n = n;
    out.modulus = q;
    out.op_sign = sign;
    out.vector = K.gens[0];
    // normalize: first unit entry becomes 1
    for (u64 x : out.vector)
        if (x % p) {
            u64 inv = static_cast<u64>(arith::inv_mod(static_cast<i64>(x), static_cast<i64>(q)));
            for (auto& y : out.vector) y = arith::mulmod(y, inv, q);
            break;
        }
    for (std::size_t i = 0; i < h; ++i)
        SELMER_CHECK(out.vector[static_cast<std::size_t>(sigma[i])] == arith::mulmod(modpn::reduce(sign, q), out.vector[i], q),
                     "brandt", "level_raise", "op sign check");
    out.verified = primes;
    return out;
}

}  // namespace selmer::brandt
