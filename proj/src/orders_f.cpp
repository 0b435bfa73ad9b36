#include "selmer/orders.hpp"

namespace selmer::orders {

using lat::Lattice;
using lat::Vec;

namespace {

Vec<4> part(const Vec<8>& x, int s) {
    Vec<4> r{};
    for (int c = 0; c < 4; ++c) r[c] = x[2 * c + s];
    return r;
}

quad::Fp2::El psi(const TowerQ& T, const RamifiedData& rd, const Vec<8>& x, i64 den, quad::Fp2::El tau) {
    const auto& K = rd.model;
    auto a = orient_base(T, rd, part(x, 0), den);
    auto b = orient_base(T, rd, part(x, 1), den);
    return K.add(a, K.mul(b, tau));
}

Lattice<8> sub_lattice(const Lattice<8>& E, const std::vector<std::vector<i64>>& coords) {
    std::vector<std::array<i128, 8>> gens;
    for (auto& c : coords) {
        std::array<i128, 8> w{};
        for (int i = 0; i < 8; ++i)
            for (int t = 0; t < 8; ++t) w[t] += static_cast<i128>(c[i]) * E.b[i][t];
        gens.push_back(w);
    }
    return Lattice<8>::from_generators(gens, E.den);
}

// Enlarge E = R (x) O_F at v to the overorder whose residue bimodule matches o_v (x) tau-bullet.
Lattice<8> enlarge_at(const TowerQ& T, const lat::Algebra<8>& alg, const quad::RealQuadraticField& F,
                      const RamifiedData& rd, const Lattice<4>& R, const Lattice<8>& E, std::string* choice) {
    const auto& K = rd.model;
    u64 v = rd.v;
    quad::Fp2::El tb = quad::tau_bullet_standalone(F, v);
    quad::Fp2::El tc = K.frob(tb);
    // r in R with o_v(r) = tau-bullet(omega)
    std::optional<Vec<4>> r;
    i64 rden = R.den;
    for (int k = 0; k < 4 && !r; ++k) {
        auto lam = orient_base(T, rd, R.b[k], R.den);
        if (lam.b == 0) continue;
        u64 c1 = arith::mulmod(tb.b, static_cast<u64>(arith::inv_mod(static_cast<i64>(lam.b), static_cast<i64>(v))), v);
        u64 c0 = (tb.a + v - arith::mulmod(c1, lam.a, v)) % v;
        Vec<4> x{};
        x[0] = static_cast<i64>(c0) * R.den;
        for (int t = 0; t < 4; ++t) x[t] += static_cast<i64>(c1) * R.b[k][t];
        r = x;
    }
    SELMER_CHECK(r && orient_base(T, rd, *r, rden) == tb, "orders", "sharp", "no residue lift of tau-bullet");
    Vec<8> rw = embed(*r);
    rw[1] -= rden;  // r - omega
    std::vector<Lattice<8>> passing;
    std::vector<std::string> names;
    for (int which = 0; which < 2; ++which) {
        auto tau = which == 0 ? tb : tc;
        std::vector<std::vector<i64>> M(8, std::vector<i64>(2));
        for (int i = 0; i < 8; ++i) {
            auto im = psi(T, rd, E.b[i], E.den, tau);
            M[i][0] = static_cast<i64>(im.a);
            M[i][1] = static_cast<i64>(im.b);
        }
        Lattice<8> Ker = sub_lattice(E, lat::kernel_mod_p_lattice(M, static_cast<i64>(v)));
        Lattice<8> S = lat::left_order(alg, Ker);
        SELMER_CHECK(lat::is_order(alg, S) && lat::contains(S, E), "orders", "sharp", "candidate is not an overorder");
        bool ok = true;
        for (auto& m : S.b)
            if (!lat::contains_vec(E, alg.mul(rw, m), lat::narrow(static_cast<i128>(rden) * S.den, "sharp"))) ok = false;
        if (ok) {
            passing.push_back(S);
            names.push_back(which == 0 ? "bullet" : "circ");
        }
    }
    if (passing.size() != 1) fail_internal("orders", "sharp", "bimodule test ambiguous");
    if (choice) *choice = names[0];
    return passing[0];
}

Lattice<8> splice(const lat::Algebra<8>& alg, const Lattice<8>& X, const Lattice<8>& Y, Central g, Central h) {
    Lattice<8> out = lat::lattice_intersect(X, Y);
    out = lat::lattice_sum(out, lat::element_times(alg, central_of({g[0], g[1]}), 1, X, true));
    out = lat::lattice_sum(out, lat::element_times(alg, central_of({h[0], h[1]}), 1, Y, true));
    return out;
}

Lattice<8> sharp_impl(const TowerQ& T, const lat::Algebra<8>& alg, const quad::RealQuadraticField& F,
                      const Lattice<4>& R, std::vector<std::string>* choices) {
    Lattice<8> E = tensor_lattice(R);
    Lattice<8> out = E;
    for (auto& rd : T.ram) {
        std::string ch;
        out = lat::lattice_sum(out, enlarge_at(T, alg, F, rd, R, E, &ch));
        if (choices) choices->push_back(std::to_string(rd.v) + ":" + ch);
    }
    return out;
}

}  // namespace

lat::Lattice<8> sharp(const TowerQ& T, const TowerF& TF, const Lattice<4>& R) {
    return sharp_impl(T, TF.alg, *TF.field, R, nullptr);
}

BigRational mass_S(const quad::RealQuadraticField& F, const TowerF& T, const Level& lv) {
    auto z = quad::zeta_minus_one(F);
    BigRational m = BigRational(z.numerator(), z.denominator()) / 2;
    for (std::size_t i = 0; i < T.primes.size(); ++i) {
        if (!lv[i]) continue;
        i64 n = static_cast<i64>(T.primes[i].norm);
        m *= BigRational(arith::ipow(n, lv[i] - 1) * (n + 1));
    }
    return m;
}

std::shared_ptr<const TowerF> build_tower_F(const TowerQ& T, const quad::RealQuadraticField& F) {
    for (auto& rd : T.ram)
        if (quad::splitting(F, rd.v) != quad::Splitting::inert)
            fail_pre("orders", "build_tower_F", "prime of D not inert in F");
    for (auto& p : T.primes)
        if (quad::splitting(F, p.p) == quad::Splitting::ramified)
            fail_pre("orders", "build_tower_F", "level prime ramified in F");
    if (F.narrow_class_number() != 1) fail_pre("orders", "build_tower_F", "narrow class number must be 1");
    QuaternionAlgebraQ B;
    B.a = T.qa;
    B.b = T.qb;
    B.D = T.D;
    B.alg = T.alg;
    auto QF = tensor_with_field(B, F);
    auto TF = std::make_shared<TowerF>();
    TF->alg = QF.alg;
    TF->ctr.tr = F.tr;
    TF->ctr.nm = F.nm;
    TF->ctr.eps = quad::fundamental_unit(F);
    TF->D = T.D;
    TF->qa = T.qa;
    TF->qb = T.qb;
    TF->field = F;
    TF->O0 = sharp_impl(T, TF->alg, F, T.O0, &TF->sharp_choice);
    const auto& alg = TF->alg;
    for (std::size_t i = 0; i < T.primes.size(); ++i) {
        auto above = quad::primes_above(F, T.primes[i].p);
        int e = T.top[i];
        std::vector<Lattice<8>> X;
        for (int a = 0; a <= e; ++a) X.push_back(a == 0 ? TF->O0 : sharp_impl(T, alg, F, T.R[i][a], nullptr));
        for (std::size_t j = 0; j < above.size(); ++j) {
            const auto& P = above[j];
            LocalPrime<8> lp;
            lp.p = P.p;
            lp.pi = {P.gen.x, P.gen.y};
            lp.norm = P.norm;
            lp.label = P.label();
            lp.ideal = P;
            std::vector<Lattice<8>> chain;
            for (int a = 0; a <= e; ++a) {
                if (above.size() == 1 || a == 0) {
                    chain.push_back(X[a]);
                    continue;
                }
                const auto& Q = above[1 - j];
                Central g{1, 0}, h{1, 0};
                for (int k = 0; k < a; ++k) {
                    g = TF->ctr.mul(g, {Q.gen.x, Q.gen.y});
                    h = TF->ctr.mul(h, lp.pi);
                }
                chain.push_back(splice(alg, X[a], TF->O0, g, h));
            }
            for (auto& Rr : chain) SELMER_CHECK(lat::is_order(alg, Rr), "orders", "build_tower_F", "not an order");
            TF->primes.push_back(lp);
            TF->top.push_back(e);
            TF->R.push_back(std::move(chain));
        }
    }
    // the tower's Eichler order must be the enlarged base change of the Q-Eichler order
    Level lvF = level_to_F(T, *TF, T.top);
    Lattice<8> lhs = sharp_impl(T, alg, F, T.order(T.top), nullptr);
    SELMER_CHECK(lhs == TF->order(lvF), "orders", "build_tower_F", "base change of the Eichler order mismatch");
    return TF;
}

Level level_to_F(const TowerQ& T, const TowerF& TF, const Level& lv) {
    Level out(TF.primes.size(), 0);
    for (std::size_t j = 0; j < TF.primes.size(); ++j)
        for (std::size_t i = 0; i < T.primes.size(); ++i)
            if (T.primes[i].p == TF.primes[j].p) out[j] = lv[i];
    return out;
}

ClassSetS class_set_S(const quad::RealQuadraticField& F, const quad::Ideal& level, std::size_t budget) {
    i64 M = 1;
    std::map<u64, int> ex;
    for (auto& [P, e] : level.factors) {
        if (P.kind == quad::Splitting::ramified) fail_pre("orders", "class_set_S", "level divisible by a ramified prime");
        ex[P.p] = std::max(ex[P.p], e);
    }
    for (auto [p, e] : ex) M *= arith::ipow(static_cast<i64>(p), e);
    u64 D0 = 2;
    while (quad::splitting(F, D0) != quad::Splitting::inert || M % static_cast<i64>(D0) == 0) D0 = arith::next_prime(D0);
    auto T = build_tower(static_cast<i64>(D0), M);
    auto TF = build_tower_F(*T, F);
    Level lv(TF->primes.size(), 0);
    for (std::size_t j = 0; j < TF->primes.size(); ++j)
        for (auto& [P, e] : level.factors)
            if (P == TF->primes[j].ideal) lv[j] = e;
    return enumerate_classes<8>(TF, lv, budget);
}

std::vector<int> special_map(const ClassSetT& T, const ClassSetS& S) {
    SELMER_CHECK(S.O == sharp(*T.tower, *S.tower, T.O), "orders", "special_map", "S level order is not the base change");
    std::vector<int> out;
    out.reserve(T.size());
    for (const auto& c : T.classes) {
        Lattice<8> J = lat::lattice_product(S.tower->alg, tensor_lattice(c.ideal), S.O);
        out.push_back(S.identify(J));
    }
    return out;
}

}  // namespace selmer::orders
