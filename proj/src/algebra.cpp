#include "selmer/algebra.hpp"

#include <algorithm>
#include <tuple>

#include "selmer/error.hpp"

namespace selmer::orders {

int hilbert_symbol(i64 a, i64 b, u64 p) {
    if (a == 0 || b == 0) fail_pre("orders", "hilbert_symbol", "zero argument");
    if (p == 0) return (a < 0 && b < 0) ? -1 : 1;
    const i64 P = static_cast<i64>(p);
    int alpha = 0, beta = 0;
    while (a % P == 0) { a /= P; ++alpha; }
    while (b % P == 0) { b /= P; ++beta; }
    if (p == 2) {
        auto eps = [](i64 u) { return static_cast<int>(arith::mod((u - 1) / 2, 2)); };
        auto om = [](i64 u) { i64 m = arith::mod(u, 8); return static_cast<int>(((m * m - 1) / 8) % 2); };
        int e = eps(a) * eps(b) + alpha * om(b) + beta * om(a);
        return (e % 2) ? -1 : 1;
    }
    int s = ((alpha * beta) % 2 == 1 && (p - 1) / 2 % 2 == 1) ? -1 : 1;
    if (beta % 2) s *= arith::legendre(a, p);
    if (alpha % 2) s *= arith::legendre(b, p);
    return s;
}

std::vector<u64> ramified_primes(i64 a, i64 b) {
    std::vector<u64> out;
    i64 m = std::abs(2 * a * b);
    for (u64 p : arith::factor(m).primes())
        if (hilbert_symbol(a, b, p) == -1) out.push_back(p);
    return out;
}

lat::Algebra<4> quaternion_structure(i64 a, i64 b) {
    lat::Algebra<4> A;
    auto set = [&](int x, int y, lat::Vec<4> v) { A.mult[x][y] = v; };
    set(0, 0, {1, 0, 0, 0});
    set(0, 1, {0, 1, 0, 0});
    set(0, 2, {0, 0, 1, 0});
    set(0, 3, {0, 0, 0, 1});
    set(1, 0, {0, 1, 0, 0});
    set(2, 0, {0, 0, 1, 0});
    set(3, 0, {0, 0, 0, 1});
    set(1, 1, {a, 0, 0, 0});
    set(1, 2, {0, 0, 0, 1});
    set(1, 3, {0, 0, a, 0});
    set(2, 1, {0, 0, 0, -1});
    set(2, 2, {b, 0, 0, 0});
    set(2, 3, {0, -b, 0, 0});
    set(3, 1, {0, 0, -a, 0});
    set(3, 2, {0, b, 0, 0});
    set(3, 3, {-a * b, 0, 0, 0});
    A.conj = {lat::Vec<4>{1, 0, 0, 0}, {0, -1, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, -1}};
    A.finalize();
    return A;
}

QuaternionAlgebraQ make_definite_algebra(i64 D) {
    if (D < 2 || !arith::is_squarefree(D)) fail_pre("orders", "make_definite_algebra", "D must be squarefree > 1");
    auto primesD = arith::factor(D).primes();
    if (primesD.size() % 2 == 0)
        fail_pre("orders", "make_definite_algebra", "D has an even number of prime factors (indefinite)");
    // search a = -s, b = -(D / gcd(D, s)) u, choose minimal |ab|
    std::tuple<i64, i64, i64> best{0, 0, 0};
    bool found = false;
    for (i64 s = 1; s <= 60; ++s)
        for (i64 u = 1; u <= 60; ++u) {
            i64 a = -s, b = -(D / static_cast<i64>(arith::gcd(D, s))) * u;
            if (found && std::abs(a * b) >= std::get<0>(best)) continue;
            if (ramified_primes(a, b) != primesD) continue;
            best = {std::abs(a * b), a, b};
            found = true;
        }
    if (!found) fail_budget("orders", "make_definite_algebra", "no (a, b) found");
    QuaternionAlgebraQ B;
    B.a = std::get<1>(best);
    B.b = std::get<2>(best);
    B.D = D;
    SELMER_CHECK(hilbert_symbol(B.a, B.b, 0) == -1, "orders", "make_definite_algebra", "not definite");
    B.alg = quaternion_structure(B.a, B.b);
    return B;
}

QuaternionAlgebraF tensor_with_field(const QuaternionAlgebraQ& B, const quad::RealQuadraticField& F) {
    for (u64 v : arith::factor(B.D).primes())
        if (quad::splitting(F, v) == quad::Splitting::split)
            fail_pre("orders", "tensor_with_field", "ramified prime splits in F; algebra would stay ramified");
    QuaternionAlgebraF Q;
    Q.F = F;
    Q.base = B;
    auto& A = Q.alg;
    A.tr_omega = F.tr;
    A.nm_omega = F.nm;
    for (int c = 0; c < 4; ++c)
        for (int s = 0; s < 2; ++s)
            for (int c2 = 0; c2 < 4; ++c2)
                for (int s2 = 0; s2 < 2; ++s2) {
                    lat::Vec<8> v{};
                    const auto& m = B.alg.mult[c][c2];
                    // omega^(s+s2): 1, omega, tr omega + nm
                    for (int k = 0; k < 4; ++k) {
                        if (!m[k]) continue;
                        int e = s + s2;
                        if (e == 0) v[2 * k] += m[k];
                        else if (e == 1) v[2 * k + 1] += m[k];
                        else {
                            v[2 * k] += m[k] * F.nm;
                            v[2 * k + 1] += m[k] * F.tr;
                        }
                    }
                    A.mult[2 * c + s][2 * c2 + s2] = v;
                }
    for (int c = 0; c < 4; ++c)
        for (int s = 0; s < 2; ++s) {
            lat::Vec<8> v{};
            for (int k = 0; k < 4; ++k) v[2 * k + s] = B.alg.conj[c][k];
            A.conj[2 * c + s] = v;
        }
    A.finalize();
    // totally definite: the trace form must be positive definite
    for (int i = 0; i < 8; ++i)
        SELMER_CHECK(A.polar[i][i] > 0, "orders", "tensor_with_field", "trace form not positive");
    return Q;
}

lat::Vec<8> embed(const lat::Vec<4>& x) {
    lat::Vec<8> v{};
    for (int c = 0; c < 4; ++c) v[2 * c] = x[c];
    return v;
}

lat::Vec<8> central_of(const quad::OFElement& a) {
    lat::Vec<8> v{};
    v[0] = a.x;
    v[1] = a.y;
    return v;
}

lat::Lattice<8> tensor_lattice(const lat::Lattice<4>& O) {
    std::vector<lat::Vec<8>> g;
    for (auto& r : O.b) {
        lat::Vec<8> v = embed(r);
        g.push_back(v);
        lat::Vec<8> w{};
        for (int c = 0; c < 4; ++c) w[2 * c + 1] = r[c];
        g.push_back(w);
    }
    return lat::Lattice<8>::from_vecs(g, O.den);
}

}  // namespace selmer::orders
