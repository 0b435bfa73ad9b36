#include "selmer/modpn.hpp"

#include <utility>

#include "selmer/error.hpp"

namespace selmer::modpn {

using arith::mulmod;

int valuation(u64 x, u64 p, int n) {
    if (x == 0) return n;
    int e = 0;
    while (x % p == 0 && e < n) {
        x /= p;
        ++e;
    }
    return e;
}

u64 reduce(arith::i64 x, u64 m) { return static_cast<u64>(arith::mod(x, static_cast<arith::i64>(m))); }

Kernel kernel(std::vector<std::vector<u64>> A, u64 p, int n) {
    Kernel K;
    K.p = p;
    K.n = n;
    K.modulus = static_cast<u64>(arith::ipow(static_cast<arith::i64>(p), n));
    const u64 q = K.modulus;
    const std::size_t m = A.size();
    const std::size_t h = m ? A[0].size() : 0;
    if (!m) {
        // no constraints: the whole free module
        for (std::size_t k = 0; k < h; ++k) {
            std::vector<u64> e(h, 0);
            e[k] = 1;
            K.gens.push_back(e);
            K.orders.push_back(n);
        }
        return K;
    }
    std::vector<std::vector<u64>> V(h, std::vector<u64>(h, 0));
    for (std::size_t i = 0; i < h; ++i) V[i][i] = 1;
    std::vector<int> diag;
    std::size_t k = 0;
    for (; k < std::min(m, h); ++k) {
        // pivot of least valuation in the remaining block
        int best = n;
        std::size_t br = 0, bc = 0;
        for (std::size_t r = k; r < m && best > 0; ++r)
            for (std::size_t c = k; c < h; ++c) {
                if (A[r][c] == 0) continue;
                int e = valuation(A[r][c], p, n);
                if (e < best) {
                    best = e;
                    br = r;
                    bc = c;
                    if (e == 0) break;
                }
            }
        if (best == n) break;
        std::swap(A[k], A[br]);
        if (bc != k) {
            for (auto& row : A) std::swap(row[k], row[bc]);
            for (auto& row : V) std::swap(row[k], row[bc]);
        }
        u64 pe = static_cast<u64>(arith::ipow(static_cast<arith::i64>(p), best));
        u64 unit = A[k][k] / pe;
        u64 uinv = static_cast<u64>(arith::inv_mod(static_cast<arith::i64>(unit % q), static_cast<arith::i64>(q)));
        for (auto& x : A[k]) x = mulmod(x, uinv, q);
        SELMER_CHECK(A[k][k] == pe, "modpn", "kernel", "pivot normalization");
        for (std::size_t r = k + 1; r < m; ++r) {
            if (A[r][k] == 0) continue;
            SELMER_CHECK(A[r][k] % pe == 0, "modpn", "kernel", "pivot does not divide column");
            u64 f = A[r][k] / pe;
            for (std::size_t c = k; c < h; ++c) A[r][c] = (A[r][c] + q - mulmod(f, A[k][c], q)) % q;
        }
        for (std::size_t c = k + 1; c < h; ++c) {
            if (A[k][c] == 0) continue;
            SELMER_CHECK(A[k][c] % pe == 0, "modpn", "kernel", "pivot does not divide row");
            u64 g = A[k][c] / pe;
            A[k][c] = 0;
            for (std::size_t r = 0; r < h; ++r) V[r][c] = (V[r][c] + q - mulmod(g, V[r][k], q)) % q;
        }
        diag.push_back(best);
    }
    for (std::size_t c = 0; c < h; ++c) {
        int e = c < diag.size() ? diag[c] : n;
        if (e == 0) continue;
        u64 scale = static_cast<u64>(arith::ipow(static_cast<arith::i64>(p), n - e));
        std::vector<u64> g(h);
        for (std::size_t r = 0; r < h; ++r) g[r] = mulmod(V[r][c], scale, q);
        K.gens.push_back(std::move(g));
        K.orders.push_back(e);
    }
    return K;
}

}  // namespace selmer::modpn
