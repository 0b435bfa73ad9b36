#include "selmer/lattice.hpp"

namespace selmer::lat {

std::vector<std::vector<i64>> kernel_mod_p_lattice(const std::vector<std::vector<i64>>& M, i64 p) {
    const std::size_t n = M.size();
    const std::size_t m = n ? M[0].size() : 0;
    // row-reduce the transpose system: find x with x M = 0, i.e. M^T x^T = 0
    std::vector<std::vector<i64>> A(m, std::vector<i64>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) A[j][i] = arith::mod(M[i][j], p);
    std::vector<int> pivcol;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        std::size_t s = r;
        while (s < m && A[s][c] == 0) ++s;
        if (s == m) continue;
        std::swap(A[r], A[s]);
        i64 inv = arith::inv_mod(A[r][c], p);
        for (auto& v : A[r]) v = static_cast<i64>(static_cast<i128>(v) * inv % p);
        for (std::size_t t = 0; t < m; ++t) {
            if (t == r || A[t][c] == 0) continue;
            i64 f = A[t][c];
            for (std::size_t k = 0; k < n; ++k)
                A[t][k] = arith::mod(A[t][k] - static_cast<i64>(static_cast<i128>(f) * A[r][k] % p), p);
        }
        pivcol.push_back(static_cast<int>(c));
        ++r;
    }
    std::vector<bool> is_piv(n, false);
    for (int c : pivcol) is_piv[c] = true;
    std::vector<std::vector<i64>> gens;
    for (std::size_t f = 0; f < n; ++f) {
        if (is_piv[f]) continue;
        std::vector<i64> v(n, 0);
        v[f] = 1;
        for (std::size_t k = 0; k < pivcol.size(); ++k) v[pivcol[k]] = arith::mod(-A[k][f], p);
        gens.push_back(v);
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<i64> v(n, 0);
        v[i] = p;
        gens.push_back(v);
    }
    return gens;
}

}  // namespace selmer::lat
