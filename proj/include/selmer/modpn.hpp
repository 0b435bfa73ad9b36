#pragma once

#include <vector>

#include "selmer/arith.hpp"

namespace selmer::modpn {

using arith::u64;

/// Kernel of x -> A x over Z/p^n as a module: generator k has additive order p^orders[k].
/// The generator count is the minimal number of generators (Smith form over a local ring).
struct Kernel {
    u64 p = 0;
    int n = 1;
    u64 modulus = 1;
    std::vector<std::vector<u64>> gens;
    std::vector<int> orders;

    int rank() const { return static_cast<int>(gens.size()); }
    /// Free of rank one: a single generator of full order (it then has a unit entry).
    bool free_rank_one() const { return gens.size() == 1 && orders[0] == n; }
};

/// p-adic valuation of x mod p^n, capped at n (x = 0 gives n).
int valuation(u64 x, u64 p, int n);

/// A is m x h with entries reduced mod p^n.
Kernel kernel(std::vector<std::vector<u64>> A, u64 p, int n);

/// Signed integer reduced into [0, m).
u64 reduce(arith::i64 x, u64 m);

}  // namespace selmer::modpn
