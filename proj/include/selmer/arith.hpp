#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace selmer::arith {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

/// Prime factorization of a positive 64-bit integer.
struct Factorization {
    u64 value = 1;
    std::vector<std::pair<u64, int>> factors;  // increasing primes

    u64 product() const;
    std::vector<u64> primes() const;
    int exponent(u64 p) const;
};

u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 a, u64 e, u64 m);
u64 gcd(u64 a, u64 b);
u64 lcm(u64 a, u64 b);
i64 mod(i64 a, i64 m);           // result in [0, m)
i64 inv_mod(i64 a, i64 m);       // throws if not invertible
i64 ipow(i64 b, int e);          // overflow-checked

bool is_prime(u64 n);
Factorization factor(i64 n);
int omega(i64 n);
bool is_squarefree(i64 n);
std::vector<u64> divisors(u64 n);
std::vector<u64> primes_up_to(u64 bound);
u64 next_prime(u64 n);  // least prime > n

int kronecker(i64 a, i64 b);
int legendre(i64 a, u64 p);

/// ord_p(x); nullopt stands for infinity (x = 0).
std::optional<int> ord_p(i64 x, u64 p);

u64 mult_order(i64 a, u64 m);

/// Square root mod an odd prime (Tonelli–Shanks); a must be a square.
u64 sqrt_mod(u64 a, u64 p);

i64 isqrt(i64 n);  // floor sqrt for n >= 0

}  // namespace selmer::arith
