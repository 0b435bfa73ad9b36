#include "selmer/arith.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <random>

#include "selmer/error.hpp"

namespace selmer::arith {

u64 Factorization::product() const {
    u64 r = 1;
    for (auto [p, e] : factors)
        for (int i = 0; i < e; ++i) r *= p;
    return r;
}

std::vector<u64> Factorization::primes() const {
    std::vector<u64> out;
    for (auto& f : factors) out.push_back(f.first);
    return out;
}

int Factorization::exponent(u64 p) const {
    for (auto [q, e] : factors)
        if (q == p) return e;
    return 0;
}

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
    if (m == 1) return 0;
    u64 r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

u64 gcd(u64 a, u64 b) { return std::gcd(a, b); }
u64 lcm(u64 a, u64 b) { return a / gcd(a, b) * b; }

i64 mod(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

i64 inv_mod(i64 a, i64 m) {
    i64 g = m, x = 0, x1 = 1, a1 = mod(a, m);
    while (a1) {
        i64 q = g / a1;
        std::tie(g, a1) = std::make_pair(a1, g - q * a1);
        std::tie(x, x1) = std::make_pair(x1, x - q * x1);
    }
    if (g != 1) fail_pre("arith", "inv_mod", "not invertible");
    return mod(x, m);
}

i64 ipow(i64 b, int e) {
    i128 r = 1;
    for (int i = 0; i < e; ++i) {
        r *= b;
        if (r > INT64_MAX || r < INT64_MIN) fail_pre("arith", "ipow", "overflow");
    }
    return static_cast<i64>(r);
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    // this base set is deterministic for n < 2^64
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool comp = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) { comp = false; break; }
        }
        if (comp) return false;
    }
    return true;
}

namespace {

u64 rho(u64 n) {
    if (n % 2 == 0) return 2;
    std::mt19937_64 rng(n);
    for (;;) {
        u64 c = rng() % (n - 1) + 1;
        u64 x = rng() % n, y = x, d = 1;
        auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        while (d == 1) {
            x = f(x);
            y = f(f(y));
            d = gcd(x > y ? x - y : y - x, n);
        }
        if (d != n) return d;
    }
}

void split(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime(n)) { out.push_back(n); return; }
    u64 d = rho(n);
    split(d, out);
    split(n / d, out);
}

}  // namespace

Factorization factor(i64 n_signed) {
    if (n_signed < 1) fail_pre("arith", "factor", "n must be positive");
    u64 n = static_cast<u64>(n_signed);
    Factorization f;
    f.value = n;
    std::vector<u64> ps;
    for (u64 p = 2; p < 1000000 && p * p <= n; p += (p == 2 ? 1 : 2)) {
        while (n % p == 0) { ps.push_back(p); n /= p; }
    }
    if (n > 1) split(n, ps);
    std::sort(ps.begin(), ps.end());
    for (u64 p : ps) {
        if (!f.factors.empty() && f.factors.back().first == p) ++f.factors.back().second;
        else f.factors.emplace_back(p, 1);
    }
    for (auto& [p, e] : f.factors)
        SELMER_CHECK(is_prime(p), "arith", "factor", "non-prime factor");
    SELMER_CHECK(f.product() == f.value, "arith", "factor", "product mismatch");
    return f;
}

int omega(i64 n) { return static_cast<int>(factor(n).factors.size()); }

bool is_squarefree(i64 n) {
    for (auto [p, e] : factor(n).factors)
        if (e > 1) return false;
    return true;
}

std::vector<u64> divisors(u64 n) {
    std::vector<u64> ds{1};
    for (auto [p, e] : factor(static_cast<i64>(n)).factors) {
        std::size_t cur = ds.size();
        u64 pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < cur; ++i) ds.push_back(ds[i] * pk);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

std::vector<u64> primes_up_to(u64 bound) {
    std::vector<u64> out;
    if (bound < 2) return out;
    std::vector<bool> comp(bound + 1, false);
    for (u64 i = 2; i <= bound; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j <= bound; j += i) comp[j] = true;
    }
    return out;
}

u64 next_prime(u64 n) {
    u64 c = n + 1;
    while (!is_prime(c)) ++c;
    return c;
}

int kronecker(i64 a, i64 b) {
    if (a == 0 && b == 0) fail_pre("arith", "kronecker", "both arguments zero");
    if (b == 0) return (a == 1 || a == -1) ? 1 : 0;
    int r = 1;
    if (b < 0) {
        b = -b;
        if (a < 0) r = -r;
    }
    int v = 0;
    while ((b & 1) == 0) { b >>= 1; ++v; }
    if (v > 0) {
        if ((a & 1) == 0) return 0;
        i64 a8 = mod(a, 8);
        if ((v & 1) && (a8 == 3 || a8 == 5)) r = -r;
    }
    // b odd positive: Jacobi symbol
    i64 x = mod(a, b), y = b;
    while (x != 0) {
        while ((x & 1) == 0) {
            x >>= 1;
            i64 y8 = y % 8;
            if (y8 == 3 || y8 == 5) r = -r;
        }
        std::swap(x, y);
        if (x % 4 == 3 && y % 4 == 3) r = -r;
        x %= y;
    }
    return y == 1 ? r : 0;
}

int legendre(i64 a, u64 p) {
    if (p == 2) return (a & 1) ? 1 : 0;
    u64 r = powmod(static_cast<u64>(mod(a, static_cast<i64>(p))), (p - 1) / 2, p);
    return r == 0 ? 0 : (r == 1 ? 1 : -1);
}

std::optional<int> ord_p(i64 x, u64 p) {
    if (x == 0) return std::nullopt;
    int v = 0;
    i64 pp = static_cast<i64>(p);
    while (x % pp == 0) { x /= pp; ++v; }
    return v;
}

u64 mult_order(i64 a, u64 m) {
    if (m == 0) fail_pre("arith", "mult_order", "m must be positive");
    u64 am = static_cast<u64>(mod(a, static_cast<i64>(m)));
    if (gcd(am, m) != 1) fail_pre("arith", "mult_order", "gcd(a, m) != 1");
    if (m == 1) return 1;
    u64 phi = 1;
    for (auto [p, e] : factor(static_cast<i64>(m)).factors) {
        phi *= p - 1;
        for (int i = 1; i < e; ++i) phi *= p;
    }
    u64 r = phi;
    for (auto [q, e] : factor(static_cast<i64>(phi)).factors) {
        (void)e;
        while (r % q == 0 && powmod(am, r / q, m) == 1) r /= q;
    }
    return r;
}

u64 sqrt_mod(u64 a, u64 p) {
    a %= p;
    if (p == 2 || a == 0) return a;
    if (powmod(a, (p - 1) / 2, p) != 1) fail_pre("arith", "sqrt_mod", "not a square");
    u64 q = p - 1;
    int s = 0;
    while ((q & 1) == 0) { q >>= 1; ++s; }
    u64 z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
    u64 m = s, c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        u64 i = 0, tt = t;
        while (tt != 1) { tt = mulmod(tt, tt, p); ++i; }
        u64 b = c;
        for (u64 j = 0; j + i + 1 < m; ++j) b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return std::min(r, p - r);
}

i64 isqrt(i64 n) {
    if (n < 0) fail_pre("arith", "isqrt", "negative");
    i64 r = static_cast<i64>(std::sqrt(static_cast<long double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

}  // namespace selmer::arith
