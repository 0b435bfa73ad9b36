#include "selmer/kernels.hpp"

#include <atomic>

namespace selmer::kernels {

namespace {

Isa probe() {
#if defined(__x86_64__) || defined(__i386__)
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::avx2;
#endif
    return Isa::scalar;
}

std::atomic<int>& active() {
    static std::atomic<int> a{static_cast<int>(probe())};
    return a;
}

}  // namespace

Isa detected_isa() {
    static const Isa isa = probe();
    return isa;
}

Isa active_isa() { return static_cast<Isa>(active().load(std::memory_order_relaxed)); }

void force_isa(Isa isa) {
    if (isa == Isa::avx2 && detected_isa() != Isa::avx2) isa = Isa::scalar;
    active().store(static_cast<int>(isa), std::memory_order_relaxed);
}

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

std::int64_t legendre_sum_scalar(const std::int32_t* chi, std::uint32_t ell, const std::uint32_t* c, int deg) {
    const std::uint64_t m = ell;
    std::int64_t s = 0;
    for (std::uint64_t x = 0; x < m; ++x) {
        std::uint64_t v = c[deg];
        for (int k = deg - 1; k >= 0; --k) v = (v * x + c[k]) % m;
        s += chi[v];
    }
    return s;
}

void matvec_mod_scalar(const std::uint32_t* A, const std::uint32_t* x, std::uint32_t* y, std::size_t n, std::uint32_t m) {
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t acc = 0;
        const std::uint32_t* row = A + i * n;
        for (std::size_t j = 0; j < n; ++j) acc += static_cast<std::uint64_t>(row[j]) * x[j];
        y[i] = static_cast<std::uint32_t>(acc % m);
    }
}

std::int64_t legendre_sum(const std::int32_t* chi, std::uint32_t ell, const std::uint32_t* c, int deg) {
    if (active_isa() == Isa::avx2) return legendre_sum_avx2(chi, ell, c, deg);
    return legendre_sum_scalar(chi, ell, c, deg);
}

void matvec_mod(const std::uint32_t* A, const std::uint32_t* x, std::uint32_t* y, std::size_t n, std::uint32_t m) {
    if (active_isa() == Isa::avx2) return matvec_mod_avx2(A, x, y, n, m);
    matvec_mod_scalar(A, x, y, n, m);
}

}  // namespace selmer::kernels
