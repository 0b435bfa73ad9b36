// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "selmer/kernels.hpp"

namespace selmer::kernels {

namespace {

/// v mod m for doubles holding exact integers below 2^52.
inline __m256d reduce(__m256d v, __m256d m, __m256d minv) {
    __m256d q = _mm256_floor_pd(_mm256_mul_pd(v, minv));
    __m256d r = _mm256_fnmadd_pd(q, m, v);
    // the reciprocal can be off by one in either direction
    r = _mm256_add_pd(r, _mm256_and_pd(_mm256_cmp_pd(r, _mm256_setzero_pd(), _CMP_LT_OQ), m));
    r = _mm256_sub_pd(r, _mm256_and_pd(_mm256_cmp_pd(r, m, _CMP_GE_OQ), m));
    return r;
}

}  // namespace

std::int64_t legendre_sum_avx2(const std::int32_t* chi, std::uint32_t ell, const std::uint32_t* c, int deg) {
    const __m256d m = _mm256_set1_pd(static_cast<double>(ell));
    const __m256d minv = _mm256_set1_pd(1.0 / static_cast<double>(ell));
    __m256d cv[9];
    for (int k = 0; k <= deg; ++k) cv[k] = _mm256_set1_pd(static_cast<double>(c[k]));
    const __m256d step = _mm256_set1_pd(4.0);
    __m256d x = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
    __m128i acc = _mm_setzero_si128();
    std::uint32_t i = 0;
    for (; i + 4 <= ell; i += 4) {
        __m256d v = cv[deg];
        for (int k = deg - 1; k >= 0; --k) v = reduce(_mm256_fmadd_pd(v, x, cv[k]), m, minv);
        __m128i idx = _mm256_cvttpd_epi32(v);
        acc = _mm_add_epi32(acc, _mm_i32gather_epi32(chi, idx, 4));
        x = _mm256_add_pd(x, step);
    }
    alignas(16) std::int32_t lanes[4];
    _mm_store_si128(reinterpret_cast<__m128i*>(lanes), acc);
    std::int64_t s = static_cast<std::int64_t>(lanes[0]) + lanes[1] + lanes[2] + lanes[3];
    for (std::uint64_t xx = i; xx < ell; ++xx) {
        std::uint64_t v = c[deg];
        for (int k = deg - 1; k >= 0; --k) v = (v * xx + c[k]) % ell;
        s += chi[v];
    }
    return s;
}

void matvec_mod_avx2(const std::uint32_t* A, const std::uint32_t* x, std::uint32_t* y, std::size_t n, std::uint32_t m) {
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t* row = A + i * n;
        __m256i acc = _mm256_setzero_si256();
        std::size_t j = 0;
        for (; j + 4 <= n; j += 4) {
            __m256i a = _mm256_cvtepu32_epi64(_mm_loadu_si128(reinterpret_cast<const __m128i*>(row + j)));
            __m256i b = _mm256_cvtepu32_epi64(_mm_loadu_si128(reinterpret_cast<const __m128i*>(x + j)));
            acc = _mm256_add_epi64(acc, _mm256_mul_epu32(a, b));
        }
        alignas(32) std::uint64_t lanes[4];
        _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
        std::uint64_t s = lanes[0] + lanes[1] + lanes[2] + lanes[3];
        for (; j < n; ++j) s += static_cast<std::uint64_t>(row[j]) * x[j];
        y[i] = static_cast<std::uint32_t>(s % m);
    }
}

}  // namespace selmer::kernels
