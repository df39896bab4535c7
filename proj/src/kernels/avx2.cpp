#include "ldtlab/kernels.hpp"

#include <immintrin.h>

namespace ldtlab::kernels::avx2 {

// min_epu32 picks the wrapped-around lane: s - p < s iff s >= p.
void add_mod(Elem* acc, const Elem* inc, std::size_t n, Elem p) {
    const __m256i P = _mm256_set1_epi32(static_cast<int>(p));
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(acc + i));
        __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(inc + i));
        __m256i s = _mm256_add_epi32(a, b);
        s = _mm256_min_epu32(s, _mm256_sub_epi32(s, P));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(acc + i), s);
    }
    scalar::add_mod(acc + i, inc + i, n - i, p);
}

void sub_mod(Elem* out, const Elem* a, const Elem* b, std::size_t n, Elem p) {
    const __m256i P = _mm256_set1_epi32(static_cast<int>(p));
    const __m256i BOT = _mm256_set1_epi32(-1);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i y = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        __m256i d = _mm256_sub_epi32(x, y);
        d = _mm256_min_epu32(d, _mm256_add_epi32(d, P));
        d = _mm256_or_si256(d, _mm256_cmpeq_epi32(x, BOT));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), d);
    }
    scalar::sub_mod(out + i, a + i, b + i, n - i, p);
}

std::size_t count_equal(const Elem* a, const Elem* b, std::size_t n) {
    const __m256i BOT = _mm256_set1_epi32(-1);
    std::size_t c = 0, i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i y = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        __m256i eq = _mm256_andnot_si256(_mm256_cmpeq_epi32(x, BOT), _mm256_cmpeq_epi32(x, y));
        c += static_cast<std::size_t>(
            __builtin_popcount(static_cast<unsigned>(_mm256_movemask_ps(_mm256_castsi256_ps(eq)))));
    }
    return c + scalar::count_equal(a + i, b + i, n - i);
}

} // namespace ldtlab::kernels::avx2
