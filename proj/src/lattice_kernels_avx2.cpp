#include "beltk/lattice_kernels.hpp"

#include <immintrin.h>

// AVX2 lane for the subset-lattice butterflies. Each bit axis b pairs
// entries at distance 2^b; for strides >= 4 doubles the pairing is a
// contiguous block add, for strides 1 and 2 the pairing is resolved
// in-register with permutes and blends. Results are bit-identical to the
// scalar lane: same additions in the same order.

namespace beltk::kern::avx2 {

namespace {

// stride-1 butterfly on 4 packed doubles: combine each even lane into the
// following odd lane (subset direction) or odd into even (superset).
template <bool Add, bool SubsetDir>
inline __m256d stride1(__m256d v) {
    if constexpr (SubsetDir) {
        __m256d dup = _mm256_movedup_pd(v); // (a0,a0,a2,a2)
        __m256d r = Add ? _mm256_add_pd(v, dup) : _mm256_sub_pd(v, dup);
        return _mm256_blend_pd(v, r, 0b1010);
    } else {
        __m256d dup = _mm256_permute_pd(v, 0b1111); // (a1,a1,a3,a3)
        __m256d r = Add ? _mm256_add_pd(v, dup) : _mm256_sub_pd(v, dup);
        return _mm256_blend_pd(v, r, 0b0101);
    }
}

template <bool Add, bool SubsetDir>
inline __m256d stride2(__m256d v) {
    if constexpr (SubsetDir) {
        __m256d dup = _mm256_permute2f128_pd(v, v, 0x00); // (a0,a1,a0,a1)
        __m256d r = Add ? _mm256_add_pd(v, dup) : _mm256_sub_pd(v, dup);
        return _mm256_blend_pd(v, r, 0b1100);
    } else {
        __m256d dup = _mm256_permute2f128_pd(v, v, 0x11); // (a2,a3,a2,a3)
        __m256d r = Add ? _mm256_add_pd(v, dup) : _mm256_sub_pd(v, dup);
        return _mm256_blend_pd(v, r, 0b0011);
    }
}

// SubsetDir: true = accumulate toward supersets (zeta/mobius over subsets),
// i.e. the half WITH the bit receives the half WITHOUT it.
template <bool Add, bool SubsetDir>
void transform(std::span<double> f, int n) {
    const std::size_t size = std::size_t{1} << n;
    if (size < 4) {
        if constexpr (Add && SubsetDir) scalar::zeta_subset(f, n);
        else if constexpr (!Add && SubsetDir) scalar::mobius_subset(f, n);
        else if constexpr (Add && !SubsetDir) scalar::zeta_superset(f, n);
        else scalar::mobius_superset(f, n);
        return;
    }
    double* p = f.data();
    for (int b = 0; b < n; ++b) {
        const std::size_t stride = std::size_t{1} << b;
        if (stride == 1) {
            for (std::size_t i = 0; i < size; i += 4) {
                __m256d v = _mm256_loadu_pd(p + i);
                _mm256_storeu_pd(p + i, stride1<Add, SubsetDir>(v));
            }
        } else if (stride == 2) {
            for (std::size_t i = 0; i < size; i += 4) {
                __m256d v = _mm256_loadu_pd(p + i);
                _mm256_storeu_pd(p + i, stride2<Add, SubsetDir>(v));
            }
        } else {
            for (std::size_t base = 0; base < size; base += 2 * stride) {
                double* lo = p + base;
                double* hi = p + base + stride;
                for (std::size_t i = 0; i < stride; i += 4) {
                    __m256d a = _mm256_loadu_pd(lo + i);
                    __m256d c = _mm256_loadu_pd(hi + i);
                    if constexpr (SubsetDir) {
                        __m256d r = Add ? _mm256_add_pd(c, a) : _mm256_sub_pd(c, a);
                        _mm256_storeu_pd(hi + i, r);
                    } else {
                        __m256d r = Add ? _mm256_add_pd(a, c) : _mm256_sub_pd(a, c);
                        _mm256_storeu_pd(lo + i, r);
                    }
                }
            }
        }
    }
}

} // namespace

void zeta_subset(std::span<double> f, int n) { transform<true, true>(f, n); }
void mobius_subset(std::span<double> f, int n) { transform<false, true>(f, n); }
void zeta_superset(std::span<double> f, int n) { transform<true, false>(f, n); }
void mobius_superset(std::span<double> f, int n) { transform<false, false>(f, n); }

void pointwise_multiply(std::span<double> dst, std::span<const double> src) {
    std::size_t i = 0;
    const std::size_t size = dst.size();
    for (; i + 4 <= size; i += 4) {
        __m256d a = _mm256_loadu_pd(dst.data() + i);
        __m256d b = _mm256_loadu_pd(src.data() + i);
        _mm256_storeu_pd(dst.data() + i, _mm256_mul_pd(a, b));
    }
    for (; i < size; ++i) dst[i] *= src[i];
}

} // namespace beltk::kern::avx2
