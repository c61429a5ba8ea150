#ifndef BELTK_LATTICE_KERNELS_HPP
#define BELTK_LATTICE_KERNELS_HPP

#include <cstdint>
#include <span>
#include <string>

// In-place transforms over dense mass vectors indexed by subset bitmask.
// A vector of length 2^n holds one value per subset of an n-element frame.
// All four transforms are butterflies over the n bit axes, O(n * 2^n).
//
// zeta_subset:      f[A] <- sum_{B subseteq A} f[B]
// mobius_subset:    inverse of zeta_subset
// zeta_superset:    f[A] <- sum_{B supseteq A} f[B]
// mobius_superset:  inverse of zeta_superset
//
// Two lanes are provided: a scalar reference and an AVX2 variant.
// Dispatch is resolved once at startup from CPU capabilities and may be
// overridden with force_lane() or the BELTK_LANE environment variable
// ("scalar" or "avx2").

namespace beltk::kern {

enum class Lane { scalar, avx2 };

Lane active_lane();
void force_lane(Lane lane);
std::string lane_name(Lane lane);

void zeta_subset(std::span<double> f, int n);
void mobius_subset(std::span<double> f, int n);
void zeta_superset(std::span<double> f, int n);
void mobius_superset(std::span<double> f, int n);

// dst[i] *= src[i]; used for commonality-domain combination.
void pointwise_multiply(std::span<double> dst, std::span<const double> src);

namespace scalar {
void zeta_subset(std::span<double> f, int n);
void mobius_subset(std::span<double> f, int n);
void zeta_superset(std::span<double> f, int n);
void mobius_superset(std::span<double> f, int n);
void pointwise_multiply(std::span<double> dst, std::span<const double> src);
} // namespace scalar

#if defined(BELTK_HAVE_AVX2)
namespace avx2 {
void zeta_subset(std::span<double> f, int n);
void mobius_subset(std::span<double> f, int n);
void zeta_superset(std::span<double> f, int n);
void mobius_superset(std::span<double> f, int n);
void pointwise_multiply(std::span<double> dst, std::span<const double> src);
} // namespace avx2
#endif

} // namespace beltk::kern

#endif
