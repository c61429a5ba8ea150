#include "beltk/lattice_kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace beltk::kern {

namespace scalar {

void zeta_subset(std::span<double> f, int n) {
    const std::size_t size = std::size_t{1} << n;
    for (int b = 0; b < n; ++b) {
        const std::size_t bit = std::size_t{1} << b;
        for (std::size_t a = 0; a < size; ++a) {
            if (a & bit) f[a] += f[a ^ bit];
        }
    }
}

void mobius_subset(std::span<double> f, int n) {
    const std::size_t size = std::size_t{1} << n;
    for (int b = 0; b < n; ++b) {
        const std::size_t bit = std::size_t{1} << b;
        for (std::size_t a = 0; a < size; ++a) {
            if (a & bit) f[a] -= f[a ^ bit];
        }
    }
}

void zeta_superset(std::span<double> f, int n) {
    const std::size_t size = std::size_t{1} << n;
    for (int b = 0; b < n; ++b) {
        const std::size_t bit = std::size_t{1} << b;
        for (std::size_t a = 0; a < size; ++a) {
            if (!(a & bit)) f[a] += f[a | bit];
        }
    }
}

void mobius_superset(std::span<double> f, int n) {
    const std::size_t size = std::size_t{1} << n;
    for (int b = 0; b < n; ++b) {
        const std::size_t bit = std::size_t{1} << b;
        for (std::size_t a = 0; a < size; ++a) {
            if (!(a & bit)) f[a] -= f[a | bit];
        }
    }
}

void pointwise_multiply(std::span<double> dst, std::span<const double> src) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] *= src[i];
}

} // namespace scalar

namespace {

struct Dispatch {
    Lane lane;
    void (*zeta_subset)(std::span<double>, int);
    void (*mobius_subset)(std::span<double>, int);
    void (*zeta_superset)(std::span<double>, int);
    void (*mobius_superset)(std::span<double>, int);
    void (*pointwise_multiply)(std::span<double>, std::span<const double>);
};

constexpr Dispatch kScalar{Lane::scalar,
                           &scalar::zeta_subset,
                           &scalar::mobius_subset,
                           &scalar::zeta_superset,
                           &scalar::mobius_superset,
                           &scalar::pointwise_multiply};

#if defined(BELTK_HAVE_AVX2)
constexpr Dispatch kAvx2{Lane::avx2,
                         &avx2::zeta_subset,
                         &avx2::mobius_subset,
                         &avx2::zeta_superset,
                         &avx2::mobius_superset,
                         &avx2::pointwise_multiply};
#endif

Dispatch pick_default() {
    if (const char* env = std::getenv("BELTK_LANE")) {
        if (std::strcmp(env, "scalar") == 0) return kScalar;
#if defined(BELTK_HAVE_AVX2)
        if (std::strcmp(env, "avx2") == 0) return kAvx2;
#endif
    }
#if defined(BELTK_HAVE_AVX2)
    if (__builtin_cpu_supports("avx2")) return kAvx2;
#endif
    return kScalar;
}

Dispatch g_dispatch = pick_default();

} // namespace

Lane active_lane() { return g_dispatch.lane; }

void force_lane(Lane lane) {
    switch (lane) {
        case Lane::scalar:
            g_dispatch = kScalar;
            return;
        case Lane::avx2:
#if defined(BELTK_HAVE_AVX2)
            if (__builtin_cpu_supports("avx2")) {
                g_dispatch = kAvx2;
                return;
            }
#endif
            throw std::runtime_error("avx2 lane not available on this machine");
    }
}

std::string lane_name(Lane lane) {
    return lane == Lane::scalar ? "scalar" : "avx2";
}

void zeta_subset(std::span<double> f, int n) { g_dispatch.zeta_subset(f, n); }
void mobius_subset(std::span<double> f, int n) { g_dispatch.mobius_subset(f, n); }
void zeta_superset(std::span<double> f, int n) { g_dispatch.zeta_superset(f, n); }
void mobius_superset(std::span<double> f, int n) { g_dispatch.mobius_superset(f, n); }
void pointwise_multiply(std::span<double> dst, std::span<const double> src) {
    g_dispatch.pointwise_multiply(dst, src);
}

} // namespace beltk::kern
