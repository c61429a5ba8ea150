#ifndef BELTK_GMM_HPP
#define BELTK_GMM_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "beltk/bba.hpp"

namespace beltk {

using Observation = std::vector<double>;
using Sequence = std::vector<Observation>;

struct Gaussian {
    std::vector<double> mean;
    std::vector<double> var; // diagonal covariance
};

// Diagonal-covariance Gaussian mixture fitted in standardized coordinates.
// The per-dimension shift/scale from the training data is stored with the
// model; log_pdf reports the density in the original coordinates (the
// Jacobian of the standardization is folded in), so values are comparable
// across models fitted on different data.
class Gmm {
public:
    static constexpr double kVarianceFloor = 1e-6;

    Gmm(std::vector<double> weights, std::vector<Gaussian> components,
        std::vector<double> shift, std::vector<double> scale);

    struct FitResult; // defined after the class: holds a complete Gmm

    static FitResult fit(const std::vector<Observation>& data, int mixtures,
                         std::uint64_t seed, double tol = 1e-6, int max_iters = 200);

    double log_pdf(std::span<const double> x) const;

    int dim() const { return static_cast<int>(shift_.size()); }
    int mixtures() const { return static_cast<int>(weights_.size()); }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<Gaussian>& components() const { return components_; }
    const std::vector<double>& shift() const { return shift_; }
    const std::vector<double>& scale() const { return scale_; }

    // Mutable access for Baum-Welch re-estimation (standardized space).
    std::vector<double>& weights() { return weights_; }
    std::vector<Gaussian>& components() { return components_; }

    // Log density of an already-standardized point under one component
    // (no weight, no Jacobian).
    double component_log_pdf_std(int k, std::span<const double> z) const;
    void standardize(std::span<const double> x, std::vector<double>& z) const;
    double log_jacobian() const { return log_jacobian_; }

private:
    std::vector<double> weights_;
    std::vector<Gaussian> components_;
    std::vector<double> shift_;
    std::vector<double> scale_;
    double log_jacobian_ = 0.0;
};

struct Gmm::FitResult {
    Gmm model;
    std::vector<double> log_likelihood; // one entry per EM iteration
};

// Per-state log densities for one observation.
std::vector<double> state_log_pdfs(const std::vector<Gmm>& state_models,
                                   std::span<const double> x);

// Observation BBA over the state frame: singleton plausibilities are the
// per-state densities normalized by the best state, and the mass function
// is the product form m(A) = prod_{i in A} pl_i * prod_{i not in A} (1 - pl_i).
// If every density underflows, the vacuous BBA is returned.
Bba observation_bba(const std::vector<Gmm>& state_models, std::span<const double> x,
                    const Frame& frame);
Bba bba_from_plausibilities(std::span<const double> pl, const Frame& frame);

} // namespace beltk

#endif
