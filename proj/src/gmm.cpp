#include "beltk/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace beltk {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

double logsumexp(std::span<const double> v) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double x : v) mx = std::max(mx, x);
    if (!std::isfinite(mx)) return mx;
    double s = 0.0;
    for (double x : v) s += std::exp(x - mx);
    return mx + std::log(s);
}

} // namespace

Gmm::Gmm(std::vector<double> weights, std::vector<Gaussian> components,
         std::vector<double> shift, std::vector<double> scale)
    : weights_(std::move(weights)),
      components_(std::move(components)),
      shift_(std::move(shift)),
      scale_(std::move(scale)) {
    if (weights_.empty() || weights_.size() != components_.size())
        throw std::invalid_argument("weights and components must match and be non-empty");
    if (shift_.size() != scale_.size() || shift_.empty())
        throw std::invalid_argument("bad standardization vectors");
    double sum = 0.0;
    for (double w : weights_) {
        if (w < 0.0) throw std::invalid_argument("negative mixture weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("mixture weights must sum to 1");
    for (const auto& c : components_) {
        if (c.mean.size() != shift_.size() || c.var.size() != shift_.size())
            throw std::invalid_argument("component dimension mismatch");
        for (double v : c.var)
            if (v < kVarianceFloor * 0.999)
                throw std::invalid_argument("variance below floor");
    }
    for (double s : scale_) log_jacobian_ -= std::log(s);
}

void Gmm::standardize(std::span<const double> x, std::vector<double>& z) const {
    z.resize(x.size());
    for (std::size_t d = 0; d < x.size(); ++d) z[d] = (x[d] - shift_[d]) / scale_[d];
}

double Gmm::component_log_pdf_std(int k, std::span<const double> z) const {
    const Gaussian& c = components_[k];
    double lp = 0.0;
    for (std::size_t d = 0; d < z.size(); ++d) {
        const double diff = z[d] - c.mean[d];
        lp += -0.5 * (kLog2Pi + std::log(c.var[d]) + diff * diff / c.var[d]);
    }
    return lp;
}

double Gmm::log_pdf(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim())
        throw std::invalid_argument("observation dimension mismatch");
    std::vector<double> z;
    standardize(x, z);
    std::vector<double> terms(weights_.size());
    for (std::size_t k = 0; k < weights_.size(); ++k)
        terms[k] = (weights_[k] > 0.0 ? std::log(weights_[k]) : -std::numeric_limits<double>::infinity())
                   + component_log_pdf_std(static_cast<int>(k), z);
    return logsumexp(terms) + log_jacobian_;
}

namespace {

struct EmScratch {
    std::vector<std::vector<double>> z;   // standardized data
    std::vector<double> resp;             // flattened responsibilities
};

// k-means++ seeding in standardized space.
std::vector<int> kmeanspp_assign(const std::vector<std::vector<double>>& z, int m,
                                 std::mt19937_64& rng) {
    const std::size_t n = z.size();
    const std::size_t d = z[0].size();
    std::vector<std::vector<double>> centers;
    std::uniform_int_distribution<std::size_t> first(0, n - 1);
    centers.push_back(z[first(rng)]);
    std::vector<double> dist2(n);
    auto sq_dist = [&](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < d; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
        return s;
    };
    while (static_cast<int>(centers.size()) < m) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : centers) best = std::min(best, sq_dist(z[i], c));
            dist2[i] = best;
            total += best;
        }
        std::size_t pick;
        if (total <= 0.0) {
            pick = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
        } else {
            std::uniform_real_distribution<double> u(0.0, total);
            double r = u(rng);
            pick = n - 1;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += dist2[i];
                if (acc >= r) {
                    pick = i;
                    break;
                }
            }
        }
        centers.push_back(z[pick]);
    }
    std::vector<int> assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (int k = 0; k < m; ++k) {
            double s = sq_dist(z[i], centers[k]);
            if (s < best) {
                best = s;
                assign[i] = k;
            }
        }
    }
    return assign;
}

} // namespace

Gmm::FitResult Gmm::fit(const std::vector<Observation>& data, int mixtures,
                        std::uint64_t seed, double tol, int max_iters) {
    if (data.empty()) throw std::invalid_argument("em_fit: empty data");
    if (mixtures < 1) throw std::invalid_argument("em_fit: mixtures must be >= 1");
    if (static_cast<int>(data.size()) < mixtures)
        throw std::invalid_argument("em_fit: need at least one point per component");
    const std::size_t n = data.size();
    const std::size_t d = data[0].size();
    if (d == 0) throw std::invalid_argument("em_fit: zero-dimensional data");
    for (const auto& x : data)
        if (x.size() != d) throw std::invalid_argument("em_fit: ragged data");

    // Standardization statistics from the training data.
    std::vector<double> shift(d, 0.0), scale(d, 0.0);
    for (const auto& x : data)
        for (std::size_t j = 0; j < d; ++j) shift[j] += x[j];
    for (std::size_t j = 0; j < d; ++j) shift[j] /= static_cast<double>(n);
    for (const auto& x : data)
        for (std::size_t j = 0; j < d; ++j) {
            const double diff = x[j] - shift[j];
            scale[j] += diff * diff;
        }
    for (std::size_t j = 0; j < d; ++j) {
        scale[j] = std::sqrt(scale[j] / static_cast<double>(n));
        if (scale[j] < 1e-12) scale[j] = 1.0; // constant dimension
    }

    std::vector<std::vector<double>> z(n, std::vector<double>(d));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) z[i][j] = (data[i][j] - shift[j]) / scale[j];

    auto run = [&](std::uint64_t s, FitResult& out) -> bool {
        std::mt19937_64 rng(s);
        std::vector<int> assign = kmeanspp_assign(z, mixtures, rng);

        std::vector<double> weights(mixtures, 0.0);
        std::vector<Gaussian> comps(mixtures);
        for (int k = 0; k < mixtures; ++k) {
            comps[k].mean.assign(d, 0.0);
            comps[k].var.assign(d, 0.0);
        }
        std::vector<int> counts(mixtures, 0);
        for (std::size_t i = 0; i < n; ++i) {
            ++counts[assign[i]];
            for (std::size_t j = 0; j < d; ++j) comps[assign[i]].mean[j] += z[i][j];
        }
        for (int k = 0; k < mixtures; ++k) {
            if (counts[k] == 0) return false; // seeding collapse
            for (std::size_t j = 0; j < d; ++j) comps[k].mean[j] /= counts[k];
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                const double diff = z[i][j] - comps[assign[i]].mean[j];
                comps[assign[i]].var[j] += diff * diff;
            }
        for (int k = 0; k < mixtures; ++k) {
            weights[k] = static_cast<double>(counts[k]) / static_cast<double>(n);
            for (std::size_t j = 0; j < d; ++j)
                comps[k].var[j] = std::max(comps[k].var[j] / counts[k], kVarianceFloor);
        }

        Gmm model(weights, comps, shift, scale);
        std::vector<double> history;
        std::vector<double> logr(n * mixtures);
        std::vector<double> row(mixtures);
        for (int iter = 0; iter < max_iters; ++iter) {
            // E-step
            double ll = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                for (int k = 0; k < mixtures; ++k)
                    row[k] = (model.weights()[k] > 0.0
                                  ? std::log(model.weights()[k])
                                  : -std::numeric_limits<double>::infinity())
                             + model.component_log_pdf_std(k, z[i]);
                const double lse = logsumexp(row);
                if (!std::isfinite(lse)) return false;
                ll += lse;
                for (int k = 0; k < mixtures; ++k) logr[i * mixtures + k] = row[k] - lse;
            }
            ll += static_cast<double>(n) * model.log_jacobian();
            if (!history.empty() && ll - history.back() < tol) {
                history.push_back(ll);
                break;
            }
            history.push_back(ll);
            // M-step
            for (int k = 0; k < mixtures; ++k) {
                double nk = 0.0;
                std::vector<double> mu(d, 0.0), var(d, 0.0);
                for (std::size_t i = 0; i < n; ++i) {
                    const double r = std::exp(logr[i * mixtures + k]);
                    nk += r;
                    for (std::size_t j = 0; j < d; ++j) mu[j] += r * z[i][j];
                }
                if (nk < 1e-12) return false; // component collapse
                for (std::size_t j = 0; j < d; ++j) mu[j] /= nk;
                for (std::size_t i = 0; i < n; ++i) {
                    const double r = std::exp(logr[i * mixtures + k]);
                    for (std::size_t j = 0; j < d; ++j) {
                        const double diff = z[i][j] - mu[j];
                        var[j] += r * diff * diff;
                    }
                }
                for (std::size_t j = 0; j < d; ++j)
                    var[j] = std::max(var[j] / nk, kVarianceFloor);
                model.weights()[k] = nk / static_cast<double>(n);
                model.components()[k].mean = std::move(mu);
                model.components()[k].var = std::move(var);
            }
            double wsum = std::accumulate(model.weights().begin(), model.weights().end(), 0.0);
            for (double& w : model.weights()) w /= wsum;
        }
        out = FitResult{std::move(model), std::move(history)};
        return true;
    };

    FitResult result{Gmm({1.0}, {Gaussian{std::vector<double>(d, 0.0),
                                          std::vector<double>(d, 1.0)}},
                         shift, scale),
                     {}};
    if (run(seed, result)) return result;
    if (run(seed + 1, result)) return result; // one re-seed on collapse
    throw std::runtime_error("em_fit: component collapsed twice");
}

std::vector<double> state_log_pdfs(const std::vector<Gmm>& state_models,
                                   std::span<const double> x) {
    std::vector<double> lp(state_models.size());
    for (std::size_t i = 0; i < state_models.size(); ++i) lp[i] = state_models[i].log_pdf(x);
    return lp;
}

Bba bba_from_plausibilities(std::span<const double> pl, const Frame& frame) {
    const int n = frame.size();
    if (static_cast<int>(pl.size()) != n)
        throw std::invalid_argument("plausibility count must match the frame");
    std::vector<double> m(frame.num_subsets(), 0.0);
    for (std::uint32_t a = 0; a < m.size(); ++a) {
        double v = 1.0;
        for (int i = 0; i < n; ++i)
            v *= (a & (std::uint32_t{1} << i)) ? pl[i] : 1.0 - pl[i];
        m[a] = v;
    }
    return Bba(frame, std::move(m));
}

Bba observation_bba(const std::vector<Gmm>& state_models, std::span<const double> x,
                    const Frame& frame) {
    if (static_cast<int>(state_models.size()) != frame.size())
        throw std::invalid_argument("one GMM per frame element required");
    if (frame.size() > 4)
        throw std::invalid_argument("observation BBA capped at 4 states");
    std::vector<double> lp = state_log_pdfs(state_models, x);
    double mx = -std::numeric_limits<double>::infinity();
    for (double v : lp) mx = std::max(mx, v);
    if (!std::isfinite(mx)) return Bba::vacuous(frame); // no information
    std::vector<double> pl(lp.size());
    for (std::size_t i = 0; i < lp.size(); ++i) pl[i] = std::exp(lp[i] - mx);
    return bba_from_plausibilities(pl, frame);
}

} // namespace beltk
