#include "beltk/bba.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "beltk/lattice_kernels.hpp"

namespace beltk {

Frame::Frame(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty() || labels_.size() > 16)
        throw std::invalid_argument("frame size must be in [1, 16]");
    std::set<std::string> seen;
    for (const auto& l : labels_) {
        if (l.empty()) throw std::invalid_argument("frame labels must be non-empty");
        if (!seen.insert(l).second)
            throw std::invalid_argument("frame labels must be unique: " + l);
    }
}

Frame Frame::states(int n) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (int i = 0; i < n; ++i) labels.push_back("s" + std::to_string(i));
    return Frame(std::move(labels));
}

namespace detail {

void check_mass_vector(std::span<const double> m, double tol) {
    double sum = 0.0;
    for (double v : m) {
        if (!std::isfinite(v)) throw std::invalid_argument("mass is not finite");
        if (v < -tol) throw std::invalid_argument("negative mass");
        sum += v;
    }
    if (std::abs(sum - 1.0) > tol)
        throw std::invalid_argument("masses must sum to 1");
}

} // namespace detail

namespace {

// Clamp roundoff negatives inside the validation tolerance.
void clamp_small_negatives(std::vector<double>& m) {
    for (double& v : m)
        if (v < 0.0) v = 0.0;
}

} // namespace

Bba::Bba(Frame frame, std::vector<double> masses)
    : frame_(std::move(frame)), m_(std::move(masses)) {
    if (m_.size() != frame_.num_subsets())
        throw std::invalid_argument("mass vector length must be 2^N");
    detail::check_mass_vector(m_);
    clamp_small_negatives(m_);
}

Bba Bba::vacuous(const Frame& frame) {
    std::vector<double> m(frame.num_subsets(), 0.0);
    m[frame.full_mask()] = 1.0;
    return Bba(frame, std::move(m));
}

Bba Bba::categorical(const Frame& frame, std::uint32_t subset) {
    if (subset == 0 || subset > frame.full_mask())
        throw std::invalid_argument("categorical subset must be non-empty");
    std::vector<double> m(frame.num_subsets(), 0.0);
    m[subset] = 1.0;
    return Bba(frame, std::move(m));
}

bool Bba::is_vacuous(double tol) const {
    return std::abs(m_[frame_.full_mask()] - 1.0) <= tol;
}

std::vector<double> bel_from_m(const Bba& m) {
    std::vector<double> bel = m.masses();
    const double empty = bel[0];
    kern::zeta_subset(bel, m.frame().size());
    for (double& v : bel) v -= empty;
    bel[0] = 0.0;
    return bel;
}

Bba m_from_bel(const Frame& frame, std::vector<double> bel) {
    if (bel.size() != frame.num_subsets())
        throw std::invalid_argument("belief vector length must be 2^N");
    bel[0] = 0.0;
    kern::mobius_subset(bel, frame.size());
    double sum = std::accumulate(bel.begin() + 1, bel.end(), 0.0);
    bel[0] = 1.0 - sum; // mass on the empty set is not visible to bel
    return Bba(frame, std::move(bel));
}

std::vector<double> pl_from_m(const Bba& m) {
    std::vector<double> z = m.masses();
    const int n = m.frame().size();
    kern::zeta_subset(z, n);
    const std::uint32_t full = m.frame().full_mask();
    std::vector<double> pl(z.size());
    for (std::uint32_t a = 0; a <= full; ++a) pl[a] = z[full] - z[full & ~a];
    return pl;
}

Bba m_from_pl(const Frame& frame, std::vector<double> pl) {
    if (pl.size() != frame.num_subsets())
        throw std::invalid_argument("plausibility vector length must be 2^N");
    const std::uint32_t full = frame.full_mask();
    std::vector<double> z(pl.size());
    for (std::uint32_t a = 0; a <= full; ++a) z[a] = 1.0 - pl[full & ~a];
    kern::mobius_subset(z, frame.size());
    return Bba(frame, std::move(z));
}

std::vector<double> q_from_m(const Bba& m) {
    std::vector<double> q = m.masses();
    kern::zeta_superset(q, m.frame().size());
    return q;
}

Bba m_from_q(const Frame& frame, std::vector<double> q) {
    if (q.size() != frame.num_subsets())
        throw std::invalid_argument("commonality vector length must be 2^N");
    kern::mobius_superset(q, frame.size());
    return Bba(frame, std::move(q));
}

Bba conjunctive_combine(const Bba& m1, const Bba& m2) {
    if (!(m1.frame() == m2.frame()))
        throw std::invalid_argument("conjunctive combination requires a common frame");
    const auto& a = m1.masses();
    const auto& b = m2.masses();
    std::vector<double> out(a.size(), 0.0);
    for (std::uint32_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        for (std::uint32_t j = 0; j < b.size(); ++j) {
            if (b[j] == 0.0) continue;
            out[i & j] += a[i] * b[j];
        }
    }
    return Bba(m1.frame(), std::move(out));
}

Bba conjunctive_combine_via_q(const Bba& m1, const Bba& m2) {
    if (!(m1.frame() == m2.frame()))
        throw std::invalid_argument("conjunctive combination requires a common frame");
    std::vector<double> q = q_from_m(m1);
    std::vector<double> q2 = q_from_m(m2);
    kern::pointwise_multiply(q, q2);
    return m_from_q(m1.frame(), std::move(q));
}

Bba normalize(const Bba& m) {
    const double empty = m.mass(0);
    if (empty >= 1.0 - 1e-12)
        throw std::domain_error("cannot normalize a totally conflicting BBA");
    if (empty == 0.0) return m;
    std::vector<double> out = m.masses();
    // divide by the actual tail sum, not 1 - m(0): under heavy conflict the
    // two differ enough to break the sum-to-one invariant
    double total = 0.0;
    for (std::size_t a = 1; a < out.size(); ++a) total += out[a];
    if (total <= 0.0)
        throw std::domain_error("cannot normalize a totally conflicting BBA");
    out[0] = 0.0;
    for (std::size_t a = 1; a < out.size(); ++a) out[a] /= total;
    return Bba(m.frame(), std::move(out));
}

std::vector<double> singleton_plausibilities(const Bba& m) {
    const int n = m.frame().size();
    std::vector<double> pl(n, 0.0);
    const auto& masses = m.masses();
    for (std::uint32_t a = 1; a < masses.size(); ++a) {
        if (masses[a] == 0.0) continue;
        for (int i = 0; i < n; ++i)
            if (a & (std::uint32_t{1} << i)) pl[i] += masses[a];
    }
    return pl;
}

} // namespace beltk
