#ifndef BELTK_BBA_HPP
#define BELTK_BBA_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace beltk {

// Finite frame of discernment. Subsets are bitmasks over label positions;
// bit i corresponds to labels()[i]. Capped at 16 elements so every mass
// vector stays a dense 2^N array.
class Frame {
public:
    explicit Frame(std::vector<std::string> labels);

    // Convenience frame with labels "s0".."s{n-1}".
    static Frame states(int n);

    int size() const { return static_cast<int>(labels_.size()); }
    std::uint32_t num_subsets() const { return std::uint32_t{1} << labels_.size(); }
    std::uint32_t full_mask() const { return num_subsets() - 1; }
    const std::vector<std::string>& labels() const { return labels_; }

    bool operator==(const Frame& other) const { return labels_ == other.labels_; }

private:
    std::vector<std::string> labels_;
};

// Basic belief assignment: nonnegative masses over all subsets, summing
// to one. Mass on the empty set (index 0) is allowed.
class Bba {
public:
    Bba(Frame frame, std::vector<double> masses);

    static Bba vacuous(const Frame& frame);
    static Bba categorical(const Frame& frame, std::uint32_t subset);

    const Frame& frame() const { return frame_; }
    const std::vector<double>& masses() const { return m_; }
    double mass(std::uint32_t subset) const { return m_[subset]; }
    double conflict() const { return m_[0]; }

    bool is_vacuous(double tol = 1e-12) const;

private:
    Frame frame_;
    std::vector<double> m_;
};

// Transforms between the equivalent representations of a BBA.
std::vector<double> bel_from_m(const Bba& m);
std::vector<double> pl_from_m(const Bba& m);
std::vector<double> q_from_m(const Bba& m);
Bba m_from_bel(const Frame& frame, std::vector<double> bel);
Bba m_from_pl(const Frame& frame, std::vector<double> pl);
Bba m_from_q(const Frame& frame, std::vector<double> q);

// Conjunctive rule of combination; conflict lands on the empty set.
// The first form is the definition (sum over intersecting pairs, skipping
// zero masses); the second goes through the commonality domain.
Bba conjunctive_combine(const Bba& m1, const Bba& m2);
Bba conjunctive_combine_via_q(const Bba& m1, const Bba& m2);

// Redistribute the empty-set mass; throws on total conflict.
Bba normalize(const Bba& m);

// Singleton plausibility pl({i}) for each frame element.
std::vector<double> singleton_plausibilities(const Bba& m);

namespace detail {
// Validation shared with the product-frame type.
void check_mass_vector(std::span<const double> m, double tol = 1e-9);
} // namespace detail

} // namespace beltk

#endif
