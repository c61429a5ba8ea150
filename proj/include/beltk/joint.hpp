#ifndef BELTK_JOINT_HPP
#define BELTK_JOINT_HPP

#include <cstdint>
#include <vector>

#include "beltk/bba.hpp"

namespace beltk {

enum class Side { left, right };

// BBA on the product frame of two state frames. Pair element (i, j) maps
// to bit i * right.size() + j, so the full lattice has 2^(Nl*Nr) subsets;
// the product dimension is capped at 16 pair elements.
class JointBba {
public:
    JointBba(Frame left, Frame right, std::vector<double> masses);

    static JointBba vacuous(const Frame& left, const Frame& right);

    const Frame& left() const { return left_; }
    const Frame& right() const { return right_; }
    int pair_count() const { return left_.size() * right_.size(); }
    std::uint32_t num_subsets() const { return std::uint32_t{1} << pair_count(); }
    const std::vector<double>& masses() const { return m_; }

    std::uint32_t pair_bit(int i, int j) const {
        return std::uint32_t{1} << (i * right_.size() + j);
    }
    // Cylinder set b x right (or left x b).
    std::uint32_t cylinder(std::uint32_t b, Side side) const;

private:
    Frame left_;
    Frame right_;
    std::vector<double> m_;
};

// Lift a BBA to the product frame without adding information: every mass
// moves to the cylinder over its subset.
JointBba vacuous_extend(const Bba& m, Side side, const Frame& other);

// Project each joint mass onto one factor.
Bba marginalize(const JointBba& j, Side onto);

// Condition on "the side's value lies in s": conjunctive combination with
// the categorical BBA on the cylinder of s, then marginalization onto the
// other factor. The result may carry mass on the empty set.
Bba condition_joint(const JointBba& j, std::uint32_t s, Side side = Side::left);

// Conjunctive combination of two joint BBAs (commonality route, using the
// fast lattice transforms).
JointBba conjunctive_combine(const JointBba& a, const JointBba& b);

} // namespace beltk

#endif
