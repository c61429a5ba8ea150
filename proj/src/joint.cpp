#include "beltk/joint.hpp"

#include <stdexcept>

#include "beltk/lattice_kernels.hpp"

namespace beltk {

namespace {

std::uint32_t project_mask(std::uint32_t a, int nl, int nr, Side onto) {
    std::uint32_t out = 0;
    for (int i = 0; i < nl; ++i)
        for (int j = 0; j < nr; ++j)
            if (a & (std::uint32_t{1} << (i * nr + j)))
                out |= std::uint32_t{1} << (onto == Side::left ? i : j);
    return out;
}

std::size_t count_nonzero(const std::vector<double>& v) {
    std::size_t n = 0;
    for (double x : v)
        if (x != 0.0) ++n;
    return n;
}

} // namespace

JointBba::JointBba(Frame left, Frame right, std::vector<double> masses)
    : left_(std::move(left)), right_(std::move(right)), m_(std::move(masses)) {
    if (left_.size() * right_.size() > 16)
        throw std::invalid_argument("product frame exceeds the 2^16 lattice cap");
    if (m_.size() != num_subsets())
        throw std::invalid_argument("joint mass vector length must be 2^(Nl*Nr)");
    detail::check_mass_vector(m_);
    for (double& v : m_)
        if (v < 0.0) v = 0.0;
}

JointBba JointBba::vacuous(const Frame& left, const Frame& right) {
    if (left.size() * right.size() > 16)
        throw std::invalid_argument("product frame exceeds the 2^16 lattice cap");
    std::vector<double> m(std::size_t{1} << (left.size() * right.size()), 0.0);
    m.back() = 1.0;
    return JointBba(left, right, std::move(m));
}

std::uint32_t JointBba::cylinder(std::uint32_t b, Side side) const {
    const int nl = left_.size();
    const int nr = right_.size();
    std::uint32_t out = 0;
    if (side == Side::left) {
        for (int i = 0; i < nl; ++i)
            if (b & (std::uint32_t{1} << i))
                for (int j = 0; j < nr; ++j) out |= pair_bit(i, j);
    } else {
        for (int j = 0; j < nr; ++j)
            if (b & (std::uint32_t{1} << j))
                for (int i = 0; i < nl; ++i) out |= pair_bit(i, j);
    }
    return out;
}

JointBba vacuous_extend(const Bba& m, Side side, const Frame& other) {
    const Frame& left = side == Side::left ? m.frame() : other;
    const Frame& right = side == Side::left ? other : m.frame();
    JointBba out = JointBba::vacuous(left, right);
    std::vector<double> masses(out.num_subsets(), 0.0);
    for (std::uint32_t b = 0; b < m.masses().size(); ++b) {
        const double v = m.mass(b);
        if (v == 0.0) continue;
        masses[out.cylinder(b, side)] += v;
    }
    return JointBba(left, right, std::move(masses));
}

Bba marginalize(const JointBba& j, Side onto) {
    const Frame& target = onto == Side::left ? j.left() : j.right();
    std::vector<double> out(target.num_subsets(), 0.0);
    const auto& masses = j.masses();
    for (std::uint32_t a = 0; a < masses.size(); ++a) {
        if (masses[a] == 0.0) continue;
        out[project_mask(a, j.left().size(), j.right().size(), onto)] += masses[a];
    }
    return Bba(target, std::move(out));
}

Bba condition_joint(const JointBba& j, std::uint32_t s, Side side) {
    if (s == 0) throw std::invalid_argument("conditioning set must be non-empty");
    const Frame& cond_frame = side == Side::left ? j.left() : j.right();
    if (s > cond_frame.full_mask())
        throw std::invalid_argument("conditioning set outside the frame");
    const std::uint32_t cyl = j.cylinder(s, side);
    const Side onto = side == Side::left ? Side::right : Side::left;
    const Frame& target = side == Side::left ? j.right() : j.left();
    std::vector<double> out(target.num_subsets(), 0.0);
    const auto& masses = j.masses();
    for (std::uint32_t a = 0; a < masses.size(); ++a) {
        if (masses[a] == 0.0) continue;
        out[project_mask(a & cyl, j.left().size(), j.right().size(), onto)] += masses[a];
    }
    return Bba(target, std::move(out));
}

JointBba conjunctive_combine(const JointBba& a, const JointBba& b) {
    if (!(a.left() == b.left()) || !(a.right() == b.right()))
        throw std::invalid_argument("joint combination requires matching frames");
    const auto& ma = a.masses();
    const auto& mb = b.masses();
    const std::size_t nnz_a = count_nonzero(ma);
    const std::size_t nnz_b = count_nonzero(mb);
    const int n = a.pair_count();
    // Extensions and other sparse joints go through the direct double loop;
    // dense joints through the commonality transforms.
    if (nnz_a * nnz_b <= ma.size() * static_cast<std::size_t>(n > 0 ? n : 1)) {
        std::vector<double> out(ma.size(), 0.0);
        for (std::uint32_t i = 0; i < ma.size(); ++i) {
            if (ma[i] == 0.0) continue;
            for (std::uint32_t k = 0; k < mb.size(); ++k) {
                if (mb[k] == 0.0) continue;
                out[i & k] += ma[i] * mb[k];
            }
        }
        return JointBba(a.left(), a.right(), std::move(out));
    }
    std::vector<double> qa = ma;
    std::vector<double> qb = mb;
    kern::zeta_superset(qa, n);
    kern::zeta_superset(qb, n);
    kern::pointwise_multiply(qa, qb);
    kern::mobius_superset(qa, n);
    return JointBba(a.left(), a.right(), std::move(qa));
}

} // namespace beltk
