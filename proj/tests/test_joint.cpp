#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "beltk/joint.hpp"

using namespace beltk;

namespace {

JointBba random_joint(const Frame& l, const Frame& r, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> m(std::size_t{1} << (l.size() * r.size()));
    double sum = 0.0;
    for (double& v : m) {
        v = u(rng);
        sum += v;
    }
    for (double& v : m) v /= sum;
    return JointBba(l, r, std::move(m));
}

Bba random_bba(const Frame& frame, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> m(frame.num_subsets());
    double sum = 0.0;
    for (double& v : m) {
        v = u(rng);
        sum += v;
    }
    for (double& v : m) v /= sum;
    return Bba(frame, std::move(m));
}

// Dempster conditioning straight from the definition: every joint mass
// moves to its intersection with the conditioning cylinder, projected.
Bba naive_condition(const JointBba& j, std::uint32_t s) {
    const std::uint32_t cyl = j.cylinder(s, Side::left);
    std::vector<double> out(j.right().num_subsets(), 0.0);
    for (std::uint32_t a = 0; a < j.masses().size(); ++a) {
        if (j.masses()[a] == 0.0) continue;
        std::uint32_t cut = a & cyl;
        std::uint32_t proj = 0;
        for (int i = 0; i < j.left().size(); ++i)
            for (int k = 0; k < j.right().size(); ++k)
                if (cut & j.pair_bit(i, k)) proj |= 1u << k;
        out[proj] += j.masses()[a];
    }
    return Bba(j.right(), std::move(out));
}

} // namespace

TEST_CASE("vacuous extension basics") {
    Frame f2 = Frame::states(2);
    JointBba v = vacuous_extend(Bba::vacuous(f2), Side::left, f2);
    CHECK(v.masses().back() == doctest::Approx(1.0).epsilon(1e-12));

    // categorical {a} extended left -> mass 1 on {(a,x),(a,y)}
    JointBba cat = vacuous_extend(Bba::categorical(f2, 0b01), Side::left, f2);
    const std::uint32_t cylinder = cat.pair_bit(0, 0) | cat.pair_bit(0, 1);
    CHECK(cat.masses()[cylinder] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("extension then marginalization recovers the original") {
    std::mt19937_64 rng(21);
    for (int nl = 1; nl <= 3; ++nl) {
        Frame fl = Frame::states(nl);
        Frame fr = Frame::states(3);
        for (int trial = 0; trial < 25; ++trial) {
            Bba m = random_bba(fl, rng);
            Bba back_left = marginalize(vacuous_extend(m, Side::left, fr), Side::left);
            Bba back_right = marginalize(vacuous_extend(m, Side::right, fr), Side::right);
            for (std::uint32_t a = 0; a < m.masses().size(); ++a) {
                CHECK(std::abs(back_left.mass(a) - m.mass(a)) < 1e-12);
                CHECK(std::abs(back_right.mass(a) - m.mass(a)) < 1e-12);
            }
        }
    }
}

TEST_CASE("marginalization cases") {
    Frame f2 = Frame::states(2);
    JointBba v = JointBba::vacuous(f2, f2);
    CHECK(marginalize(v, Side::left).is_vacuous());
    CHECK(marginalize(v, Side::right).is_vacuous());

    std::vector<double> m(16, 0.0);
    m[0b0001] = 1.0; // {(s0, s0)}
    JointBba point(f2, f2, std::move(m));
    CHECK(marginalize(point, Side::left).mass(0b01) == doctest::Approx(1.0));
    CHECK(marginalize(point, Side::right).mass(0b01) == doctest::Approx(1.0));
}

TEST_CASE("conditioning the joint") {
    Frame f2 = Frame::states(2);
    JointBba v = JointBba::vacuous(f2, f2);
    CHECK(condition_joint(v, 0b01).is_vacuous());
    CHECK(condition_joint(v, 0b11).is_vacuous());

    std::vector<double> m(16, 0.0);
    m[0b0001] = 1.0; // categorical {(s0, s0)}
    JointBba point(f2, f2, std::move(m));
    CHECK(condition_joint(point, 0b01).mass(0b01) == doctest::Approx(1.0));

    CHECK_THROWS(condition_joint(v, 0));

    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 25; ++trial) {
        JointBba j = random_joint(f2, f2, rng);
        for (std::uint32_t s = 1; s < 4; ++s) {
            Bba got = condition_joint(j, s);
            Bba want = naive_condition(j, s);
            for (std::uint32_t a = 0; a < got.masses().size(); ++a)
                CHECK(std::abs(got.mass(a) - want.mass(a)) < 1e-12);
        }
    }
}

TEST_CASE("joint combination routes agree") {
    Frame f2 = Frame::states(2);
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 25; ++trial) {
        // dense x dense exercises the commonality route; extension pairs the
        // sparse route
        JointBba a = random_joint(f2, f2, rng);
        JointBba b = random_joint(f2, f2, rng);
        JointBba dense = conjunctive_combine(a, b);
        std::vector<double> out(a.masses().size(), 0.0);
        for (std::uint32_t i = 0; i < a.masses().size(); ++i)
            for (std::uint32_t k = 0; k < b.masses().size(); ++k)
                out[i & k] += a.masses()[i] * b.masses()[k];
        for (std::uint32_t i = 0; i < out.size(); ++i)
            CHECK(std::abs(dense.masses()[i] - out[i]) < 1e-12);
    }
}

TEST_CASE("lattice cap enforced") {
    Frame f5 = Frame::states(5);
    Frame f4 = Frame::states(4);
    CHECK_THROWS(JointBba::vacuous(f5, f4));
    CHECK_NOTHROW(JointBba::vacuous(f4, f4));
    std::mt19937_64 rng(24);
    CHECK_THROWS(vacuous_extend(random_bba(f5, rng), Side::left, f4));
}
