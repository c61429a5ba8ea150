#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "beltk/bba.hpp"

using namespace beltk;

namespace {

Bba random_bba(const Frame& frame, std::mt19937_64& rng, bool allow_empty = true) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> m(frame.num_subsets());
    double sum = 0.0;
    for (std::size_t a = allow_empty ? 0 : 1; a < m.size(); ++a) {
        m[a] = u(rng);
        sum += m[a];
    }
    for (double& v : m) v /= sum;
    return Bba(frame, std::move(m));
}

// Oracle: transforms straight from their defining sums.
double naive_bel(const Bba& m, std::uint32_t a) {
    double s = 0.0;
    for (std::uint32_t b = 1; b < m.masses().size(); ++b)
        if ((b & a) == b) s += m.mass(b);
    return s;
}

double naive_pl(const Bba& m, std::uint32_t a) {
    double s = 0.0;
    for (std::uint32_t b = 0; b < m.masses().size(); ++b)
        if ((b & a) != 0) s += m.mass(b);
    return s;
}

double naive_q(const Bba& m, std::uint32_t a) {
    double s = 0.0;
    for (std::uint32_t b = 0; b < m.masses().size(); ++b)
        if ((b & a) == a) s += m.mass(b);
    return s;
}

const Frame kAB({std::vector<std::string>{"a", "b"}});

Bba example_ab() {
    // m({a})=0.3, m({b})=0.2, m({a,b})=0.5
    return Bba(kAB, {0.0, 0.3, 0.2, 0.5});
}

} // namespace

TEST_CASE("bel examples") {
    Frame f = kAB;
    auto bel = bel_from_m(Bba::vacuous(f));
    CHECK(bel[0] == 0.0);
    CHECK(bel[1] == 0.0);
    CHECK(bel[2] == 0.0);
    CHECK(bel[3] == 1.0);

    bel = bel_from_m(Bba::categorical(f, 0b01));
    CHECK(bel[0b01] == 1.0);
    CHECK(bel[0b10] == 0.0);
    CHECK(bel[0b11] == 1.0);

    bel = bel_from_m(example_ab());
    CHECK(bel[0b01] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(bel[0b10] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(bel[0b11] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("m_from_bel examples") {
    Frame f = kAB;
    Bba back = m_from_bel(f, bel_from_m(Bba::vacuous(f)));
    CHECK(back.is_vacuous());

    back = m_from_bel(f, {0.0, 0.3, 0.2, 1.0});
    CHECK(back.mass(0b01) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(back.mass(0b10) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(back.mass(0b11) == doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS(m_from_bel(f, {0.0, 0.9, 0.9, 1.0})); // not a belief function
}

TEST_CASE("pl examples and duality") {
    Frame f = kAB;
    auto pl = pl_from_m(Bba::vacuous(f));
    CHECK(pl[0] == 0.0);
    for (std::uint32_t a = 1; a < 4; ++a) CHECK(pl[a] == doctest::Approx(1.0).epsilon(1e-12));

    pl = pl_from_m(example_ab());
    CHECK(pl[0b01] == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(pl[0b10] == doctest::Approx(0.7).epsilon(1e-12));

    std::mt19937_64 rng(7);
    Frame f3 = Frame::states(3);
    for (int trial = 0; trial < 50; ++trial) {
        Bba m = random_bba(f3, rng);
        auto bel = bel_from_m(m);
        auto plv = pl_from_m(m);
        for (std::uint32_t a = 0; a < m.masses().size(); ++a) {
            CHECK(bel[a] ==
                  doctest::Approx(1.0 - m.mass(0) - plv[f3.full_mask() & ~a]).epsilon(1e-11));
            CHECK(plv[a] == doctest::Approx(naive_pl(m, a)).epsilon(1e-12));
        }
    }
}

TEST_CASE("q examples and naive oracle") {
    Frame f = kAB;
    auto q = q_from_m(Bba::vacuous(f));
    for (std::uint32_t a = 0; a < 4; ++a) CHECK(q[a] == doctest::Approx(1.0).epsilon(1e-12));

    q = q_from_m(example_ab());
    CHECK(q[0b01] == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(q[0b10] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(q[0b11] == doctest::Approx(0.5).epsilon(1e-12));

    std::mt19937_64 rng(8);
    for (int n = 1; n <= 4; ++n) {
        Frame fn = Frame::states(n);
        for (int trial = 0; trial < 20; ++trial) {
            Bba m = random_bba(fn, rng);
            auto qv = q_from_m(m);
            CHECK(qv[0] == doctest::Approx(1.0).epsilon(1e-12));
            for (std::uint32_t a = 0; a < m.masses().size(); ++a)
                CHECK(qv[a] == doctest::Approx(naive_q(m, a)).epsilon(1e-12));
        }
    }
}

TEST_CASE("round-trips are identities") {
    std::mt19937_64 rng(9);
    for (int n = 1; n <= 4; ++n) {
        Frame f = Frame::states(n);
        for (int trial = 0; trial < 100; ++trial) {
            Bba m = random_bba(f, rng);
            Bba via_bel = m_from_bel(f, bel_from_m(m));
            Bba via_pl = m_from_pl(f, pl_from_m(m));
            Bba via_q = m_from_q(f, q_from_m(m));
            for (std::uint32_t a = 0; a < m.masses().size(); ++a) {
                CHECK(std::abs(via_bel.mass(a) - m.mass(a)) < 1e-12);
                CHECK(std::abs(via_pl.mass(a) - m.mass(a)) < 1e-12);
                CHECK(std::abs(via_q.mass(a) - m.mass(a)) < 1e-12);
            }
        }
    }
}

TEST_CASE("conjunctive combination basics") {
    Frame f = kAB;
    Bba a = Bba::categorical(f, 0b01);
    Bba b = Bba::categorical(f, 0b10);
    Bba conflict = conjunctive_combine(a, b);
    CHECK(conflict.mass(0) == doctest::Approx(1.0).epsilon(1e-12));

    std::mt19937_64 rng(10);
    Bba m = random_bba(f, rng);
    Bba with_vacuous = conjunctive_combine(Bba::vacuous(f), m);
    for (std::uint32_t s = 0; s < 4; ++s)
        CHECK(with_vacuous.mass(s) == doctest::Approx(m.mass(s)).epsilon(1e-12));

    CHECK_THROWS(conjunctive_combine(m, Bba::vacuous(Frame::states(3))));
}

TEST_CASE("both combination routes agree, commute, and associate") {
    std::mt19937_64 rng(11);
    Frame f = Frame::states(3);
    for (int trial = 0; trial < 100; ++trial) {
        Bba m1 = random_bba(f, rng);
        Bba m2 = random_bba(f, rng);
        Bba m3 = random_bba(f, rng);
        Bba direct = conjunctive_combine(m1, m2);
        Bba via_q = conjunctive_combine_via_q(m1, m2);
        Bba swapped = conjunctive_combine(m2, m1);
        Bba left = conjunctive_combine(conjunctive_combine(m1, m2), m3);
        Bba right = conjunctive_combine(m1, conjunctive_combine(m2, m3));
        for (std::uint32_t a = 0; a < direct.masses().size(); ++a) {
            CHECK(std::abs(direct.mass(a) - via_q.mass(a)) < 1e-12);
            CHECK(std::abs(direct.mass(a) - swapped.mass(a)) < 1e-12);
            CHECK(std::abs(left.mass(a) - right.mass(a)) < 1e-12);
        }
    }
}

TEST_CASE("combination of Bayesian BBAs matches Bayes' rule") {
    std::mt19937_64 rng(12);
    Frame f = Frame::states(3);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> p1(3), p2(3);
        double s1 = 0.0, s2 = 0.0;
        for (int i = 0; i < 3; ++i) {
            p1[i] = u(rng);
            p2[i] = u(rng);
            s1 += p1[i];
            s2 += p2[i];
        }
        std::vector<double> m1(8, 0.0), m2(8, 0.0);
        for (int i = 0; i < 3; ++i) {
            m1[1u << i] = p1[i] / s1;
            m2[1u << i] = p2[i] / s2;
        }
        Bba combined = normalize(conjunctive_combine(Bba(f, m1), Bba(f, m2)));
        double z = 0.0;
        for (int i = 0; i < 3; ++i) z += p1[i] * p2[i];
        for (int i = 0; i < 3; ++i)
            CHECK(combined.mass(1u << i) == doctest::Approx(p1[i] * p2[i] / z).epsilon(1e-9));
    }
}

TEST_CASE("normalize") {
    Frame f = kAB;
    Bba clean = example_ab();
    Bba same = normalize(clean);
    for (std::uint32_t a = 0; a < 4; ++a) CHECK(same.mass(a) == clean.mass(a));

    Bba half(f, {0.5, 0.0, 0.0, 0.5});
    Bba n = normalize(half);
    CHECK(n.mass(0) == 0.0);
    CHECK(n.mass(0b11) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS(normalize(Bba(f, {1.0, 0.0, 0.0, 0.0})));
}

TEST_CASE("frame validation") {
    CHECK_THROWS(Frame({std::vector<std::string>{}}));
    CHECK_THROWS(Frame({std::vector<std::string>{"a", "a"}}));
    CHECK_THROWS(Frame({std::vector<std::string>{""}}));
    CHECK_THROWS(Bba(kAB, {0.5, 0.5, 0.5, 0.5}));
    CHECK_THROWS(Bba(kAB, {-0.5, 1.5, 0.0, 0.0}));
}
