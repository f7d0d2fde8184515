#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "ggm/space.hpp"
#include "oracles.hpp"

using namespace ggm;

namespace {

QuasimetricSpace squared_three() {
    std::vector<std::vector<double>> m(3, std::vector<double>(3));
    const double x[] = {0.0, 0.5, 1.0};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = (x[i] - x[j]) * (x[i] - x[j]);
    return build_matrix_space(m, {1.0, 1.0, 1.0});
}

QuasimetricSpace asymmetric_space() {
    return build_matrix_space({{0, 2, 1}, {1, 0, 1}, {1, 1, 0}}, {0.5, 1.0, 2.0});
}

QuasimetricSpace random_plane(std::uint64_t seed, std::size_t n) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::vector<double>> pts;
    std::vector<double> w;
    for (std::size_t i = 0; i < n; ++i) {
        pts.push_back({u(rng), u(rng)});
        w.push_back(0.1 + u(rng));
    }
    return build_space(pts, {}, w);
}

std::vector<QuasimetricSpace> sample_spaces() {
    std::vector<QuasimetricSpace> out;
    out.push_back(uniform_grid(4));
    out.push_back(uniform_grid(9));
    out.push_back(snowflake_grid(7, 0.5));
    out.push_back(two_atom_space(1.0, 10.0));
    out.push_back(squared_three());
    out.push_back(asymmetric_space());
    out.push_back(random_plane(7, 10));
    return out;
}

}  // namespace

TEST_CASE("four point grid") {
    const auto s = uniform_grid(4);
    CHECK(s.size() == 4);
    CHECK(s.diameter() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.total_measure() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("construction errors") {
    CHECK_THROWS_WITH_AS(build_space({{0.0}, {1.0}}, {}, {1.0, 0.0}), doctest::Contains("nonpositive weight"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(build_space({{0.0}, {0.0}}, {}, {1.0, 1.0}), doctest::Contains("zero distance"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(build_matrix_space({{0, -1}, {1, 0}}, {1, 1}), doctest::Contains("negative distance"),
                         std::invalid_argument);
    CHECK_THROWS_AS(build_matrix_space({{0, 1}, {1, 0}}, {1, 1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(build_space({{0.0}, {1.0}}, {MetricKind::snowflake, -1.0, {}}, {1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(uniform_grid(5000), std::invalid_argument);
}

TEST_CASE("ball membership is strict") {
    const auto s = uniform_grid(4);
    auto b = ball(s, 0, 0.5);
    CHECK(b.members == std::vector<std::size_t>{0, 1});
    CHECK(b.measure == doctest::Approx(0.5));
    b = ball(s, 1, 0.999);
    CHECK(b.members.size() == 4);
    CHECK(b.measure == doctest::Approx(1.0));
    b = ball(s, 2, 1e-3);
    CHECK(b.members == std::vector<std::size_t>{2});
    CHECK(b.measure == doctest::Approx(0.25));
    // d(0, 1/3) = 1/3 exactly, so the open ball of that radius excludes it.
    CHECK(ball(s, 0, s.dist(0, 1)).members == std::vector<std::size_t>{0});
    CHECK_THROWS_AS(ball(s, 0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ball(s, 9, 1.0), std::invalid_argument);
}

TEST_CASE("ball measures match brute force and grow with r") {
    for (const auto& s : sample_spaces()) {
        for (std::size_t x = 0; x < s.size(); ++x) {
            double prev = 0.0;
            auto radii = oracle::probe_radii(s, x, 2.0 * s.diameter(), {1.0}, 400);
            std::sort(radii.begin(), radii.end());
            for (double r : radii) {
                const double m = s.ball_measure(x, r);
                CHECK(m == doctest::Approx(oracle::ball_measure(s, x, r)).epsilon(1e-13));
                CHECK(m >= prev);
                prev = m;
            }
        }
    }
}

TEST_CASE("representative radii hit every ball of the open range") {
    const double dil[] = {2.0};
    for (const auto& s : sample_spaces()) {
        for (std::size_t x = 0; x < s.size(); ++x) {
            const auto reps = representative_radii(s, x, RadiusRange::open, dil);
            for (double r : reps) CHECK((r > 0.0 && r < s.diameter()));
            // Every probed r has a representative with the same ball and the same dilated ball.
            for (double r : oracle::probe_radii(s, x, s.diameter(), {1.0, 2.0}, 300)) {
                const double m1 = oracle::ball_measure(s, x, r), m2 = oracle::ball_measure(s, x, 2.0 * r);
                bool found = false;
                for (double q : reps)
                    if (oracle::ball_measure(s, x, q) == m1 && oracle::ball_measure(s, x, 2.0 * q) == m2) found = true;
                CHECK(found);
            }
        }
    }
}

TEST_CASE("quasimetric constants") {
    auto qc = quasimetric_constants(uniform_grid(6));
    CHECK(qc.C_t == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(qc.C_s == 1.0);
    // |x-y|^2 on {0, 1/2, 1}: d(0,1) = 1 against 1/4 + 1/4 through 1/2.
    qc = quasimetric_constants(squared_three());
    CHECK(qc.C_t == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(qc.C_s == 1.0);
    CHECK(quasimetric_constants(snowflake_grid(9, 0.5)).C_t <= 1.0 + 1e-12);
    CHECK(quasimetric_constants(asymmetric_space()).C_s == doctest::Approx(2.0));
}

TEST_CASE("quasimetric constants are minimal with a witness") {
    for (const auto& s : sample_spaces()) {
        const auto qc = quasimetric_constants(s);
        const std::size_t n = s.size();
        double ct = 1.0, cs = 1.0;
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = 0; y < n; ++y) {
                if (x != y) cs = std::max(cs, s.dist(x, y) / s.dist(y, x));
                for (std::size_t z = 0; z < n; ++z)
                    if (z != x && z != y && x != y) ct = std::max(ct, s.dist(x, y) / (s.dist(x, z) + s.dist(z, y)));
            }
        CHECK(qc.C_t == doctest::Approx(ct).epsilon(1e-12));
        CHECK(qc.C_s == doctest::Approx(cs).epsilon(1e-12));
        const auto& w = qc.triangle_witness;
        if (n >= 3 && qc.C_t > 1.0) {
            const double eq = qc.C_t * (s.dist(w.i, w.k) + s.dist(w.k, w.j));
            CHECK(s.dist(w.i, w.j) == doctest::Approx(eq).epsilon(1e-12));
        }
    }
}

TEST_CASE("doubling constant") {
    CHECK(doubling_constant(uniform_grid(4)).C_d == doctest::Approx(3.0));
    CHECK(doubling_constant(two_atom_space(1.0, 10.0)).C_d == doctest::Approx(11.0));
    CHECK(doubling_constant(build_space({{0.0}}, {}, {1.0})).C_d == 1.0);
    for (const auto& s : sample_spaces()) {
        double cd = 1.0;
        for (std::size_t x = 0; x < s.size(); ++x)
            for (double r : oracle::probe_radii(s, x, s.diameter(), {1.0, 2.0}, 500))
                cd = std::max(cd, oracle::ball_measure(s, x, 2.0 * r) / oracle::ball_measure(s, x, r));
        CHECK(doubling_constant(s).C_d == doctest::Approx(cd).epsilon(1e-12));
    }
}

TEST_CASE("growth constant and Ahlfors window") {
    for (std::size_t n : {4u, 8u, 16u, 64u}) {
        const auto s = uniform_grid(n);
        const auto fit = ahlfors_fit(s);
        CHECK(fit.upper_ok);
        // b = sup over r >= r_min of mu B(x,r)/r, attained at r_min or as a right limit at a distance.
        double b = 0.0;
        for (std::size_t x = 0; x < n; ++x) {
            b = std::max(b, oracle::ball_measure(s, x, fit.r_min) / fit.r_min);
            for (std::size_t y = 0; y < n; ++y) {
                const double t = s.dist(x, y);
                if (t >= fit.r_min) b = std::max(b, oracle::ball_measure(s, x, t * (1 + 1e-12)) / t);
            }
        }
        CHECK(fit.b_growth == doctest::Approx(b).epsilon(1e-9));
        CHECK(fit.b_growth <= 3.0);
        CHECK(fit.beta_upper > 0.5);
    }
    const auto fit = ahlfors_fit(uniform_grid(16), {1.0, 1.0, 2.0 / 16.0, 1.0});
    CHECK(fit.c_up < 2.5);
    const auto atom = ahlfors_fit(two_atom_space(1, 1), {1.0, 1.0, 0.25, 1.0});
    CHECK_FALSE(atom.upper_ok);
    CHECK_THROWS_AS(ahlfors_fit(uniform_grid(4), {{}, {}, 2.0, 1.0}), std::invalid_argument);
}

TEST_CASE("nested ball bound and ball chain inclusion") {
    for (const auto& s : sample_spaces()) {
        const auto cd = doubling_constant(s).C_d;
        const auto nb = nested_ball_bound_check(s, cd);
        CHECK(nb.pass);
        CHECK(nb.worst_ratio <= 1.0 + 1e-12);
        const auto ch = ball_chain_inclusion_check(s);
        CHECK(ch.pass);
        CHECK(ch.failures == 0);
        CHECK(ch.triples_checked > 0);
    }
}

TEST_CASE("dilations") {
    CHECK(dilation_N0(1.0, 1.0) == 3.0);
    CHECK(dilation_a_bar(1.0, 1.0) == 3.0);
    CHECK(dilation_N0(2.0, 1.5) == 8.0);
    CHECK(dilation_a_bar(2.0, 1.5) == 12.0);
    const auto g = geometry_constants(squared_three());
    CHECK(g.N_0 == doctest::Approx(6.0));
    CHECK(g.a_bar == doctest::Approx(2.0 * (2.0 * 2.0 + 1.0)));
}
