#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "ggm/operators.hpp"
#include "oracles.hpp"

using namespace ggm;

namespace {

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
    out.push_back(uniform_grid(8));
    out.push_back(uniform_grid(16));
    out.push_back(snowflake_grid(9, 0.5));
    out.push_back(two_atom_space(1.0, 10.0));
    out.push_back(random_plane(3, 12));
    return out;
}

double l1(const GridFunction& f, const QuasimetricSpace& s) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) m += std::fabs(f[i]) * s.weight(i);
    return m;
}

// Plain maximal function by brute force over probed radii in (0, d_X).
GridFunction maximal_ref(const GridFunction& f, const QuasimetricSpace& s) {
    GridFunction a(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) a[i] = std::fabs(f[i]);
    GridFunction out(f.size(), 0.0);
    for (std::size_t x = 0; x < s.size(); ++x)
        for (double r : oracle::probe_radii(s, x, s.diameter(), {1.0}, 300))
            out[x] = std::max(out[x], oracle::ball_integral(s, a, x, r) / oracle::ball_measure(s, x, r));
    return out;
}

// Modified maximal function: integral over B(x,r) against mu B(x, N0 r), r > 0.
GridFunction modified_ref(const GridFunction& f, const QuasimetricSpace& s, double N0) {
    GridFunction a(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) a[i] = std::fabs(f[i]);
    GridFunction out(f.size(), 0.0);
    for (std::size_t x = 0; x < s.size(); ++x)
        for (double r : oracle::probe_radii(s, x, 2.0 * s.diameter(), {1.0, N0}, 300))
            out[x] = std::max(out[x], oracle::ball_integral(s, a, x, r) / oracle::ball_measure(s, x, N0 * r));
    return out;
}

// Largest singular value of W^{1/2} K W^{1/2} by cyclic Jacobi on its Gram matrix.
double l2_norm_ref(const QuasimetricSpace& s, const std::function<double(std::size_t, std::size_t)>& k) {
    const std::size_t n = s.size();
    std::vector<double> B(n * n, 0.0), G(n * n, 0.0);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            if (x != y) B[x * n + y] = std::sqrt(s.weight(x)) * k(x, y) * std::sqrt(s.weight(y));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t m = 0; m < n; ++m) G[i * n + j] += B[m * n + i] * B[m * n + j];
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += G[p * n + q] * G[p * n + q];
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = G[p * n + q];
                if (std::fabs(apq) < 1e-300) continue;
                const double theta = (G[q * n + q] - G[p * n + p]) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), sn = t * c;
                for (std::size_t m = 0; m < n; ++m) {
                    const double gp = G[m * n + p], gq = G[m * n + q];
                    G[m * n + p] = c * gp - sn * gq;
                    G[m * n + q] = sn * gp + c * gq;
                }
                for (std::size_t m = 0; m < n; ++m) {
                    const double gp = G[p * n + m], gq = G[q * n + m];
                    G[p * n + m] = c * gp - sn * gq;
                    G[q * n + m] = sn * gp + c * gq;
                }
            }
    }
    double top = 0.0;
    for (std::size_t i = 0; i < n; ++i) top = std::max(top, G[i * n + i]);
    return std::sqrt(top);
}

}  // namespace

TEST_CASE("maximal operators match brute force") {
    std::mt19937_64 rng(11);
    for (const auto& s : sample_spaces()) {
        const auto qc = quasimetric_constants(s);
        const double N0 = dilation_N0(qc.C_t, qc.C_s);
        for (int t = 0; t < 5; ++t) {
            const auto f = oracle::random_function(rng, s.size());
            const auto m = maximal(f, s), mref = maximal_ref(f, s);
            const auto mm = modified_maximal(f, s, N0), mmref = modified_ref(f, s, N0);
            for (std::size_t x = 0; x < s.size(); ++x) {
                CHECK(m[x] == doctest::Approx(mref[x]).epsilon(1e-12));
                CHECK(mm[x] == doctest::Approx(mmref[x]).epsilon(1e-12));
                CHECK(m[x] >= std::fabs(f[x]) * (1.0 - 1e-14));
            }
        }
    }
}

TEST_CASE("maximal operators are sublinear") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> uc(-3.0, 3.0);
    for (const auto& s : sample_spaces()) {
        const auto qc = quasimetric_constants(s);
        const double N0 = dilation_N0(qc.C_t, qc.C_s);
        for (int t = 0; t < 10; ++t) {
            const auto f = oracle::random_function(rng, s.size()), g = oracle::random_function(rng, s.size());
            const double c = uc(rng);
            GridFunction fg(f.size()), cf(f.size());
            for (std::size_t i = 0; i < f.size(); ++i) fg[i] = f[i] + g[i], cf[i] = c * f[i];
            for (bool modified : {false, true}) {
                MaximalEvaluator ev(s, modified ? N0 : 1.0, modified);
                const auto mf = ev.apply(f), mg = ev.apply(g), mfg = ev.apply(fg), mcf = ev.apply(cf);
                for (std::size_t x = 0; x < s.size(); ++x) {
                    CHECK(mfg[x] <= (mf[x] + mg[x]) * (1.0 + 1e-13));
                    CHECK(mcf[x] == doctest::Approx(std::fabs(c) * mf[x]).epsilon(1e-13));
                }
            }
        }
    }
}

TEST_CASE("modified maximal is weak (1,1) with constant 1") {
    std::mt19937_64 rng(13);
    for (const auto& s : sample_spaces()) {
        const auto qc = quasimetric_constants(s);
        const double N0 = dilation_N0(qc.C_t, qc.C_s);
        for (int t = 0; t < 20; ++t) {
            auto f = oracle::random_function(rng, s.size());
            if (t % 2) {
                // sparse spikes
                for (std::size_t i = 0; i < f.size(); ++i)
                    if (i % 3) f[i] = 0.0;
            }
            const auto g = modified_maximal(f, s, N0);
            const double norm1 = l1(f, s);
            const double top = *std::max_element(g.begin(), g.end());
            for (int k = 1; k <= 200; ++k) {
                const double lam = top * k / 201.0;
                double level = 0.0;
                for (std::size_t x = 0; x < s.size(); ++x)
                    if (g[x] > lam) level += s.weight(x);
                CHECK(level <= norm1 / lam * (1.0 + 1e-12));
            }
            CHECK(weak_type_quotient(f, g, s).worst <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("modified maximal strong bound") {
    std::mt19937_64 rng(14);
    for (const auto& s : sample_spaces()) {
        const auto qc = quasimetric_constants(s);
        const double N0 = dilation_N0(qc.C_t, qc.C_s);
        for (double p : {1.5, 2.0, 3.0}) {
            const double pp = p / (p - 1.0);
            const double C = 2.0 * std::pow(pp, 1.0 / p);
            for (int t = 0; t < 20; ++t) {
                const auto f = oracle::random_function(rng, s.size());
                const auto g = modified_maximal(f, s, N0);
                CHECK(lebesgue_norm(g, s, p) <= C * lebesgue_norm(f, s, p));
            }
        }
    }
}

TEST_CASE("maximal operator input errors") {
    const auto s = uniform_grid(4);
    CHECK_THROWS_AS(maximal({1.0, 2.0}, s), std::invalid_argument);
    CHECK_THROWS_AS(maximal({1.0, 2.0, NAN, 0.0}, s), std::invalid_argument);
    CHECK_THROWS_AS(modified_maximal({1, 1, 1, 1}, s, 0.5), std::invalid_argument);
}

TEST_CASE("potential examples") {
    const auto s = uniform_grid(4);
    const GridFunction one(4, 1.0);
    const auto v = potential(one, s, {PotentialTag::gamma_kernel, 0.5, 1.0});
    const double expect = 0.25 * (std::pow(1.0 / 3.0, -0.5) + std::pow(2.0 / 3.0, -0.5) + 1.0);
    CHECK(v[0] == doctest::Approx(expect).epsilon(1e-14));

    // unit mass at x0 = 2
    const GridFunction chi{0.0, 0.0, 1.0, 0.0};
    const auto u = potential(chi, s, {PotentialTag::gamma_kernel, 0.5, 1.0});
    for (std::size_t x = 0; x < 4; ++x) {
        const double e = x == 2 ? 0.0 : 0.25 / std::sqrt(s.dist(x, 2));
        CHECK(u[x] == doctest::Approx(e).epsilon(1e-14));
    }

    std::mt19937_64 rng(15);
    for (const auto& sp : sample_spaces()) {
        const auto f = oracle::random_function(rng, sp.size());
        const auto a = potential(f, sp, {PotentialTag::gamma_kernel, 0.3, 1.0});
        const auto b = potential(f, sp, {PotentialTag::k_alpha, 0.3, 7.0});
        for (std::size_t x = 0; x < sp.size(); ++x) CHECK(a[x] == doctest::Approx(b[x]).epsilon(1e-14));
    }
}

TEST_CASE("potentials match direct sums and are linear and positive") {
    std::mt19937_64 rng(16);
    const PotentialKind kinds[] = {{PotentialTag::gamma_kernel, 0.4, 1.5},
                                   {PotentialTag::measure_kernel, 0.5, 1.0},
                                   {PotentialTag::k_alpha, 0.25, 1.0}};
    for (const auto& s : sample_spaces()) {
        for (const auto& kind : kinds) {
            const auto f = oracle::random_function(rng, s.size()), g = oracle::random_function(rng, s.size());
            const auto pf = potential(f, s, kind), pg = potential(g, s, kind);
            GridFunction fg(f.size());
            for (std::size_t i = 0; i < f.size(); ++i) fg[i] = 2.0 * f[i] - 3.0 * g[i];
            const auto pfg = potential(fg, s, kind);
            for (std::size_t x = 0; x < s.size(); ++x) {
                double ref = 0.0;
                for (std::size_t y = 0; y < s.size(); ++y) {
                    if (y == x) continue;
                    double k = 0.0;
                    if (kind.tag == PotentialTag::gamma_kernel) k = std::pow(s.dist(x, y), kind.alpha - kind.gamma);
                    else if (kind.tag == PotentialTag::k_alpha) k = std::pow(s.dist(x, y), kind.alpha - 1.0);
                    else k = std::pow(oracle::ball_measure(s, x, s.dist(x, y)), kind.alpha - 1.0);
                    ref += k * f[y] * s.weight(y);
                }
                CHECK(pf[x] == doctest::Approx(ref).epsilon(1e-12));
                CHECK(pfg[x] == doctest::Approx(2.0 * pf[x] - 3.0 * pg[x]).epsilon(1e-12).scale(std::fabs(pf[x]) + std::fabs(pg[x])));
            }
            const auto pos = potential(oracle::random_function(rng, s.size(), 0.0, 1.0), s, kind);
            for (double v : pos) CHECK(v >= 0.0);
        }
    }
    CHECK_THROWS_AS(validate_potential_kind({PotentialTag::gamma_kernel, 1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate_potential_kind({PotentialTag::k_alpha, 1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate_potential_kind({PotentialTag::measure_kernel, 0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(parse_potential_tag("riesz"), std::invalid_argument);
    CHECK(parse_potential_tag("riesz-measure") == PotentialTag::measure_kernel);
}

TEST_CASE("potential is dominated by the maximal function on grids") {
    std::mt19937_64 rng(17);
    for (std::size_t n : {8u, 16u, 32u}) {
        const auto s = uniform_grid(n);
        double worst = 0.0;
        for (int t = 0; t < 50; ++t) {
            const auto f = oracle::random_function(rng, n, 0.0, 1.0);
            const auto i = potential(f, s, {PotentialTag::k_alpha, 0.5, 1.0});
            const auto m = maximal(f, s);
            for (std::size_t x = 0; x < n; ++x)
                if (m[x] > 0.0) worst = std::max(worst, i[x] / m[x]);
        }
        CHECK(std::isfinite(worst));
        CHECK(worst < 10.0);
    }
}

TEST_CASE("dini integral and modulus checks") {
    const auto lin = check_modulus([](double t) { return t; });
    CHECK(lin.positive);
    CHECK(lin.monotone);
    CHECK(lin.delta2);
    CHECK(lin.c_delta == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(lin.dini.converges);
    CHECK(lin.dini.integral == doctest::Approx(1.0).epsilon(1e-9));

    const auto sq = dini_integral([](double t) { return std::sqrt(t); });
    CHECK(sq.converges);
    CHECK(sq.integral == doctest::Approx(2.0).epsilon(1e-9));

    // 1 / log(e/t): the integral is int_1^inf du/u, divergent.
    const auto lg = dini_integral([](double t) { return 1.0 / std::log(std::exp(1.0) / t); });
    CHECK_FALSE(lg.converges);
    CHECK(std::isinf(lg.integral));

    // 1 / log(e/t)^2 converges to 1.
    const auto lg2 = dini_integral([](double t) {
        const double l = std::log(std::exp(1.0) / t);
        return 1.0 / (l * l);
    });
    CHECK(lg2.converges);
    CHECK(lg2.integral == doctest::Approx(1.0).epsilon(1e-2));

    const auto bump = check_modulus([](double t) { return t < 0.5 ? t : 0.1; });
    CHECK_FALSE(bump.monotone);
    CHECK(bump.witness_t1 < bump.witness_t2);
    CHECK(bump.witness_t1 < 0.5);
    CHECK(bump.witness_t2 >= 0.5);
}

TEST_CASE("hilbert kernel") {
    const std::size_t n = 17;
    const auto s = uniform_grid(n);
    auto k = hilbert_kernel(s);
    GridFunction one(n, 1.0);
    CHECK_THROWS_AS(cz_apply(one, s, k), std::logic_error);

    const auto rep = validate_cz_kernel(k, s);
    CHECK(rep.ok);
    CHECK(k.validated);
    CHECK(rep.failures.empty());
    CHECK(rep.triples > 0);
    // Lebesgue model: |K| mu B(x, d) = 2.
    CHECK(rep.size_constant >= 0.5);
    CHECK(rep.size_constant <= 8.0);
    CHECK(std::isfinite(rep.smoothness_constant));
    CHECK(rep.l2_norm == doctest::Approx(l2_norm_ref(s, k.K)).epsilon(1e-6));

    const auto t1 = cz_apply(one, s, k);
    CHECK(std::fabs(t1[n / 2]) < 1e-13);
    GridFunction left(n, 0.0);
    for (std::size_t i = 0; i < n / 2; ++i) left[i] = 1.0;
    const auto tl = cz_apply(left, s, k);
    for (std::size_t x = 0; x < n; ++x) {
        double ref = 0.0;
        for (std::size_t y = 0; y < n; ++y)
            if (y != x) ref += left[y] * s.weight(y) / (s.coords()[x][0] - s.coords()[y][0]);
        CHECK(tl[x] == doctest::Approx(ref).epsilon(1e-13));
    }
    for (double v : cz_apply(GridFunction(n, 0.0), s, k)) CHECK(v == 0.0);

    std::mt19937_64 rng(18);
    const auto f = oracle::random_function(rng, n), g = oracle::random_function(rng, n);
    GridFunction fg(n);
    for (std::size_t i = 0; i < n; ++i) fg[i] = f[i] + 0.5 * g[i];
    const auto tf = cz_apply(f, s, k), tg = cz_apply(g, s, k), tfg = cz_apply(fg, s, k);
    for (std::size_t x = 0; x < n; ++x)
        CHECK(tfg[x] == doctest::Approx(tf[x] + 0.5 * tg[x]).epsilon(1e-13).scale(std::fabs(tf[x]) + std::fabs(tg[x])));

    const auto atoms = build_matrix_space({{0, 1}, {1, 0}}, {1, 1});
    CHECK_THROWS_AS(hilbert_kernel(atoms), std::invalid_argument);
}

TEST_CASE("matrix kernels") {
    const auto s = uniform_grid(6);
    std::vector<std::vector<double>> m(6, std::vector<double>(6, 0.0));
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j)
            if (i != j) m[i][j] = 1.0 / std::fabs(double(i) - double(j));
    auto k = matrix_kernel(m, "pow:1");
    const auto rep = validate_cz_kernel(k, s, 2.0);
    CHECK(rep.ok);
    CHECK(rep.l2_norm == doctest::Approx(l2_norm_ref(s, k.K)).epsilon(1e-6));

    auto wrong = matrix_kernel({{0, 1}, {1, 0}}, "pow:1");
    CHECK_THROWS_AS(validate_cz_kernel(wrong, s), std::invalid_argument);
    CHECK_THROWS_AS(matrix_kernel({{0, 1}}, "pow:1"), std::invalid_argument);
}
