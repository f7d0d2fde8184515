#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <set>

#include "ggm/certify.hpp"
#include "oracles.hpp"

using namespace ggm;

namespace {

GrandParams example_params(double p = 2.0, double lambda = 0.3) {
    return derive_grand_params(p, lambda, ScaleFunction::parse("pow:1"), ScaleFunction::parse("lin:1"));
}

bool is_ball_indicator(const QuasimetricSpace& s, const GridFunction& f) {
    for (std::size_t x = 0; x < s.size(); ++x)
        for (std::size_t y = 0; y < s.size(); ++y) {
            // open ball just beyond d(x,y)
            const double r = s.dist(x, y) * (1.0 + 1e-9) + (x == y ? 1e-12 : 0.0);
            bool same = true;
            for (std::size_t z = 0; z < s.size() && same; ++z)
                same = (s.dist(x, z) < r) == (f[z] == 1.0) && (f[z] == 0.0 || f[z] == 1.0);
            if (same) return true;
        }
    return false;
}

}  // namespace

TEST_CASE("function families") {
    const auto s = uniform_grid(12);
    const auto pm = generate_family(s, "point-masses");
    CHECK(pm.members.size() == 12);
    for (std::size_t i = 0; i < 12; ++i) {
        double sum = 0.0;
        for (double v : pm.members[i].values) sum += v;
        CHECK(sum == 1.0);
        CHECK(pm.members[i].values[i] == 1.0);
    }
    const auto balls = generate_family(s, "ball-indicators");
    std::set<std::vector<double>> distinct;
    for (const auto& m : balls.members) {
        CHECK(is_ball_indicator(s, m.values));
        distinct.insert(m.values);
    }
    CHECK(distinct.size() == balls.members.size());
    CHECK(generate_family(s, "ball-indicators:5").members.size() <= 5);

    const auto a = generate_family(s, "random-step:20", 7), b = generate_family(s, "random-step:20", 7);
    const auto c = generate_family(s, "random-step:20", 8);
    CHECK(a.members.size() == 20);
    bool differs = false;
    for (std::size_t i = 0; i < a.members.size(); ++i) {
        CHECK(a.members[i].values == b.members[i].values);
        CHECK(a.members[i].id == b.members[i].id);
        if (a.members[i].values != c.members[i].values) differs = true;
        for (double v : a.members[i].values) CHECK((v >= 0.0 && v <= 2.0));
    }
    CHECK(differs);

    for (const auto& m : generate_family(s, "oscillating").members)
        for (double v : m.values) CHECK(std::fabs(v) == 1.0);
    for (const auto& m : generate_family(s, "power-profiles").members)
        for (double v : m.values) CHECK((std::isfinite(v) && v >= 0.0));

    const auto mixed = generate_family(s, "mixed", 3);
    CHECK(mixed.members.size() > pm.members.size());
    std::set<std::string> ids;
    for (const auto& m : mixed.members) ids.insert(m.id);
    CHECK(ids.size() == mixed.members.size());

    CHECK_THROWS_AS(generate_family(s, "random-step"), std::invalid_argument);
    CHECK_THROWS_AS(generate_family(s, "gaussian"), std::invalid_argument);
    CHECK_THROWS_AS(generate_family(s, "random-step:0", 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_family(s, "random-step:x", 1), std::invalid_argument);
}

TEST_CASE("empirical ratios") {
    const auto s = uniform_grid(10);
    const auto fam = generate_family(s, "mixed", 4);
    auto l2 = [&](const GridFunction& f) { return lebesgue_norm(f, s, 2.0); };
    const auto id = empirical_ratio(identity_operator(), fam, l2, l2);
    CHECK(id.ratio == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(id.evaluated == fam.members.size());

    // Plain maximal on L^2: the ratio is the max over members, checked directly.
    Operator m{"maximal", [&](const GridFunction& f) { return maximal(f, s); }};
    const auto r = empirical_ratio(m, fam, l2, l2, true);
    double ref = 0.0;
    for (const auto& mem : fam.members) ref = std::max(ref, l2(maximal(mem.values, s)) / l2(mem.values));
    CHECK(r.ratio == doctest::Approx(ref).epsilon(1e-14));
    CHECK(l2(maximal(fam.members[r.witness].values, s)) / l2(fam.members[r.witness].values) ==
          doctest::Approx(r.ratio).epsilon(1e-14));
    CHECK(r.sharpened >= r.ratio * (1.0 - 1e-14));

    FunctionFamily zero{"zero", std::nullopt, {{"z", GridFunction(10, 0.0)}}};
    CHECK_THROWS_AS(empirical_ratio(m, zero, l2, l2), std::invalid_argument);
}

TEST_CASE("sharpening never decreases the ratio") {
    std::mt19937_64 rng(21);
    const auto s = uniform_grid(8);
    auto ratio = [&](const GridFunction& f) { return lebesgue_norm(maximal(f, s), s, 3.0) / lebesgue_norm(f, s, 3.0); };
    for (int t = 0; t < 10; ++t) {
        const auto f = oracle::random_function(rng, 8, 0.0, 1.0);
        CHECK(sharpen_ratio(f, ratio) >= ratio(f) * (1.0 - 1e-14));
    }
}

TEST_CASE("dominance holds on random functions and indices") {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (const auto& s : {uniform_grid(8), snowflake_grid(9, 0.5), uniform_grid(16)}) {
        for (double lambda : {0.1, 0.3}) {
            const auto gp = example_params(2.0, lambda);
            for (int t = 0; t < 12; ++t) {
                const double s_hi = u(rng) * gp.s_max;
                const double sigma = u(rng) * s_hi;
                const auto f = oracle::random_function(rng, s.size());
                const auto rep = verify_dominance(f, s, gp, sigma, s_hi);
                CHECK(rep.ok);
                CHECK(rep.delta_ok);
                CHECK(rep.lhs <= rep.rhs * (1.0 + 1e-12));
                CHECK(rep.constant > 0.0);
                CHECK(std::isfinite(rep.constant));
            }
        }
    }
    const auto gp = example_params();
    CHECK_THROWS_AS(verify_dominance(GridFunction(8, 1.0), uniform_grid(8), gp, 0.2, 0.1), std::invalid_argument);
}

TEST_CASE("dominance delta") {
    const auto gp = example_params(2.0, 0.3);
    // A(e) = e: Delta = (0.7 + e)/(2 - e) - (0.7 + s)/(2 - s).
    for (double sigma : {0.01, 0.1})
        for (double e : {0.02, 0.1, 0.25}) {
            const double ref = (0.7 + e) / (2.0 - e) - (0.7 + sigma) / (2.0 - sigma);
            CHECK(dominance_delta(gp, e, sigma) == doctest::Approx(ref).epsilon(1e-14));
        }
}

TEST_CASE("reduction is consistent with its assembled constant") {
    const auto s = uniform_grid(16);
    const auto fam = generate_family(s, "mixed:24", 5);
    for (double lambda : {0.1, 0.3}) {
        ReductionSetup setup;
        setup.in = example_params(2.0, lambda);
        setup.out = setup.in;
        setup.sigma = 0.5 * setup.in.s_max;
        setup.eta = [](double e) { return e; };
        Operator m{"maximal", [&](const GridFunction& f) { return maximal(f, s); }};
        const auto rep = verify_reduction(m, s, setup, fam);
        CHECK(rep.consistent);
        CHECK(rep.grand_ratio <= rep.assembled * (1.0 + 1e-12));
        CHECK(rep.grand_ratio >= 1.0 - 1e-12);   // M f >= |f|
        CHECK(!rep.rows.empty());
        CHECK(rep.sup_constant >= rep.min_constant);
        CHECK(rep.uniformity == doctest::Approx(rep.sup_constant / rep.min_constant).epsilon(1e-12));
        CHECK(rep.ratio_condition > 0.0);
        for (const auto& row : rep.rows) {
            CHECK(row.eta == row.eps);
            CHECK(row.eps <= setup.sigma * (1.0 + 1e-15));
        }
    }
    ReductionSetup bad;
    bad.in = derive_grand_params(2.0, 0.3, ScaleFunction::parse("pow:2"), ScaleFunction::parse("lin:1"));
    bad.out = derive_grand_params(2.0, 0.3, ScaleFunction::parse("pow:1"), ScaleFunction::parse("lin:1"));
    bad.sigma = 0.1;
    bad.eta = [](double e) { return e; };
    CHECK_THROWS_AS(verify_reduction(identity_operator(), s, bad, fam), std::domain_error);
}

TEST_CASE("hedberg inequality on grids") {
    const auto s = uniform_grid(64);
    const auto fam = generate_family(s, "mixed:32", 9);
    struct P {
        double p, lambda, alpha;
    };
    for (const auto& prm : {P{2.0, 0.5, 0.125}, P{2.0, 0.25, 0.25}, P{3.0, 0.5, 0.1}}) {
        for (const auto& m : fam.members) {
            bool nonneg = true;
            for (double v : m.values) nonneg = nonneg && v >= 0.0;
            if (!nonneg) continue;
            const auto rep = verify_hedberg(m.values, s, prm.p, prm.lambda, prm.alpha);
            CHECK(rep.ok);
            CHECK(rep.failures == 0);
            CHECK(rep.worst <= 1.0);
        }
    }
    CHECK_THROWS_AS(verify_hedberg(GridFunction(64, 1.0), s, 2.0, 0.5, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(verify_hedberg(GridFunction(64, -1.0), s, 2.0, 0.5, 0.1), std::invalid_argument);
}

TEST_CASE("pointwise domination constant") {
    const auto s = uniform_grid(16);
    const auto fam = generate_family(s, "mixed", 2);
    const auto d = pointwise_domination(s, fam, {PotentialTag::k_alpha, 0.5, 1.0});
    CHECK(std::isfinite(d.c_alpha));
    CHECK(d.c_alpha > 0.0);
    const auto& w = fam.members[d.witness].values;
    const auto i = potential(w, s, {PotentialTag::k_alpha, 0.5, 1.0});
    const auto m = maximal(w, s);
    CHECK(i[d.point] / m[d.point] == doctest::Approx(d.c_alpha).epsilon(1e-12));
}

TEST_CASE("lemma5.2 on the constant function") {
    const auto s = uniform_grid(16);
    FunctionFamily one{"one", std::nullopt, {{"one", GridFunction(16, 1.0)}}};
    CertParams P;
    P.sharpen = false;
    const auto rep = certify_boundedness("lemma5.2", s, one, P);
    CHECK(rep.ratio <= 1.0 + 1e-12);
    CHECK(rep.passed());
    CHECK(rep.absolute);
    CHECK(rep.constant.value == doctest::Approx(1.0 + 2.0 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("certification errors") {
    const auto s = uniform_grid(8);
    const auto fam = generate_family(s, "point-masses");
    CertParams P;
    CHECK_THROWS_AS(certify_boundedness("thm9.9", s, fam, P), std::invalid_argument);
    P.geometric_count = 64;
    CHECK_THROWS_AS(certify_boundedness("thm3.6", s, fam, P), std::invalid_argument);

    CertParams div;
    div.phi = "pow:2";
    div.psi = "pow:1";
    CHECK_THROWS_AS(certify_boundedness("thm3.6", s, fam, div), std::domain_error);

    CertParams la;
    la.alpha = 0.5;   // needs alpha < (1 - lambda)/p = 0.25
    CHECK_THROWS_AS(certify_boundedness("lemma5.3", s, fam, la), std::invalid_argument);

    CertParams sg;
    sg.sigma = 5.0;
    CHECK_THROWS_AS(certify_boundedness("thm3.6", s, fam, sg), std::invalid_argument);
}

TEST_CASE("every theorem certifies on a 16-point grid") {
    const auto s = uniform_grid(16);
    const auto fam = generate_family(s, "mixed", 1);
    CertParams P;
    for (const auto& id : theorem_ids()) {
        INFO(id);
        const auto rep = certify_boundedness(id, s, fam, P, "grid16");
        CHECK(rep.theorem == id);
        CHECK(rep.space_id == "grid16");
        CHECK(rep.finite);
        CHECK(rep.refinement_stable);
        CHECK(rep.structural_pass);
        CHECK(rep.passed());
        CHECK(rep.ratio > 0.0);
        CHECK(rep.refinement_ratios.size() == 3);
        // Reruns are deterministic.
        const auto again = certify_boundedness(id, s, fam, P, "grid16");
        CHECK(again.ratio == rep.ratio);
        CHECK(again.sharpened == rep.sharpened);
    }
}
