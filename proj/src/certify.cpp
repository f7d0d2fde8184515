#include "ggm/certify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>

namespace ggm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::pair<std::string, std::string> split_spec(std::string_view spec) {
    const auto colon = spec.find(':');
    if (colon == std::string_view::npos) return {std::string(spec), ""};
    return {std::string(spec.substr(0, colon)), std::string(spec.substr(colon + 1))};
}

std::size_t parse_count(const std::string& s, const std::string& what) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != s.size() || v == 0) throw std::invalid_argument("family: " + what + " must be a positive integer");
    return static_cast<std::size_t>(v);
}

void add_balls(const QuasimetricSpace& space, std::size_t cap, std::vector<FamilyMember>& out) {
    std::set<std::vector<char>> seen;
    std::vector<FamilyMember> balls;
    const std::size_t n = space.size();
    for (std::size_t x = 0; x < n; ++x)
        for (double r : representative_radii(space, x, RadiusRange::open)) {
            const std::size_t c = space.ball_count(x, r);
            std::vector<char> mask(n, 0);
            auto ord = space.order(x);
            for (std::size_t k = 0; k < c; ++k) mask[ord[k]] = 1;
            if (!seen.insert(mask).second) continue;
            FamilyMember m;
            m.id = "ball:x=" + space.ids()[x] + ",r=" + fmt(r);
            m.values.assign(n, 0.0);
            for (std::size_t i = 0; i < n; ++i) m.values[i] = mask[i] ? 1.0 : 0.0;
            balls.push_back(std::move(m));
        }
    if (cap == 0 || balls.size() <= cap) {
        for (auto& b : balls) out.push_back(std::move(b));
        return;
    }
    for (std::size_t j = 0; j < cap; ++j) out.push_back(balls[j * balls.size() / cap]);
}

void add_points(const QuasimetricSpace& space, std::vector<FamilyMember>& out) {
    for (std::size_t x = 0; x < space.size(); ++x) {
        FamilyMember m;
        m.id = "point:" + space.ids()[x];
        m.values.assign(space.size(), 0.0);
        m.values[x] = 1.0;
        out.push_back(std::move(m));
    }
}

void add_power(const QuasimetricSpace& space, std::vector<FamilyMember>& out) {
    const std::size_t n = space.size();
    std::set<std::size_t> centres{0, n / 3, 2 * n / 3, n - 1};
    for (std::size_t x0 : centres)
        for (double beta : {0.25, 0.5, 0.75}) {
            double m = kInf;
            for (std::size_t y = 0; y < n; ++y)
                if (y != x0) m = std::min(m, space.dist(y, x0));
            FamilyMember f;
            f.id = "power:x0=" + space.ids()[x0] + ",beta=" + fmt(beta);
            f.values.resize(n);
            for (std::size_t y = 0; y < n; ++y)
                f.values[y] = y == x0 ? (std::isfinite(m) ? std::pow(m / 2.0, -beta) : 1.0)
                                      : std::pow(space.dist(y, x0), -beta);
            out.push_back(std::move(f));
        }
}

void add_random(const QuasimetricSpace& space, std::size_t count, std::uint64_t seed,
                std::vector<FamilyMember>& out) {
    std::mt19937_64 rng(seed);
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    const std::size_t n = space.size();
    for (std::size_t j = 0; j < count; ++j) {
        const std::size_t blocks = 1 + static_cast<std::size_t>(rng() % std::min<std::size_t>(n, 8));
        std::set<std::size_t> cuts;
        while (cuts.size() + 1 < blocks) cuts.insert(1 + static_cast<std::size_t>(rng() % (n - 1)));
        FamilyMember f;
        f.id = "random:" + std::to_string(j);
        f.values.resize(n);
        double v = 2.0 * unit();
        for (std::size_t i = 0; i < n; ++i) {
            if (cuts.count(i)) v = 2.0 * unit();
            f.values[i] = v;
        }
        if (std::all_of(f.values.begin(), f.values.end(), [](double t) { return t == 0.0; })) f.values[0] = 1.0;
        out.push_back(std::move(f));
    }
}

void add_oscillating(const QuasimetricSpace& space, std::vector<FamilyMember>& out) {
    const std::size_t n = space.size();
    for (std::size_t k = 0; (std::size_t{1} << k) < std::max<std::size_t>(n, 2); ++k) {
        FamilyMember f;
        f.id = "osc:" + std::to_string(std::size_t{2} << k);
        f.values.resize(n);
        for (std::size_t i = 0; i < n; ++i) f.values[i] = ((i >> k) & 1) ? -1.0 : 1.0;
        out.push_back(std::move(f));
    }
}

std::uint64_t need_seed(std::optional<std::uint64_t> seed, const std::string& name) {
    if (!seed) throw std::invalid_argument("family '" + name + "': a seed is required for randomized families");
    return *seed;
}

}  // namespace

FunctionFamily generate_family(const QuasimetricSpace& space, std::string_view spec,
                               std::optional<std::uint64_t> seed) {
    FunctionFamily fam;
    fam.spec = std::string(spec);
    fam.seed = seed;
    const auto [name, arg] = split_spec(spec);
    if (name == "ball-indicators") {
        add_balls(space, arg.empty() ? 0 : parse_count(arg, "ball cap"), fam.members);
    } else if (name == "point-masses" && arg.empty()) {
        add_points(space, fam.members);
    } else if (name == "power-profiles" && arg.empty()) {
        add_power(space, fam.members);
    } else if (name == "random-step") {
        add_random(space, arg.empty() ? 16 : parse_count(arg, "random-step count"), need_seed(seed, name),
                   fam.members);
    } else if (name == "oscillating" && arg.empty()) {
        add_oscillating(space, fam.members);
    } else if (name == "mixed") {
        const std::size_t count = arg.empty() ? 16 : parse_count(arg, "random-step count");
        const auto s = need_seed(seed, name);
        add_balls(space, 256, fam.members);
        add_points(space, fam.members);
        add_power(space, fam.members);
        add_random(space, count, s, fam.members);
        add_oscillating(space, fam.members);
    } else {
        throw std::invalid_argument("family: unknown spec '" + std::string(spec) + "'");
    }
    if (fam.members.empty()) throw std::invalid_argument("family: empty");
    return fam;
}

Operator identity_operator() {
    return {"identity", [](const GridFunction& f) { return f; }};
}

double sharpen_ratio(const GridFunction& start, const std::function<double(const GridFunction&)>& ratio,
                     std::size_t iterations) {
    GridFunction x = start;
    double best = ratio(x);
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != 0.0) support.push_back(i);
    if (support.empty()) return best;
    for (std::size_t it = 0; it < iterations; ++it) {
        const std::size_t i = support[it % support.size()];
        for (double factor : {1.1, 0.9}) {
            GridFunction y = x;
            y[i] *= factor;
            const double v = ratio(y);
            if (v > best) {
                best = v;
                x = std::move(y);
                break;
            }
        }
    }
    return best;
}

RatioResult empirical_ratio(const Operator& op, const FunctionFamily& family,
                            const std::function<double(const GridFunction&)>& norm_in,
                            const std::function<double(const GridFunction&)>& norm_out, bool sharpen) {
    RatioResult res;
    res.ratio = -1.0;
    for (std::size_t j = 0; j < family.members.size(); ++j) {
        const auto& f = family.members[j].values;
        const double nin = norm_in(f);
        if (!(nin > 0.0)) continue;
        ++res.evaluated;
        const double r = norm_out(op.apply(f)) / nin;
        if (r > res.ratio) {
            res.ratio = r;
            res.witness = j;
        }
    }
    if (res.evaluated == 0) throw std::invalid_argument("empirical ratio: every member has zero input norm");
    res.sharpened = res.ratio;
    if (sharpen) {
        auto q = [&](const GridFunction& g) {
            const double nin = norm_in(g);
            return nin > 0.0 ? norm_out(op.apply(g)) / nin : 0.0;
        };
        res.sharpened = std::max(res.ratio, sharpen_ratio(family.members[res.witness].values, q));
    }
    return res;
}

double dominance_delta(const GrandParams& params, double eps, double sigma) {
    const double p = params.p, l = params.lambda;
    return (1.0 + params.A(eps) - l) / (p - eps) - (1.0 + params.A(sigma) - l) / (p - sigma);
}

DominanceReport verify_dominance(const GridFunction& f, const QuasimetricSpace& space, const GrandParams& params,
                                 double sigma, double s, std::size_t geometric_count, double gamma) {
    if (!(sigma > 0.0 && sigma < s && s < params.s_max))
        throw std::invalid_argument("dominance: need 0 < sigma < s < s_max");
    const double extra[] = {sigma, s};
    GrandEvaluator ev(space, params, make_epsilon_grid(params.eps_upper(), geometric_count, params.closed_range, extra));
    const std::size_t is = ev.find_node(sigma);
    DominanceReport rep;
    const auto values = ev.node_values(f);
    rep.lhs = ev.max_term(values, s, false);
    const double w_sigma = ev.node_weight(is);
    double c = w_sigma;
    rep.delta_min = kInf;
    rep.delta_max = -kInf;
    for (std::size_t k = is; k < ev.node_count() && ev.node_eps(k) < s; ++k) {
        c = std::max(c, ev.node_weight(k) * ev.chain_factor(k, is));
        const double d = dominance_delta(params, ev.node_eps(k), sigma);
        rep.delta_min = std::min(rep.delta_min, d);
        rep.delta_max = std::max(rep.delta_max, d);
    }
    rep.constant = c;
    rep.d_X_factor = std::max(1.0, std::pow(space.diameter(), gamma));
    rep.rhs = c / w_sigma * ev.max_term(values, sigma, true);
    rep.delta_ok = rep.delta_min >= -1e-15 && rep.delta_max <= 1.0 + 1e-15;
    rep.ok = rep.lhs <= rep.rhs * (1.0 + 1e-12) + 1e-300 && rep.delta_ok;
    return rep;
}

ReductionReport verify_reduction(const Operator& op, const QuasimetricSpace& space, const ReductionSetup& setup,
                                 const FunctionFamily& family) {
    const auto& in = setup.in;
    const auto& out = setup.out;
    const double sigma = setup.sigma;
    const double out_top = out.eps_upper(), in_top = in.eps_upper();
    if (!(sigma > 0.0) || (out.closed_range ? sigma > out_top : sigma >= out_top))
        throw std::invalid_argument("reduction: sigma must lie in the output epsilon range");
    auto inside_in = [&](double eta) { return eta > 0.0 && (in.closed_range ? eta <= in_top : eta < in_top); };

    // Ratio condition near 0 (grid-independent): a growing quotient means divergence.
    auto quotient = [&](double eps) {
        const double eta = setup.eta(eps);
        return std::pow(out.phi(eps), 1.0 / (out.p - eps)) / std::pow(in.phi(eta), 1.0 / (in.p - eta));
    };
    const double q_small = quotient(1e-12 * sigma), q_mid = quotient(1e-6 * sigma);
    if (!std::isfinite(q_small) || q_small > 2.0 * q_mid)
        throw std::domain_error("ratio condition: sup psi(eps)^{1/(q-eps)} / phi(eps)^{1/(p-eps)} is unbounded as eps -> 0");

    const double sig[] = {sigma};
    GrandEvaluator ev_out(space, out, make_epsilon_grid(out_top, setup.geometric_count, out.closed_range, sig),
                          setup.range);
    std::vector<std::size_t> eps_nodes;
    std::vector<double> etas;
    for (std::size_t k = 0; k < ev_out.node_count() && ev_out.node_eps(k) <= sigma; ++k) {
        const double eta = setup.eta(ev_out.node_eps(k));
        if (!inside_in(eta))
            throw std::domain_error("reduction: paired input index " + fmt(eta) + " leaves the input epsilon range");
        eps_nodes.push_back(k);
        etas.push_back(eta);
    }
    GrandEvaluator ev_in(space, in, make_epsilon_grid(in_top, setup.geometric_count, in.closed_range, etas),
                         setup.range);
    std::vector<std::size_t> eta_nodes;
    for (double eta : etas) eta_nodes.push_back(ev_in.find_node(eta));

    ReductionReport rep;
    rep.sigma = sigma;
    rep.rows.resize(eps_nodes.size());
    for (std::size_t j = 0; j < eps_nodes.size(); ++j) {
        rep.rows[j].eps = ev_out.node_eps(eps_nodes[j]);
        rep.rows[j].eta = etas[j];
        rep.ratio_condition =
            std::max(rep.ratio_condition, ev_out.node_weight(eps_nodes[j]) / ev_in.node_weight(eta_nodes[j]));
    }

    auto grand = [&](const GridFunction& f, std::vector<double>* vin_out, std::vector<double>* vout_out) {
        auto vin = ev_in.node_values(f);
        auto vout = ev_out.node_values(op.apply(f));
        const double nin = ev_in.max_term(vin, in_top, in.closed_range);
        const double nout = ev_out.max_term(vout, out_top, out.closed_range);
        if (vin_out) *vin_out = std::move(vin);
        if (vout_out) *vout_out = std::move(vout);
        return std::pair{nin, nout};
    };

    rep.grand_ratio = -1.0;
    std::size_t used = 0;
    for (std::size_t m = 0; m < family.members.size(); ++m) {
        std::vector<double> vin, vout;
        const auto [nin, nout] = grand(family.members[m].values, &vin, &vout);
        if (nin > 0.0) {
            ++used;
            if (nout / nin > rep.grand_ratio) {
                rep.grand_ratio = nout / nin;
                rep.witness = m;
            }
        }
        for (std::size_t j = 0; j < eps_nodes.size(); ++j) {
            const double a = vout[eps_nodes[j]], b = vin[eta_nodes[j]];
            const double c = b > 0.0 ? a / b : (a > 0.0 ? kInf : 0.0);
            if (c > rep.rows[j].constant) {
                rep.rows[j].constant = c;
                rep.rows[j].witness = m;
            }
        }
    }
    if (used == 0) throw std::invalid_argument("reduction: every member has zero input norm");

    rep.sup_constant = 0.0;
    rep.min_constant = kInf;
    for (const auto& row : rep.rows) {
        rep.sup_constant = std::max(rep.sup_constant, row.constant);
        rep.min_constant = std::min(rep.min_constant, row.constant);
    }
    rep.uniformity = rep.min_constant > 0.0 ? rep.sup_constant / rep.min_constant : kInf;
    const std::size_t is = ev_out.find_node(sigma);
    rep.dominance_constant = ev_out.dominance_constant(is);
    rep.psi_sigma_factor = 1.0 / ev_out.node_weight(is);
    rep.assembled = rep.dominance_constant * rep.psi_sigma_factor * rep.ratio_condition * rep.sup_constant;
    rep.consistent = rep.grand_ratio <= rep.assembled * (1.0 + 1e-12);
    rep.sharpened = rep.grand_ratio;
    if (setup.sharpen) {
        auto q = [&](const GridFunction& g) {
            const auto [nin, nout] = grand(g, nullptr, nullptr);
            return nin > 0.0 ? nout / nin : 0.0;
        };
        rep.sharpened = std::max(rep.grand_ratio, sharpen_ratio(family.members[rep.witness].values, q));
    }
    return rep;
}

AhlforsFit growth_fit(const QuasimetricSpace& space) {
    AhlforsOptions opts;
    opts.alpha = 1.0;
    opts.beta = 1.0;
    return ahlfors_fit(space, opts);
}

HedbergReport verify_hedberg(const GridFunction& f, const QuasimetricSpace& space, double p, double lambda,
                             double alpha) {
    if (!(p > 1.0)) throw std::invalid_argument("hedberg: p must exceed 1");
    if (!(lambda >= 0.0 && lambda < 1.0)) throw std::invalid_argument("hedberg: lambda must lie in [0, 1)");
    if (!(alpha > 0.0 && alpha < (1.0 - lambda) / p))
        throw std::invalid_argument("hedberg: alpha must satisfy 0 < alpha < (1-lambda)/p");
    for (double v : f)
        if (v < 0.0) throw std::invalid_argument("hedberg: f must be nonnegative");
    const auto fit = growth_fit(space);
    if (!fit.upper_ok)
        throw std::domain_error("hedberg: growth condition mu B(x,r) <= b r fails on the window (single-atom ball at " +
                                space.ids()[fit.witness_center] + ")");
    const auto g = geometry_constants(space);
    HedbergReport rep;
    rep.b = fit.b_growth;
    rep.N0 = g.N_0;
    ConstantParams cp;
    cp.p = p;
    cp.lambda = lambda;
    cp.alpha = alpha;
    cp.b = rep.b;
    cp.N0 = rep.N0;
    rep.A = theoretical_constant(ConstantKind::hedberg, cp).value;
    rep.exp_maximal = 1.0 - p * alpha / (1.0 - lambda);
    rep.exp_norm = alpha * p / (1.0 - lambda);
    VariantSpec v{MorreyVariant::modified, 1.0, rep.N0};
    rep.norm = morrey_norm(f, space, p, lambda, v, RadiusRange::unbounded).value;
    const auto Mf = modified_maximal(f, space, rep.N0);
    const auto Kf = potential(f, space, PotentialKind{PotentialTag::k_alpha, alpha, 1.0});
    for (std::size_t x = 0; x < space.size(); ++x) {
        const double lhs = std::fabs(Kf[x]);
        const double rhs = rep.A * std::pow(Mf[x], rep.exp_maximal) * std::pow(rep.norm, rep.exp_norm);
        const double q = lhs == 0.0 ? 0.0 : (rhs > 0.0 ? lhs / rhs : kInf);
        if (q > rep.worst) {
            rep.worst = q;
            rep.worst_point = x;
        }
        if (lhs > rhs * (1.0 + 1e-12)) ++rep.failures;
    }
    rep.ok = rep.failures == 0;
    return rep;
}

DominationReport pointwise_domination(const QuasimetricSpace& space, const FunctionFamily& family,
                                      const PotentialKind& kind) {
    const auto op = potential_operator(space, kind);
    const MaximalEvaluator M(space, 1.0, false);
    DominationReport rep;
    for (std::size_t j = 0; j < family.members.size(); ++j) {
        const auto& f = family.members[j].values;
        if (std::any_of(f.begin(), f.end(), [](double v) { return v < 0.0; })) continue;
        const auto If = op.apply(f);
        const auto Mf = M.apply(f);
        for (std::size_t x = 0; x < f.size(); ++x) {
            if (!(Mf[x] > 0.0)) continue;
            const double r = If[x] / Mf[x];
            if (r > rep.c_alpha) {
                rep.c_alpha = r;
                rep.witness = j;
                rep.point = x;
            }
        }
    }
    return rep;
}

const std::vector<std::string>& theorem_ids() {
    static const std::vector<std::string> ids{"prop3.5", "thm3.6",  "prop3.9",  "thm3.10", "prop4.2",
                                              "thm4.4",  "thm4.5",  "prop4.6",  "thm4.7",  "lemma5.1",
                                              "lemma5.2", "lemma5.3", "thm5.4"};
    return ids;
}

namespace {

struct Ctx {
    const QuasimetricSpace& space;
    const FunctionFamily& family;
    const CertParams& P;
    CertReport& rep;
};

double opt(const std::optional<double>& v, double d) { return v.value_or(d); }

std::function<double(const GridFunction&)> morrey_fn(const QuasimetricSpace& space, double p, double lambda,
                                                     VariantSpec v, RadiusRange range) {
    auto ev = std::make_shared<MorreyEvaluator>(space, v, range);
    return [ev, p, lambda](const GridFunction& f) { return ev->norm(f, p, lambda).value; };
}

void single(Ctx& c, const Operator& op, const std::function<double(const GridFunction&)>& in,
            const std::function<double(const GridFunction&)>& out) {
    const auto r = empirical_ratio(op, c.family, in, out, c.P.sharpen);
    c.rep.ratio = r.ratio;
    c.rep.sharpened = r.sharpened;
    c.rep.witness = c.family.members[r.witness].id;
    c.rep.finite = std::isfinite(r.ratio);
    c.rep.refinement_ratios = {r.ratio, r.ratio, r.ratio};
    c.rep.refinement_delta = 0.0;
    c.rep.refinement_deltas = {0.0, 0.0};
    c.rep.notes.push_back("single Morrey pair: radius enumeration is exact, refinement delta 0");
}

constexpr double kRefineFloor = 1e-3;

using TheoryFn = std::function<double(double eps, double eta)>;

void grand(Ctx& c, const Operator& op, ReductionSetup setup, const TheoryFn& theory, const std::string& base_expr,
           const std::vector<std::string>& symbols) {
    const std::size_t k = c.P.geometric_count;
    std::vector<ReductionReport> levels;
    for (std::size_t level = 0; level < 3; ++level) {
        setup.geometric_count = (k - 1) * (std::size_t{1} << level) + 1;
        setup.sharpen = level == 0 && c.P.sharpen;
        levels.push_back(verify_reduction(op, c.space, setup, c.family));
    }
    const auto& base = levels[0];
    auto& rep = c.rep;
    rep.ratio = base.grand_ratio;
    rep.sharpened = base.sharpened;
    rep.witness = c.family.members[base.witness].id;
    rep.finite = std::isfinite(base.grand_ratio) && std::isfinite(base.sup_constant);
    rep.uniformity = base.uniformity;
    rep.uniform = base.uniformity < 10.0;
    for (const auto& l : levels) rep.refinement_ratios.push_back(l.grand_ratio);
    const double r1 = levels[0].grand_ratio, r2 = levels[1].grand_ratio, r4 = levels[2].grand_ratio;
    // Changes below the resolution floor count as converged.
    const double d1 = std::max(std::fabs(r2 - r1), kRefineFloor * std::fabs(r1));
    const double d2 = std::max(std::fabs(r4 - r2), kRefineFloor * std::fabs(r2));
    rep.refinement_delta = d1;
    rep.refinement_deltas = {d1, d2};
    rep.refinement_stable = std::fabs(r4 - r2) <= d1 && d2 <= d1 * (1.0 + 1e-12) + 1e-300;
    bool consistent = true;
    for (const auto& l : levels) consistent = consistent && l.consistent;
    if (!consistent) rep.notes.push_back("measured grand ratio exceeds the reduction-assembled constant");
    double sup_theory = 0.0;
    for (const auto& row : base.rows) sup_theory = std::max(sup_theory, theory(row.eps, row.eta));
    const double factor = base.dominance_constant * base.psi_sigma_factor * base.ratio_condition;
    rep.constant.value = factor * sup_theory;
    rep.constant.expression = fmt(factor) + " * sup_eps C(eps) with C(eps) from " + base_expr;
    rep.constant.symbols = symbols;
    rep.params["sigma"] = setup.sigma;
    rep.structural_pass = rep.finite && rep.uniform && rep.refinement_stable && consistent;
    rep.reduction = base;
}

double safe_theory(ConstantKind kind, const ConstantParams& cp, const FreeConstants& fc) {
    try {
        return theoretical_constant(kind, cp, fc).value;
    } catch (const std::exception&) {
        return kInf;
    }
}

void require_admissible(const PotentialSetup& s, AdmissibilityMode mode, const std::string& thm, CertReport& rep) {
    const auto adm = check_admissibility(s, mode);
    rep.hypotheses["B"] = adm.B;
    rep.hypotheses["B_bound"] = adm.B_bound;
    rep.hypotheses["theta_threshold"] = adm.theta_threshold;
    if (!adm.ok) {
        std::string msg = thm + ":";
        for (const auto& r : adm.reasons) msg += " " + r + ";";
        msg.pop_back();
        throw std::invalid_argument(msg);
    }
}

void require_ahlfors(Ctx& c, double gamma, const std::string& thm) {
    AhlforsOptions o;
    o.beta = gamma;
    const auto fit = ahlfors_fit(c.space, o);
    c.rep.hypotheses["ahlfors_r_min"] = fit.r_min;
    c.rep.hypotheses["ahlfors_r_max"] = fit.r_max;
    c.rep.hypotheses["ahlfors_c_up"] = fit.c_up_sup;
    if (!fit.upper_ok)
        throw std::domain_error(thm + " hypothesis: upper " + fmt(gamma) +
                                "-Ahlfors regularity fails on the window (single-atom ball at " +
                                c.space.ids()[fit.witness_center] + ")");
}

double require_growth(Ctx& c, const std::string& thm) {
    const auto fit = growth_fit(c.space);
    c.rep.hypotheses["growth_r_min"] = fit.r_min;
    c.rep.hypotheses["b"] = fit.b_growth;
    if (!fit.upper_ok)
        throw std::domain_error(thm + " hypothesis: growth condition mu B(x,r) <= b r fails (single-atom ball at " +
                                c.space.ids()[fit.witness_center] + ")");
    return fit.b_growth;
}

double doubling(Ctx& c) {
    const auto d = doubling_constant(c.space);
    c.rep.hypotheses["C_d"] = d.C_d;
    return d.C_d;
}

PotentialSetup riesz_setup(Ctx& c, double gamma, bool mirrored) {
    const auto& P = c.P;
    const double p = opt(P.p, 2.0), lambda = opt(P.lambda, 0.5), alpha = opt(P.alpha, 0.125);
    const double slope = opt(P.slope, 0.01), theta1 = opt(P.theta1, 1.0);
    const double theta2 = opt(P.theta2, mirrored ? 2.5 : 2.0);
    auto s = mirrored ? mirrored_setup(p, lambda, gamma, alpha, slope, theta1, theta2)
                      : corollary_setup(p, lambda, gamma, alpha, slope, theta1, theta2);
    auto& rep = c.rep;
    rep.params["p"] = s.p;
    rep.params["q"] = s.q;
    rep.params["lambda"] = s.lambda;
    rep.params["alpha"] = s.alpha;
    rep.params["gamma"] = s.gamma;
    rep.params["theta1"] = s.theta1;
    rep.params["theta2"] = s.theta2;
    rep.params["delta"] = s.delta;
    rep.params["slope"] = slope;
    rep.labels["A1"] = s.A1.spec();
    rep.labels["A2"] = s.A2.spec();
    return s;
}

double default_sigma(const CertParams& P, double bound) {
    const double s = opt(P.sigma, 0.5 * bound);
    if (!(s > 0.0 && s < bound)) throw std::invalid_argument("sigma must lie in (0, " + fmt(bound) + ")");
    return s;
}

ScaleFunction scale(const std::optional<std::string>& spec, const char* fallback, ScaleRole role, double p,
                    double lambda) {
    return make_scale_function(spec.value_or(fallback), role, p, lambda);
}

void run_prop35(Ctx& c) {
    const double p = opt(c.P.p, 2.0), lambda = opt(c.P.lambda, 0.3);
    c.rep.params["p"] = p;
    c.rep.params["lambda"] = lambda;
    const double Cd = doubling(c);
    const auto f = morrey_fn(c.space, p, lambda, {}, RadiusRange::open);
    single(c, {"maximal", [&](const GridFunction& g) { return maximal(g, c.space); }}, f, f);
    ConstantParams cp;
    cp.p = p;
    cp.lambda = lambda;
    cp.C_d = Cd;
    c.rep.constant = theoretical_constant(ConstantKind::maximal, cp, c.P.consts);
}

void grand_maximal_like(Ctx& c, const std::string& thm, bool cz) {
    const auto& P = c.P;
    const double p = opt(P.p, cz ? 1.5 : 2.0), lambda = opt(P.lambda, 0.3);
    auto phi = scale(P.phi, "pow:1", ScaleRole::phi, p, lambda);
    auto psi = scale(P.psi ? P.psi : P.phi, "pow:1", ScaleRole::phi, p, lambda);
    auto A = scale(P.A, "lin:1", ScaleRole::A, p, lambda);
    ReductionSetup setup;
    setup.in = derive_grand_params(p, lambda, phi, A);
    setup.out = derive_grand_params(p, lambda, psi, A);
    setup.sigma = default_sigma(P, std::min(setup.in.s_max, setup.out.s_max));
    setup.eta = [](double e) { return e; };
    auto& rep = c.rep;
    rep.params["p"] = p;
    rep.params["lambda"] = lambda;
    rep.params["s_max"] = setup.in.s_max;
    rep.labels["phi"] = phi.spec();
    rep.labels["psi"] = psi.spec();
    rep.labels["A"] = A.spec();
    const double Cd = doubling(c);
    Operator op;
    std::string expr;
    std::vector<std::string> symbols;
    ConstantKind kind;
    if (cz) {
        auto kernel = std::make_shared<CZKernel>(hilbert_kernel(c.space));
        const auto cr = validate_cz_kernel(*kernel, c.space, P.triple_C);
        rep.hypotheses["C_sz"] = cr.size_constant;
        rep.hypotheses["C_sm"] = cr.smoothness_constant;
        rep.hypotheses["triple_C"] = cr.triple_C;
        rep.hypotheses["L2_norm"] = cr.l2_norm;
        if (!cr.ok) throw std::domain_error(thm + " hypothesis: kernel conditions fail: " + cr.failures.front());
        op = {"cz:hilbert", [kernel, &c](const GridFunction& g) { return cz_apply(g, c.space, *kernel); }};
        kind = ConstantKind::cz;
        expr = "c_cz [piecewise p/lambda expression]";
        symbols = {"c_cz"};
    } else {
        op = {"maximal", [&c](const GridFunction& g) { return maximal(g, c.space); }};
        kind = ConstantKind::maximal;
        expr = "(C_d)^{lambda_eps/p_eps} c_0 (p_eps')^{1/p_eps} + 1";
        symbols = {"c0"};
    }
    const auto& fc = P.consts;
    grand(c, op, setup,
          [&, kind](double eps, double) {
              ConstantParams cp;
              cp.p = p - eps;
              cp.lambda = lambda - A(eps);
              cp.C_d = Cd;
              return safe_theory(kind, cp, fc);
          },
          expr, symbols);
}

void run_prop39(Ctx& c) {
    const auto& P = c.P;
    const double p = opt(P.p, 1.5), lambda = opt(P.lambda, 0.3);
    c.rep.params["p"] = p;
    c.rep.params["lambda"] = lambda;
    doubling(c);
    auto kernel = std::make_shared<CZKernel>(hilbert_kernel(c.space));
    const auto cr = validate_cz_kernel(*kernel, c.space, P.triple_C);
    c.rep.hypotheses["C_sz"] = cr.size_constant;
    c.rep.hypotheses["C_sm"] = cr.smoothness_constant;
    c.rep.hypotheses["triple_C"] = cr.triple_C;
    c.rep.hypotheses["c_delta"] = cr.modulus.c_delta;
    c.rep.hypotheses["dini_integral"] = cr.modulus.dini.integral;
    c.rep.hypotheses["L2_norm"] = cr.l2_norm;
    if (!cr.ok) throw std::domain_error("Prop 3.9 hypothesis: kernel conditions fail: " + cr.failures.front());
    const auto f = morrey_fn(c.space, p, lambda, {}, RadiusRange::open);
    single(c, {"cz:hilbert", [&](const GridFunction& g) { return cz_apply(g, c.space, *kernel); }}, f, f);
    ConstantParams cp;
    cp.p = p;
    cp.lambda = lambda;
    c.rep.constant = theoretical_constant(ConstantKind::cz, cp, c.P.consts);
    if (p == 2.0) c.rep.notes.push_back("p = 2: both branches of the constant diverge; reported as inf");
}

void run_prop42(Ctx& c, bool measure) {
    const auto& P = c.P;
    const double p = opt(P.p, 2.0), lambda = opt(P.lambda, 0.5), alpha = opt(P.alpha, 0.125);
    const double gamma = measure ? 1.0 : opt(P.gamma, 1.0);
    const double q = sobolev_exponent(p, lambda, alpha, gamma);
    auto& rep = c.rep;
    rep.params["p"] = p;
    rep.params["q"] = q;
    rep.params["lambda"] = lambda;
    rep.params["alpha"] = alpha;
    rep.params["gamma"] = gamma;
    doubling(c);
    VariantSpec v;
    PotentialKind kind{PotentialTag::measure_kernel, alpha, 1.0};
    if (!measure) {
        require_ahlfors(c, gamma, "Prop 4.2");
        v = {MorreyVariant::radius_power, gamma, 1.0};
        kind = {PotentialTag::gamma_kernel, alpha, gamma};
    }
    auto op_mat = std::make_shared<KernelOperator>(potential_operator(c.space, kind));
    single(c, {potential_tag_name(kind.tag), [op_mat](const GridFunction& g) { return op_mat->apply(g); }},
           morrey_fn(c.space, p, lambda, v, RadiusRange::open), morrey_fn(c.space, q, lambda, v, RadiusRange::open));
    ConstantParams cp;
    cp.p = p;
    cp.q = q;
    cp.lambda = lambda;
    cp.alpha = alpha;
    cp.gamma = gamma;
    rep.constant = theoretical_constant(measure ? ConstantKind::riesz_measure : ConstantKind::riesz, cp, P.consts);
}

void run_riesz_grand(Ctx& c, const std::string& thm, bool measure, bool mirrored) {
    const auto& P = c.P;
    const double gamma = measure ? 1.0 : opt(P.gamma, 1.0);
    const auto s = riesz_setup(c, gamma, mirrored);
    require_admissible(s, mirrored ? AdmissibilityMode::riesz_A1 : AdmissibilityMode::riesz_A2, thm, c.rep);
    doubling(c);
    if (!measure) require_ahlfors(c, gamma, thm);
    VariantSpec v = measure ? VariantSpec{} : VariantSpec{MorreyVariant::radius_power, gamma, 1.0};
    ReductionSetup setup;
    setup.in = derive_grand_params(s.p, s.lambda, ScaleFunction::parse("pow:" + fmt(s.theta1)), s.A1, v);
    setup.out = derive_grand_params(s.q, s.lambda, ScaleFunction::parse("pow:" + fmt(s.theta2)), s.A2, v);
    auto sp = std::make_shared<PotentialSetup>(s);
    double bound;
    if (mirrored) {
        bound = std::min(aux_eval(AuxFunction::phi_tilde, s.delta, s), setup.out.s_max);
        setup.eta = [sp](double e) { return invert_phi_tilde(e, *sp).x; };
    } else {
        bound = std::min(s.delta, setup.out.s_max);
        setup.eta = [sp](double e) { return aux_eval(AuxFunction::phi_bar, e, *sp, false); };
    }
    setup.sigma = default_sigma(P, bound);
    PotentialKind kind = measure ? PotentialKind{PotentialTag::measure_kernel, s.alpha, 1.0}
                                 : PotentialKind{PotentialTag::gamma_kernel, s.alpha, gamma};
    auto op_mat = std::make_shared<KernelOperator>(potential_operator(c.space, kind));
    const auto& fc = P.consts;
    const auto ck = measure ? ConstantKind::riesz_measure : ConstantKind::riesz;
    grand(c, {potential_tag_name(kind.tag), [op_mat](const GridFunction& g) { return op_mat->apply(g); }}, setup,
          [sp, &fc, ck, mirrored](double eps, double eta) {
              ConstantParams cp;
              cp.p = sp->p - eta;
              cp.q = sp->q - eps;
              cp.lambda = sp->lambda - (mirrored ? sp->A1(eta) : sp->A2(eps));
              cp.alpha = sp->alpha;
              cp.gamma = sp->gamma;
              return safe_theory(ck, cp, fc);
          },
          measure ? "b_0 (C_alpha + p_eta/(1-lambda_eps-alpha p_eta)) [(p_eta')^{1/q_eps} + 1]"
                  : "c_riesz (1-lambda_eps) gamma / (alpha [(1-lambda_eps) gamma - alpha p_eta]) [(p_eta')^{1/q_eps} + 1]",
          measure ? std::vector<std::string>{"b_0", "C_alpha"} : std::vector<std::string>{"c_riesz"});
}

void run_lemma51(Ctx& c) {
    const double p = opt(c.P.p, 2.0);
    const auto g = geometry_constants(c.space);
    const double N0 = opt(c.P.N0, g.N_0);
    c.rep.params["p"] = p;
    c.rep.hypotheses["N0"] = N0;
    auto M = std::make_shared<MaximalEvaluator>(c.space, N0, true);
    const auto lp = [&](const GridFunction& f) { return lebesgue_norm(f, c.space, p); };
    single(c, {"modified_maximal", [M](const GridFunction& f) { return M->apply(f); }}, lp, lp);
    double weak = 0.0;
    for (const auto& m : c.family.members)
        weak = std::max(weak, weak_type_quotient(m.values, M->apply(m.values), c.space).worst);
    c.rep.hypotheses["weak_11_worst"] = weak;
    if (weak > 1.0 + 1e-12) {
        c.rep.structural_pass = false;
        c.rep.notes.push_back("weak (1,1) with constant 1 fails");
    }
    ConstantParams cp;
    cp.p = p;
    c.rep.constant = theoretical_constant(ConstantKind::lp_modified_maximal, cp, c.P.consts);
}

void run_lemma52(Ctx& c) {
    const double p = opt(c.P.p, 2.0), lambda = opt(c.P.lambda, 0.25);
    const auto g = geometry_constants(c.space);
    const double N0 = opt(c.P.N0, g.N_0);
    c.rep.params["p"] = p;
    c.rep.params["lambda"] = lambda;
    c.rep.hypotheses["N0"] = N0;
    c.rep.hypotheses["a_bar"] = g.a_bar;
    auto M = std::make_shared<MaximalEvaluator>(c.space, N0, true);
    single(c, {"modified_maximal", [M](const GridFunction& f) { return M->apply(f); }},
           morrey_fn(c.space, p, lambda, {MorreyVariant::modified, 1.0, N0}, RadiusRange::unbounded),
           morrey_fn(c.space, p, lambda, {MorreyVariant::modified, 1.0, N0 * g.a_bar}, RadiusRange::unbounded));
    ConstantParams cp;
    cp.p = p;
    cp.lambda = lambda;
    c.rep.constant = theoretical_constant(ConstantKind::morrey_modified_maximal, cp, c.P.consts);
}

void run_lemma53(Ctx& c) {
    const double p = opt(c.P.p, 2.0), lambda = opt(c.P.lambda, 0.5), alpha = opt(c.P.alpha, 0.125);
    if (!(alpha > 0.0 && alpha < (1.0 - lambda) / p))
        throw std::invalid_argument("Lemma 5.3: alpha must satisfy 0 < alpha < (1-lambda)/p");
    const double q = p * (1.0 - lambda) / (1.0 - lambda - alpha * p);
    const auto g = geometry_constants(c.space);
    const double b = require_growth(c, "Lemma 5.3");
    auto& rep = c.rep;
    rep.params["p"] = p;
    rep.params["q"] = q;
    rep.params["lambda"] = lambda;
    rep.params["alpha"] = alpha;
    rep.hypotheses["N0"] = g.N_0;
    rep.hypotheses["a_bar"] = g.a_bar;
    auto K = std::make_shared<KernelOperator>(potential_operator(c.space, {PotentialTag::k_alpha, alpha, 1.0}));
    single(c, {"k-alpha", [K](const GridFunction& f) { return K->apply(f); }},
           morrey_fn(c.space, p, lambda, {MorreyVariant::modified, 1.0, g.N_0}, RadiusRange::unbounded),
           morrey_fn(c.space, q, lambda, {MorreyVariant::modified, 1.0, g.N_0 * g.a_bar}, RadiusRange::unbounded));
    ConstantParams cp;
    cp.p = p;
    cp.q = q;
    cp.lambda = lambda;
    cp.alpha = alpha;
    cp.b = b;
    cp.N0 = g.N_0;
    rep.constant = theoretical_constant(ConstantKind::k_alpha, cp, c.P.consts);
    HedbergReport agg;
    std::size_t checked = 0;
    for (const auto& m : c.family.members) {
        if (std::any_of(m.values.begin(), m.values.end(), [](double v) { return v < 0.0; })) continue;
        ++checked;
        const auto h = verify_hedberg(m.values, c.space, p, lambda, alpha);
        agg.failures += h.failures;
        if (h.worst > agg.worst) {
            agg.worst = h.worst;
            agg.worst_point = h.worst_point;
        }
        agg.A = h.A;
        agg.b = h.b;
        agg.N0 = h.N0;
        agg.exp_maximal = h.exp_maximal;
        agg.exp_norm = h.exp_norm;
    }
    agg.ok = agg.failures == 0;
    rep.hypotheses["hedberg_members"] = static_cast<double>(checked);
    rep.hedberg = agg;
    if (!agg.ok) {
        rep.structural_pass = false;
        rep.notes.push_back("Hedberg pointwise inequality fails at " + std::to_string(agg.failures) + " points");
    }
}

void run_thm54(Ctx& c) {
    const auto s = riesz_setup(c, 1.0, false);
    require_admissible(s, AdmissibilityMode::riesz_A2, "Thm 5.4", c.rep);
    const double b = require_growth(c, "Thm 5.4");
    const auto g = geometry_constants(c.space);
    c.rep.hypotheses["N0"] = g.N_0;
    c.rep.hypotheses["a_bar"] = g.a_bar;
    ReductionSetup setup;
    setup.in = modified_grand_params(s.p, s.lambda, s.theta1, s.A1, g.N_0);
    setup.out = modified_grand_params(s.q, s.lambda, s.theta2, s.A2, g.N_0 * g.a_bar);
    auto sp = std::make_shared<PotentialSetup>(s);
    setup.eta = [sp](double e) { return aux_eval(AuxFunction::phi_bar, e, *sp, false); };
    setup.sigma = default_sigma(c.P, std::min(s.delta, setup.out.eps_upper()));
    auto K = std::make_shared<KernelOperator>(potential_operator(c.space, {PotentialTag::k_alpha, s.alpha, 1.0}));
    const auto& fc = c.P.consts;
    const double N0 = g.N_0;
    grand(c, {"k-alpha", [K](const GridFunction& f) { return K->apply(f); }}, setup,
          [sp, &fc, b, N0](double eps, double eta) {
              ConstantParams cp;
              cp.p = sp->p - eta;
              cp.q = sp->q - eps;
              cp.lambda = sp->lambda - sp->A2(eps);
              cp.alpha = sp->alpha;
              cp.b = b;
              cp.N0 = N0;
              return safe_theory(ConstantKind::k_alpha, cp, fc);
          },
          "4 [1 + 2 (p_eta')^{1/p_eta}]^{p_eta/q_eps} [b N0/alpha + b^{1/p_eta' - lambda_eps/p_eta} N0^{lambda_eps/p_eta} p_eta/(1 - lambda_eps - alpha p_eta)]",
          {});
}

}  // namespace

CertReport certify_boundedness(std::string_view theorem_id, const QuasimetricSpace& space,
                               const FunctionFamily& family, const CertParams& params, std::string_view space_id) {
    const std::string id(theorem_id);
    if (std::find(theorem_ids().begin(), theorem_ids().end(), id) == theorem_ids().end())
        throw std::invalid_argument("certify: unknown theorem id '" + id + "'");
    if (params.geometric_count < 5 || (params.geometric_count - 1) % 4 != 0)
        throw std::invalid_argument("certify: grid size must be 4m + 1 with m >= 1");
    CertReport rep;
    rep.theorem = id;
    rep.space_id = std::string(space_id);
    rep.family_spec = family.spec;
    rep.family_size = family.members.size();
    rep.params["grid"] = static_cast<double>(params.geometric_count);
    Ctx c{space, family, params, rep};
    if (id == "prop3.5") run_prop35(c);
    else if (id == "thm3.6") grand_maximal_like(c, "Thm 3.6", false);
    else if (id == "prop3.9") run_prop39(c);
    else if (id == "thm3.10") grand_maximal_like(c, "Thm 3.10", true);
    else if (id == "prop4.2") run_prop42(c, false);
    else if (id == "thm4.4") run_riesz_grand(c, "Thm 4.4", false, false);
    else if (id == "thm4.5") run_riesz_grand(c, "Thm 4.5", false, true);
    else if (id == "prop4.6") run_prop42(c, true);
    else if (id == "thm4.7") run_riesz_grand(c, "Thm 4.7", true, false);
    else if (id == "lemma5.1") run_lemma51(c);
    else if (id == "lemma5.2") run_lemma52(c);
    else if (id == "lemma5.3") run_lemma53(c);
    else if (id == "thm5.4") run_thm54(c);

    rep.absolute = rep.constant.symbols.empty();
    rep.calibrated_applicable = rep.absolute || params.consts.calibrated;
    rep.calibrated_pass = rep.ratio <= rep.constant.value * (1.0 + 1e-12);
    if (!rep.reduction) rep.structural_pass = rep.structural_pass && rep.finite;
    if (!rep.calibrated_applicable)
        rep.notes.push_back("free constants uncalibrated: absolute comparison is informational");
    return rep;
}

}  // namespace ggm
