#include "ggm/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ggm {

EpsilonGrid make_epsilon_grid(double upper, std::size_t geometric_count, bool closed,
                              std::span<const double> extra) {
    if (!(upper > 0.0) || !std::isfinite(upper)) throw std::invalid_argument("epsilon grid: upper must be positive");
    if (geometric_count < 2) throw std::invalid_argument("epsilon grid: at least 2 geometric nodes");
    EpsilonGrid g;
    g.geometric_count = geometric_count;
    g.upper = upper;
    g.closed = closed;
    const double lo = upper * 1e-6;
    const double hi = closed ? upper : upper * (1.0 - 1e-9);
    const double step = std::log(hi / lo) / static_cast<double>(geometric_count - 1);
    for (std::size_t k = 0; k < geometric_count; ++k)
        g.nodes.push_back(lo * std::exp(step * static_cast<double>(k)));
    g.nodes.back() = hi;
    const std::size_t denom = std::max<std::size_t>((geometric_count - 1) / 4, 2);
    for (std::size_t k = 1; k < denom; ++k)
        g.nodes.push_back(upper * static_cast<double>(k) / static_cast<double>(denom));
    for (double e : extra)
        if (e > 0.0 && (closed ? e <= upper : e < upper)) g.nodes.push_back(e);
    std::sort(g.nodes.begin(), g.nodes.end());
    g.nodes.erase(std::unique(g.nodes.begin(), g.nodes.end()), g.nodes.end());
    return g;
}

namespace {

void check_size(const GridFunction& f, const QuasimetricSpace& space) {
    if (f.size() != space.size())
        throw std::invalid_argument("function: length does not match the number of points");
    for (double v : f)
        if (!std::isfinite(v)) throw std::invalid_argument("function: values must be finite");
}

bool all_zero(const GridFunction& f) {
    return std::all_of(f.begin(), f.end(), [](double v) { return v == 0.0; });
}

}  // namespace

double lebesgue_norm(const GridFunction& f, const QuasimetricSpace& space, double p) {
    if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("lebesgue norm: p must lie in (1, inf)");
    check_size(f, space);
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += std::pow(std::fabs(f[i]), p) * space.weight(i);
    return std::pow(s, 1.0 / p);
}

MorreyEvaluator::MorreyEvaluator(const QuasimetricSpace& space, VariantSpec variant, RadiusRange range)
    : space_(&space), variant_(variant) {
    if (variant.kind == MorreyVariant::radius_power && !(variant.gamma > 0.0))
        throw std::invalid_argument("morrey: gamma must be positive");
    if (variant.kind == MorreyVariant::modified && !(variant.dilation > 0.0))
        throw std::invalid_argument("morrey: dilation must be positive");
    const double dil[] = {variant.dilation};
    std::span<const double> dilations;
    if (variant.kind == MorreyVariant::modified) dilations = dil;
    for (std::size_t x = 0; x < space.size(); ++x) {
        center_begin_.push_back(entries_.size());
        for (double r : representative_radii(space, x, range, dilations)) {
            Entry e;
            e.center = x;
            e.radius = r;
            e.count = space.ball_count(x, r);
            e.measure = space.prefix_measure(x, e.count);
            switch (variant.kind) {
                case MorreyVariant::measure_power: e.den = e.measure; break;
                case MorreyVariant::radius_power: e.den = std::pow(r, variant.gamma); break;
                case MorreyVariant::modified: e.den = space.ball_measure(x, variant.dilation * r); break;
            }
            entries_.push_back(e);
        }
    }
    center_begin_.push_back(entries_.size());
}

std::vector<double> MorreyEvaluator::factors(double lambda) const {
    std::vector<double> out(entries_.size());
    for (std::size_t k = 0; k < entries_.size(); ++k)
        out[k] = lambda == 0.0 ? 1.0 : std::pow(entries_[k].den, -lambda);
    return out;
}

MorreyResult MorreyEvaluator::norm_with(const GridFunction& f, double p, std::span<const double> fac) const {
    const auto& space = *space_;
    check_size(f, space);
    MorreyResult best;
    if (all_zero(f)) {
        if (!entries_.empty()) best.radius = entries_.front().radius;
        return best;
    }
    const std::size_t n = space.size();
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = std::pow(std::fabs(f[i]), p) * space.weight(i);
    std::vector<double> prefix(n + 1);
    double top = -1.0;
    for (std::size_t x = 0; x < n; ++x) {
        auto ord = space.order(x);
        prefix[0] = 0.0;
        for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + g[ord[k]];
        for (std::size_t e = center_begin_[x]; e < center_begin_[x + 1]; ++e) {
            const double v = prefix[entries_[e].count] * fac[e];
            if (v > top) {
                top = v;
                best.center = x;
                best.radius = entries_[e].radius;
            }
        }
    }
    best.value = std::pow(std::max(top, 0.0), 1.0 / p);
    return best;
}

MorreyResult MorreyEvaluator::norm(const GridFunction& f, double p, double lambda) const {
    return norm_with(f, p, factors(lambda));
}

double MorreyEvaluator::chain_factor(double pe, double le, double ps, double ls) const {
    const double em = 1.0 / pe - 1.0 / ps;
    const double ed = ls / ps - le / pe;
    double best = 0.0;
    for (const auto& e : entries_)
        best = std::max(best, std::pow(e.measure, em) * std::pow(e.den, ed));
    return best;
}

MorreyResult morrey_norm(const GridFunction& f, const QuasimetricSpace& space, double p, double lambda,
                         VariantSpec variant, RadiusRange range) {
    if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("morrey norm: p must lie in (1, inf)");
    if (!(lambda >= 0.0 && lambda < 1.0)) throw std::invalid_argument("morrey norm: lambda must lie in [0, 1)");
    return MorreyEvaluator(space, variant, range).norm(f, p, lambda);
}

NormResult grand_lebesgue_norm(const GridFunction& f, const QuasimetricSpace& space, double p, double theta,
                               std::size_t geometric_count) {
    if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("grand lebesgue norm: p must lie in (1, inf)");
    if (!(theta > 0.0)) throw std::invalid_argument("grand lebesgue norm: theta must be positive");
    check_size(f, space);
    NormResult best;
    if (all_zero(f)) return best;
    const auto grid = make_epsilon_grid(p - 1.0, geometric_count);
    best.value = -1.0;
    for (double eps : grid.nodes) {
        const double v = std::pow(eps, theta / (p - eps)) * lebesgue_norm(f, space, p - eps);
        if (v > best.value) {
            best.value = v;
            best.eps = eps;
        }
    }
    return best;
}

GrandEvaluator::GrandEvaluator(const QuasimetricSpace& space, GrandParams params, EpsilonGrid grid,
                               RadiusRange range)
    : params_(std::move(params)), grid_(std::move(grid)), morrey_(space, params_.variant, range) {
    for (double eps : grid_.nodes) {
        Node node;
        node.eps = eps;
        node.p = params_.p - eps;
        node.lambda = params_.lambda - params_.A(eps);
        if (!params_.closed_range && node.lambda < 0.0) node.lambda = 0.0;   // eps at a: rounding only
        node.weight = std::pow(params_.phi(eps), 1.0 / node.p);
        node.factors = morrey_.factors(node.lambda);
        nodes_.push_back(std::move(node));
    }
}

std::size_t GrandEvaluator::find_node(double eps) const {
    for (std::size_t k = 0; k < nodes_.size(); ++k)
        if (nodes_[k].eps == eps) return k;
    return nodes_.size();
}

MorreyResult GrandEvaluator::node_morrey(const GridFunction& f, std::size_t k) const {
    return morrey_.norm_with(f, nodes_[k].p, nodes_[k].factors);
}

double GrandEvaluator::node_term(const GridFunction& f, std::size_t k) const {
    return nodes_[k].weight * node_morrey(f, k).value;
}

NormResult GrandEvaluator::phi_functional(const GridFunction& f, double s, bool closed_at_s) const {
    if (!(s > 0.0) || s > grid_.upper * (1.0 + 1e-15))
        throw std::invalid_argument("phi functional: s must lie in (0, s_max]");
    NormResult best;
    if (all_zero(f)) return best;
    best.value = -1.0;
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
        const double eps = nodes_[k].eps;
        if (closed_at_s ? eps > s : eps >= s) break;
        const auto m = node_morrey(f, k);
        const double v = nodes_[k].weight * m.value;
        if (v > best.value) {
            best = {v, eps, m.center, m.radius};
        }
    }
    if (best.value < 0.0) best.value = 0.0;
    return best;
}

std::vector<double> GrandEvaluator::node_values(const GridFunction& f) const {
    std::vector<double> out(nodes_.size());
    for (std::size_t k = 0; k < nodes_.size(); ++k) out[k] = node_morrey(f, k).value;
    return out;
}

double GrandEvaluator::max_term(std::span<const double> values, double s, bool closed_at_s) const {
    double best = 0.0;
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
        if (closed_at_s ? nodes_[k].eps > s : nodes_[k].eps >= s) break;
        best = std::max(best, nodes_[k].weight * values[k]);
    }
    return best;
}

double GrandEvaluator::dominance_constant(std::size_t sigma) const {
    double c = nodes_[sigma].weight;
    const double top = grid_.upper;
    for (std::size_t k = sigma; k < nodes_.size(); ++k) {
        if (grid_.closed ? nodes_[k].eps > top : nodes_[k].eps >= top) break;
        c = std::max(c, nodes_[k].weight * chain_factor(k, sigma));
    }
    return c;
}

NormResult GrandEvaluator::norm(const GridFunction& f) const {
    return phi_functional(f, grid_.upper, grid_.closed);
}

double GrandEvaluator::chain_factor(std::size_t e, std::size_t s) const {
    return morrey_.chain_factor(nodes_[e].p, nodes_[e].lambda, nodes_[s].p, nodes_[s].lambda);
}

NormResult phi_functional(const GridFunction& f, const QuasimetricSpace& space, const GrandParams& params,
                          double s, std::size_t geometric_count) {
    GrandEvaluator ev(space, params, make_epsilon_grid(params.eps_upper(), geometric_count, params.closed_range));
    return ev.phi_functional(f, s, params.closed_range && s >= params.eps_upper());
}

NormResult grand_morrey_norm(const GridFunction& f, const QuasimetricSpace& space, const GrandParams& params,
                             std::size_t geometric_count) {
    GrandEvaluator ev(space, params, make_epsilon_grid(params.eps_upper(), geometric_count, params.closed_range));
    return ev.norm(f);
}

}  // namespace ggm
