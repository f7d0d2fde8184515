#include "ggm/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ggm {

namespace {

double point_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return std::sqrt(s);
}

// Bitset over point indices, used for subset tests between balls.
using Bits = std::vector<std::uint64_t>;

Bits members_bits(const QuasimetricSpace& space, std::size_t center, std::size_t count) {
    Bits bits((space.size() + 63) / 64, 0);
    auto ord = space.order(center);
    for (std::size_t k = 0; k < count; ++k) bits[ord[k] / 64] |= std::uint64_t{1} << (ord[k] % 64);
    return bits;
}

bool is_subset(const Bits& inner, const Bits& outer) {
    for (std::size_t k = 0; k < inner.size(); ++k)
        if ((inner[k] & ~outer[k]) != 0) return false;
    return true;
}

}  // namespace

QuasimetricSpace::QuasimetricSpace(std::vector<std::vector<double>> coords,
                                   std::vector<std::string> ids,
                                   MetricSpec metric,
                                   std::vector<double> weights)
    : coords_(std::move(coords)), ids_(std::move(ids)), metric_(std::move(metric)),
      weights_(std::move(weights)) {
    n_ = weights_.size();
    if (n_ == 0) throw std::invalid_argument("space: at least one point is required");
    if (n_ > 4096) throw std::invalid_argument("space: at most 4096 points (exhaustive ball enumeration)");
    for (std::size_t i = 0; i < n_; ++i) {
        if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i]))
            throw std::invalid_argument("space: nonpositive weight at point " + std::to_string(i));
    }

    dist_.assign(n_ * n_, 0.0);
    switch (metric_.kind) {
        case MetricKind::euclidean:
        case MetricKind::snowflake: {
            if (coords_.size() != n_)
                throw std::invalid_argument("space: coordinate count does not match weight count");
            const std::size_t dim = coords_.front().size();
            for (const auto& c : coords_)
                if (c.size() != dim || dim == 0)
                    throw std::invalid_argument("space: coordinates must share one positive dimension");
            if (metric_.kind == MetricKind::snowflake && !(metric_.exponent > 0.0))
                throw std::invalid_argument("space: snowflake exponent must be positive");
            for (std::size_t i = 0; i < n_; ++i)
                for (std::size_t j = 0; j < n_; ++j) {
                    double d = point_distance(coords_[i], coords_[j]);
                    if (metric_.kind == MetricKind::snowflake) d = std::pow(d, metric_.exponent);
                    dist_[i * n_ + j] = d;
                }
            break;
        }
        case MetricKind::matrix: {
            if (metric_.matrix.size() != n_)
                throw std::invalid_argument("space: distance matrix size does not match weight count");
            for (std::size_t i = 0; i < n_; ++i) {
                if (metric_.matrix[i].size() != n_)
                    throw std::invalid_argument("space: distance matrix must be square");
                for (std::size_t j = 0; j < n_; ++j) dist_[i * n_ + j] = metric_.matrix[i][j];
            }
            break;
        }
    }

    // Distances equal up to rounding (1e-12 relative) share one value, so that
    // equidistant points such as grid neighbours enter balls together.
    {
        std::vector<double> vals;
        for (double d : dist_)
            if (d > 0.0 && std::isfinite(d)) vals.push_back(d);
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        std::vector<double> rep(vals.size());
        for (std::size_t k = 0; k < vals.size(); ++k)
            rep[k] = (k > 0 && vals[k] <= rep[k - 1] * (1.0 + 1e-12)) ? rep[k - 1] : vals[k];
        for (double& d : dist_)
            if (d > 0.0 && std::isfinite(d))
                d = rep[static_cast<std::size_t>(std::lower_bound(vals.begin(), vals.end(), d) - vals.begin())];
    }

    if (ids_.empty()) {
        ids_.reserve(n_);
        for (std::size_t i = 0; i < n_; ++i) ids_.push_back("p" + std::to_string(i));
    }
    if (ids_.size() != n_) throw std::invalid_argument("space: id count does not match weight count");

    min_positive_ = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) {
            const double d = dist_[i * n_ + j];
            if (!std::isfinite(d)) throw std::invalid_argument("space: non-finite distance");
            if (d < 0.0) throw std::invalid_argument("space: negative distance");
            if (i == j && d != 0.0) throw std::invalid_argument("space: d(x,x) must be 0");
            if (i != j && d == 0.0)
                throw std::invalid_argument("space: zero distance between distinct points " +
                                            std::to_string(i) + " and " + std::to_string(j));
            diameter_ = std::max(diameter_, d);
            if (i != j) min_positive_ = std::min(min_positive_, d);
        }
    if (n_ == 1) min_positive_ = 0.0;

    total_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);

    order_.resize(n_ * n_);
    sorted_dist_.resize(n_ * n_);
    prefix_w_.resize(n_ * (n_ + 1));
    for (std::size_t c = 0; c < n_; ++c) {
        auto first = order_.begin() + static_cast<std::ptrdiff_t>(c * n_);
        std::iota(first, first + static_cast<std::ptrdiff_t>(n_), std::size_t{0});
        std::stable_sort(first, first + static_cast<std::ptrdiff_t>(n_),
                         [&](std::size_t a, std::size_t b) { return dist(c, a) < dist(c, b); });
        double acc = 0.0;
        prefix_w_[c * (n_ + 1)] = 0.0;
        for (std::size_t k = 0; k < n_; ++k) {
            const std::size_t y = order_[c * n_ + k];
            sorted_dist_[c * n_ + k] = dist(c, y);
            acc += weights_[y];
            prefix_w_[c * (n_ + 1) + k + 1] = acc;
        }
    }
}

std::size_t QuasimetricSpace::ball_count(std::size_t center, double r) const {
    auto d = sorted_distances(center);
    return static_cast<std::size_t>(std::lower_bound(d.begin(), d.end(), r) - d.begin());
}

QuasimetricSpace build_space(std::vector<std::vector<double>> coords,
                             MetricSpec metric,
                             std::vector<double> weights) {
    return QuasimetricSpace(std::move(coords), {}, std::move(metric), std::move(weights));
}

QuasimetricSpace build_matrix_space(std::vector<std::vector<double>> matrix,
                                    std::vector<double> weights) {
    MetricSpec m;
    m.kind = MetricKind::matrix;
    m.matrix = std::move(matrix);
    return QuasimetricSpace({}, {}, std::move(m), std::move(weights));
}

QuasimetricSpace uniform_grid(std::size_t n) {
    if (n < 2) throw std::invalid_argument("uniform_grid: n >= 2 required");
    std::vector<std::vector<double>> coords(n);
    for (std::size_t k = 0; k < n; ++k)
        coords[k] = {static_cast<double>(k) / static_cast<double>(n - 1)};
    return build_space(std::move(coords), MetricSpec{},
                       std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

QuasimetricSpace snowflake_grid(std::size_t n, double exponent) {
    if (n < 2) throw std::invalid_argument("snowflake_grid: n >= 2 required");
    std::vector<std::vector<double>> coords(n);
    for (std::size_t k = 0; k < n; ++k)
        coords[k] = {static_cast<double>(k) / static_cast<double>(n - 1)};
    MetricSpec m;
    m.kind = MetricKind::snowflake;
    m.exponent = exponent;
    return build_space(std::move(coords), std::move(m),
                       std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

QuasimetricSpace two_atom_space(double w0, double w1) {
    return build_space({{0.0}, {1.0}}, MetricSpec{}, {w0, w1});
}

QuasimetricSpace equilateral_space(std::size_t n, double w) {
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 1.0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 0.0;
    return build_matrix_space(std::move(m), std::vector<double>(n, w));
}

Ball ball(const QuasimetricSpace& space, std::size_t center, double r) {
    if (center >= space.size()) throw std::invalid_argument("ball: center out of range");
    if (!(r > 0.0)) throw std::invalid_argument("ball: radius must be positive");
    Ball b;
    b.center = center;
    b.radius = r;
    const std::size_t count = space.ball_count(center, r);
    auto ord = space.order(center);
    b.members.assign(ord.begin(), ord.begin() + static_cast<std::ptrdiff_t>(count));
    std::sort(b.members.begin(), b.members.end());
    b.measure = space.prefix_measure(center, count);
    return b;
}

std::vector<double> representative_radii(const QuasimetricSpace& space,
                                         std::size_t center,
                                         RadiusRange range,
                                         std::span<const double> dilations) {
    const double dX = space.diameter();
    if (dX == 0.0) return {1.0};   // one-point space: every ball is X

    std::vector<double> bps;
    auto dists = space.sorted_distances(center);
    for (std::size_t k = 1; k < dists.size(); ++k) {
        bps.push_back(dists[k]);
        for (double s : dilations) bps.push_back(dists[k] / s);
    }
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

    std::vector<double> reps;
    double prev = 0.0;
    if (range == RadiusRange::unbounded) {
        for (double b : bps) {
            reps.push_back(0.5 * (prev + b));
            prev = b;
        }
        reps.push_back(prev > 0.0 ? 2.0 * prev : 1.0);
        return reps;
    }
    for (double b : bps) {
        if (b >= dX) break;
        reps.push_back(0.5 * (prev + b));
        prev = b;
    }
    if (prev < dX) reps.push_back(0.5 * (prev + dX));
    if (range == RadiusRange::closed) reps.push_back(dX * (1.0 + 1e-9));
    return reps;
}

QuasimetricConstants quasimetric_constants(const QuasimetricSpace& space) {
    QuasimetricConstants out;
    const std::size_t n = space.size();
    out.symmetry_witness = {0, 0, 0, 1.0};
    out.triangle_witness = {0, 0, 0, 1.0};
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            if (x == y) continue;
            const double ratio = space.dist(x, y) / space.dist(y, x);
            if (ratio > out.C_s) {
                out.C_s = ratio;
                out.symmetry_witness = {x, y, 0, ratio};
            }
        }
    // z = x gives the ratio 1, so C_t >= 1 always.
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            if (x == y) continue;
            const double dxy = space.dist(x, y);
            for (std::size_t z = 0; z < n; ++z) {
                if (z == x || z == y) continue;
                const double ratio = dxy / (space.dist(x, z) + space.dist(z, y));
                if (ratio > out.C_t) {
                    out.C_t = ratio;
                    out.triangle_witness = {x, y, z, ratio};
                }
            }
        }
    return out;
}

DoublingResult doubling_constant(const QuasimetricSpace& space) {
    DoublingResult out;
    const double two[] = {2.0};
    for (std::size_t x = 0; x < space.size(); ++x) {
        for (double r : representative_radii(space, x, RadiusRange::open, two)) {
            const double ratio = space.ball_measure(x, 2.0 * r) / space.ball_measure(x, r);
            if (ratio > out.C_d) {
                out.C_d = ratio;
                out.center = x;
                out.radius = r;
            }
        }
    }
    return out;
}

namespace {

// Least-squares slope of log(mean ball measure) against log r.
double fit_exponent(const std::vector<std::pair<double, double>>& samples) {
    if (samples.size() < 2) return 1.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [r, m] : samples) {
        const double lx = std::log(r), ly = std::log(m);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double k = static_cast<double>(samples.size());
    const double den = k * sxx - sx * sx;
    if (std::fabs(den) < 1e-300) return 1.0;
    return (k * sxy - sx * sy) / den;
}

// Exact sup over r in [lo, hi] (hi may be +inf) of mu B(x,r) / r^beta.
double sup_ratio(const QuasimetricSpace& space, std::size_t x, double lo, double hi, double beta) {
    double best = space.ball_measure(x, lo) / std::pow(lo, beta);
    auto d = space.sorted_distances(x);
    for (std::size_t k = 1; k < d.size(); ++k) {
        const double t = d[k];
        if (t < lo || t >= hi) continue;
        // right limit: ball collects every point with distance <= t
        const std::size_t count = static_cast<std::size_t>(
            std::upper_bound(d.begin(), d.end(), t) - d.begin());
        best = std::max(best, space.prefix_measure(x, count) / std::pow(t, beta));
    }
    return best;
}

}  // namespace

AhlforsFit ahlfors_fit(const QuasimetricSpace& space, const AhlforsOptions& opts) {
    AhlforsFit fit;
    fit.r_min = opts.r_min.value_or(space.min_positive_distance());
    fit.r_max = opts.r_max.value_or(space.diameter());
    if (!(fit.r_min > 0.0) || !(fit.r_min < fit.r_max))
        throw std::invalid_argument("ahlfors_fit: empty radius window");

    struct Sample { std::size_t x; double r; double m; };
    std::vector<Sample> samples;
    for (std::size_t x = 0; x < space.size(); ++x)
        for (double r : representative_radii(space, x, RadiusRange::closed))
            if (r >= fit.r_min && r <= fit.r_max) samples.push_back({x, r, space.ball_measure(x, r)});
    if (samples.empty()) throw std::invalid_argument("ahlfors_fit: empty radius window");

    if (!opts.alpha || !opts.beta) {
        // Average measure per distinct radius, then fit the power law.
        std::vector<std::pair<double, double>> pts;
        std::vector<Sample> sorted = samples;
        std::sort(sorted.begin(), sorted.end(), [](auto& a, auto& b) { return a.r < b.r; });
        for (std::size_t i = 0; i < sorted.size();) {
            std::size_t j = i;
            double acc = 0.0;
            while (j < sorted.size() && sorted[j].r == sorted[i].r) acc += sorted[j++].m;
            pts.emplace_back(sorted[i].r, acc / static_cast<double>(j - i));
            i = j;
        }
        const double slope = fit_exponent(pts);
        fit.alpha_lower = opts.alpha.value_or(slope);
        fit.beta_upper = opts.beta.value_or(slope);
    } else {
        fit.alpha_lower = *opts.alpha;
        fit.beta_upper = *opts.beta;
    }

    fit.c_low = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) {
        fit.c_low = std::min(fit.c_low, s.m / std::pow(s.r, fit.alpha_lower));
        const double up = s.m / std::pow(s.r, fit.beta_upper);
        if (up > fit.c_up) fit.c_up = up;
    }
    for (std::size_t x = 0; x < space.size(); ++x) {
        fit.c_up_sup = std::max(fit.c_up_sup, sup_ratio(space, x, fit.r_min, fit.r_max, fit.beta_upper));
        fit.b_growth = std::max(fit.b_growth,
                                sup_ratio(space, x, fit.r_min, std::numeric_limits<double>::infinity(), 1.0));
    }

    // A window starting below a point's nearest-neighbour distance contains
    // singleton balls {x} whose measure does not scale with r.
    for (std::size_t x = 0; x < space.size() && space.size() > 1; ++x) {
        if (fit.r_min < space.sorted_distances(x)[1] * (1.0 - 1e-9)) {
            fit.upper_ok = false;
            fit.witness_center = x;
            fit.witness_radius = fit.r_min;
            break;
        }
    }
    if (space.size() == 1) {
        fit.upper_ok = false;
        fit.witness_radius = fit.r_min;
    }
    return fit;
}

NestedBallReport nested_ball_bound_check(const QuasimetricSpace& space, double C_d) {
    struct RepBall { std::size_t x; double r; double m; Bits bits; };
    std::vector<RepBall> balls;
    for (std::size_t x = 0; x < space.size(); ++x)
        for (double r : representative_radii(space, x, RadiusRange::open)) {
            const std::size_t c = space.ball_count(x, r);
            balls.push_back({x, r, space.prefix_measure(x, c), members_bits(space, x, c)});
        }
    const double expo = std::log2(C_d);
    NestedBallReport rep;
    for (const auto& outer : balls)
        for (const auto& inner : balls) {
            if (inner.r > outer.r || !is_subset(inner.bits, outer.bits)) continue;
            ++rep.pairs_checked;
            const double lhs = outer.m / inner.m;
            const double rhs = C_d * std::pow(outer.r / inner.r, expo);
            const double ratio = lhs / rhs;
            if (ratio > rep.worst_ratio) {
                rep.worst_ratio = ratio;
                rep.outer_center = outer.x;
                rep.outer_radius = outer.r;
                rep.inner_center = inner.x;
                rep.inner_radius = inner.r;
            }
        }
    rep.pass = rep.worst_ratio <= 1.0 + 1e-12;
    return rep;
}

double dilation_N0(double C_t, double C_s) { return C_t * (1.0 + 2.0 * C_s); }
double dilation_a_bar(double C_t, double C_s) { return C_t * (C_t * (C_s + 1.0) + 1.0); }

ChainInclusionReport ball_chain_inclusion_check(const QuasimetricSpace& space) {
    const auto qc = quasimetric_constants(space);
    const double mid = qc.C_t * (qc.C_s + 1.0);
    const double a_bar = dilation_a_bar(qc.C_t, qc.C_s);
    const std::size_t n = space.size();
    ChainInclusionReport rep;
    for (std::size_t x = 0; x < n; ++x)
        for (double r : representative_radii(space, x, RadiusRange::open)) {
            for (std::size_t y = 0; y < n; ++y) {
                if (!(space.dist(x, y) < r)) continue;
                ++rep.triples_checked;
                bool ok = true;
                for (std::size_t z = 0; z < n && ok; ++z) {
                    if (space.dist(x, z) < r && !(space.dist(y, z) < mid * r)) ok = false;
                    if (space.dist(y, z) < mid * r && !(space.dist(x, z) < a_bar * r)) ok = false;
                }
                if (!ok) ++rep.failures;
            }
        }
    rep.pass = rep.failures == 0;
    return rep;
}

GeometryConstants geometry_constants(const QuasimetricSpace& space) {
    GeometryConstants g;
    const auto qc = quasimetric_constants(space);
    g.C_t = qc.C_t;
    g.C_s = qc.C_s;
    g.C_d = doubling_constant(space).C_d;
    g.N_0 = dilation_N0(g.C_t, g.C_s);
    g.a_bar = dilation_a_bar(g.C_t, g.C_s);
    g.d_X = space.diameter();
    g.mu_X = space.total_measure();
    if (space.size() > 1) {
        AhlforsOptions opts;
        opts.beta = 1.0;
        const auto fit = ahlfors_fit(space, opts);
        g.alpha_lower = fit.alpha_lower;
        g.c_low = fit.c_low;
        g.beta_upper = fit.beta_upper;
        g.c_up = fit.c_up;
        g.b_growth = fit.b_growth;
    }
    return g;
}

}  // namespace ggm
