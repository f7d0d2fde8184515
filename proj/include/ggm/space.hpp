#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ggm {

enum class MetricKind { euclidean, snowflake, matrix };

/// How pairwise distances are produced from the point data.
struct MetricSpec {
    MetricKind kind = MetricKind::euclidean;
    double exponent = 1.0;                       // snowflake: |x - y|^exponent
    std::vector<std::vector<double>> matrix;     // matrix: explicit d(i, j)
};

/// Radius range over which ball suprema are taken.
enum class RadiusRange {
    open,       // 0 < r < d_X
    closed,     // 0 < r < d_X plus r = d_X (1 + 1e-9)
    unbounded   // r > 0
};

/**
 * Finite quasimetric measure space (X, d, mu).
 *
 * Immutable after construction. Distances are stored row-major; balls are
 * always B(x, r) = { y : d(x, y) < r } with the centre as first argument, so
 * asymmetric quasimetrics are supported. For every centre the points are
 * kept sorted by distance from that centre, which turns ball measures and
 * ball integrals into prefix sums.
 */
class QuasimetricSpace {
public:
    /// Points given by coordinates (euclidean / snowflake) or ids (matrix).
    QuasimetricSpace(std::vector<std::vector<double>> coords,
                     std::vector<std::string> ids,
                     MetricSpec metric,
                     std::vector<double> weights);

    std::size_t size() const { return n_; }
    double dist(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }
    double weight(std::size_t i) const { return weights_[i]; }
    std::span<const double> weights() const { return weights_; }
    double diameter() const { return diameter_; }
    double total_measure() const { return total_; }
    double min_positive_distance() const { return min_positive_; }

    const MetricSpec& metric() const { return metric_; }
    const std::vector<std::vector<double>>& coords() const { return coords_; }
    const std::vector<std::string>& ids() const { return ids_; }

    /// Point indices sorted by d(center, .) ascending (center first).
    std::span<const std::size_t> order(std::size_t center) const {
        return {order_.data() + center * n_, n_};
    }
    /// d(center, order(center)[k]) for k = 0..n-1.
    std::span<const double> sorted_distances(std::size_t center) const {
        return {sorted_dist_.data() + center * n_, n_};
    }
    /// Number of points in B(center, r).
    std::size_t ball_count(std::size_t center, double r) const;
    /// Measure of the first `count` points in order(center).
    double prefix_measure(std::size_t center, std::size_t count) const {
        return prefix_w_[center * (n_ + 1) + count];
    }
    double ball_measure(std::size_t center, double r) const {
        return prefix_measure(center, ball_count(center, r));
    }

private:
    std::size_t n_ = 0;
    std::vector<std::vector<double>> coords_;
    std::vector<std::string> ids_;
    MetricSpec metric_;
    std::vector<double> weights_;
    std::vector<double> dist_;
    std::vector<std::size_t> order_;
    std::vector<double> sorted_dist_;
    std::vector<double> prefix_w_;
    double diameter_ = 0.0;
    double total_ = 0.0;
    double min_positive_ = 0.0;
};

/// Validating factory; throws std::invalid_argument on bad input.
QuasimetricSpace build_space(std::vector<std::vector<double>> coords,
                             MetricSpec metric,
                             std::vector<double> weights);

/// Explicit-matrix space with generated ids "p0", "p1", ...
QuasimetricSpace build_matrix_space(std::vector<std::vector<double>> matrix,
                                    std::vector<double> weights);

// Stock spaces used by tests, the CLI and the acceptance suite.
QuasimetricSpace uniform_grid(std::size_t n);                      // {k/(n-1)}, weights 1/n
QuasimetricSpace snowflake_grid(std::size_t n, double exponent);   // |x-y|^s on the grid
QuasimetricSpace two_atom_space(double w0, double w1);             // distance 1
QuasimetricSpace equilateral_space(std::size_t n, double w);       // all distances 1

struct Ball {
    std::size_t center = 0;
    double radius = 0.0;
    std::vector<std::size_t> members;   // ascending index order
    double measure = 0.0;
};

Ball ball(const QuasimetricSpace& space, std::size_t center, double r);

/**
 * Midpoints of the open intervals cut out of the radius range by the
 * breakpoints { d(center, y) / s : y in X, s in {1} u dilations }.
 *
 * Every ball-dependent quantity considered here is constant on those
 * intervals, so a sup or inf over the range reduces to a max or min over
 * the returned radii.
 */
std::vector<double> representative_radii(const QuasimetricSpace& space,
                                         std::size_t center,
                                         RadiusRange range,
                                         std::span<const double> dilations = {});

struct Witness {
    std::size_t i = 0, j = 0, k = 0;
    double value = 0.0;
};

struct QuasimetricConstants {
    double C_t = 1.0;
    double C_s = 1.0;
    Witness triangle_witness;   // (x, y, z) with d(x,y) = C_t [d(x,z) + d(z,y)]
    Witness symmetry_witness;   // (x, y) with d(x,y) = C_s d(y,x)
};

QuasimetricConstants quasimetric_constants(const QuasimetricSpace& space);

struct DoublingResult {
    double C_d = 1.0;
    std::size_t center = 0;
    double radius = 0.0;
};

DoublingResult doubling_constant(const QuasimetricSpace& space);

struct AhlforsOptions {
    std::optional<double> alpha;   // lower exponent; fitted when absent
    std::optional<double> beta;    // upper exponent; fitted when absent
    std::optional<double> r_min;   // default: smallest positive distance
    std::optional<double> r_max;   // default: d_X
};

struct AhlforsFit {
    double r_min = 0.0, r_max = 0.0;
    double alpha_lower = 0.0, c_low = 0.0;
    double beta_upper = 0.0;
    double c_up = 0.0;        // envelope over representative radii in the window
    double c_up_sup = 0.0;    // exact supremum over the window (right limits at thresholds)
    double b_growth = 0.0;    // exact sup of mu B(x,r) / r over r >= r_min
    bool upper_ok = true;     // false when the window reaches a single-atom ball
    std::size_t witness_center = 0;
    double witness_radius = 0.0;
};

AhlforsFit ahlfors_fit(const QuasimetricSpace& space, const AhlforsOptions& opts = {});

struct NestedBallReport {
    bool pass = true;
    double worst_ratio = 0.0;   // max of lhs / rhs over nested pairs
    std::size_t pairs_checked = 0;
    std::size_t outer_center = 0, inner_center = 0;
    double outer_radius = 0.0, inner_radius = 0.0;
};

/// mu B(x,R) / mu B(y,r) <= C_d (R/r)^{log2 C_d} for nested representative balls.
NestedBallReport nested_ball_bound_check(const QuasimetricSpace& space, double C_d);

struct ChainInclusionReport {
    bool pass = true;
    std::size_t triples_checked = 0;
    std::size_t failures = 0;
};

/// B(x,r) in B(y, C_t(C_s+1) r) in B(x, a_bar r) for every y in B(x,r).
ChainInclusionReport ball_chain_inclusion_check(const QuasimetricSpace& space);

struct GeometryConstants {
    double C_t = 1.0, C_s = 1.0, C_d = 1.0;
    double alpha_lower = 0.0, c_low = 0.0;
    double beta_upper = 0.0, c_up = 0.0;
    double b_growth = 0.0;
    double N_0 = 3.0;
    double a_bar = 3.0;
    double d_X = 0.0;
    double mu_X = 0.0;
};

double dilation_N0(double C_t, double C_s);
double dilation_a_bar(double C_t, double C_s);

GeometryConstants geometry_constants(const QuasimetricSpace& space);

}  // namespace ggm
