#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ggm/scales.hpp"
#include "ggm/space.hpp"

namespace ggm {

/// Values per point, in the index order of the owning space.
using GridFunction = std::vector<double>;

/// Discretisation of a supremum over epsilon in (0, upper) or (0, upper].
struct EpsilonGrid {
    std::vector<double> nodes;   // increasing
    std::size_t geometric_count = 65;
    double upper = 1.0;
    bool closed = false;
};

/**
 * Geometric nodes from upper*1e-6 to upper*(1-1e-9) (or to upper itself when
 * closed), the uniform nodes upper*j/m with m = (geometric_count-1)/4, and any
 * extra nodes that lie inside the range. Counts k, 2k-1, 4k-3 give nested grids
 * when k-1 is divisible by 4.
 */
EpsilonGrid make_epsilon_grid(double upper, std::size_t geometric_count = 65, bool closed = false,
                              std::span<const double> extra = {});

double lebesgue_norm(const GridFunction& f, const QuasimetricSpace& space, double p);

struct MorreyResult {
    double value = 0.0;
    std::size_t center = 0;
    double radius = 0.0;
};

/**
 * Precomputed representative balls for one Morrey variant.
 *
 * For each centre the representative radii are stored with the number of
 * points of the ball (a prefix of the centre's distance order), the ball
 * measure and the variant's denominator (mu B, r^gamma or mu B(x, a r)).
 */
class MorreyEvaluator {
public:
    MorreyEvaluator(const QuasimetricSpace& space, VariantSpec variant, RadiusRange range);

    /// den^{-lambda} per stored ball, in storage order.
    std::vector<double> factors(double lambda) const;

    MorreyResult norm(const GridFunction& f, double p, double lambda) const;
    MorreyResult norm_with(const GridFunction& f, double p, std::span<const double> factors) const;

    /// max over balls of muB^{1/pe - 1/ps} den^{ls/ps - le/pe} (Hoelder chain factor).
    double chain_factor(double pe, double le, double ps, double ls) const;

    const QuasimetricSpace& space() const { return *space_; }
    std::size_t ball_count() const { return entries_.size(); }

private:
    struct Entry {
        std::size_t center;
        std::size_t count;
        double radius;
        double measure;
        double den;
    };
    const QuasimetricSpace* space_;
    VariantSpec variant_;
    std::vector<Entry> entries_;   // grouped by centre
    std::vector<std::size_t> center_begin_;
};

MorreyResult morrey_norm(const GridFunction& f, const QuasimetricSpace& space, double p, double lambda,
                         VariantSpec variant = {}, RadiusRange range = RadiusRange::open);

struct NormResult {
    double value = 0.0;
    double eps = 0.0;   // argmax epsilon (0 when not applicable)
    std::size_t center = 0;
    double radius = 0.0;
};

NormResult grand_lebesgue_norm(const GridFunction& f, const QuasimetricSpace& space, double p, double theta,
                               std::size_t geometric_count = 65);

/**
 * Evaluates Phi(f, s) = sup_{eps < s} phi(eps)^{1/(p-eps)} ||f||_{p-eps, lambda-A(eps)}
 * on a fixed epsilon grid. Node data (exponents, weights, ball factors) is
 * computed once so many functions can be evaluated cheaply.
 */
class GrandEvaluator {
public:
    GrandEvaluator(const QuasimetricSpace& space, GrandParams params, EpsilonGrid grid,
                   RadiusRange range = RadiusRange::open);

    const GrandParams& params() const { return params_; }
    const EpsilonGrid& grid() const { return grid_; }
    std::size_t node_count() const { return nodes_.size(); }
    double node_eps(std::size_t k) const { return nodes_[k].eps; }
    double node_weight(std::size_t k) const { return nodes_[k].weight; }
    double node_p(std::size_t k) const { return nodes_[k].p; }
    double node_lambda(std::size_t k) const { return nodes_[k].lambda; }
    /// Index of the node equal to eps (exact match), or node_count().
    std::size_t find_node(double eps) const;

    /// Morrey norm of f at node k (no epsilon weight).
    MorreyResult node_morrey(const GridFunction& f, std::size_t k) const;
    /// phi(eps)^{1/(p-eps)} times node_morrey.
    double node_term(const GridFunction& f, std::size_t k) const;

    /// Max of node terms over eps < s (eps <= s when closed_at_s).
    NormResult phi_functional(const GridFunction& f, double s, bool closed_at_s = false) const;
    /// node_morrey values of f for every node.
    std::vector<double> node_values(const GridFunction& f) const;
    /// phi_functional computed from precomputed node values.
    double max_term(std::span<const double> values, double s, bool closed_at_s = false) const;
    /**
     * C with Phi(f, upper) <= C phi(sigma)^{-1/(p-sigma)} Phi(f, sigma], the
     * right side taken over nodes up to and including node sigma. Exact on the
     * grid: Hoelder on each ball gives the chain factor for every eps >= sigma.
     */
    double dominance_constant(std::size_t sigma) const;
    /// The grand norm: phi_functional at the upper end of the range.
    NormResult norm(const GridFunction& f) const;

    /// Chain factor between nodes (epsilon node e, sigma node s).
    double chain_factor(std::size_t e, std::size_t s) const;

    const MorreyEvaluator& morrey() const { return morrey_; }

private:
    struct Node {
        double eps, p, lambda, weight;
        std::vector<double> factors;
    };
    GrandParams params_;
    EpsilonGrid grid_;
    MorreyEvaluator morrey_;
    std::vector<Node> nodes_;
};

NormResult phi_functional(const GridFunction& f, const QuasimetricSpace& space, const GrandParams& params,
                          double s, std::size_t geometric_count = 65);

NormResult grand_morrey_norm(const GridFunction& f, const QuasimetricSpace& space, const GrandParams& params,
                             std::size_t geometric_count = 65);

}  // namespace ggm
