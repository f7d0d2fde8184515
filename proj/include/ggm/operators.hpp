#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "ggm/norms.hpp"
#include "ggm/scales.hpp"
#include "ggm/space.hpp"

namespace ggm {

/**
 * Maximal averages over representative balls.
 *
 * Plain (dilation 1): sup over r in (0, d_X) of the average of |f| on B(x,r).
 * Modified (dilation N0): sup over r > 0 of the integral of |f| on B(x,r)
 * divided by mu B(x, N0 r).
 */
class MaximalEvaluator {
public:
    MaximalEvaluator(const QuasimetricSpace& space, double dilation, bool modified);

    GridFunction apply(const GridFunction& f) const;

    const QuasimetricSpace& space() const { return *space_; }

private:
    struct Entry {
        std::size_t count;
        double den;
    };
    const QuasimetricSpace* space_;
    std::vector<Entry> entries_;
    std::vector<std::size_t> center_begin_;
};

GridFunction maximal(const GridFunction& f, const QuasimetricSpace& space);
GridFunction modified_maximal(const GridFunction& f, const QuasimetricSpace& space, double N0);

enum class PotentialTag { gamma_kernel, measure_kernel, k_alpha };

struct PotentialKind {
    PotentialTag tag = PotentialTag::gamma_kernel;
    double alpha = 0.5;
    double gamma = 1.0;   // gamma_kernel only
};

PotentialTag parse_potential_tag(std::string_view name);
std::string potential_tag_name(PotentialTag tag);

/// Throws std::invalid_argument when alpha (or gamma) is out of range.
void validate_potential_kind(const PotentialKind& kind);

/// Dense operator f -> sum_{y != x} k(x,y) f(y) w_y, diagonal excluded.
class KernelOperator {
public:
    KernelOperator(const QuasimetricSpace& space, const std::function<double(std::size_t, std::size_t)>& k);

    GridFunction apply(const GridFunction& f) const;
    double kernel(std::size_t x, std::size_t y) const { return k_[x * n_ + y]; }
    std::size_t size() const { return n_; }
    /// Operator norm on L^2(mu), by power iteration.
    double l2_norm(double tol = 1e-8, std::size_t max_iter = 20000) const;

private:
    std::size_t n_;
    std::vector<double> k_;   // row-major, zero diagonal
    std::vector<double> w_;
};

KernelOperator potential_operator(const QuasimetricSpace& space, const PotentialKind& kind);
GridFunction potential(const GridFunction& f, const QuasimetricSpace& space, const PotentialKind& kind);

struct CZKernel {
    std::string name;
    std::function<double(std::size_t, std::size_t)> K;
    ScaleFunction w;            // modulus of continuity
    std::size_t size = 0;       // points the kernel is defined on (0: any)
    double size_constant = 0.0;
    double smoothness_constant = 0.0;
    bool validated = false;
};

/// K(x,y) = 1/(x_1 - y_1) on the first coordinate, modulus w(t) = t.
CZKernel hilbert_kernel(const QuasimetricSpace& space);
/// Explicit kernel matrix (diagonal ignored) with a modulus in scale-function text form.
CZKernel matrix_kernel(std::vector<std::vector<double>> matrix, std::string_view modulus);

struct DiniResult {
    bool converges = false;
    double integral = 0.0;   // partial sum plus tail estimate (inf when divergent)
    double tail_ratio = 0.0;
    double tail_slope = 0.0;
    std::size_t blocks = 0;
};

/// int_0^1 w(t)/t dt by dyadic blocks in log t with a tail test.
DiniResult dini_integral(const std::function<double(double)>& w);

struct ModulusReport {
    bool positive = true;
    bool monotone = true;
    double witness_t1 = 0.0, witness_t2 = 0.0;   // t1 < t2 with w(t1) > w(t2)
    double c_delta = 0.0;
    bool delta2 = true;
    DiniResult dini;
};

ModulusReport check_modulus(const std::function<double(double)>& w);

struct CZReport {
    bool ok = false;
    double size_constant = 0.0;
    double smoothness_constant = 0.0;
    double triple_C = 2.0;
    std::size_t triples = 0;
    ModulusReport modulus;
    double l2_norm = 0.0;
    std::vector<std::string> failures;
};

/// Checks the kernel conditions; on success marks the kernel validated and stores its constants.
CZReport validate_cz_kernel(CZKernel& kernel, const QuasimetricSpace& space, double triple_C = 2.0);

/// Throws std::logic_error for an unvalidated kernel.
GridFunction cz_apply(const GridFunction& f, const QuasimetricSpace& space, const CZKernel& kernel);

struct WeakTypeResult {
    double worst = 0.0;   // max over thresholds of t * mu{g > t} / ||f||_1
    double threshold = 0.0;
};

/// Weak (1,1) quotient of g = Tf against f over all thresholds where mu{g > t} changes.
WeakTypeResult weak_type_quotient(const GridFunction& f, const GridFunction& g, const QuasimetricSpace& space);

}  // namespace ggm
