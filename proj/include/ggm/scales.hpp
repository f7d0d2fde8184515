#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace ggm {

enum class ScaleKind { power, linear, affine_log, table, zero, composed };
enum class ScaleRole { phi, A };

/**
 * A scale function: either the weight phi (positive, bounded, vanishing at
 * 0+) or the Morrey-exponent shift A (non-decreasing, non-negative,
 * vanishing at 0+).
 *
 * Text form, one per kind:
 *   pow:theta[:c]     c * x^theta
 *   lin:c             c * x
 *   log:c             c / (1 - log(min(x, 1)))
 *   zero              0
 *   table:x:y,x:y,..  piecewise linear through (0,0) and the nodes, constant after
 * Composed functions (such as A2 o phi_bar^{-1}) are built in code only.
 */
class ScaleFunction {
public:
    ScaleFunction();   // zero

    static ScaleFunction parse(std::string_view spec);
    static ScaleFunction composed(std::string description, std::function<double(double)> f);

    double operator()(double x) const { return eval_(x); }

    ScaleKind kind() const { return kind_; }
    const std::vector<double>& params() const { return params_; }
    /// Canonical text form; composed functions return their description.
    const std::string& spec() const { return spec_; }

private:
    ScaleKind kind_ = ScaleKind::zero;
    std::vector<double> params_;
    std::string spec_;
    std::function<double(double)> eval_;
};

struct ScaleValidation {
    bool ok = true;
    double sup = 0.0;          // max over the validation grid
    std::size_t grid_points = 0;
    std::string message;
};

/// Checks the role invariants on a geometric grid over (0, upper].
ScaleValidation validate_scale_function(const ScaleFunction& f, ScaleRole role, double upper);

/// Parses and validates; throws std::invalid_argument naming the broken invariant.
ScaleFunction make_scale_function(std::string_view spec, ScaleRole role, double p, double lambda);

enum class MorreyVariant { measure_power, radius_power, modified };

struct VariantSpec {
    MorreyVariant kind = MorreyVariant::measure_power;
    double gamma = 1.0;      // radius_power: denominator r^{gamma lambda}
    double dilation = 1.0;   // modified: denominator mu B(x, dilation r)^lambda
};

/// One generalized grand Morrey norm.
struct GrandParams {
    double p = 2.0;
    double lambda = 0.0;
    ScaleFunction phi;
    ScaleFunction A;
    VariantSpec variant;
    double a = std::numeric_limits<double>::infinity();   // sup{x > 0 : A(x) <= lambda}
    double s_max = 1.0;                                    // min(p - 1, a)
    bool closed_range = false;   // epsilon in (0, p-1] instead of (0, s_max)

    /// Upper end of the epsilon range actually swept.
    double eps_upper() const { return closed_range ? p - 1.0 : s_max; }
};

/// a by bisection (tolerance 1e-10; a = +inf when A <= lambda everywhere).
double solve_a(const ScaleFunction& A, double lambda);

GrandParams derive_grand_params(double p, double lambda, ScaleFunction phi, ScaleFunction A,
                                VariantSpec variant = {});

/// The modified-variant grand norm: phi = eps^theta, epsilon over (0, p-1].
GrandParams modified_grand_params(double p, double lambda, double theta, ScaleFunction A,
                                  double dilation);

/// q with 1/p - 1/q = alpha / ((1 - lambda) gamma).
double sobolev_exponent(double p, double lambda, double alpha, double gamma);

/// Parameters of the Riesz-potential theorems.
struct PotentialSetup {
    double p = 2.0, q = 4.0, lambda = 0.5;
    double alpha = 0.125, gamma = 1.0;
    double theta1 = 1.0, theta2 = 2.0;
    double delta = 0.1;
    ScaleFunction A1, A2;
};

/// delta default: 0.1 min(p - 1, q - 1).
double default_delta(double p, double q);

enum class AuxFunction { phi_bar, phi_tilde, A_bar, A_tilde, phi, Phi, psi, Psi };

AuxFunction parse_aux_function(std::string_view name);

/// Auxiliary functions of the Riesz-potential theorems. With enforce_window
/// the argument must lie in (0, delta]; throws when a denominator vanishes.
double aux_eval(AuxFunction name, double x, const PotentialSetup& setup, bool enforce_window = true);

/// Bisection inverse of an increasing function on [lo, hi].
double invert_increasing(const std::function<double(double)>& f, double y, double lo, double hi);

struct InverseResult {
    double x = 0.0;
    bool boundary = false;   // y at or below the 0+ limit; x clamped to 0
};

/// Inverse of phi_bar on (0, delta]; checks monotonicity on a grid first.
InverseResult invert_phi_bar(double y, const PotentialSetup& setup);
InverseResult invert_phi_tilde(double y, const PotentialSetup& setup);

/// Presets: A2(x) = slope x and A1 = A2 o phi_bar^{-1}, constant beyond phi_bar(delta).
PotentialSetup corollary_setup(double p, double lambda, double gamma, double alpha, double slope,
                               double theta1, double theta2);
/// Mirrored presets: A1(x) = slope x and A2 = A1 o phi_tilde^{-1}.
PotentialSetup mirrored_setup(double p, double lambda, double gamma, double alpha, double slope,
                              double theta1, double theta2);

enum class AdmissibilityMode { riesz_A2, riesz_A1 };   // conditions on A2 / on A1

struct Admissibility {
    bool ok = true;
    std::vector<std::string> reasons;
    double B = 0.0;                 // derivative limit at 0+ of the conditioned function
    double B_bound = 0.0;
    double theta_threshold = 0.0;
};

/// One-sided derivative at 0+ by forward differences with Richardson refinement.
double derivative_at_zero(const ScaleFunction& f, double delta);

Admissibility check_admissibility(const PotentialSetup& setup, AdmissibilityMode mode);

/// Unspecified constants of the boundedness results, default 1.
struct FreeConstants {
    double c0 = 1.0;        // covering constant of the maximal bound
    double c_cz = 1.0;      // singular-integral bound
    double c_riesz = 1.0;   // Riesz bound, radius normalisation
    double b0 = 1.0;        // Riesz bound, measure normalisation
    double C_alpha = 1.0;
    double c_alpha_domination = 1.0;
    bool calibrated = false;   // true when supplied by the user
};

enum class ConstantKind {
    maximal,
    cz,
    riesz,
    riesz_measure,
    lp_modified_maximal,
    morrey_modified_maximal,
    k_alpha,
    hedberg
};

struct ConstantParams {
    double p = 2.0, q = 2.0, lambda = 0.0;
    double alpha = 0.0, gamma = 1.0;
    double C_d = 1.0;
    double b = 1.0, N0 = 1.0;
};

struct TheoreticalConstant {
    double value = 0.0;                 // evaluated with the supplied free constants
    std::string expression;             // formula with free-constant symbols
    std::vector<std::string> symbols;   // free constants it depends on
};

TheoreticalConstant theoretical_constant(ConstantKind kind, const ConstantParams& params,
                                         const FreeConstants& consts = {});

inline double conjugate(double p) { return p / (p - 1.0); }

}  // namespace ggm
