#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ggm/norms.hpp"
#include "ggm/operators.hpp"
#include "ggm/scales.hpp"
#include "ggm/space.hpp"

namespace ggm {

struct FamilyMember {
    std::string id;
    GridFunction values;
};

/**
 * Test functions. Spec strings:
 *   ball-indicators[:cap]   indicator of every distinct representative ball (evenly thinned to cap)
 *   point-masses            one singleton indicator per point
 *   power-profiles          d(., x0)^-beta, beta in {0.25, 0.5, 0.75}, a few centres x0
 *   random-step[:count]     [0, 2]-valued steps on random index blocks (needs a seed)
 *   oscillating             +-1 patterns with period 2, 4, 8, ... in index order
 *   mixed[:count]           all of the above (ball cap 256)
 */
struct FunctionFamily {
    std::string spec;
    std::optional<std::uint64_t> seed;
    std::vector<FamilyMember> members;
};

FunctionFamily generate_family(const QuasimetricSpace& space, std::string_view spec,
                               std::optional<std::uint64_t> seed = std::nullopt);

struct Operator {
    std::string name;
    std::function<GridFunction(const GridFunction&)> apply;
};

Operator identity_operator();

struct RatioResult {
    double ratio = 0.0;
    std::size_t witness = 0;
    double sharpened = 0.0;   // coordinate-ascent refinement of the witness
    std::size_t evaluated = 0;
};

/// max over members of out(Uf) / in(f), skipping in(f) = 0. Throws when every member has in(f) = 0.
RatioResult empirical_ratio(const Operator& op, const FunctionFamily& family,
                            const std::function<double(const GridFunction&)>& norm_in,
                            const std::function<double(const GridFunction&)>& norm_out, bool sharpen = false);

/// Cyclic multiplicative coordinate ascent (factors 1.1 and 0.9), `iterations` coordinate visits.
double sharpen_ratio(const GridFunction& start, const std::function<double(const GridFunction&)>& ratio,
                     std::size_t iterations = 32);

struct DominanceReport {
    bool ok = false;
    double lhs = 0.0;        // Phi(f, s)
    double rhs = 0.0;        // C phi(sigma)^{-1/(p-sigma)} Phi(f, sigma]
    double constant = 0.0;   // C
    double d_X_factor = 0.0; // max{1, d_X^gamma}, the size bound the chain factor obeys
    double delta_min = 0.0, delta_max = 0.0;
    bool delta_ok = false;   // 0 <= Delta(eps, sigma) <= 1 on grid eps in [sigma, s)
};

/// Delta(eps, sigma) = (1 + A(eps) - lambda)/(p - eps) - (1 + A(sigma) - lambda)/(p - sigma).
double dominance_delta(const GrandParams& params, double eps, double sigma);

DominanceReport verify_dominance(const GridFunction& f, const QuasimetricSpace& space, const GrandParams& params,
                                 double sigma, double s, std::size_t geometric_count = 65, double gamma = 1.0);

enum class Pairing { identity, phi_bar, phi_tilde_inverse };

struct EpsRow {
    double eps = 0.0, eta = 0.0;
    double constant = 0.0;   // measured per-eps Morrey constant
    std::size_t witness = 0;
};

struct ReductionReport {
    double sigma = 0.0;
    double grand_ratio = 0.0;
    std::size_t witness = 0;
    double sharpened = 0.0;
    double dominance_constant = 0.0;
    double psi_sigma_factor = 0.0;   // psi(sigma)^{-1/(q-sigma)}
    double ratio_condition = 0.0;    // sup psi(eps)^{1/(q-eps)} / phi(eta)^{1/(p-eta)} on the grid
    double sup_constant = 0.0, min_constant = 0.0;
    double assembled = 0.0;
    bool consistent = false;         // grand_ratio <= assembled
    double uniformity = 0.0;         // sup / min of per-eps constants
    std::vector<EpsRow> rows;
};

struct ReductionSetup {
    GrandParams in, out;
    double sigma = 0.0;
    std::function<double(double)> eta;   // input index paired with output index eps
    RadiusRange range = RadiusRange::open;
    std::size_t geometric_count = 65;
    bool sharpen = false;
};

/// Throws std::domain_error when the psi/phi ratio condition diverges or a paired eta leaves the input range.
ReductionReport verify_reduction(const Operator& op, const QuasimetricSpace& space, const ReductionSetup& setup,
                                 const FunctionFamily& family);

struct HedbergReport {
    bool ok = true;
    double worst = 0.0;            // max over points of lhs / rhs (0/0 counted as 0)
    std::size_t worst_point = 0;
    std::size_t failures = 0;
    double A = 0.0, b = 0.0, N0 = 0.0;
    double exp_maximal = 0.0, exp_norm = 0.0;
    double norm = 0.0;             // modified Morrey norm of f, dilation N0
};

/// Growth constant b and window used by the Hedberg check (r >= min positive distance).
AhlforsFit growth_fit(const QuasimetricSpace& space);

HedbergReport verify_hedberg(const GridFunction& f, const QuasimetricSpace& space, double p, double lambda,
                             double alpha);

struct DominationReport {
    double c_alpha = 0.0;
    std::size_t witness = 0, point = 0;
};

/// max of I^alpha f(x) / Mf(x) over nonnegative members and points with Mf(x) > 0.
DominationReport pointwise_domination(const QuasimetricSpace& space, const FunctionFamily& family,
                                      const PotentialKind& kind);

struct CertParams {
    std::optional<double> p, q, lambda, alpha, gamma, theta1, theta2, sigma, slope, N0;
    std::optional<std::string> phi, psi, A, A2;
    std::size_t geometric_count = 65;
    double triple_C = 2.0;
    bool sharpen = true;
    FreeConstants consts;
};

struct CertReport {
    std::string theorem;
    std::string space_id;
    std::string family_spec;
    std::size_t family_size = 0;
    std::map<std::string, double> params;
    std::map<std::string, std::string> labels;   // scale functions, operator, norms
    std::map<std::string, double> hypotheses;    // C_d, N0, a_bar, b, window bounds, ...
    double ratio = 0.0;
    double sharpened = 0.0;
    std::string witness;
    TheoreticalConstant constant;
    bool absolute = false;           // constant has no free symbols
    bool calibrated_applicable = false;
    bool calibrated_pass = true;
    bool finite = true;
    double uniformity = 1.0;
    bool uniform = true;
    std::vector<double> refinement_ratios;   // grids k, 2k-1, 4k-3
    double refinement_delta = 0.0;           // max(|r_2k - r_k|, 1e-3 r_k)
    std::vector<double> refinement_deltas;   // deltas of the two doublings
    bool refinement_stable = true;
    bool structural_pass = true;
    std::optional<ReductionReport> reduction;
    std::optional<HedbergReport> hedberg;
    std::vector<std::string> notes;

    bool passed() const { return structural_pass && (!calibrated_applicable || calibrated_pass); }
};

const std::vector<std::string>& theorem_ids();

/// Throws std::invalid_argument for inadmissible parameters and std::domain_error for failed hypotheses.
CertReport certify_boundedness(std::string_view theorem_id, const QuasimetricSpace& space,
                               const FunctionFamily& family, const CertParams& params,
                               std::string_view space_id = "space");

}  // namespace ggm
