#include "ggm/scales.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ggm {

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double to_double(const std::string& s, std::string_view spec) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("scale function: malformed number '" + s + "' in '" +
                                    std::string(spec) + "'");
    }
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t count) {
    std::vector<double> g(count);
    const double ratio = std::log(hi / lo) / static_cast<double>(count - 1);
    for (std::size_t k = 0; k < count; ++k) g[k] = lo * std::exp(ratio * static_cast<double>(k));
    g.back() = hi;
    return g;
}

}  // namespace

ScaleFunction::ScaleFunction() : spec_("zero"), eval_([](double) { return 0.0; }) {}

ScaleFunction ScaleFunction::parse(std::string_view spec) {
    ScaleFunction f;
    const auto colon = spec.find(':');
    const std::string kind(spec.substr(0, colon));
    const std::string rest = colon == std::string_view::npos ? "" : std::string(spec.substr(colon + 1));

    if (kind == "zero") {
        if (!rest.empty()) throw std::invalid_argument("scale function: 'zero' takes no parameters");
        return f;
    }
    if (kind == "pow") {
        auto parts = split(rest, ':');
        if (parts.empty() || parts.size() > 2 || parts[0].empty())
            throw std::invalid_argument("scale function: expected pow:theta[:c]");
        const double theta = to_double(parts[0], spec);
        const double c = parts.size() == 2 ? to_double(parts[1], spec) : 1.0;
        if (!(theta > 0.0)) throw std::invalid_argument("scale function: pow exponent must be positive");
        f.kind_ = ScaleKind::power;
        f.params_ = {theta, c};
        f.spec_ = parts.size() == 2 ? "pow:" + num(theta) + ":" + num(c) : "pow:" + num(theta);
        f.eval_ = [theta, c](double x) { return x <= 0.0 ? 0.0 : c * std::pow(x, theta); };
        return f;
    }
    if (kind == "lin") {
        const double c = to_double(rest, spec);
        f.kind_ = ScaleKind::linear;
        f.params_ = {c};
        f.spec_ = "lin:" + num(c);
        f.eval_ = [c](double x) { return c * x; };
        return f;
    }
    if (kind == "log") {
        const double c = to_double(rest, spec);
        f.kind_ = ScaleKind::affine_log;
        f.params_ = {c};
        f.spec_ = "log:" + num(c);
        f.eval_ = [c](double x) {
            if (x <= 0.0) return 0.0;
            return c / (1.0 - std::log(std::min(x, 1.0)));
        };
        return f;
    }
    if (kind == "table") {
        std::vector<double> xs{0.0}, ys{0.0};
        std::string canon = "table:";
        for (const auto& node : split(rest, ',')) {
            auto xy = split(node, ':');
            if (xy.size() != 2) throw std::invalid_argument("scale function: table nodes are x:y");
            const double x = to_double(xy[0], spec), y = to_double(xy[1], spec);
            if (!(x > xs.back())) throw std::invalid_argument("scale function: table x must increase from 0");
            xs.push_back(x);
            ys.push_back(y);
            if (canon.size() > 6) canon += ",";
            canon += num(x) + ":" + num(y);
        }
        f.kind_ = ScaleKind::table;
        for (std::size_t k = 1; k < xs.size(); ++k) {
            f.params_.push_back(xs[k]);
            f.params_.push_back(ys[k]);
        }
        f.spec_ = canon;
        f.eval_ = [xs, ys](double x) {
            if (x <= 0.0) return 0.0;
            if (x >= xs.back()) return ys.back();
            const auto it = std::upper_bound(xs.begin(), xs.end(), x);
            const std::size_t k = static_cast<std::size_t>(it - xs.begin());
            const double t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
            return ys[k - 1] + t * (ys[k] - ys[k - 1]);
        };
        return f;
    }
    throw std::invalid_argument("scale function: unknown kind '" + kind + "'");
}

ScaleFunction ScaleFunction::composed(std::string description, std::function<double(double)> fn) {
    ScaleFunction f;
    f.kind_ = ScaleKind::composed;
    f.spec_ = std::move(description);
    f.eval_ = std::move(fn);
    return f;
}

ScaleValidation validate_scale_function(const ScaleFunction& f, ScaleRole role, double upper) {
    ScaleValidation v;
    const auto grid = geometric_grid(1e-12, upper, 241);
    v.grid_points = grid.size();
    std::vector<double> vals(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) vals[k] = f(grid[k]);

    auto fail = [&](std::string msg) {
        v.ok = false;
        v.message = std::move(msg);
        return v;
    };
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!std::isfinite(vals[k])) return fail(role == ScaleRole::phi ? "phi must be bounded" : "A must be finite");
        v.sup = std::max(v.sup, vals[k]);
    }
    if (role == ScaleRole::phi) {
        for (double y : vals)
            if (!(y > 0.0)) return fail("phi must be positive");
    } else {
        for (double y : vals)
            if (y < 0.0) return fail("A must be non-negative");
        for (std::size_t k = 1; k < vals.size(); ++k)
            if (vals[k] < vals[k - 1] - 1e-15 * std::fabs(vals[k - 1]))
                return fail("A must be non-decreasing");
    }
    // Vanishing at 0+: the value at 1e-12 must sit well below the value at
    // the reference point (or be numerically zero).
    const double ref = f(std::min(1e-2, upper));
    const double tiny = vals.front();
    if (!(tiny <= 1e-9 || tiny <= 0.5 * ref)) return fail("scale function must vanish at 0+");
    return v;
}

ScaleFunction make_scale_function(std::string_view spec, ScaleRole role, double p, double lambda) {
    if (!(p > 1.0)) throw std::invalid_argument("scale function: p must exceed 1");
    (void)lambda;
    auto f = ScaleFunction::parse(spec);
    const double upper = role == ScaleRole::phi ? p - 1.0 : std::max(p - 1.0, 1.0);
    const auto v = validate_scale_function(f, role, upper);
    if (!v.ok) throw std::invalid_argument("scale function '" + f.spec() + "': " + v.message);
    return f;
}

double solve_a(const ScaleFunction& A, double lambda) {
    const double inf = std::numeric_limits<double>::infinity();
    if (A(1e-12) > lambda) return 0.0;
    double lo, hi;
    if (A(1.0) <= lambda) {
        lo = 1.0;
        hi = 2.0;
        while (A(hi) <= lambda) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e12) return inf;
        }
    } else {
        hi = 1.0;
        lo = 0.5;
        while (A(lo) > lambda) {
            hi = lo;
            lo *= 0.5;
        }
    }
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (A(mid) <= lambda) lo = mid; else hi = mid;
    }
    return lo;
}

GrandParams derive_grand_params(double p, double lambda, ScaleFunction phi, ScaleFunction A,
                                VariantSpec variant) {
    if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("grand params: p must lie in (1, inf)");
    if (!(lambda >= 0.0 && lambda < 1.0)) throw std::invalid_argument("grand params: lambda must lie in [0, 1)");
    GrandParams g;
    g.p = p;
    g.lambda = lambda;
    g.phi = std::move(phi);
    g.A = std::move(A);
    g.variant = variant;
    g.a = solve_a(g.A, lambda);
    g.s_max = std::min(p - 1.0, g.a);
    if (!(g.s_max > 0.0)) throw std::invalid_argument("grand params: s_max <= 0, the grandification range is empty");
    return g;
}

GrandParams modified_grand_params(double p, double lambda, double theta, ScaleFunction A, double dilation) {
    if (!(dilation >= 1.0)) throw std::invalid_argument("grand params: dilation must be >= 1");
    if (!(theta > 0.0)) throw std::invalid_argument("grand params: theta must be positive");
    VariantSpec v;
    v.kind = MorreyVariant::modified;
    v.dilation = dilation;
    auto g = derive_grand_params(p, lambda, ScaleFunction::parse("pow:" + num(theta)), std::move(A), v);
    g.closed_range = true;
    return g;
}

double sobolev_exponent(double p, double lambda, double alpha, double gamma) {
    if (!(p > 1.0)) throw std::invalid_argument("sobolev exponent: p must exceed 1");
    if (!(lambda >= 0.0 && lambda < 1.0)) throw std::invalid_argument("sobolev exponent: lambda must lie in [0, 1)");
    if (!(gamma > 0.0)) throw std::invalid_argument("sobolev exponent: gamma must be positive");
    const double top = (1.0 - lambda) * gamma;
    if (!(alpha > 0.0 && alpha < top / p))
        throw std::invalid_argument("sobolev exponent: alpha must satisfy 0 < alpha < (1-lambda) gamma / p");
    return p * top / (top - alpha * p);
}

double default_delta(double p, double q) { return 0.1 * std::min(p - 1.0, q - 1.0); }

AuxFunction parse_aux_function(std::string_view name) {
    if (name == "phi_bar") return AuxFunction::phi_bar;
    if (name == "phi_tilde") return AuxFunction::phi_tilde;
    if (name == "A_bar") return AuxFunction::A_bar;
    if (name == "A_tilde") return AuxFunction::A_tilde;
    if (name == "phi") return AuxFunction::phi;
    if (name == "Phi") return AuxFunction::Phi;
    if (name == "psi") return AuxFunction::psi;
    if (name == "Psi") return AuxFunction::Psi;
    throw std::invalid_argument("aux function: unknown name '" + std::string(name) + "'");
}

namespace {

double checked_den(double den, double scale) {
    if (!(std::fabs(den) > 1e-14 * std::max(1.0, scale)))
        throw std::domain_error("aux function: denominator vanishes, outside admissible window");
    return den;
}

// Both functions are written over a common denominator with the x-free part
// g0 (p - q) + alpha p q grouped apart. It vanishes under the Sobolev
// relation, so small arguments do not lose digits to cancellation.
double phi_bar_raw(double x, const PotentialSetup& s) {
    const double g0 = s.gamma * (1.0 - s.lambda), gA = s.gamma * s.A2(x);
    const double den = checked_den(g0 + gA - s.alpha * (x - s.q), g0 + gA);
    const double c = g0 * (s.p - s.q) + s.alpha * s.p * s.q;
    return (c + x * (g0 - s.alpha * s.p) + gA * (s.p - s.q + x)) / den;
}

double phi_tilde_raw(double x, const PotentialSetup& s) {
    const double g0 = s.gamma * (1.0 - s.lambda), gA = s.gamma * s.A1(x);
    const double den = checked_den(g0 + gA - s.alpha * (s.p - x), g0 + gA);
    const double c = g0 * (s.q - s.p) - s.alpha * s.p * s.q;
    return (c + x * (g0 + s.alpha * s.q) + gA * (s.q - s.p + x)) / den;
}

double A_bar_raw(double x, const PotentialSetup& s) {
    const double L = 1.0 - s.lambda + s.A2(x);
    return 1.0 - s.alpha * (x - s.q) / checked_den(s.gamma * L, 1.0);
}

double A_tilde_raw(double x, const PotentialSetup& s) {
    const double L = 1.0 - s.lambda + s.A1(x);
    return L / checked_den(s.gamma * L - (s.p - x) * s.alpha, s.gamma * L);
}

double bisect(const std::function<double(double)>& f, double y, double lo, double hi) {
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (f(mid) < y) lo = mid; else hi = mid;
    }
    const double flo = std::fabs(f(lo) - y), fhi = std::fabs(f(hi) - y);
    return flo <= fhi ? lo : hi;
}

void require_increasing(const std::function<double(double)>& f, double delta, const char* name) {
    const auto grid = geometric_grid(delta * 1e-12, delta, 200);
    double prev = f(grid[0]);
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const double cur = f(grid[k]);
        if (!(cur > prev))
            throw std::domain_error(std::string(name) + " is not increasing on (0, delta]");
        prev = cur;
    }
}

}  // namespace

double aux_eval(AuxFunction name, double x, const PotentialSetup& setup, bool enforce_window) {
    auto in_window = [&](double t) {
        if (enforce_window && !(t > 0.0 && t <= setup.delta * (1.0 + 1e-12)))
            throw std::domain_error("aux function: argument outside (0, delta]");
    };
    switch (name) {
        case AuxFunction::phi_bar: in_window(x); return phi_bar_raw(x, setup);
        case AuxFunction::phi_tilde: in_window(x); return phi_tilde_raw(x, setup);
        case AuxFunction::A_bar: in_window(x); return A_bar_raw(x, setup);
        case AuxFunction::A_tilde: in_window(x); return A_tilde_raw(x, setup);
        case AuxFunction::phi: in_window(x); return std::pow(phi_bar_raw(x, setup), A_bar_raw(x, setup));
        case AuxFunction::Phi: in_window(x); return std::pow(phi_tilde_raw(x, setup), A_tilde_raw(x, setup));
        case AuxFunction::psi: {
            const double t = std::pow(x, setup.theta1);
            in_window(t);
            return std::pow(phi_bar_raw(t, setup), A_bar_raw(t, setup));
        }
        case AuxFunction::Psi: {
            const double t = std::pow(x, setup.theta1);
            in_window(t);
            return std::pow(phi_tilde_raw(t, setup), A_tilde_raw(t, setup));
        }
    }
    throw std::invalid_argument("aux function: unknown");
}

double invert_increasing(const std::function<double(double)>& f, double y, double lo, double hi) {
    return bisect(f, y, lo, hi);
}

namespace {

InverseResult invert_window(const std::function<double(double)>& f, double y, double delta,
                            const char* name) {
    require_increasing(f, delta, name);
    const double top = f(delta);
    if (y > top + 1e-15 * std::max(1.0, std::fabs(top)))
        throw std::domain_error(std::string(name) + " inverse: value outside the range on (0, delta]");
    const double bottom = f(0.0);
    if (y <= bottom) return {0.0, true};
    return {bisect(f, y, 0.0, delta), false};
}

}  // namespace

InverseResult invert_phi_bar(double y, const PotentialSetup& setup) {
    return invert_window([&](double x) { return phi_bar_raw(x, setup); }, y, setup.delta, "phi_bar");
}

InverseResult invert_phi_tilde(double y, const PotentialSetup& setup) {
    return invert_window([&](double x) { return phi_tilde_raw(x, setup); }, y, setup.delta, "phi_tilde");
}

PotentialSetup corollary_setup(double p, double lambda, double gamma, double alpha, double slope,
                               double theta1, double theta2) {
    PotentialSetup s;
    s.p = p;
    s.lambda = lambda;
    s.gamma = gamma;
    s.alpha = alpha;
    s.q = sobolev_exponent(p, lambda, alpha, gamma);
    s.theta1 = theta1;
    s.theta2 = theta2;
    s.delta = default_delta(p, s.q);
    s.A2 = ScaleFunction::parse("lin:" + num(slope));
    auto base = std::make_shared<PotentialSetup>(s);
    const double top = phi_bar_raw(s.delta, s);
    s.A1 = ScaleFunction::composed(
        "A2 o phi_bar^-1 (A2 = " + s.A2.spec() + ")", [base, top](double x) {
            if (x <= 0.0) return 0.0;
            const double y = std::min(x, top);
            const double t = bisect([&](double u) { return phi_bar_raw(u, *base); }, y, 0.0, base->delta);
            return base->A2(t);
        });
    return s;
}

PotentialSetup mirrored_setup(double p, double lambda, double gamma, double alpha, double slope,
                              double theta1, double theta2) {
    PotentialSetup s;
    s.p = p;
    s.lambda = lambda;
    s.gamma = gamma;
    s.alpha = alpha;
    s.q = sobolev_exponent(p, lambda, alpha, gamma);
    s.theta1 = theta1;
    s.theta2 = theta2;
    s.delta = default_delta(p, s.q);
    s.A1 = ScaleFunction::parse("lin:" + num(slope));
    auto base = std::make_shared<PotentialSetup>(s);
    const double top = phi_tilde_raw(s.delta, s);
    s.A2 = ScaleFunction::composed(
        "A1 o phi_tilde^-1 (A1 = " + s.A1.spec() + ")", [base, top](double x) {
            if (x <= 0.0) return 0.0;
            const double y = std::min(x, top);
            const double t = bisect([&](double u) { return phi_tilde_raw(u, *base); }, y, 0.0, base->delta);
            return base->A1(t);
        });
    return s;
}

double derivative_at_zero(const ScaleFunction& f, double delta) {
    auto D = [&](double h) { return (f(2.0 * h) - f(h)) / h; };
    double h = delta / 2.0;
    double prev = 2.0 * D(h) - D(2.0 * h);
    double best = prev;
    for (int k = 0; k < 40 && h > 1e-9; ++k) {
        h *= 0.5;
        const double cur = 2.0 * D(h) - D(2.0 * h);
        best = cur;
        if (std::fabs(cur - prev) < 1e-6 * std::max(1.0, std::fabs(cur))) break;
        prev = cur;
    }
    return best;
}

namespace {

// Central-difference derivative on a geometric grid must vary without jumps.
bool looks_c1(const ScaleFunction& f, double delta) {
    const auto grid = geometric_grid(delta * 1e-6, delta, 400);
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (double x : grid) {
        const double h = x * 1e-4;
        const double d = (f(x + h) - f(x - h)) / (2.0 * h);
        if (!std::isfinite(d)) return false;
        if (std::isfinite(prev)) {
            const double scale = std::max({std::fabs(d), std::fabs(prev), 1e-8});
            if (std::fabs(d - prev) > 0.05 * scale) return false;
        }
        prev = d;
    }
    return true;
}

}  // namespace

Admissibility check_admissibility(const PotentialSetup& s, AdmissibilityMode mode) {
    Admissibility adm;
    auto fail = [&](std::string reason) {
        adm.ok = false;
        adm.reasons.push_back(std::move(reason));
    };
    const double top = (1.0 - s.lambda) * s.gamma;
    if (!(s.p > 1.0)) fail("p must exceed 1");
    if (!(s.lambda > 0.0 && s.lambda < 1.0)) fail("lambda must lie in (0, 1)");
    if (!(s.alpha > 0.0 && s.alpha < top / s.p)) fail("alpha must satisfy 0 < alpha < (1-lambda) gamma / p");
    if (std::fabs((1.0 / s.p - 1.0 / s.q) - s.alpha / top) > 1e-12)
        fail("Sobolev relation 1/p - 1/q = alpha / ((1-lambda) gamma) violated");
    if (!(s.theta1 > 0.0)) fail("theta1 must be positive");
    if (!(s.delta > 0.0)) fail("delta must be positive");
    if (!adm.ok) return adm;

    const auto grid = geometric_grid(s.delta * 1e-6, s.delta, 120);
    if (mode == AdmissibilityMode::riesz_A2) {
        adm.theta_threshold = s.theta1 * (1.0 + s.alpha * s.q / top);
        if (!(s.theta2 >= adm.theta_threshold))
            fail("theta2 >= theta1 [1 + alpha q / ((1-lambda) gamma)] violated: theta2 = " + num(s.theta2) +
                 " < " + num(adm.theta_threshold));
        if (!looks_c1(s.A2, s.delta)) fail("(i) A2 is not C^1 on (0, delta]");
        if (std::fabs(s.A2(1e-14)) > 1e-6) fail("(ii) A2(0+) != 0");
        adm.B = derivative_at_zero(s.A2, s.delta);
        adm.B_bound = (1.0 - s.lambda) * (1.0 - s.lambda) / (s.alpha * s.q * s.q);
        if (!(adm.B >= -1e-6 && adm.B < adm.B_bound))
            fail("(iii) B must satisfy 0 <= B < (1-lambda)^2/(alpha q^2): B = " + num(adm.B) +
                 ", bound = " + num(adm.B_bound));
        try {
            require_increasing([&](double x) { return phi_bar_raw(x, s); }, s.delta, "phi_bar");
            for (double x : grid) {
                const double lhs = s.A1(phi_bar_raw(x, s)), rhs = s.A2(x);
                if (std::fabs(lhs - rhs) > 1e-8 * std::max(1.0, std::fabs(rhs))) {
                    fail("(iv) A1 = A2 o phi_bar^{-1} violated at x = " + num(x));
                    break;
                }
            }
        } catch (const std::domain_error& e) {
            fail(std::string("(iv) ") + e.what());
        }
    } else {
        adm.theta_threshold = s.theta1 * (1.0 + s.alpha * s.q / (1.0 - s.lambda));
        if (!(s.lambda < 1.0 - s.alpha * s.p)) fail("lambda < 1 - alpha p violated");
        if (!(s.theta2 > adm.theta_threshold))
            fail("theta2 > theta1 (1 + alpha q / (1-lambda)) violated: theta2 = " + num(s.theta2) +
                 " <= " + num(adm.theta_threshold));
        if (!looks_c1(s.A1, s.delta)) fail("(i) A1 is not C^1 on (0, delta]");
        if (std::fabs(s.A1(1e-14)) > 1e-6) fail("(ii) A1(0+) != 0");
        adm.B = derivative_at_zero(s.A1, s.delta);
        if (!(adm.B >= -1e-6)) fail("(iii) B1 >= 0 violated: B1 = " + num(adm.B));
        try {
            require_increasing([&](double x) { return phi_tilde_raw(x, s); }, s.delta, "phi_tilde");
            for (double x : grid) {
                const double lhs = s.A2(phi_tilde_raw(x, s)), rhs = s.A1(x);
                if (std::fabs(lhs - rhs) > 1e-8 * std::max(1.0, std::fabs(rhs))) {
                    fail("(iv) A2 = A1 o phi_tilde^{-1} violated at x = " + num(x));
                    break;
                }
            }
        } catch (const std::domain_error& e) {
            fail(std::string("(iv) ") + e.what());
        }
    }
    return adm;
}

TheoreticalConstant theoretical_constant(ConstantKind kind, const ConstantParams& c, const FreeConstants& fc) {
    if (!(c.p > 1.0)) throw std::invalid_argument("constant: p must exceed 1");
    if (!(c.lambda >= 0.0 && c.lambda < 1.0)) throw std::invalid_argument("constant: lambda must lie in [0, 1)");
    const double pc = conjugate(c.p);
    TheoreticalConstant out;
    auto need_alpha = [&](double top) {
        if (!(c.alpha > 0.0 && c.alpha < top / c.p))
            throw std::invalid_argument("constant: alpha outside (0, " + num(top) + "/p)");
    };
    auto hedberg_bracket = [&] {
        return c.b * c.N0 / c.alpha +
               std::pow(c.b, 1.0 / pc - c.lambda / c.p) * std::pow(c.N0, c.lambda / c.p) * c.p /
                   (1.0 - c.lambda - c.alpha * c.p);
    };
    switch (kind) {
        case ConstantKind::maximal: {
            if (!(c.C_d >= 1.0)) throw std::invalid_argument("constant: C_d must be >= 1");
            const double k = std::pow(c.C_d, c.lambda / c.p) * std::pow(pc, 1.0 / c.p);
            out.value = k * fc.c0 + 1.0;
            out.expression = num(k) + " * c_0 + 1";
            out.symbols = {"c_0"};
            return out;
        }
        case ConstantKind::cz: {
            double base;
            if (c.p <= 2.0)
                base = c.p / (c.p - 1.0) + c.p / (2.0 - c.p) + (c.p - c.lambda + 1.0) / (1.0 - c.lambda);
            else
                base = c.p + c.p / (c.p - 2.0) + (c.p - c.lambda + 1.0) / (1.0 - c.lambda);
            if (c.p == 2.0) base = std::numeric_limits<double>::infinity();
            out.value = base * fc.c_cz;
            out.expression = num(base) + " * c_cz";
            out.symbols = {"c_cz"};
            return out;
        }
        case ConstantKind::riesz: {
            const double top = (1.0 - c.lambda) * c.gamma;
            need_alpha(top);
            const double base = top / (c.alpha * (top - c.alpha * c.p)) * (std::pow(pc, 1.0 / c.q) + 1.0);
            out.value = base * fc.c_riesz;
            out.expression = num(base) + " * c_riesz";
            out.symbols = {"c_riesz"};
            return out;
        }
        case ConstantKind::riesz_measure: {
            need_alpha(1.0 - c.lambda);
            const double inner = c.p / (1.0 - c.lambda - c.alpha * c.p);
            const double tail = std::pow(pc, 1.0 / c.q) + 1.0;
            out.value = fc.b0 * (fc.C_alpha + inner) * tail;
            out.expression = "b_0 * (C_alpha + " + num(inner) + ") * " + num(tail);
            out.symbols = {"b_0", "C_alpha"};
            return out;
        }
        case ConstantKind::lp_modified_maximal:
            out.value = 2.0 * std::pow(pc, 1.0 / c.p);
            out.expression = num(out.value);
            return out;
        case ConstantKind::morrey_modified_maximal:
            out.value = 1.0 + 2.0 * std::pow(pc, 1.0 / c.p);
            out.expression = num(out.value);
            return out;
        case ConstantKind::hedberg:
            need_alpha(1.0 - c.lambda);
            out.value = 4.0 * hedberg_bracket();
            out.expression = num(out.value);
            return out;
        case ConstantKind::k_alpha:
            need_alpha(1.0 - c.lambda);
            out.value = 4.0 * std::pow(1.0 + 2.0 * std::pow(pc, 1.0 / c.p), c.p / c.q) * hedberg_bracket();
            out.expression = num(out.value);
            return out;
    }
    throw std::invalid_argument("constant: unknown kind");
}

}  // namespace ggm
