#include "ggm/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace ggm {

namespace {

void check_function(const GridFunction& f, const QuasimetricSpace& space) {
    if (f.size() != space.size())
        throw std::invalid_argument("function: length does not match the number of points");
    for (double v : f)
        if (!std::isfinite(v)) throw std::invalid_argument("function: values must be finite");
}

}  // namespace

MaximalEvaluator::MaximalEvaluator(const QuasimetricSpace& space, double dilation, bool modified)
    : space_(&space) {
    if (!(dilation >= 1.0) || !std::isfinite(dilation))
        throw std::invalid_argument("maximal: dilation N0 must be >= 1");
    const double dil[] = {dilation};
    std::span<const double> dilations;
    if (modified) dilations = dil;
    const auto range = modified ? RadiusRange::unbounded : RadiusRange::open;
    for (std::size_t x = 0; x < space.size(); ++x) {
        center_begin_.push_back(entries_.size());
        for (double r : representative_radii(space, x, range, dilations)) {
            Entry e;
            e.count = space.ball_count(x, r);
            e.den = modified ? space.ball_measure(x, dilation * r) : space.prefix_measure(x, e.count);
            entries_.push_back(e);
        }
    }
    center_begin_.push_back(entries_.size());
}

GridFunction MaximalEvaluator::apply(const GridFunction& f) const {
    const auto& space = *space_;
    check_function(f, space);
    const std::size_t n = space.size();
    GridFunction out(n, 0.0);
    std::vector<double> prefix(n + 1);
    for (std::size_t x = 0; x < n; ++x) {
        auto ord = space.order(x);
        prefix[0] = 0.0;
        for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + std::fabs(f[ord[k]]) * space.weight(ord[k]);
        double best = 0.0;
        for (std::size_t e = center_begin_[x]; e < center_begin_[x + 1]; ++e)
            best = std::max(best, prefix[entries_[e].count] / entries_[e].den);
        out[x] = best;
    }
    return out;
}

GridFunction maximal(const GridFunction& f, const QuasimetricSpace& space) {
    return MaximalEvaluator(space, 1.0, false).apply(f);
}

GridFunction modified_maximal(const GridFunction& f, const QuasimetricSpace& space, double N0) {
    return MaximalEvaluator(space, N0, true).apply(f);
}

PotentialTag parse_potential_tag(std::string_view name) {
    if (name == "gamma-kernel" || name == "riesz-gamma") return PotentialTag::gamma_kernel;
    if (name == "measure-kernel" || name == "riesz-measure") return PotentialTag::measure_kernel;
    if (name == "k-alpha") return PotentialTag::k_alpha;
    throw std::invalid_argument("unknown potential kind '" + std::string(name) + "'");
}

std::string potential_tag_name(PotentialTag tag) {
    switch (tag) {
        case PotentialTag::gamma_kernel: return "gamma-kernel";
        case PotentialTag::measure_kernel: return "measure-kernel";
        case PotentialTag::k_alpha: return "k-alpha";
    }
    return "";
}

void validate_potential_kind(const PotentialKind& kind) {
    if (kind.tag == PotentialTag::gamma_kernel) {
        if (!(kind.alpha > 0.0 && kind.alpha < kind.gamma))
            throw std::invalid_argument("potential: gamma-kernel needs 0 < alpha < gamma");
    } else if (!(kind.alpha > 0.0 && kind.alpha < 1.0)) {
        throw std::invalid_argument("potential: alpha must lie in (0, 1)");
    }
}

KernelOperator::KernelOperator(const QuasimetricSpace& space,
                               const std::function<double(std::size_t, std::size_t)>& k)
    : n_(space.size()), k_(n_ * n_, 0.0), w_(space.weights().begin(), space.weights().end()) {
    for (std::size_t x = 0; x < n_; ++x)
        for (std::size_t y = 0; y < n_; ++y)
            if (x != y) {
                const double v = k(x, y);
                if (!std::isfinite(v)) throw std::invalid_argument("kernel: non-finite value off the diagonal");
                k_[x * n_ + y] = v;
            }
}

GridFunction KernelOperator::apply(const GridFunction& f) const {
    if (f.size() != n_) throw std::invalid_argument("function: length does not match the number of points");
    GridFunction out(n_, 0.0);
    for (std::size_t x = 0; x < n_; ++x) {
        double s = 0.0;
        const double* row = k_.data() + x * n_;
        for (std::size_t y = 0; y < n_; ++y) s += row[y] * f[y] * w_[y];
        out[x] = s;
    }
    return out;
}

double KernelOperator::l2_norm(double tol, std::size_t max_iter) const {
    // A = W^{1/2} K W^{1/2}; power iteration on A^T A.
    std::vector<double> a(n_ * n_), sq(n_);
    for (std::size_t i = 0; i < n_; ++i) sq[i] = std::sqrt(w_[i]);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) a[i * n_ + j] = sq[i] * k_[i * n_ + j] * sq[j];
    std::vector<double> v(n_), u(n_), t(n_);
    for (std::size_t i = 0; i < n_; ++i) v[i] = 1.0 + static_cast<double>(i) / static_cast<double>(n_);
    double prev = 0.0;
    for (std::size_t it = 0; it < max_iter; ++it) {
        double nv = 0.0;
        for (double x : v) nv += x * x;
        nv = std::sqrt(nv);
        if (nv == 0.0) return 0.0;
        for (double& x : v) x /= nv;
        for (std::size_t i = 0; i < n_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n_; ++j) s += a[i * n_ + j] * v[j];
            u[i] = s;
        }
        for (std::size_t j = 0; j < n_; ++j) t[j] = 0.0;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) t[j] += a[i * n_ + j] * u[i];
        double lam = 0.0;
        for (std::size_t j = 0; j < n_; ++j) lam += t[j] * v[j];
        const double est = std::sqrt(std::max(lam, 0.0));
        if (it > 0 && std::fabs(est - prev) <= tol * std::max(est, 1e-300)) return est;
        prev = est;
        v = t;
    }
    return prev;
}

KernelOperator potential_operator(const QuasimetricSpace& space, const PotentialKind& kind) {
    validate_potential_kind(kind);
    switch (kind.tag) {
        case PotentialTag::gamma_kernel: {
            const double e = kind.alpha - kind.gamma;
            return KernelOperator(space, [&](std::size_t x, std::size_t y) { return std::pow(space.dist(x, y), e); });
        }
        case PotentialTag::measure_kernel: {
            const double e = kind.alpha - 1.0;
            return KernelOperator(space, [&](std::size_t x, std::size_t y) {
                return std::pow(space.ball_measure(x, space.dist(x, y)), e);
            });
        }
        case PotentialTag::k_alpha: {
            const double e = kind.alpha - 1.0;
            return KernelOperator(space, [&](std::size_t x, std::size_t y) { return std::pow(space.dist(x, y), e); });
        }
    }
    throw std::invalid_argument("potential: unknown kind");
}

GridFunction potential(const GridFunction& f, const QuasimetricSpace& space, const PotentialKind& kind) {
    check_function(f, space);
    return potential_operator(space, kind).apply(f);
}

CZKernel hilbert_kernel(const QuasimetricSpace& space) {
    if (space.coords().empty() || space.coords().front().empty())
        throw std::invalid_argument("hilbert kernel: the space needs coordinates");
    const auto* sp = &space;
    CZKernel k;
    k.name = "hilbert";
    k.K = [sp](std::size_t x, std::size_t y) { return 1.0 / (sp->coords()[x][0] - sp->coords()[y][0]); };
    k.w = ScaleFunction::parse("pow:1");
    return k;
}

CZKernel matrix_kernel(std::vector<std::vector<double>> matrix, std::string_view modulus) {
    const std::size_t n = matrix.size();
    for (const auto& row : matrix)
        if (row.size() != n) throw std::invalid_argument("kernel matrix: must be square");
    CZKernel k;
    k.name = "matrix";
    k.size = n;
    auto m = std::make_shared<std::vector<std::vector<double>>>(std::move(matrix));
    k.K = [m](std::size_t x, std::size_t y) { return (*m)[x][y]; };
    k.w = ScaleFunction::parse(modulus);
    return k;
}

DiniResult dini_integral(const std::function<double(double)>& w) {
    // int_0^1 w(t)/t dt = int_{-inf}^0 w(e^u) du; block k covers u in [-(k+1) ln2, -k ln2].
    constexpr std::size_t kBlocks = 1000;
    constexpr int kSimpson = 64;
    const double L = std::log(2.0);
    DiniResult res;
    std::vector<double> blocks(kBlocks);
    double sum = 0.0;
    for (std::size_t k = 0; k < kBlocks; ++k) {
        const double a = -static_cast<double>(k + 1) * L;
        const double h = L / kSimpson;
        double s = w(std::exp(a)) + w(std::exp(a + L));
        for (int i = 1; i < kSimpson; ++i) s += (i % 2 ? 4.0 : 2.0) * w(std::exp(a + i * h));
        blocks[k] = s * h / 3.0;
        sum += blocks[k];
    }
    res.blocks = kBlocks;
    const double last = blocks[kBlocks - 1];
    if (!std::isfinite(sum)) {
        res.integral = sum;
        return res;
    }
    if (last == 0.0) {
        res.converges = true;
        res.integral = sum;
        return res;
    }
    double ratio = 0.0;
    for (std::size_t k = kBlocks - 50; k < kBlocks; ++k) ratio = std::max(ratio, blocks[k] / blocks[k - 1]);
    res.tail_ratio = ratio;
    // log-log slope of the block sizes over the second half
    const std::size_t k0 = kBlocks / 2;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, m = 0;
    for (std::size_t k = k0; k < kBlocks; ++k) {
        if (!(blocks[k] > 0.0)) continue;
        const double x = std::log(static_cast<double>(k + 1)), y = std::log(blocks[k]);
        sx += x, sy += y, sxx += x * x, sxy += x * y, m += 1;
    }
    const double slope = m > 1 ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : 0.0;
    res.tail_slope = -slope;
    if (ratio < 0.99) {
        res.converges = true;
        res.integral = sum + last * ratio / (1.0 - ratio);
    } else if (res.tail_slope > 1.1) {
        res.converges = true;
        const double s = res.tail_slope;
        res.integral = sum + last * static_cast<double>(kBlocks) / (s - 1.0);
    } else {
        res.integral = std::numeric_limits<double>::infinity();
    }
    return res;
}

ModulusReport check_modulus(const std::function<double(double)>& w) {
    ModulusReport r;
    std::vector<double> ts;
    for (int k = -1200; k <= 400; ++k) ts.push_back(std::pow(2.0, k / 40.0));
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double v = w(ts[i]);
        if (!(v > 0.0) || !std::isfinite(v)) {
            r.positive = false;
            break;
        }
        if (i > 0 && r.monotone && v < w(ts[i - 1])) {
            r.monotone = false;
            r.witness_t1 = ts[i - 1];
            r.witness_t2 = ts[i];
        }
    }
    for (int k = -30; k <= 10; ++k) {
        const double t = std::pow(2.0, k);
        const double q = w(2.0 * t) / w(t);
        if (std::isfinite(q)) r.c_delta = std::max(r.c_delta, q);
        else r.c_delta = std::numeric_limits<double>::infinity();
    }
    r.delta2 = std::isfinite(r.c_delta) && r.c_delta < 1e6;
    r.dini = dini_integral(w);
    return r;
}

CZReport validate_cz_kernel(CZKernel& kernel, const QuasimetricSpace& space, double triple_C) {
    if (!kernel.K) throw std::invalid_argument("cz kernel: no kernel function");
    if (!(triple_C > 0.0)) throw std::invalid_argument("cz kernel: triple constant must be positive");
    if (kernel.size != 0 && kernel.size != space.size())
        throw std::invalid_argument("cz kernel: matrix size does not match the number of points");
    CZReport rep;
    rep.triple_C = triple_C;
    const std::size_t n = space.size();
    std::vector<double> K(n * n, 0.0);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            if (x != y) K[x * n + y] = kernel.K(x, y);
    for (double v : K)
        if (!std::isfinite(v)) {
            rep.failures.push_back("kernel takes a non-finite value off the diagonal");
            kernel.validated = false;
            return rep;
        }
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            if (x != y)
                rep.size_constant = std::max(rep.size_constant,
                                             std::fabs(K[x * n + y]) * space.ball_measure(x, space.dist(x, y)));
    const auto& w = kernel.w;
    for (std::size_t x2 = 0; x2 < n; ++x2)
        for (std::size_t x1 = 0; x1 < n; ++x1) {
            if (x1 == x2) continue;
            const double d12 = space.dist(x1, x2), d21 = space.dist(x2, x1);
            for (std::size_t y = 0; y < n; ++y) {
                if (y == x1 || y == x2) continue;
                const double d2y = space.dist(x2, y);
                if (d2y < triple_C * d12) continue;
                ++rep.triples;
                const double lhs = std::fabs(K[x1 * n + y] - K[x2 * n + y]) + std::fabs(K[y * n + x1] - K[y * n + x2]);
                const double rhs = w(d21 / d2y) / space.ball_measure(x2, d2y);
                rep.smoothness_constant = std::max(rep.smoothness_constant, lhs / rhs);
            }
        }
    rep.modulus = check_modulus([&w](double t) { return w(t); });
    if (!rep.modulus.positive) rep.failures.push_back("modulus w is not positive");
    if (!rep.modulus.monotone) rep.failures.push_back("modulus w is not non-decreasing");
    if (!rep.modulus.delta2) rep.failures.push_back("modulus w fails the doubling (Delta_2) condition");
    if (!rep.modulus.dini.converges) rep.failures.push_back("modulus w fails the Dini condition");
    KernelOperator op(space, [&](std::size_t x, std::size_t y) { return K[x * n + y]; });
    rep.l2_norm = op.l2_norm();
    if (!std::isfinite(rep.l2_norm)) rep.failures.push_back("L2 operator norm is not finite");
    rep.ok = rep.failures.empty();
    kernel.validated = rep.ok;
    kernel.size_constant = rep.size_constant;
    kernel.smoothness_constant = rep.smoothness_constant;
    return rep;
}

GridFunction cz_apply(const GridFunction& f, const QuasimetricSpace& space, const CZKernel& kernel) {
    if (!kernel.validated) throw std::logic_error("cz_apply: kernel has not been validated");
    if (kernel.size != 0 && kernel.size != space.size())
        throw std::invalid_argument("cz kernel: matrix size does not match the number of points");
    check_function(f, space);
    return KernelOperator(space, kernel.K).apply(f);
}

WeakTypeResult weak_type_quotient(const GridFunction& f, const GridFunction& g, const QuasimetricSpace& space) {
    check_function(f, space);
    check_function(g, space);
    double l1 = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) l1 += std::fabs(f[i]) * space.weight(i);
    WeakTypeResult res;
    if (l1 == 0.0) return res;
    // t * mu{g > t} is maximised as t approaches a value of g from below.
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double t = g[i];
        if (!(t > 0.0)) continue;
        double level = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j)
            if (g[j] >= t) level += space.weight(j);
        const double q = t * level / l1;
        if (q > res.worst) {
            res.worst = q;
            res.threshold = t;
        }
    }
    return res;
}

}  // namespace ggm
