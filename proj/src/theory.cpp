#include "theory.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "errors.hpp"
#include "logspace.hpp"
#include "quadrature.hpp"

namespace abe {

namespace {

// Largest per-dimension component variance; governs the Gaussian-mixture tail.
double tail_var(const Density& d, std::size_t i) {
    double v = 0.0;
    for (const auto& c : d.components())
        if (c.weight > 0.0) v = std::max(v, c.gaussian.var[i]);
    return v;
}

double min_positive_weight(const Density& d) {
    double w = 1.0;
    for (const auto& c : d.components())
        if (c.weight > 0.0) w = std::min(w, c.weight);
    return w;
}

// Integration window: at least 13 std devs of every component, widened by a
// log factor so crossover regions between far-apart components stay inside.
std::pair<double, double> pair_range(const Density& p, const Density& q,
                                     std::size_t i) {
    auto [lo, hi] = joint_range(p, q, i, 13.0);
    const double wmin = std::min(min_positive_weight(p), min_positive_weight(q));
    const double logterm = std::min(80.0, -std::log(std::max(wmin, 1e-300)));
    const double sd = std::sqrt(std::max(tail_var(p, i), tail_var(q, i)));
    const double extra = sd * std::sqrt(2.0 * logterm);
    return {lo - extra, hi + extra};
}

// exp(2 log|p - q| - log_den), all in log space
double diffsq_over(double lp, double lq, double log_den) {
    const double hi = std::max(lp, lq);
    const double lo = std::min(lp, lq);
    if (hi == neg_inf) return 0.0;
    if (lo == hi) return 0.0;
    const double log_absdiff = hi + std::log1p(-std::exp(lo - hi));
    const double e = 2.0 * log_absdiff - log_den;
    return std::exp(e);
}

// Breakpoints graded around every feature center so narrow structures get
// resolved without flooding the whole window with panels.
void add_feature(std::vector<double>& pts, double center, double sd, double lo,
                 double hi) {
    for (double k : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
        for (double s : {-1.0, 1.0}) {
            const double x = center + s * k * sd;
            if (x > lo && x < hi) pts.push_back(x);
            if (k == 0.0) break;
        }
    }
}

std::vector<double> feature_breakpoints(const Density& p, const Density& q,
                                        std::size_t i, double lo, double hi) {
    std::vector<double> pts{lo, hi};
    auto add = [&](const Density& d) {
        for (const auto& c : d.components()) {
            if (c.weight <= 0.0) continue;
            add_feature(pts, c.gaussian.mean[i], std::sqrt(c.gaussian.var[i]),
                        lo, hi);
        }
    };
    add(p);
    add(q);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

double integrate_segmented(const std::function<double(double)>& f,
                           const std::vector<double>& breakpoints) {
    double total = 0.0;
    for (std::size_t s = 0; s + 1 < breakpoints.size(); ++s)
        total += integrate_adaptive(f, breakpoints[s], breakpoints[s + 1], 1e-9,
                                    1, 16, 8);
    return total;
}

// All components centered at zero with one shared variance across dimensions:
// every density value is then a function of s = |x|^2 alone and any pairwise
// integral collapses to one radial integral, whatever the dimension.
struct IsotropicView {
    bool applicable = false;
    std::vector<std::pair<double, double>> p_comps; // (weight, variance)
    std::vector<std::pair<double, double>> q_comps;
};

bool isotropic_components(const Density& d,
                          std::vector<std::pair<double, double>>& out) {
    for (const auto& c : d.components()) {
        const double v0 = c.gaussian.var[0];
        for (std::size_t i = 0; i < c.gaussian.dim(); ++i) {
            if (c.gaussian.mean[i] != 0.0) return false;
            if (c.gaussian.var[i] != v0) return false;
        }
        if (c.weight > 0.0) out.push_back({c.weight, v0});
    }
    return true;
}

IsotropicView isotropic_view(const Density& p, const Density& q) {
    IsotropicView view;
    view.applicable = isotropic_components(p, view.p_comps) &&
                      isotropic_components(q, view.q_comps);
    return view;
}

// log of a zero-mean isotropic mixture at squared radius s
double log_mix_radial(const std::vector<std::pair<double, double>>& comps,
                      double dim, double s) {
    double acc = neg_inf;
    for (const auto& [w, v] : comps) {
        const double l = std::log(w) -
                         0.5 * dim * std::log(2.0 * std::numbers::pi * v) -
                         0.5 * s / v;
        acc = log_add(acc, l);
    }
    return acc;
}

TheoryValue quad_radial(const IsotropicView& view, double dim,
                        const std::function<double(double, double)>& g) {
    // int_{R^D} G dx = pi^{D/2} / Gamma(D/2) * int_0^inf G(s) s^{D/2-1} ds
    const double log_surface =
        0.5 * dim * std::log(std::numbers::pi) - std::lgamma(0.5 * dim);

    // feature centers: radial mass of component v sits at s ~ D v +- sqrt(2D) v;
    // effective tail rates of ratio-type integrands add the pairwise scales
    std::vector<double> scales;
    for (const auto& [w, v] : view.p_comps) scales.push_back(v);
    for (const auto& [w, v] : view.q_comps) scales.push_back(v);
    const std::size_t base_count = scales.size();
    for (std::size_t a = 0; a < base_count; ++a) {
        for (std::size_t b = 0; b < base_count; ++b) {
            const double rate = 1.0 / scales[a] - 0.5 / scales[b];
            if (rate > 1e-12) scales.push_back(0.5 / rate);
        }
    }
    double smax = 0.0;
    for (double v : scales)
        smax = std::max(smax, dim * v + (40.0 + 2.0 * std::sqrt(dim)) *
                                            std::sqrt(2.0 * dim) * v +
                                  320.0 * v);
    std::vector<double> pts{0.0, smax};
    for (double v : scales)
        add_feature(pts, dim * v, std::sqrt(2.0 * dim) * v, 0.0, smax);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    const double v = integrate_segmented(
        [&](double s) {
            if (s <= 0.0) return 0.0;
            const double lp = log_mix_radial(view.p_comps, dim, s);
            const double lq = log_mix_radial(view.q_comps, dim, s);
            const double gv = g(lp, lq);
            if (gv == 0.0) return 0.0;
            const double log_jac = log_surface + (0.5 * dim - 1.0) * std::log(s);
            return gv * std::exp(log_jac);
        },
        pts);
    return TheoryValue::of(v);
}

// Adaptive quadrature of g(log p(x), log q(x)) over the joint support.
// Direct quadrature in one dimension; exact radial reduction for zero-mean
// isotropic mixtures in any higher dimension; tensor quadrature as the
// two-dimensional fallback; unavailable otherwise.
TheoryValue quad_density_pair(const Density& p, const Density& q,
                              const std::function<double(double, double)>& g) {
    if (p.dim() >= 2) {
        IsotropicView view = isotropic_view(p, q);
        if (view.applicable)
            return quad_radial(view, static_cast<double>(p.dim()), g);
    }
    if (p.dim() == 1) {
        auto [lo, hi] = pair_range(p, q, 0);
        const double v = integrate_segmented(
            [&](double x) {
                std::span<const double> xs(&x, 1);
                return g(p.log_pdf(xs), q.log_pdf(xs));
            },
            feature_breakpoints(p, q, 0, lo, hi));
        return TheoryValue::of(v);
    }
    if (p.dim() == 2) {
        auto [xlo, xhi] = pair_range(p, q, 0);
        auto [ylo, yhi] = pair_range(p, q, 1);
        int panels = 4;
        double prev = 0.0;
        for (int k = 0; k <= 5; ++k) {
            const double cur = integrate2d(
                [&](double x, double y) {
                    const double pt[2] = {x, y};
                    std::span<const double> xs(pt, 2);
                    return g(p.log_pdf(xs), q.log_pdf(xs));
                },
                xlo, xhi, ylo, yhi, panels, 24);
            require(std::isfinite(cur), ErrorCode::nonfinite,
                    "integrand non-finite at a quadrature node");
            if (k > 0 && std::abs(cur - prev) <= 1e-7 * std::abs(cur) + 1e-300)
                return TheoryValue::of(cur);
            prev = cur;
            panels *= 2;
        }
        return TheoryValue::of(prev);
    }
    return TheoryValue::unavailable();
}

bool is_single_gaussian(const Density& d) { return d.components().size() == 1; }

const GaussianDiag& as_gaussian(const Density& d) {
    return d.components().front().gaussian;
}

// chi2 between plain Gaussians through the log-partition:
// int p^2/q = Z(2 tp - tq) / (Z(tp)^2 / Z(tq)); infinite when 2 tp - tq
// leaves the valid domain, i.e. some 2 q_var <= p_var.
TheoryValue chi2_gaussian(const GaussianDiag& p, const GaussianDiag& q) {
    const NaturalParams tp = to_natural(p);
    const NaturalParams tq = to_natural(q);
    std::vector<double> tr(tp.theta.size());
    for (std::size_t j = 0; j < tr.size(); ++j)
        tr[j] = 2.0 * tp.theta[j] - tq.theta[j];
    for (std::size_t i = 0; i < tr.size() / 2; ++i)
        if (tr[2 * i + 1] >= 0.0) return TheoryValue::infinite();
    const double log_int = log_partition(NaturalParams(std::move(tr))) -
                           2.0 * log_partition(tp) + log_partition(tq);
    return TheoryValue::of(std::expm1(log_int));
}

} // namespace

TheoryValue chi2(const Density& p, const Density& q) {
    require(p.dim() == q.dim(), ErrorCode::dimension_mismatch,
            "divergence operands must share a dimension");
    if (is_single_gaussian(p) && is_single_gaussian(q))
        return chi2_gaussian(as_gaussian(p), as_gaussian(q));
    // mixture route: check the tail condition per dimension, then quadrature
    for (std::size_t i = 0; i < p.dim(); ++i)
        if (2.0 * tail_var(q, i) <= tail_var(p, i))
            return TheoryValue::infinite();
    // D_chi2(p, q) = int (p - q)^2 / q
    return quad_density_pair(p, q, [](double lp, double lq) {
        return diffsq_over(lp, lq, lq);
    });
}

double hellinger2(const GaussianDiag& p, const GaussianDiag& q) {
    require(p.dim() == q.dim(), ErrorCode::dimension_mismatch,
            "divergence operands must share a dimension");
    // 1 - prod (v_p v_q)^{1/4} / ((v_p + v_q)/2)^{1/2}
    //       * exp(-(1/8) sum (mu_p - mu_q)^2 / ((v_p + v_q)/2))
    double log_bc = 0.0;
    for (std::size_t i = 0; i < p.dim(); ++i) {
        const double vbar = 0.5 * (p.var[i] + q.var[i]);
        const double dm = p.mean[i] - q.mean[i];
        log_bc += 0.25 * (std::log(p.var[i]) + std::log(q.var[i])) -
                  0.5 * std::log(vbar) - 0.125 * dm * dm / vbar;
    }
    return -std::expm1(log_bc);
}

TheoryValue hellinger2_density(const Density& p, const Density& q) {
    if (is_single_gaussian(p) && is_single_gaussian(q))
        return TheoryValue::of(hellinger2(as_gaussian(p), as_gaussian(q)));
    // 1 - int sqrt(pq) = (1/2) int (sqrt(p) - sqrt(q))^2
    return quad_density_pair(p, q, [](double lp, double lq) {
        const double hi = std::max(lp, lq);
        const double lo = std::min(lp, lq);
        if (hi == neg_inf || lo == hi) return 0.0;
        const double log_diff = 0.5 * hi + std::log1p(-std::exp(0.5 * (lo - hi)));
        return 0.5 * std::exp(2.0 * log_diff);
    });
}

TheoryValue harmonic(const Density& p, const Density& q, double pi_weight) {
    require(pi_weight >= 0.0 && pi_weight <= 1.0, ErrorCode::invalid_argument,
            "harmonic weight must lie in [0, 1]");
    // 1 - int (pi/p + (1-pi)/q)^{-1} = pi (1-pi) int (p - q)^2 / (pi q + (1-pi) p)
    const double pi_w = pi_weight;
    TheoryValue v = quad_density_pair(p, q, [pi_w](double lp, double lq) {
        const double lden = log_add(std::log(pi_w) + lq, std::log1p(-pi_w) + lp);
        return diffsq_over(lp, lq, lden);
    });
    if (!v.ok()) return v;
    return TheoryValue::of(pi_w * (1.0 - pi_w) * v.value);
}

TheoryValue mse_pred_binary(Loss loss, const Density& p0, const Density& p1,
                            double n_total, double nu) {
    require(n_total > 0.0 && nu > 0.0, ErrorCode::invalid_argument,
            "need N > 0 and nu > 0");
    switch (loss) {
    case Loss::is: {
        TheoryValue d = chi2(p1, p0);
        if (!d.ok()) return d;
        return TheoryValue::of((1.0 + nu) / (nu * n_total) * d.value);
    }
    case Loss::rev_is: {
        TheoryValue d = chi2(p0, p1);
        if (!d.ok()) return d;
        return TheoryValue::of((1.0 + nu) / n_total * d.value);
    }
    case Loss::nce: {
        TheoryValue d = harmonic(p1, p0, nu / (1.0 + nu));
        if (!d.ok()) return d;
        if (d.value >= 1.0) return TheoryValue::infinite();
        const double c = (1.0 + nu) * (1.0 + nu) / (nu * n_total);
        return TheoryValue::of(c * d.value / (1.0 - d.value));
    }
    case Loss::is_rev_is: {
        TheoryValue d = hellinger2_density(p0, p1);
        if (!d.ok()) return d;
        const double bc = 1.0 - d.value;
        if (bc <= 0.0) return TheoryValue::infinite();
        const double c = (1.0 + nu) * (1.0 + nu) / (nu * n_total);
        return TheoryValue::of(c * (1.0 - bc * bc) / (bc * bc));
    }
    }
    fail(ErrorCode::invalid_argument, "unknown loss");
}

namespace {

// J(w) = int (p1 - p0)^2 / ((1-w) p0 + w p1), given log w and log(1-w)
double arithmetic_mix_info(const PathSpec& spec, double log_w, double log_1mw) {
    const Density p0(spec.p0);
    const Density p1(spec.target_gaussian());
    TheoryValue j = quad_density_pair(p0, p1, [=](double lp0, double lp1) {
        const double lmix = log_add(log_1mw + lp0, log_w + lp1);
        return diffsq_over(lp1, lp0, lmix);
    });
    require(j.ok(), ErrorCode::unsupported,
            "arithmetic Fisher information needs quadrature support");
    return j.value;
}

double fisher_info_arithmetic(const PathSpec& spec, double t) {
    const ArithmeticPoint pt = arithmetic_point(spec, t);
    // d w_tilde / dt = (dw/dt) Z1 / ((1-w) + w Z1)^2, kept in log space so the
    // endpoints (where weights round to 0 or 1 in doubles) stay exact
    const double log_wtilde_dot =
        spec.schedule.log_weight_dot(t) + spec.f1.true_log_z() - 2.0 * pt.log_zt;
    if (log_wtilde_dot == neg_inf) return 0.0;
    const double j =
        arithmetic_mix_info(spec, pt.log_w_norm, pt.log_w_norm_complement);
    if (j <= 0.0) return 0.0;
    return std::exp(2.0 * log_wtilde_dot + std::log(j));
}

// The path-length quadrature evaluates I(t) at hundreds of nodes while J
// depends on t only through the mixture weight; a Catmull-Rom table of log J
// over the logistic coordinate xi = log(w/(1-w)) makes those calls cheap.
class ArithmeticInfoTable {
public:
    ArithmeticInfoTable(const PathSpec& spec, double xi_lo, double xi_hi,
                        int points)
        : xi_lo_(xi_lo), step_((xi_hi - xi_lo) / (points - 1)) {
        logj_.resize(points);
        for (int i = 0; i < points; ++i) {
            const double xi = xi_lo_ + i * step_;
            const double log_w = -softplus(-xi);
            const double log_1mw = -softplus(xi);
            const double j = arithmetic_mix_info(spec, log_w, log_1mw);
            logj_[i] = j > 0.0 ? std::log(j) : -745.0;
        }
    }

    double log_j(double xi) const {
        const double u = (xi - xi_lo_) / step_;
        const int n = static_cast<int>(logj_.size());
        int i = static_cast<int>(std::floor(u));
        i = std::max(1, std::min(n - 3, i));
        const double f = u - i;
        const double a = logj_[i - 1], b = logj_[i], c = logj_[i + 1],
                     d = logj_[i + 2];
        return b + 0.5 * f * (c - a +
                              f * (2.0 * a - 5.0 * b + 4.0 * c - d +
                                   f * (3.0 * (b - c) + d - a)));
    }

private:
    double xi_lo_;
    double step_;
    std::vector<double> logj_;
};

double fisher_info_optimal(const PathSpec& spec, double t) {
    const GaussianDiag p1g = spec.target_gaussian();
    const double alpha = alpha_h(spec.p0, p1g);
    if (alpha <= 0.0) return 0.0;
    const double u = (2.0 * t - 1.0) * alpha;
    const double adot =
        -alpha * (std::sin(u) / std::cos(alpha) + std::cos(u) / std::sin(alpha));
    const double bdot =
        -alpha * (std::sin(u) / std::cos(alpha) - std::cos(u) / std::sin(alpha));
    const Density p0(spec.p0);
    const Density p1(p1g);
    // I(t) = int (d/dt p_t)^2 / p_t = 4 int (a' sqrt(p0) + b' sqrt(p1))^2
    TheoryValue v = quad_density_pair(p0, p1, [=](double lp0, double lp1) {
        const double s = adot * std::exp(0.5 * lp0) + bdot * std::exp(0.5 * lp1);
        return 4.0 * s * s;
    });
    require(v.ok(), ErrorCode::unsupported,
            "optimal-path Fisher information needs quadrature (dims <= 2)");
    return v.value;
}

} // namespace

double fisher_info_time(const PathSpec& spec, double t) {
    require(t >= 0.0 && t <= 1.0, ErrorCode::invalid_argument,
            "path time must lie in [0, 1]");
    switch (spec.kind) {
    case PathKind::geometric: {
        const NaturalParams theta0 = to_natural(spec.p0);
        std::vector<double> dtheta(theta0.theta.size());
        std::vector<double> theta_t(theta0.theta.size());
        for (std::size_t j = 0; j < dtheta.size(); ++j) {
            dtheta[j] = spec.f1.theta.theta[j] - theta0.theta[j];
            theta_t[j] = (1.0 - t) * theta0.theta[j] + t * spec.f1.theta.theta[j];
        }
        const HessianBlocks h = hessian_log_partition(NaturalParams(theta_t));
        return h.quad_form(dtheta);
    }
    case PathKind::arithmetic:
        return fisher_info_arithmetic(spec, t);
    case PathKind::optimal:
        return fisher_info_optimal(spec, t);
    case PathKind::q_mean: {
        require(spec.q == 1.0, ErrorCode::unsupported,
                "Fisher information unsupported for q-mean paths with q < 1");
        PathSpec arith =
            PathSpec::arithmetic(spec.p0, spec.f1, Schedule::vanilla());
        return fisher_info_arithmetic(arith, t);
    }
    }
    fail(ErrorCode::invalid_argument, "unknown path kind");
}

double fisher_rao_length(const PathSpec& spec, int order, double rel_tol) {
    require(order >= 16, ErrorCode::invalid_argument,
            "fisher_rao_length needs >= 16 quadrature points");
    // Quintic substitution t = u^3 (10 - 15u + 6u^2): the vanishing Jacobian
    // 30 u^2 (1-u)^2 absorbs the integrable log-type singularities the
    // vanilla schedule has at t = 0, 1.
    auto map_t = [](double u) {
        return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
    };

    const bool tabulated = spec.kind == PathKind::arithmetic ||
                           (spec.kind == PathKind::q_mean && spec.q == 1.0);
    const PathSpec* arith = &spec;
    PathSpec as_arith = spec;
    if (spec.kind == PathKind::q_mean && spec.q == 1.0) {
        as_arith = PathSpec::arithmetic(spec.p0, spec.f1, Schedule::vanilla());
        arith = &as_arith;
    }
    std::optional<ArithmeticInfoTable> table;
    const double log_z1 = spec.f1.true_log_z();
    if (tabulated) {
        double xi_lo = 0.0, xi_hi = 0.0;
        bool first = true;
        for (int i = 1; i < 4096; ++i) {
            const double t = map_t(i / 4096.0);
            if (t <= 0.0 || t >= 1.0) continue;
            const double xi = arith->schedule.log_weight(t) + log_z1 -
                              (arith->schedule.log_weight_complement(t));
            if (!std::isfinite(xi)) continue;
            if (first) {
                xi_lo = xi_hi = xi;
                first = false;
            } else {
                xi_lo = std::min(xi_lo, xi);
                xi_hi = std::max(xi_hi, xi);
            }
        }
        xi_lo -= 1.0;
        xi_hi += 1.0;
        const int points =
            std::min(321, std::max(33, static_cast<int>((xi_hi - xi_lo) * 2)));
        table.emplace(*arith, xi_lo, xi_hi, points);
    }

    auto info = [&](double t) {
        if (!table) return fisher_info_time(spec, t);
        const ArithmeticPoint pt = arithmetic_point(*arith, t);
        const double log_wtilde_dot = arith->schedule.log_weight_dot(t) +
                                      log_z1 - 2.0 * pt.log_zt;
        if (log_wtilde_dot == neg_inf) return 0.0;
        const double xi = pt.log_w_norm - pt.log_w_norm_complement;
        return std::exp(2.0 * log_wtilde_dot + table->log_j(xi));
    };

    return integrate_adaptive(
        [&](double u) {
            const double t = map_t(u);
            const double jac = 30.0 * u * u * (1.0 - u) * (1.0 - u);
            if (jac == 0.0 || t <= 0.0 || t >= 1.0) return 0.0;
            return info(t) * jac;
        },
        0.0, 1.0, rel_tol, 4, order, 8);
}

TheoryValue mse_pred_annealed(const PathSpec& spec, int K, double n_total,
                              Loss loss, double nu) {
    require(K >= 1, ErrorCode::invalid_argument, "K must be >= 1");
    PathGrid grid = discretize(spec, K);
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < grid.points.size(); ++k) {
        if (!grid.points[k].can_sample() || !grid.points[k + 1].can_sample())
            return TheoryValue::unavailable();
        TheoryValue step = mse_pred_binary(loss, grid.points[k].normalized(),
                                           grid.points[k + 1].normalized(),
                                           n_total / K, nu);
        if (!step.ok()) return step;
        total += step.value;
    }
    return TheoryValue::of(total);
}

TheoremBounds theorem_bounds(const GaussianDiag& p0, const UnnormalizedModel& f1,
                             double n_total) {
    require(n_total > 0.0, ErrorCode::invalid_argument, "need N > 0");
    const NaturalParams theta0 = to_natural(p0);
    auto [m_const, l_const] = strong_constants(theta0, f1.theta);
    double d2 = 0.0;
    for (std::size_t j = 0; j < theta0.theta.size(); ++j) {
        const double d = f1.theta.theta[j] - theta0.theta[j];
        d2 += d * d;
    }
    TheoremBounds b;
    b.m_const = m_const;
    b.l_const = l_const;
    b.param_distance = std::sqrt(d2);
    b.binary_lower_bound = 4.0 * std::expm1(0.125 * m_const * d2) / n_total;
    b.geometric_upper_bound = l_const * l_const * d2 / (m_const * n_total);
    b.oracle_upper_bound = (2.0 + l_const * d2) / n_total;

    const double log_z1 = f1.true_log_z();
    if (std::abs(log_z1) < 700.0) {
        const Density dp0(p0);
        const Density dp1(to_gaussian(f1.theta));
        // D_phi(p1, p0) = int (p1 - p0)^2 / (p0 + p1)
        TheoryValue dphi =
            quad_density_pair(dp0, dp1, [](double lp0, double lp1) {
                return diffsq_over(lp1, lp0, log_add(lp0, lp1));
            });
        if (dphi.ok()) {
            const double z1 = std::exp(log_z1);
            b.vanilla_lower_bound = TheoryValue::of(
                dphi.value * (1.0 / z1 + 1.0 + z1) / (3.0 * n_total));
        } else {
            b.vanilla_lower_bound = TheoryValue::unavailable();
        }
    } else {
        b.vanilla_lower_bound = TheoryValue::unavailable();
    }
    return b;
}

std::pair<double, double> chi2_mixture_bound_check(const Density& p,
                                                   const Density& q, double w) {
    require(w > 0.0 && w < 1.0, ErrorCode::invalid_argument,
            "mixture weight must lie in (0, 1)");
    std::vector<Density::Component> comps;
    for (const auto& c : p.components())
        comps.push_back({w * c.weight, c.gaussian});
    for (const auto& c : q.components())
        comps.push_back({(1.0 - w) * c.weight, c.gaussian});
    Density mix(std::move(comps));

    // lhs by quadrature against the mixture
    TheoryValue lhs = quad_density_pair(p, mix, [](double lp, double lm) {
        return diffsq_over(lp, lm, lm);
    });
    TheoryValue rhs = chi2(p, q);
    require(lhs.ok(), ErrorCode::unsupported, "lhs quadrature unavailable");
    require(rhs.ok(), ErrorCode::nonfinite,
            "chi2(p, q) must be finite for the mixture lemma");
    return {lhs.value, rhs.value + 1.0};
}

TheoryReport make_theory_report(const GaussianDiag& p0,
                                const UnnormalizedModel& f1,
                                const PathSpec& path, int K, double n_total,
                                double nu) {
    TheoryReport r;
    r.k = K;
    r.n_total = n_total;
    r.nu = nu;
    r.path = path.kind;
    r.schedule = path.schedule.kind;

    const Density dp0(p0);
    const Density dp1(to_gaussian(f1.theta));
    r.d_chi2_fwd = chi2(dp1, dp0);
    r.d_chi2_rev = chi2(dp0, dp1);
    r.d_hellinger2 = hellinger2(p0, to_gaussian(f1.theta));
    r.d_harmonic = harmonic(dp1, dp0, nu / (1.0 + nu));
    r.epsilon = 1.0 - r.d_hellinger2;

    r.mse_binary_is = mse_pred_binary(Loss::is, dp0, dp1, n_total, nu);
    r.mse_binary_revis = mse_pred_binary(Loss::rev_is, dp0, dp1, n_total, nu);
    r.mse_binary_nce = mse_pred_binary(Loss::nce, dp0, dp1, n_total, nu);
    r.mse_binary_is_revis =
        mse_pred_binary(Loss::is_rev_is, dp0, dp1, n_total, nu);

    try {
        r.fisher_rao_len = TheoryValue::of(fisher_rao_length(path));
    } catch (const Error&) {
        r.fisher_rao_len = TheoryValue::unavailable();
    }
    r.mse_annealed = mse_pred_annealed(path, K, n_total, Loss::nce, nu);

    r.alpha_h_value = alpha_h(p0, to_gaussian(f1.theta));
    r.optimal_fisher_rao = 16.0 * r.alpha_h_value * r.alpha_h_value;
    r.optimal_mse = r.optimal_fisher_rao / n_total;

    r.bounds = theorem_bounds(p0, f1, n_total);
    return r;
}

} // namespace abe
