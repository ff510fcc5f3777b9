#include "paths.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "errors.hpp"
#include "logspace.hpp"
#include "theory.hpp"

namespace abe {

namespace {
void check_t(double t) {
    require(t >= 0.0 && t <= 1.0, ErrorCode::invalid_argument,
            "path time must lie in [0, 1]");
}
} // namespace

Schedule Schedule::oracle(double z1) {
    require(z1 > 0.0 && std::isfinite(z1), ErrorCode::invalid_argument,
            "oracle schedule needs z1 > 0");
    return {ScheduleKind::oracle, z1};
}

Schedule Schedule::oracle_trig(double z1) {
    require(z1 > 0.0 && std::isfinite(z1), ErrorCode::invalid_argument,
            "oracle-trig schedule needs z1 > 0");
    return {ScheduleKind::oracle_trig, z1};
}

double Schedule::weight(double t) const {
    check_t(t);
    switch (kind) {
    case ScheduleKind::vanilla:
        return t;
    case ScheduleKind::oracle:
        return t / (t + z1 * (1.0 - t));
    case ScheduleKind::oracle_trig: {
        const double s = std::sin(0.5 * std::numbers::pi * t);
        const double c = std::cos(0.5 * std::numbers::pi * t);
        return s * s / (s * s + z1 * c * c);
    }
    }
    return t;
}

namespace {
double safe_log(double x) { return x > 0.0 ? std::log(x) : neg_inf; }
} // namespace

double Schedule::log_weight(double t) const {
    check_t(t);
    switch (kind) {
    case ScheduleKind::vanilla:
        return safe_log(t);
    case ScheduleKind::oracle:
        return safe_log(t) -
               log_add(safe_log(t), std::log(z1) + std::log1p(-t));
    case ScheduleKind::oracle_trig: {
        const double ls = 2.0 * safe_log(std::sin(0.5 * std::numbers::pi * t));
        const double lc = 2.0 * safe_log(std::cos(0.5 * std::numbers::pi * t));
        return ls - log_add(ls, std::log(z1) + lc);
    }
    }
    return safe_log(t);
}

double Schedule::log_weight_complement(double t) const {
    check_t(t);
    switch (kind) {
    case ScheduleKind::vanilla:
        return t < 1.0 ? std::log1p(-t) : neg_inf;
    case ScheduleKind::oracle:
        return std::log(z1) + std::log1p(-t) -
               log_add(safe_log(t), std::log(z1) + std::log1p(-t));
    case ScheduleKind::oracle_trig: {
        const double ls = 2.0 * safe_log(std::sin(0.5 * std::numbers::pi * t));
        const double lc = 2.0 * safe_log(std::cos(0.5 * std::numbers::pi * t));
        return std::log(z1) + lc - log_add(ls, std::log(z1) + lc);
    }
    }
    return std::log1p(-t);
}

double Schedule::log_weight_dot(double t) const {
    check_t(t);
    switch (kind) {
    case ScheduleKind::vanilla:
        return 0.0;
    case ScheduleKind::oracle:
        return std::log(z1) -
               2.0 * log_add(safe_log(t), std::log(z1) + std::log1p(-t));
    case ScheduleKind::oracle_trig: {
        const double ls = 2.0 * safe_log(std::sin(0.5 * std::numbers::pi * t));
        const double lc = 2.0 * safe_log(std::cos(0.5 * std::numbers::pi * t));
        const double log_dsdt =
            std::log(0.5 * std::numbers::pi) +
            safe_log(std::sin(std::numbers::pi * t));
        return log_dsdt + std::log(z1) -
               2.0 * log_add(ls, std::log(z1) + lc);
    }
    }
    return 0.0;
}

namespace {
void check_endpoints(const GaussianDiag& p0, const UnnormalizedModel& f1) {
    require(p0.dim() == f1.dim(), ErrorCode::dimension_mismatch,
            "proposal and target dimensions differ");
}
} // namespace

PathSpec PathSpec::geometric(GaussianDiag p0, UnnormalizedModel f1) {
    check_endpoints(p0, f1);
    return PathSpec{PathKind::geometric, std::move(p0), std::move(f1),
                    Schedule::vanilla(), 1.0};
}

PathSpec PathSpec::arithmetic(GaussianDiag p0, UnnormalizedModel f1,
                              Schedule schedule) {
    check_endpoints(p0, f1);
    return PathSpec{PathKind::arithmetic, std::move(p0), std::move(f1), schedule,
                    1.0};
}

PathSpec PathSpec::q_mean(GaussianDiag p0, UnnormalizedModel f1, double q) {
    check_endpoints(p0, f1);
    require(q > 0.0 && q <= 1.0, ErrorCode::invalid_argument,
            "q must lie in (0, 1]");
    return PathSpec{PathKind::q_mean, std::move(p0), std::move(f1),
                    Schedule::vanilla(), q};
}

PathSpec PathSpec::optimal(GaussianDiag p0, UnnormalizedModel f1) {
    check_endpoints(p0, f1);
    return PathSpec{PathKind::optimal, std::move(p0), std::move(f1),
                    Schedule::vanilla(), 1.0};
}

double geometric_log_f(const PathSpec& spec, double t,
                       std::span<const double> x) {
    require(spec.kind == PathKind::geometric, ErrorCode::invalid_argument,
            "geometric_log_f needs a geometric path");
    check_t(t);
    return (1.0 - t) * log_density(spec.p0, x) +
           t * log_density_unnorm(spec.f1, x);
}

std::pair<GaussianDiag, double> geometric_gaussian_point(const PathSpec& spec,
                                                         double t) {
    require(spec.kind == PathKind::geometric, ErrorCode::invalid_argument,
            "geometric point needs a geometric path");
    check_t(t);
    const NaturalParams theta0 = to_natural(spec.p0);
    std::vector<double> theta(theta0.theta.size());
    for (std::size_t j = 0; j < theta.size(); ++j)
        theta[j] = (1.0 - t) * theta0.theta[j] + t * spec.f1.theta.theta[j];
    NaturalParams theta_t(std::move(theta));
    // f_t = exp(<theta_t, t(x)> - (1-t) log Z(theta0) + t log_scale)
    const double log_zt = log_partition(theta_t) -
                          (1.0 - t) * log_partition(theta0) +
                          t * spec.f1.log_scale;
    return {to_gaussian(theta_t), log_zt};
}

ArithmeticPoint arithmetic_point(const PathSpec& spec, double t) {
    require(spec.kind == PathKind::arithmetic, ErrorCode::invalid_argument,
            "arithmetic point needs an arithmetic path");
    check_t(t);
    const double w = spec.schedule.weight(t);
    const double log_z1 = spec.f1.true_log_z();
    const double log_w = spec.schedule.log_weight(t);
    const double log_1mw = spec.schedule.log_weight_complement(t);
    // log Z_t = log((1-w) + w Z1)
    const double log_zt = log_add(log_1mw, log_w + log_z1);
    // normalized weight on p1: w Z1 / ((1-w) + w Z1)
    const double log_w_norm = log_w + log_z1 - log_zt;
    const double log_w_norm_c = log_1mw - log_zt;
    const double w_norm =
        log_w_norm > -0.7 ? 1.0 - std::exp(log_w_norm_c) : std::exp(log_w_norm);
    GaussianDiag p1 = spec.target_gaussian();
    Density mix(std::vector<Density::Component>{{1.0 - w_norm, spec.p0},
                                                {w_norm, std::move(p1)}});
    return ArithmeticPoint{w,          w_norm,       log_zt,
                           log_w_norm, log_w_norm_c, std::move(mix)};
}

double qmean_log_f(const PathSpec& spec, double t, std::span<const double> x) {
    require(spec.kind == PathKind::q_mean, ErrorCode::invalid_argument,
            "qmean_log_f needs a q-mean path");
    check_t(t);
    const double q = spec.q;
    const double lp0 = log_density(spec.p0, x);
    const double lf1 = log_density_unnorm(spec.f1, x);
    const double log_t = t > 0.0 ? std::log(t) : neg_inf;
    const double log_1mt = t < 1.0 ? std::log1p(-t) : neg_inf;
    return log_add(log_1mt + q * lp0, log_t + q * lf1) / q;
}

namespace {
// coefficients of the closed-form optimal path between normalized endpoints
std::pair<double, double> optimal_coefficients(double alpha, double t) {
    if (alpha <= 0.0) {
        // identical endpoints: the path is constant; weights split linearly
        return {1.0 - t, t};
    }
    const double u = (2.0 * t - 1.0) * alpha;
    const double x = std::cos(u) / (2.0 * std::cos(alpha));
    const double y = std::sin(u) / (2.0 * std::sin(alpha));
    return {x - y, x + y};
}
} // namespace

OptimalPoint optimal_point(const PathSpec& spec, double t) {
    require(spec.kind == PathKind::optimal, ErrorCode::invalid_argument,
            "optimal point needs an optimal path");
    check_t(t);
    GaussianDiag p1 = spec.target_gaussian();
    const double dh2 = hellinger2(spec.p0, p1);
    const double bc = 1.0 - dh2;
    const double alpha = alpha_h(spec.p0, p1);
    auto [a, b] = optimal_coefficients(alpha, t);

    // geometric midpoint of the normalized endpoints
    const NaturalParams theta0 = to_natural(spec.p0);
    const NaturalParams theta1 = spec.f1.theta;
    std::vector<double> theta_mid(theta0.theta.size());
    for (std::size_t j = 0; j < theta_mid.size(); ++j)
        theta_mid[j] = 0.5 * (theta0.theta[j] + theta1.theta[j]);
    GaussianDiag mid = to_gaussian(NaturalParams(std::move(theta_mid)));

    std::vector<Density::Component> comps;
    comps.push_back({a * a, spec.p0});
    comps.push_back({b * b, std::move(p1)});
    comps.push_back({2.0 * a * b * bc, std::move(mid)});
    return OptimalPoint{a, b, bc, Density(std::move(comps))};
}

double alpha_h(const GaussianDiag& p0, const GaussianDiag& p1) {
    const double dh2 = hellinger2(p0, p1);
    return std::atan(std::sqrt(dh2 / (2.0 - dh2)));
}

double GridPoint::log_f(std::span<const double> x) const {
    const PathSpec& spec = *spec_;
    switch (spec.kind) {
    case PathKind::geometric:
        return geometric_log_f(spec, t_, x);
    case PathKind::arithmetic:
        return log_add(spec.schedule.log_weight_complement(t_) +
                           log_density(spec.p0, x),
                       spec.schedule.log_weight(t_) +
                           log_density_unnorm(spec.f1, x));
    case PathKind::q_mean:
        return qmean_log_f(spec, t_, x);
    case PathKind::optimal: {
        // (a sqrt(p0) + b sqrt(p1))^2, normalized by construction
        const double lp0 = log_density(spec.p0, x);
        const double lp1 = log_density(to_gaussian(spec.f1.theta), x);
        const double la = a_ > 0.0 ? std::log(a_) : neg_inf;
        const double lb = b_ > 0.0 ? std::log(b_) : neg_inf;
        return 2.0 * log_add(la + 0.5 * lp0, lb + 0.5 * lp1);
    }
    }
    fail(ErrorCode::invalid_argument, "unknown path kind");
}

const Density& GridPoint::normalized() const {
    require(density_.has_value(), ErrorCode::unsupported,
            "no normalized descriptor for this path point");
    return *density_;
}

double GridPoint::log_zt() const {
    require(log_zt_.has_value(), ErrorCode::unsupported,
            "no closed-form normalization for this path point");
    return *log_zt_;
}

std::vector<double> GridPoint::sample(std::size_t n, Rng& rng) const {
    require(density_.has_value(), ErrorCode::unsupported,
            "exact sampling unsupported for this path (q-mean with q < 1)");
    return density_->sample(n, rng);
}

struct PathGridBuilder {
    static GridPoint make(const std::shared_ptr<const PathSpec>& spec, double t) {
        GridPoint gp;
        gp.t_ = t;
        gp.spec_ = spec;
        switch (spec->kind) {
        case PathKind::geometric: {
            auto [g, log_zt] = geometric_gaussian_point(*spec, t);
            gp.density_ = Density(std::move(g));
            gp.log_zt_ = log_zt;
            break;
        }
        case PathKind::arithmetic: {
            ArithmeticPoint pt = arithmetic_point(*spec, t);
            gp.density_ = std::move(pt.density);
            gp.log_zt_ = pt.log_zt;
            break;
        }
        case PathKind::optimal: {
            OptimalPoint pt = optimal_point(*spec, t);
            gp.a_ = pt.a;
            gp.b_ = pt.b;
            gp.density_ = std::move(pt.density);
            gp.log_zt_ = 0.0; // the optimal path is normalized throughout
            break;
        }
        case PathKind::q_mean: {
            if (spec->q == 1.0) {
                // q = 1 is the arithmetic-vanilla path; keep its exact sampler
                PathSpec arith = PathSpec::arithmetic(spec->p0, spec->f1,
                                                      Schedule::vanilla());
                ArithmeticPoint pt = arithmetic_point(arith, t);
                gp.density_ = std::move(pt.density);
                gp.log_zt_ = pt.log_zt;
            }
            break; // density evaluation only for q in (0, 1)
        }
        }
        return gp;
    }
};

PathGrid discretize(const PathSpec& spec, int K) {
    require(K >= 1, ErrorCode::invalid_argument, "K must be >= 1");
    auto shared = std::make_shared<const PathSpec>(spec);
    PathGrid grid;
    grid.times.resize(K + 1);
    grid.points.reserve(K + 1);
    for (int k = 0; k <= K; ++k) {
        grid.times[k] = static_cast<double>(k) / static_cast<double>(K);
        grid.points.push_back(PathGridBuilder::make(shared, grid.times[k]));
    }
    return grid;
}

} // namespace abe
