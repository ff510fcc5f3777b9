#ifndef ABE_PATHS_HPP
#define ABE_PATHS_HPP

#include <memory>
#include <optional>
#include <vector>

#include "density.hpp"
#include "exp_family.hpp"

namespace abe {

enum class ScheduleKind { vanilla, oracle, oracle_trig };

// Mixture-weight schedule w_t for the arithmetic path in unnormalized space.
// The oracle kinds take an explicit z1 (typically an estimate) rather than
// silently using the true normalization.
struct Schedule {
    ScheduleKind kind = ScheduleKind::vanilla;
    double z1 = 1.0;

    static Schedule vanilla() { return {ScheduleKind::vanilla, 1.0}; }
    static Schedule oracle(double z1);
    static Schedule oracle_trig(double z1);

    double weight(double t) const; // w_0 = 0, w_1 = 1, non-decreasing
    // log w_t and log(1 - w_t); exact near both endpoints where the direct
    // weight rounds to 0 or 1
    double log_weight(double t) const;
    double log_weight_complement(double t) const;
    // log dw/dt
    double log_weight_dot(double t) const;
};

enum class PathKind { geometric, arithmetic, q_mean, optimal };

struct PathSpec {
    PathKind kind;
    GaussianDiag p0;
    UnnormalizedModel f1;
    Schedule schedule; // arithmetic only
    double q = 1.0;    // q_mean only

    static PathSpec geometric(GaussianDiag p0, UnnormalizedModel f1);
    static PathSpec arithmetic(GaussianDiag p0, UnnormalizedModel f1,
                               Schedule schedule);
    static PathSpec q_mean(GaussianDiag p0, UnnormalizedModel f1, double q);
    static PathSpec optimal(GaussianDiag p0, UnnormalizedModel f1);

    // normalized target Gaussian (shape of f1)
    GaussianDiag target_gaussian() const { return to_gaussian(f1.theta); }
};

// (1 - t) log p0(x) + t log f1(x)
double geometric_log_f(const PathSpec& spec, double t, std::span<const double> x);

// Normalized Gaussian at time t (natural params (1-t) theta0 + t theta1) and
// the exact log normalization of f_t.
std::pair<GaussianDiag, double> geometric_gaussian_point(const PathSpec& spec,
                                                         double t);

// Normalized two-component mixture of p0 and p1 at time t plus log Z_t of the
// unnormalized f_t = (1 - w_t) p0 + w_t f1. The normalized weight uses the
// true Z1; with an exact-z1 oracle schedule it reduces to the Table-2 rows.
struct ArithmeticPoint {
    double w;      // unnormalized-space weight w_t
    double w_norm; // normalized mixture weight on p1
    double log_zt;
    // exact log forms of the normalized weight and its complement
    double log_w_norm;
    double log_w_norm_complement;
    Density density;
};
ArithmeticPoint arithmetic_point(const PathSpec& spec, double t);

// (1/q) log((1-t) p0^q + t f1^q), evaluated via log-sum-exp
double qmean_log_f(const PathSpec& spec, double t, std::span<const double> x);

// Three-component expansion of (a(t) sqrt(p0) + b(t) sqrt(p1))^2: weight a^2
// on p0, b^2 on p1 and 2ab(1 - DH2) on the geometric midpoint Gaussian.
struct OptimalPoint {
    double a;
    double b;
    double bc; // Bhattacharyya coefficient 1 - DH2(p0, p1)
    Density density;
};
OptimalPoint optimal_point(const PathSpec& spec, double t);

// arctan(sqrt(DH2 / (2 - DH2))), in [0, pi/4]
double alpha_h(const GaussianDiag& p0, const GaussianDiag& p1);

// One discretization node: unnormalized log density, exact sampler where the
// path supports one, and the normalized descriptor where available.
class GridPoint {
public:
    double t() const { return t_; }
    double log_f(std::span<const double> x) const;
    bool can_sample() const { return density_.has_value(); }
    const Density& normalized() const; // errors if unavailable
    double log_zt() const;             // errors if unavailable
    std::vector<double> sample(std::size_t n, Rng& rng) const;

private:
    friend struct PathGridBuilder;
    double t_ = 0.0;
    std::shared_ptr<const PathSpec> spec_;
    std::optional<Density> density_;
    std::optional<double> log_zt_;
    // cached optimal-path coefficients
    double a_ = 0.0, b_ = 0.0;
};

struct PathGrid {
    std::vector<double> times; // k / K, exactly uniform
    std::vector<GridPoint> points;

    std::size_t segments() const { return points.size() - 1; }
};

// K + 1 uniform nodes. Sampling from q_mean nodes with q in (0,1) is
// unsupported and raises when requested, not here.
PathGrid discretize(const PathSpec& spec, int K);

} // namespace abe

#endif
