#include "exp_family.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "errors.hpp"

namespace abe {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

void check_dim(std::size_t got, std::size_t want) {
    require(got == want, ErrorCode::dimension_mismatch,
            "dimension mismatch: got " + std::to_string(got) + ", expected " +
                std::to_string(want));
}
} // namespace

GaussianDiag::GaussianDiag(std::vector<double> mean_, std::vector<double> var_)
    : mean(std::move(mean_)), var(std::move(var_)) {
    require(!mean.empty(), ErrorCode::invalid_argument, "gaussian needs D >= 1");
    require(mean.size() == var.size(), ErrorCode::dimension_mismatch,
            "mean and var lengths differ");
    for (double v : var)
        require(v > 0.0 && std::isfinite(v), ErrorCode::invalid_argument,
                "variances must be strictly positive and finite");
    for (double m : mean)
        require(std::isfinite(m), ErrorCode::invalid_argument,
                "means must be finite");
}

GaussianDiag GaussianDiag::isotropic(std::size_t dim, double mean, double var) {
    return GaussianDiag(std::vector<double>(dim, mean),
                        std::vector<double>(dim, var));
}

NaturalParams::NaturalParams(std::vector<double> theta_)
    : theta(std::move(theta_)) {
    require(!theta.empty() && theta.size() % 2 == 0, ErrorCode::invalid_argument,
            "natural parameters must have even length 2D >= 2");
    for (std::size_t i = 0; i < theta.size() / 2; ++i)
        require(theta[2 * i + 1] < 0.0 && std::isfinite(theta[2 * i]) &&
                    std::isfinite(theta[2 * i + 1]),
                ErrorCode::domain,
                "second natural component must be strictly negative");
}

NaturalParams to_natural(const GaussianDiag& g) {
    std::vector<double> theta(2 * g.dim());
    for (std::size_t i = 0; i < g.dim(); ++i) {
        theta[2 * i] = g.mean[i] / g.var[i];
        theta[2 * i + 1] = -1.0 / (2.0 * g.var[i]);
    }
    return NaturalParams(std::move(theta));
}

GaussianDiag to_gaussian(const NaturalParams& p) {
    std::vector<double> mean(p.dim()), var(p.dim());
    for (std::size_t i = 0; i < p.dim(); ++i) {
        var[i] = -1.0 / (2.0 * p.quad(i));
        mean[i] = p.linear(i) * var[i];
    }
    return GaussianDiag(std::move(mean), std::move(var));
}

UnnormalizedModel UnnormalizedModel::simply_unnormalized(const GaussianDiag& shape) {
    return UnnormalizedModel{to_natural(shape), 0.0};
}

UnnormalizedModel UnnormalizedModel::normalized(const GaussianDiag& shape) {
    NaturalParams theta = to_natural(shape);
    const double lz = log_partition(theta);
    return UnnormalizedModel{std::move(theta), -lz};
}

double UnnormalizedModel::true_log_z() const {
    return log_partition(theta) + log_scale;
}

double log_density(const GaussianDiag& g, std::span<const double> x) {
    check_dim(x.size(), g.dim());
    double acc = 0.0;
    for (std::size_t i = 0; i < g.dim(); ++i) {
        const double d = x[i] - g.mean[i];
        acc += d * d / g.var[i] + std::log(two_pi * g.var[i]);
    }
    return -0.5 * acc;
}

double log_density_unnorm(const UnnormalizedModel& m, std::span<const double> x) {
    check_dim(x.size(), m.dim());
    double acc = m.log_scale;
    for (std::size_t i = 0; i < m.dim(); ++i)
        acc += m.theta.linear(i) * x[i] + m.theta.quad(i) * x[i] * x[i];
    return acc;
}

double log_partition(const NaturalParams& p) {
    // per dimension: int exp(t1 x + t2 x^2) dx = sqrt(pi / -t2) exp(-t1^2/(4 t2))
    double acc = 0.0;
    for (std::size_t i = 0; i < p.dim(); ++i) {
        const double t1 = p.linear(i);
        const double t2 = p.quad(i);
        acc += -t1 * t1 / (4.0 * t2) + 0.5 * std::log(std::numbers::pi / -t2);
    }
    return acc;
}

std::vector<double> mean_params(const NaturalParams& p) {
    std::vector<double> mu(2 * p.dim());
    for (std::size_t i = 0; i < p.dim(); ++i) {
        const double v = -1.0 / (2.0 * p.quad(i));
        const double m = p.linear(i) * v;
        mu[2 * i] = m;
        mu[2 * i + 1] = v + m * m;
    }
    return mu;
}

HessianBlocks hessian_log_partition(const NaturalParams& p) {
    // covariance of (x, x^2): [[v, 2 m v], [2 m v, 2 v^2 + 4 m^2 v]]
    HessianBlocks h;
    h.blocks.resize(p.dim());
    for (std::size_t i = 0; i < p.dim(); ++i) {
        const double v = -1.0 / (2.0 * p.quad(i));
        const double m = p.linear(i) * v;
        h.blocks[i] = {v, 2.0 * m * v, 2.0 * v * v + 4.0 * m * m * v};
    }
    return h;
}

namespace {
std::pair<double, double> block_eigs(const std::array<double, 3>& b) {
    const double tr = b[0] + b[2];
    const double disc = std::sqrt(std::max(0.0, (b[0] - b[2]) * (b[0] - b[2]) +
                                                    4.0 * b[1] * b[1]));
    return {0.5 * (tr - disc), 0.5 * (tr + disc)};
}
} // namespace

double HessianBlocks::min_eigenvalue() const {
    double lo = block_eigs(blocks[0]).first;
    for (const auto& b : blocks) lo = std::min(lo, block_eigs(b).first);
    return lo;
}

double HessianBlocks::max_eigenvalue() const {
    double hi = block_eigs(blocks[0]).second;
    for (const auto& b : blocks) hi = std::max(hi, block_eigs(b).second);
    return hi;
}

double HessianBlocks::quad_form(std::span<const double> dtheta) const {
    check_dim(dtheta.size(), 2 * dim());
    double acc = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) {
        const double da = dtheta[2 * i];
        const double db = dtheta[2 * i + 1];
        const auto& b = blocks[i];
        acc += b[0] * da * da + 2.0 * b[1] * da * db + b[2] * db * db;
    }
    return acc;
}

std::vector<double> HessianBlocks::to_dense() const {
    const std::size_t n = 2 * dim();
    std::vector<double> m(n * n, 0.0);
    for (std::size_t i = 0; i < dim(); ++i) {
        m[(2 * i) * n + 2 * i] = blocks[i][0];
        m[(2 * i) * n + 2 * i + 1] = blocks[i][1];
        m[(2 * i + 1) * n + 2 * i] = blocks[i][1];
        m[(2 * i + 1) * n + 2 * i + 1] = blocks[i][2];
    }
    return m;
}

std::vector<double> sample(const GaussianDiag& g, std::size_t n, Rng& rng) {
    require(n >= 1, ErrorCode::invalid_argument, "sample count must be >= 1");
    std::vector<double> out(n * g.dim());
    std::vector<double> sd(g.dim());
    for (std::size_t i = 0; i < g.dim(); ++i) sd[i] = std::sqrt(g.var[i]);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t i = 0; i < g.dim(); ++i)
            out[r * g.dim() + i] = g.mean[i] + sd[i] * rng.normal();
    return out;
}

std::pair<double, double> strong_constants(const NaturalParams& theta_a,
                                           const NaturalParams& theta_b,
                                           int grid) {
    check_dim(theta_b.theta.size(), theta_a.theta.size());
    require(grid >= 2, ErrorCode::invalid_argument, "grid must be >= 2");
    double lo = 0.0;
    double hi = 0.0;
    for (int k = 0; k < grid; ++k) {
        const double t = static_cast<double>(k) / (grid - 1);
        std::vector<double> theta(theta_a.theta.size());
        for (std::size_t j = 0; j < theta.size(); ++j)
            theta[j] = (1.0 - t) * theta_a.theta[j] + t * theta_b.theta[j];
        for (std::size_t i = 0; i < theta.size() / 2; ++i)
            require(theta[2 * i + 1] < 0.0, ErrorCode::domain,
                    "segment leaves the valid natural-parameter domain");
        HessianBlocks h = hessian_log_partition(NaturalParams(theta));
        const double mn = h.min_eigenvalue();
        const double mx = h.max_eigenvalue();
        if (k == 0) {
            lo = mn;
            hi = mx;
        } else {
            lo = std::min(lo, mn);
            hi = std::max(hi, mx);
        }
    }
    return {lo, hi};
}

} // namespace abe
