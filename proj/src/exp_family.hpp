#ifndef ABE_EXP_FAMILY_HPP
#define ABE_EXP_FAMILY_HPP

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "rng.hpp"

namespace abe {

// Diagonal-covariance Gaussian. Means and per-dimension variances; variances
// must be strictly positive and finite.
struct GaussianDiag {
    std::vector<double> mean;
    std::vector<double> var;

    GaussianDiag(std::vector<double> mean_, std::vector<double> var_);
    static GaussianDiag isotropic(std::size_t dim, double mean, double var);

    std::size_t dim() const { return mean.size(); }
};

// Natural parameters of a diagonal Gaussian, interleaved per dimension as
// (mu_i / v_i, -1 / (2 v_i)) against sufficient statistics t(x) = (x_i, x_i^2).
// Every second component must be strictly negative.
struct NaturalParams {
    std::vector<double> theta; // length 2D

    explicit NaturalParams(std::vector<double> theta_);

    std::size_t dim() const { return theta.size() / 2; }
    double linear(std::size_t i) const { return theta[2 * i]; }
    double quad(std::size_t i) const { return theta[2 * i + 1]; }
};

NaturalParams to_natural(const GaussianDiag& g);
GaussianDiag to_gaussian(const NaturalParams& p);

// Unnormalized density f(x) = exp(<theta, t(x)> + log_scale). The simply
// unnormalized model of an exponential family has log_scale = 0; a nonzero
// log_scale covers rescaled targets (e.g. a normalized target uses
// log_scale = -log_partition(theta), making the true log Z zero).
struct UnnormalizedModel {
    NaturalParams theta;
    double log_scale = 0.0;

    static UnnormalizedModel simply_unnormalized(const GaussianDiag& shape);
    static UnnormalizedModel normalized(const GaussianDiag& shape);

    std::size_t dim() const { return theta.dim(); }
    // log Z such that f / Z integrates to 1
    double true_log_z() const;
};

double log_density(const GaussianDiag& g, std::span<const double> x);
double log_density_unnorm(const UnnormalizedModel& m, std::span<const double> x);

// log of integral of exp(<theta, t(x)>) dx
double log_partition(const NaturalParams& p);

// (E[x_i], E[x_i^2]) interleaved; gradient of log_partition
std::vector<double> mean_params(const NaturalParams& p);

// Hessian of log_partition: block-diagonal, one 2x2 covariance block of
// (x_i, x_i^2) per dimension.
struct HessianBlocks {
    // (a, b, d) per dimension for the symmetric block [[a, b], [b, d]]
    std::vector<std::array<double, 3>> blocks;

    std::size_t dim() const { return blocks.size(); }
    double min_eigenvalue() const;
    double max_eigenvalue() const;
    // dtheta^T H dtheta, dtheta interleaved length 2D
    double quad_form(std::span<const double> dtheta) const;
    // dense 2D x 2D matrix, row-major (test and report use only)
    std::vector<double> to_dense() const;
};

HessianBlocks hessian_log_partition(const NaturalParams& p);

// i.i.d. draws, row-major n x D
std::vector<double> sample(const GaussianDiag& g, std::size_t n, Rng& rng);

// Min/max eigenvalue of hessian_log_partition over the straight segment
// theta_a -> theta_b, scanned at `grid` points. Errors if the segment leaves
// the valid domain.
std::pair<double, double> strong_constants(const NaturalParams& theta_a,
                                           const NaturalParams& theta_b,
                                           int grid = 101);

} // namespace abe

#endif
