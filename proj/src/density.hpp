#ifndef ABE_DENSITY_HPP
#define ABE_DENSITY_HPP

#include <cstddef>
#include <vector>

#include "exp_family.hpp"
#include "rng.hpp"

namespace abe {

// Normalized finite mixture of diagonal Gaussians. A single component covers
// plain Gaussians; paths produce two- and three-component mixtures. This is
// the evaluable/samplable form the theory quadratures work with.
class Density {
public:
    struct Component {
        double weight;
        GaussianDiag gaussian;
    };

    explicit Density(GaussianDiag g);
    explicit Density(std::vector<Component> components);

    std::size_t dim() const;
    const std::vector<Component>& components() const { return comps_; }

    double log_pdf(std::span<const double> x) const;
    double pdf(std::span<const double> x) const;

    // one draw appended to out (length dim)
    void sample_into(Rng& rng, std::span<double> out) const;
    std::vector<double> sample(std::size_t n, Rng& rng) const; // row-major n x D

    // analytic per-dimension moments of the mixture
    double mean_of_dim(std::size_t i) const;
    double var_of_dim(std::size_t i) const;

    // [lo, hi] covering at least k_sigma standard deviations of every
    // component in dimension i
    std::pair<double, double> support_range(std::size_t i, double k_sigma) const;

private:
    std::vector<Component> comps_;
};

// range covering both densities (for pairwise divergence quadrature)
std::pair<double, double> joint_range(const Density& p, const Density& q,
                                      std::size_t dim_index, double k_sigma);

} // namespace abe

#endif
