#include "density.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "logspace.hpp"

namespace abe {

Density::Density(GaussianDiag g) {
    comps_.push_back({1.0, std::move(g)});
}

Density::Density(std::vector<Component> components) : comps_(std::move(components)) {
    require(!comps_.empty(), ErrorCode::invalid_argument, "empty mixture");
    double total = 0.0;
    for (const auto& c : comps_) {
        require(c.weight >= -1e-12, ErrorCode::invalid_argument,
                "mixture weights must be nonnegative");
        require(c.gaussian.dim() == comps_.front().gaussian.dim(),
                ErrorCode::dimension_mismatch, "mixture component dims differ");
        total += c.weight;
    }
    require(std::abs(total - 1.0) < 1e-9, ErrorCode::invalid_argument,
            "mixture weights must sum to 1");
    for (auto& c : comps_) c.weight = std::max(c.weight, 0.0);
}

std::size_t Density::dim() const { return comps_.front().gaussian.dim(); }

double Density::log_pdf(std::span<const double> x) const {
    if (comps_.size() == 1) return log_density(comps_[0].gaussian, x);
    double acc = neg_inf;
    for (const auto& c : comps_) {
        if (c.weight <= 0.0) continue;
        acc = log_add(acc, std::log(c.weight) + log_density(c.gaussian, x));
    }
    return acc;
}

double Density::pdf(std::span<const double> x) const {
    return std::exp(log_pdf(x));
}

void Density::sample_into(Rng& rng, std::span<double> out) const {
    std::size_t idx = 0;
    if (comps_.size() > 1) {
        std::vector<double> w(comps_.size());
        for (std::size_t i = 0; i < comps_.size(); ++i) w[i] = comps_[i].weight;
        idx = rng.categorical(w);
    }
    const GaussianDiag& g = comps_[idx].gaussian;
    for (std::size_t i = 0; i < g.dim(); ++i)
        out[i] = g.mean[i] + std::sqrt(g.var[i]) * rng.normal();
}

std::vector<double> Density::sample(std::size_t n, Rng& rng) const {
    std::vector<double> out(n * dim());
    for (std::size_t r = 0; r < n; ++r)
        sample_into(rng, std::span<double>(out.data() + r * dim(), dim()));
    return out;
}

double Density::mean_of_dim(std::size_t i) const {
    double m = 0.0;
    for (const auto& c : comps_) m += c.weight * c.gaussian.mean[i];
    return m;
}

double Density::var_of_dim(std::size_t i) const {
    const double m = mean_of_dim(i);
    double second = 0.0;
    for (const auto& c : comps_)
        second += c.weight * (c.gaussian.var[i] +
                              c.gaussian.mean[i] * c.gaussian.mean[i]);
    return second - m * m;
}

std::pair<double, double> Density::support_range(std::size_t i,
                                                 double k_sigma) const {
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const auto& c : comps_) {
        const double sd = std::sqrt(c.gaussian.var[i]);
        const double a = c.gaussian.mean[i] - k_sigma * sd;
        const double b = c.gaussian.mean[i] + k_sigma * sd;
        if (first) {
            lo = a;
            hi = b;
            first = false;
        } else {
            lo = std::min(lo, a);
            hi = std::max(hi, b);
        }
    }
    return {lo, hi};
}

std::pair<double, double> joint_range(const Density& p, const Density& q,
                                      std::size_t dim_index, double k_sigma) {
    auto [alo, ahi] = p.support_range(dim_index, k_sigma);
    auto [blo, bhi] = q.support_range(dim_index, k_sigma);
    return {std::min(alo, blo), std::max(ahi, bhi)};
}

} // namespace abe
