#include "bregman.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "errors.hpp"
#include "logspace.hpp"

namespace abe {

const char* loss_name(Loss loss) {
    switch (loss) {
    case Loss::is: return "is";
    case Loss::rev_is: return "revis";
    case Loss::nce: return "nce";
    case Loss::is_rev_is: return "is_revis";
    }
    return "?";
}

std::optional<Loss> loss_from_name(const std::string& name) {
    if (name == "is") return Loss::is;
    if (name == "revis") return Loss::rev_is;
    if (name == "nce") return Loss::nce;
    if (name == "is_revis") return Loss::is_rev_is;
    return std::nullopt;
}

double BregmanGenerator::phi(double x) const {
    switch (name) {
    case Loss::is: return x * std::log(x);
    case Loss::rev_is: return -std::log(x);
    case Loss::nce:
        return x * std::log(x) - (1.0 + x) * std::log(0.5 * (1.0 + x));
    case Loss::is_rev_is: {
        const double d = 1.0 - std::sqrt(x);
        return d * d;
    }
    }
    return 0.0;
}

double BregmanGenerator::phi_prime(double x) const {
    switch (name) {
    case Loss::is: return std::log(x) + 1.0;
    case Loss::rev_is: return -1.0 / x;
    case Loss::nce: return std::log(2.0 * x / (1.0 + x));
    case Loss::is_rev_is: return 1.0 - 1.0 / std::sqrt(x);
    }
    return 0.0;
}

BregmanGenerator BregmanGenerator::get(Loss loss) { return {loss}; }

bool loss_needs_lower(Loss loss) { return loss != Loss::rev_is; }
bool loss_needs_upper(Loss loss) { return loss != Loss::is; }

namespace {

void check_counts(Loss loss, const StepSamples& samples) {
    if (loss_needs_lower(loss))
        require(samples.from_lower.size() >= 2, ErrorCode::invalid_argument,
                std::string(loss_name(loss)) +
                    " estimator needs >= 2 lower-class samples");
    if (loss_needs_upper(loss))
        require(samples.from_upper.size() >= 2, ErrorCode::invalid_argument,
                std::string(loss_name(loss)) +
                    " estimator needs >= 2 upper-class samples");
}

double mean_of(const std::vector<double>& xs,
               const std::function<double(double)>& f) {
    double acc = 0.0;
    for (double x : xs) acc += f(x);
    return acc / static_cast<double>(xs.size());
}

} // namespace

double loss_eval(Loss loss, double beta, const StepSamples& samples) {
    require(!samples.from_lower.empty() && !samples.from_upper.empty(),
            ErrorCode::invalid_argument, "loss_eval needs samples of both classes");
    // u = log r = (log f_up - log f_low) - beta
    double value = 0.0;
    switch (loss) {
    case Loss::is:
        // E_low[r] - E_up[log r] - 1
        value = mean_of(samples.from_lower,
                        [&](double c) { return std::exp(c - beta); }) -
                mean_of(samples.from_upper,
                        [&](double c) { return c - beta; }) -
                1.0;
        break;
    case Loss::rev_is:
        // E_low[log r] + E_up[1/r] - 1
        value = mean_of(samples.from_lower,
                        [&](double c) { return c - beta; }) +
                mean_of(samples.from_upper,
                        [&](double c) { return std::exp(beta - c); }) -
                1.0;
        break;
    case Loss::nce:
        // E_low[log((1+r)/2)] - E_up[log(2r/(1+r))]
        value = mean_of(samples.from_lower,
                        [&](double c) {
                            return softplus(c - beta) - std::log(2.0);
                        }) -
                mean_of(samples.from_upper, [&](double c) {
                    return std::log(2.0) + (c - beta) - softplus(c - beta);
                });
        break;
    case Loss::is_rev_is:
        // E_low[sqrt(r)] + E_up[1/sqrt(r)] - 2
        value = mean_of(samples.from_lower,
                        [&](double c) { return std::exp(0.5 * (c - beta)); }) +
                mean_of(samples.from_upper,
                        [&](double c) { return std::exp(0.5 * (beta - c)); }) -
                2.0;
        break;
    }
    require(std::isfinite(value), ErrorCode::nonfinite,
            "non-finite density ratio in loss evaluation");
    return value;
}

double step_estimate_closed(Loss loss, const StepSamples& samples) {
    check_counts(loss, samples);
    switch (loss) {
    case Loss::is:
        return log_mean_exp(samples.from_lower);
    case Loss::rev_is: {
        std::vector<double> neg(samples.from_upper.size());
        for (std::size_t i = 0; i < neg.size(); ++i)
            neg[i] = -samples.from_upper[i];
        return -log_mean_exp(neg);
    }
    case Loss::is_rev_is: {
        std::vector<double> half_lo(samples.from_lower.size());
        for (std::size_t i = 0; i < half_lo.size(); ++i)
            half_lo[i] = 0.5 * samples.from_lower[i];
        std::vector<double> half_up(samples.from_upper.size());
        for (std::size_t i = 0; i < half_up.size(); ++i)
            half_up[i] = -0.5 * samples.from_upper[i];
        return log_mean_exp(half_lo) - log_mean_exp(half_up);
    }
    case Loss::nce:
        fail(ErrorCode::invalid_argument, "NCE has no closed-form estimator");
    }
    fail(ErrorCode::invalid_argument, "unknown loss");
}

namespace {

// dL/dbeta for the NCE loss; strictly increasing in beta.
double nce_gradient(double beta, const StepSamples& samples) {
    double acc = 0.0;
    for (double c : samples.from_lower) acc -= sigmoid(c - beta);
    acc /= static_cast<double>(samples.from_lower.size());
    double up = 0.0;
    for (double c : samples.from_upper) up += sigmoid(beta - c);
    acc += up / static_cast<double>(samples.from_upper.size());
    return acc;
}

} // namespace

StepEstimate step_estimate_nce(const StepSamples& samples,
                               std::optional<std::pair<double, double>> bracket_hint,
                               const NceOptions& options) {
    check_counts(Loss::nce, samples);
    double lo, hi;
    if (bracket_hint) {
        lo = bracket_hint->first;
        hi = bracket_hint->second;
    } else {
        const double beta_is = step_estimate_closed(Loss::is, samples);
        const double beta_revis = step_estimate_closed(Loss::rev_is, samples);
        lo = std::min(beta_is, beta_revis);
        hi = std::max(beta_is, beta_revis);
    }
    lo -= options.bracket_pad;
    hi += options.bracket_pad;

    int doublings = 0;
    while (!(nce_gradient(lo, samples) < 0.0 && nce_gradient(hi, samples) > 0.0)) {
        if (doublings++ >= options.max_doublings)
            fail(ErrorCode::optimization,
                 "no interior NCE minimum in bracket [" + std::to_string(lo) +
                     ", " + std::to_string(hi) + "] after " +
                     std::to_string(options.max_doublings) + " doublings");
        const double mid = 0.5 * (lo + hi);
        const double half = (hi - lo); // doubled width
        lo = mid - half;
        hi = mid + half;
    }

    StepEstimate out;
    while (hi - lo > options.tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (nce_gradient(mid, samples) < 0.0)
            lo = mid;
        else
            hi = mid;
        ++out.iterations;
        if (out.iterations > 200) break; // width below double resolution
    }
    out.beta = 0.5 * (lo + hi);
    return out;
}

StepEstimate step_estimate(Loss loss, const StepSamples& samples) {
    if (loss == Loss::nce) return step_estimate_nce(samples);
    return StepEstimate{step_estimate_closed(loss, samples), 0};
}

} // namespace abe
