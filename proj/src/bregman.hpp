#ifndef ABE_BREGMAN_HPP
#define ABE_BREGMAN_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace abe {

enum class Loss { is, rev_is, nce, is_rev_is };

const char* loss_name(Loss loss);
std::optional<Loss> loss_from_name(const std::string& name);

// Convex generator phi identifying the classification loss.
struct BregmanGenerator {
    Loss name;
    double phi(double x) const;
    double phi_prime(double x) const;
    static BregmanGenerator get(Loss loss);
};

// Which sample classes the closed-form / implicit estimator consumes.
bool loss_needs_lower(Loss loss);
bool loss_needs_upper(Loss loss);

// Per-step data: log f_upper(x) - log f_lower(x) evaluated at the samples of
// each class (lower = p_k, upper = p_{k+1}).
struct StepSamples {
    std::vector<double> from_lower;
    std::vector<double> from_upper;
};

// Monte Carlo estimate of L(beta) = E_lower[phi'(r) r - phi(r)] -
// E_upper[phi'(r)] with r = exp(-beta) f_up / f_low, computed in log space.
// Errors on a non-finite contribution (density ratio overflow).
double loss_eval(Loss loss, double beta, const StepSamples& samples);

// Closed-form minimizers. IS: log mean ratio over lower samples; RevIS:
// minus log mean inverse ratio over upper samples; IS-RevIS: the square-root
// difference form (the minimizer of (1 - sqrt(x))^2).
double step_estimate_closed(Loss loss, const StepSamples& samples);

struct NceOptions {
    double tolerance = 1e-10; // absolute, in beta
    double bracket_pad = 2.0;
    int max_doublings = 3;
};

struct StepEstimate {
    double beta = 0.0;
    int iterations = 0;
};

// Scalar NCE minimizer by derivative-sign bisection (the empirical loss is
// convex in beta). Default bracket: [IS estimate, RevIS estimate] padded by
// +-bracket_pad, doubled on failure.
StepEstimate step_estimate_nce(
    const StepSamples& samples,
    std::optional<std::pair<double, double>> bracket_hint = std::nullopt,
    const NceOptions& options = {});

// Dispatch on the generator.
StepEstimate step_estimate(Loss loss, const StepSamples& samples);

} // namespace abe

#endif
