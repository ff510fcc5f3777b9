#ifndef ABE_ESTIMATOR_HPP
#define ABE_ESTIMATOR_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "bregman.hpp"
#include "paths.hpp"

namespace abe {

// Full estimator configuration. Losses hold either one generator broadcast to
// every step or exactly K of them.
struct AbeConfig {
    PathSpec path;
    int K = 1;
    long n_total = 2;
    double nu = 1.0;
    std::vector<Loss> losses{Loss::nce};
    std::uint64_t seed = 0;
};

struct StepDiagnostics {
    long n_lower = 0;
    long n_upper = 0;
    int optimizer_iterations = 0;
    bool failed = false;
};

struct EstimateResult {
    double log_z1_hat = 0.0;
    std::vector<double> step_betas;
    std::vector<StepDiagnostics> diagnostics;
    // filled by the two-step procedure
    std::optional<double> stage1_log_z1;
};

// Annealed estimator: discretize the path at K+1 nodes, draw fresh samples
// for every step from independent substreams (one per step and class), sum
// the per-step log-ratio estimates. Deterministic given the seed; a step
// failure aborts the whole estimate.
EstimateResult abe_log_z(const AbeConfig& config);

// K = 2 with losses [IS, RevIS] around an evaluable middle density; only the
// endpoints are ever sampled.
EstimateResult bridge_sampling(
    const GaussianDiag& p0, const UnnormalizedModel& f1,
    const std::function<double(std::span<const double>)>& log_f_mid,
    long n_total, std::uint64_t seed, double nu = 1.0);

// K = 2 with losses [RevIS, IS]; every sample comes from the middle
// distribution, which must support exact sampling.
EstimateResult umbrella_sampling(const GaussianDiag& p0,
                                 const UnnormalizedModel& f1,
                                 const Density& p_mid, long n_total,
                                 std::uint64_t seed, double nu = 1.0);

// All-IS losses over a samplable path.
EstimateResult ais(const PathSpec& path, int K, long n_total,
                   std::uint64_t seed, double nu = 1.0);

// Stage 1: geometric path with NCE losses and budget N. Stage 2: arithmetic
// path under the chosen oracle schedule with z1 = exp(stage-1 estimate),
// fresh substream. Both stages get the full budget N unless split_budget.
EstimateResult two_step(const GaussianDiag& p0, const UnnormalizedModel& f1,
                        int K, long n_total, std::uint64_t seed,
                        ScheduleKind final_schedule, bool split_budget = false,
                        double nu = 1.0);

} // namespace abe

#endif
