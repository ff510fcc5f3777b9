#include "estimator.hpp"

#include <cmath>
#include <string>

#include "errors.hpp"
#include "rng.hpp"

namespace abe {

namespace {

// One endpoint of an estimation step: evaluable unnormalized log density plus
// a sampler where the procedure needs one.
struct StepDist {
    std::function<double(std::span<const double>)> log_f;
    const Density* sampler = nullptr; // may be null when never sampled
};

struct StepPlan {
    Loss loss;
    long n_lower = 0;
    long n_upper = 0;
    std::uint64_t seed_lower = 0;
    std::uint64_t seed_upper = 0;
};

std::vector<double> eval_ratios(const StepDist& lo, const StepDist& hi,
                                const std::vector<double>& xs, std::size_t dim) {
    const std::size_t n = xs.size() / dim;
    std::vector<double> out(n);
    for (std::size_t r = 0; r < n; ++r) {
        std::span<const double> x(xs.data() + r * dim, dim);
        out[r] = hi.log_f(x) - lo.log_f(x);
    }
    return out;
}

StepEstimate run_step(const StepDist& lo, const StepDist& hi,
                      const StepPlan& plan, std::size_t dim,
                      StepDiagnostics& diag) {
    StepSamples samples;
    if (loss_needs_lower(plan.loss)) {
        require(lo.sampler != nullptr, ErrorCode::unsupported,
                "step requires sampling the lower distribution");
        require(plan.n_lower >= 2, ErrorCode::invalid_argument,
                "per-step budget leaves < 2 lower-class samples");
        Rng rng(plan.seed_lower);
        const std::vector<double> xs = lo.sampler->sample(plan.n_lower, rng);
        samples.from_lower = eval_ratios(lo, hi, xs, dim);
        diag.n_lower = plan.n_lower;
    }
    if (loss_needs_upper(plan.loss)) {
        require(hi.sampler != nullptr, ErrorCode::unsupported,
                "step requires sampling the upper distribution");
        require(plan.n_upper >= 2, ErrorCode::invalid_argument,
                "per-step budget leaves < 2 upper-class samples");
        Rng rng(plan.seed_upper);
        const std::vector<double> xs = hi.sampler->sample(plan.n_upper, rng);
        samples.from_upper = eval_ratios(lo, hi, xs, dim);
        diag.n_upper = plan.n_upper;
    }
    const StepEstimate est = step_estimate(plan.loss, samples);
    diag.optimizer_iterations = est.iterations;
    return est;
}

// Shared driver: per-step fresh substreams, ratio allocation nu:1 with the
// remainder going to the lower class, ordered summation.
EstimateResult run_steps(const std::vector<StepDist>& dists,
                         const std::vector<Loss>& losses, long n_total,
                         double nu, std::uint64_t seed, std::size_t dim) {
    const std::size_t K = dists.size() - 1;
    require(losses.size() == 1 || losses.size() == K, ErrorCode::invalid_argument,
            "losses must hold one generator or exactly K");
    require(n_total >= 2 * static_cast<long>(K), ErrorCode::invalid_argument,
            "budget must allow at least 2 samples per step");
    require(nu > 0.0, ErrorCode::invalid_argument, "nu must be positive");

    EstimateResult result;
    result.step_betas.resize(K);
    result.diagnostics.resize(K);
    const long base = n_total / static_cast<long>(K);
    const long remainder = n_total % static_cast<long>(K);

    for (std::size_t k = 0; k < K; ++k) {
        const long n_k = base + (static_cast<long>(k) < remainder ? 1 : 0);
        StepPlan plan;
        plan.loss = losses.size() == 1 ? losses[0] : losses[k];
        plan.n_upper = static_cast<long>(std::floor(n_k / (1.0 + nu)));
        plan.n_lower = n_k - plan.n_upper;
        plan.seed_lower = Rng::derive(seed, {static_cast<std::uint64_t>(k), 0});
        plan.seed_upper = Rng::derive(seed, {static_cast<std::uint64_t>(k), 1});
        try {
            const StepEstimate est = run_step(dists[k], dists[k + 1], plan, dim,
                                              result.diagnostics[k]);
            result.step_betas[k] = est.beta;
        } catch (const Error& e) {
            result.diagnostics[k].failed = true;
            fail(ErrorCode::step_failure,
                 "step " + std::to_string(k) + " failed: " + e.what());
        }
    }
    double total = 0.0;
    for (double beta : result.step_betas) total += beta;
    result.log_z1_hat = total; // log Z0 = 0, proposal normalized
    return result;
}

std::vector<StepDist> grid_dists(const PathGrid& grid) {
    std::vector<StepDist> dists;
    dists.reserve(grid.points.size());
    for (const GridPoint& gp : grid.points) {
        StepDist d;
        d.log_f = [&gp](std::span<const double> x) { return gp.log_f(x); };
        d.sampler = gp.can_sample() ? &gp.normalized() : nullptr;
        dists.push_back(std::move(d));
    }
    return dists;
}

} // namespace

EstimateResult abe_log_z(const AbeConfig& config) {
    require(config.K >= 1, ErrorCode::invalid_argument, "K must be >= 1");
    const PathGrid grid = discretize(config.path, config.K);
    const std::vector<StepDist> dists = grid_dists(grid);
    return run_steps(dists, config.losses, config.n_total, config.nu,
                     config.seed, config.path.p0.dim());
}

EstimateResult bridge_sampling(
    const GaussianDiag& p0, const UnnormalizedModel& f1,
    const std::function<double(std::span<const double>)>& log_f_mid,
    long n_total, std::uint64_t seed, double nu) {
    const Density d0(p0);
    const Density d1(to_gaussian(f1.theta));
    std::vector<StepDist> dists(3);
    dists[0].log_f = [&p0](std::span<const double> x) {
        return log_density(p0, x);
    };
    dists[0].sampler = &d0;
    dists[1].log_f = log_f_mid; // evaluable only, never sampled
    dists[2].log_f = [&f1](std::span<const double> x) {
        return log_density_unnorm(f1, x);
    };
    dists[2].sampler = &d1;
    return run_steps(dists, {Loss::is, Loss::rev_is}, n_total, nu, seed,
                     p0.dim());
}

EstimateResult umbrella_sampling(const GaussianDiag& p0,
                                 const UnnormalizedModel& f1,
                                 const Density& p_mid, long n_total,
                                 std::uint64_t seed, double nu) {
    require(p_mid.dim() == p0.dim(), ErrorCode::dimension_mismatch,
            "middle distribution dimension differs");
    std::vector<StepDist> dists(3);
    dists[0].log_f = [&p0](std::span<const double> x) {
        return log_density(p0, x);
    };
    dists[1].log_f = [&p_mid](std::span<const double> x) {
        return p_mid.log_pdf(x);
    };
    dists[1].sampler = &p_mid;
    dists[2].log_f = [&f1](std::span<const double> x) {
        return log_density_unnorm(f1, x);
    };
    return run_steps(dists, {Loss::rev_is, Loss::is}, n_total, nu, seed,
                     p0.dim());
}

EstimateResult ais(const PathSpec& path, int K, long n_total, std::uint64_t seed,
                   double nu) {
    AbeConfig config{path, K, n_total, nu, {Loss::is}, seed};
    return abe_log_z(config);
}

EstimateResult two_step(const GaussianDiag& p0, const UnnormalizedModel& f1,
                        int K, long n_total, std::uint64_t seed,
                        ScheduleKind final_schedule, bool split_budget,
                        double nu) {
    require(final_schedule == ScheduleKind::oracle ||
                final_schedule == ScheduleKind::oracle_trig,
            ErrorCode::invalid_argument,
            "two-step needs an oracle or oracle-trig final schedule");
    const long n_stage1 = split_budget ? n_total / 2 : n_total;
    const long n_stage2 = split_budget ? n_total - n_stage1 : n_total;

    AbeConfig stage1{PathSpec::geometric(p0, f1), K, n_stage1, nu, {Loss::nce},
                     Rng::derive(seed, {0x70, 1})};
    EstimateResult pre = abe_log_z(stage1);

    const double z1_hat = std::exp(pre.log_z1_hat);
    require(z1_hat > 0.0 && std::isfinite(z1_hat), ErrorCode::nonfinite,
            "stage-1 estimate produced an unusable z1");
    const Schedule schedule = final_schedule == ScheduleKind::oracle
                                  ? Schedule::oracle(z1_hat)
                                  : Schedule::oracle_trig(z1_hat);
    AbeConfig stage2{PathSpec::arithmetic(p0, f1, schedule), K, n_stage2, nu,
                     {Loss::nce}, Rng::derive(seed, {0x70, 2})};
    EstimateResult result = abe_log_z(stage2);
    result.stage1_log_z1 = pre.log_z1_hat;
    return result;
}

} // namespace abe
