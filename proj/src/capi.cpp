#include "abe/abe.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <string>

#include "config.hpp"
#include "errors.hpp"
#include "estimator.hpp"
#include "harness.hpp"
#include "rng.hpp"
#include "theory.hpp"

using namespace abe;

namespace {

thread_local std::string g_last_error;

abe_status status_of(const Error& e) {
    switch (e.code()) {
    case ErrorCode::invalid_argument: return ABE_ERR_INVALID_ARGUMENT;
    case ErrorCode::dimension_mismatch: return ABE_ERR_DIMENSION_MISMATCH;
    case ErrorCode::domain: return ABE_ERR_DOMAIN;
    case ErrorCode::unsupported: return ABE_ERR_UNSUPPORTED;
    case ErrorCode::optimization: return ABE_ERR_OPTIMIZATION;
    case ErrorCode::nonfinite: return ABE_ERR_NONFINITE;
    case ErrorCode::config: return ABE_ERR_CONFIG;
    case ErrorCode::io: return ABE_ERR_IO;
    case ErrorCode::step_failure: return ABE_ERR_STEP_FAILURE;
    }
    return ABE_ERR_UNKNOWN;
}

template <typename Fn>
abe_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return ABE_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return status_of(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return ABE_ERR_UNKNOWN;
    } catch (...) {
        g_last_error = "unknown failure";
        return ABE_ERR_UNKNOWN;
    }
}

abe_status arg_error(const char* what) {
    g_last_error = what;
    return ABE_ERR_INVALID_ARGUMENT;
}

double theory_value_c(const TheoryValue& v) {
    switch (v.state) {
    case TheoryValue::State::ok: return v.value;
    case TheoryValue::State::infinite: return INFINITY;
    case TheoryValue::State::unavailable: return NAN;
    }
    return NAN;
}

} // namespace

struct abe_gaussian {
    GaussianDiag value;
};

struct abe_target {
    UnnormalizedModel value;
};

struct abe_options {
    EstimatorKind estimator = EstimatorKind::geometric;
    Loss loss = Loss::nce;
    int k = 9;
    long n = 10000;
    double nu = 1.0;
    std::uint64_t seed = 1;
    bool two_step_split_budget = false;
};

struct abe_result {
    EstimateResult value;
};

extern "C" {

const char* abe_version(void) { return version_string; }

const char* abe_last_error(void) { return g_last_error.c_str(); }

abe_status abe_gaussian_create(size_t dim, const double* mean,
                               const double* var, abe_gaussian** out) {
    if (!mean || !var || !out) return arg_error("null argument");
    return guarded([&] {
        *out = new abe_gaussian{
            GaussianDiag(std::vector<double>(mean, mean + dim),
                         std::vector<double>(var, var + dim))};
    });
}

abe_status abe_gaussian_create_isotropic(size_t dim, double mean, double var,
                                         abe_gaussian** out) {
    if (!out) return arg_error("null argument");
    return guarded([&] {
        *out = new abe_gaussian{GaussianDiag::isotropic(dim, mean, var)};
    });
}

void abe_gaussian_destroy(abe_gaussian* g) { delete g; }

abe_status abe_gaussian_log_density(const abe_gaussian* g, const double* x,
                                    size_t dim, double* out) {
    if (!g || !x || !out) return arg_error("null argument");
    return guarded([&] {
        *out = log_density(g->value, std::span<const double>(x, dim));
    });
}

abe_status abe_gaussian_sample(const abe_gaussian* g, size_t n, uint64_t seed,
                               double* out) {
    if (!g || !out) return arg_error("null argument");
    return guarded([&] {
        Rng rng(seed);
        const std::vector<double> draws = sample(g->value, n, rng);
        std::memcpy(out, draws.data(), draws.size() * sizeof(double));
    });
}

abe_status abe_target_simply_unnormalized(const abe_gaussian* shape,
                                          abe_target** out) {
    if (!shape || !out) return arg_error("null argument");
    return guarded([&] {
        *out = new abe_target{UnnormalizedModel::simply_unnormalized(shape->value)};
    });
}

abe_status abe_target_normalized(const abe_gaussian* shape, abe_target** out) {
    if (!shape || !out) return arg_error("null argument");
    return guarded([&] {
        *out = new abe_target{UnnormalizedModel::normalized(shape->value)};
    });
}

abe_status abe_target_scale(abe_target* target, double log_factor) {
    if (!target) return arg_error("null argument");
    return guarded([&] {
        require(std::isfinite(log_factor), ErrorCode::invalid_argument,
                "log_factor must be finite");
        target->value.log_scale += log_factor;
    });
}

abe_status abe_target_true_log_z(const abe_target* target, double* out) {
    if (!target || !out) return arg_error("null argument");
    return guarded([&] { *out = target->value.true_log_z(); });
}

abe_status abe_target_log_density(const abe_target* target, const double* x,
                                  size_t dim, double* out) {
    if (!target || !x || !out) return arg_error("null argument");
    return guarded([&] {
        *out = log_density_unnorm(target->value, std::span<const double>(x, dim));
    });
}

void abe_target_destroy(abe_target* target) { delete target; }

abe_status abe_options_create(abe_options** out) {
    if (!out) return arg_error("null argument");
    return guarded([&] { *out = new abe_options{}; });
}

void abe_options_destroy(abe_options* options) { delete options; }

abe_status abe_options_set_estimator(abe_options* options, const char* name) {
    if (!options || !name) return arg_error("null argument");
    return guarded([&] {
        auto kind = estimator_kind_from_name(name);
        require(kind.has_value(), ErrorCode::invalid_argument,
                std::string("unknown estimator '") + name + "'");
        options->estimator = *kind;
    });
}

abe_status abe_options_set_loss(abe_options* options, const char* name) {
    if (!options || !name) return arg_error("null argument");
    return guarded([&] {
        auto loss = loss_from_name(name);
        require(loss.has_value(), ErrorCode::invalid_argument,
                std::string("unknown loss '") + name + "'");
        options->loss = *loss;
    });
}

abe_status abe_options_set_k(abe_options* options, int k) {
    if (!options) return arg_error("null argument");
    return guarded([&] {
        require(k >= 1, ErrorCode::invalid_argument, "k must be >= 1");
        options->k = k;
    });
}

abe_status abe_options_set_n(abe_options* options, long n) {
    if (!options) return arg_error("null argument");
    return guarded([&] {
        require(n >= 2, ErrorCode::invalid_argument, "n must be >= 2");
        options->n = n;
    });
}

abe_status abe_options_set_nu(abe_options* options, double nu) {
    if (!options) return arg_error("null argument");
    return guarded([&] {
        require(nu > 0.0 && std::isfinite(nu), ErrorCode::invalid_argument,
                "nu must be positive");
        options->nu = nu;
    });
}

abe_status abe_options_set_seed(abe_options* options, uint64_t seed) {
    if (!options) return arg_error("null argument");
    options->seed = seed;
    return ABE_OK;
}

abe_status abe_options_set_two_step_split_budget(abe_options* options,
                                                 int enabled) {
    if (!options) return arg_error("null argument");
    options->two_step_split_budget = enabled != 0;
    return ABE_OK;
}

abe_status abe_estimate(const abe_gaussian* proposal, const abe_target* target,
                        const abe_options* options, abe_result** out) {
    if (!proposal || !target || !out) return arg_error("null argument");
    static const abe_options defaults{};
    const abe_options& opts = options ? *options : defaults;
    return guarded([&] {
        *out = new abe_result{run_estimator_cell(
            opts.estimator, opts.loss, proposal->value, target->value, opts.k,
            opts.n, opts.nu, opts.seed, opts.two_step_split_budget)};
    });
}

double abe_result_log_z(const abe_result* result) {
    return result ? result->value.log_z1_hat : NAN;
}

size_t abe_result_step_count(const abe_result* result) {
    return result ? result->value.step_betas.size() : 0;
}

double abe_result_step_beta(const abe_result* result, size_t step) {
    if (!result || step >= result->value.step_betas.size()) return NAN;
    return result->value.step_betas[step];
}

int abe_result_has_stage1(const abe_result* result) {
    return result && result->value.stage1_log_z1.has_value() ? 1 : 0;
}

double abe_result_stage1_log_z(const abe_result* result) {
    if (!result || !result->value.stage1_log_z1) return NAN;
    return *result->value.stage1_log_z1;
}

void abe_result_destroy(abe_result* result) { delete result; }

abe_status abe_theory(const abe_gaussian* proposal, const abe_target* target,
                      const char* path, int k, double n, double nu,
                      abe_theory_report* out) {
    if (!proposal || !target || !path || !out) return arg_error("null argument");
    return guarded([&] {
        const GaussianDiag& p0 = proposal->value;
        const UnnormalizedModel& f1 = target->value;
        const std::string name = path;
        const double z1 = std::exp(f1.true_log_z());
        PathSpec spec = PathSpec::geometric(p0, f1);
        if (name == "geometric") {
        } else if (name == "arithmetic-vanilla") {
            spec = PathSpec::arithmetic(p0, f1, Schedule::vanilla());
        } else if (name == "arithmetic-oracle") {
            spec = PathSpec::arithmetic(p0, f1, Schedule::oracle(z1));
        } else if (name == "arithmetic-oracle-trig") {
            spec = PathSpec::arithmetic(p0, f1, Schedule::oracle_trig(z1));
        } else if (name == "optimal") {
            spec = PathSpec::optimal(p0, f1);
        } else {
            fail(ErrorCode::invalid_argument, "unknown path '" + name + "'");
        }
        const TheoryReport r = make_theory_report(p0, f1, spec, k, n, nu);
        out->param_distance = r.bounds.param_distance;
        out->m_const = r.bounds.m_const;
        out->l_const = r.bounds.l_const;
        out->d_chi2_fwd = theory_value_c(r.d_chi2_fwd);
        out->d_chi2_rev = theory_value_c(r.d_chi2_rev);
        out->d_hellinger2 = r.d_hellinger2;
        out->d_harmonic = theory_value_c(r.d_harmonic);
        out->epsilon = r.epsilon;
        out->mse_binary_is = theory_value_c(r.mse_binary_is);
        out->mse_binary_revis = theory_value_c(r.mse_binary_revis);
        out->mse_binary_nce = theory_value_c(r.mse_binary_nce);
        out->mse_binary_is_revis = theory_value_c(r.mse_binary_is_revis);
        out->fisher_rao_length = theory_value_c(r.fisher_rao_len);
        out->mse_annealed_nce = theory_value_c(r.mse_annealed);
        out->alpha_h = r.alpha_h_value;
        out->optimal_fisher_rao = r.optimal_fisher_rao;
        out->optimal_mse = r.optimal_mse;
        out->binary_lower_bound = r.bounds.binary_lower_bound;
        out->geometric_upper_bound = r.bounds.geometric_upper_bound;
        out->vanilla_lower_bound = theory_value_c(r.bounds.vanilla_lower_bound);
        out->oracle_upper_bound = r.bounds.oracle_upper_bound;
    });
}

abe_status abe_run_config_file(const char* config_path,
                               const abe_run_overrides* overrides) {
    return abe_run_config_file_checked(config_path, overrides, nullptr);
}

abe_status abe_run_config_file_checked(const char* config_path,
                                       const abe_run_overrides* overrides,
                                       int* nce_ordering_out) {
    return guarded([&] {
        std::optional<ExperimentKind> experiment;
        if (overrides && overrides->experiment) {
            experiment = experiment_from_name(overrides->experiment);
            require(experiment.has_value(), ErrorCode::config,
                    std::string("unknown experiment '") +
                        overrides->experiment + "'");
        }
        SweepConfig config;
        if (config_path) {
            config = load_config_file(config_path, experiment);
        } else {
            require(experiment.has_value(), ErrorCode::config,
                    "either a config file or an experiment name is required");
            config = default_config(*experiment);
        }
        if (overrides) {
            if (overrides->seed >= 0)
                config.seed = static_cast<std::uint64_t>(overrides->seed);
            if (overrides->jobs > 0) config.jobs = overrides->jobs;
            if (overrides->paper_scale) apply_paper_scale(config);
            if (overrides->out_path) config.out = overrides->out_path;
        }
        config.validate();
        if (nce_ordering_out) *nce_ordering_out = 1;
        if (config.experiment == ExperimentKind::theory_report) {
            run_experiment_to_file(config);
            return;
        }
        const std::vector<SweepRow> rows = run_experiment_rows(config);
        if (nce_ordering_out)
            *nce_ordering_out = nce_ordering_holds(rows) ? 1 : 0;
        if (config.out.empty()) {
            write_rows_csv(config, rows, std::cout);
        } else {
            std::ofstream out(config.out, std::ios::binary);
            require(out.good(), ErrorCode::io,
                    "cannot open output file: " + config.out);
            write_rows_csv(config, rows, out);
        }
    });
}

abe_status abe_plot(const char* csv_path, const char* svg_path) {
    if (!csv_path || !svg_path) return arg_error("null argument");
    return guarded([&] { emit_plot(csv_path, svg_path); });
}

} // extern "C"
