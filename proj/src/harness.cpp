#include "harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "errors.hpp"
#include "svg.hpp"
#include "rng.hpp"

namespace abe {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_theory(const TheoryValue& v) {
    switch (v.state) {
    case TheoryValue::State::ok: return fmt_double(v.value);
    case TheoryValue::State::infinite: return "inf";
    case TheoryValue::State::unavailable: return "fail:unsupported";
    }
    return "fail:unsupported";
}

std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

void parallel_for(std::size_t count, int jobs,
                  const std::function<void(std::size_t)>& body) {
    if (jobs <= 0)
        jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;
    if (jobs == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int workers = std::min<std::size_t>(jobs, count);
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                body(i);
            }
        });
    for (std::thread& t : pool) t.join();
}

struct CellSpec {
    double sweep_value = 0.0;
    int dim = 1;
    double target_variance = 1.0;
    bool normalized_target = false; // compare_losses pins the truth at zero
    EstimatorKind estimator = EstimatorKind::geometric;
    Loss loss = Loss::nce;
    int seed_index = 0;
    std::size_t grid_index = 0;
};

GaussianDiag proposal_for(int dim) {
    return GaussianDiag::isotropic(dim, 0.0, 1.0);
}

UnnormalizedModel target_for(const CellSpec& cell) {
    GaussianDiag shape =
        GaussianDiag::isotropic(cell.dim, 0.0, cell.target_variance);
    return cell.normalized_target ? UnnormalizedModel::normalized(shape)
                                  : UnnormalizedModel::simply_unnormalized(shape);
}

PathSpec theory_path_for(EstimatorKind kind, const GaussianDiag& p0,
                         const UnnormalizedModel& f1) {
    const double z1 = std::exp(f1.true_log_z());
    switch (kind) {
    case EstimatorKind::none:
    case EstimatorKind::geometric:
        return PathSpec::geometric(p0, f1);
    case EstimatorKind::arithmetic:
        return PathSpec::arithmetic(p0, f1, Schedule::vanilla());
    case EstimatorKind::two_step:
        return PathSpec::arithmetic(p0, f1, Schedule::oracle(z1));
    case EstimatorKind::two_step_trig:
        return PathSpec::arithmetic(p0, f1, Schedule::oracle_trig(z1));
    }
    return PathSpec::geometric(p0, f1);
}

const char* path_name_for(EstimatorKind kind) {
    switch (kind) {
    case EstimatorKind::none: return "geometric";
    case EstimatorKind::geometric: return "geometric";
    case EstimatorKind::arithmetic: return "arithmetic-vanilla";
    case EstimatorKind::two_step: return "arithmetic-oracle";
    case EstimatorKind::two_step_trig: return "arithmetic-oracle-trig";
    }
    return "?";
}

int effective_k(EstimatorKind kind, int k) {
    return kind == EstimatorKind::none ? 1 : k;
}

} // namespace

double variance_for_distance(double distance, int dim) {
    return 1.0 / (1.0 + 2.0 * distance / std::sqrt(static_cast<double>(dim)));
}

EstimateResult run_estimator_cell(EstimatorKind kind, Loss loss,
                                  const GaussianDiag& p0,
                                  const UnnormalizedModel& f1, int k, long n,
                                  double nu, std::uint64_t seed,
                                  bool two_step_split_budget) {
    switch (kind) {
    case EstimatorKind::none: {
        AbeConfig cfg{PathSpec::geometric(p0, f1), 1, n, nu, {loss}, seed};
        return abe_log_z(cfg);
    }
    case EstimatorKind::geometric: {
        AbeConfig cfg{PathSpec::geometric(p0, f1), k, n, nu, {loss}, seed};
        return abe_log_z(cfg);
    }
    case EstimatorKind::arithmetic: {
        AbeConfig cfg{PathSpec::arithmetic(p0, f1, Schedule::vanilla()), k, n,
                      nu, {loss}, seed};
        return abe_log_z(cfg);
    }
    case EstimatorKind::two_step:
        return two_step(p0, f1, k, n, seed, ScheduleKind::oracle,
                        two_step_split_budget, nu);
    case EstimatorKind::two_step_trig:
        return two_step(p0, f1, k, n, seed, ScheduleKind::oracle_trig,
                        two_step_split_budget, nu);
    }
    fail(ErrorCode::invalid_argument, "unknown estimator kind");
}

namespace {

std::vector<CellSpec> build_cells(const SweepConfig& config) {
    std::vector<CellSpec> cells;
    auto add_grid_point = [&](std::size_t grid_index, double sweep_value,
                              int dim, double variance, bool normalized) {
        for (EstimatorKind est : config.estimators)
            for (Loss loss : config.losses)
                for (int s = 0; s < config.seeds; ++s)
                    cells.push_back(CellSpec{sweep_value, dim, variance,
                                             normalized, est, loss, s,
                                             grid_index});
    };
    switch (config.experiment) {
    case ExperimentKind::compare_losses:
        add_grid_point(0, config.target_variance, config.dim,
                       config.target_variance, true);
        break;
    case ExperimentKind::sweep_distance:
        for (std::size_t g = 0; g < config.distances.size(); ++g)
            add_grid_point(g, config.distances[g], config.dim,
                           variance_for_distance(config.distances[g],
                                                 config.dim),
                           false);
        break;
    case ExperimentKind::sweep_dimension:
        for (std::size_t g = 0; g < config.dims.size(); ++g)
            add_grid_point(g, static_cast<double>(config.dims[g]),
                           config.dims[g], config.target_variance, false);
        break;
    case ExperimentKind::estimate_once:
        add_grid_point(0, config.target_variance, config.dim,
                       config.target_variance, false);
        break;
    case ExperimentKind::theory_report:
        break; // handled separately
    }
    return cells;
}

SweepRow base_row(const SweepConfig& config, const CellSpec& cell) {
    SweepRow row;
    row.experiment = experiment_name(config.experiment);
    row.sweep_value = cell.sweep_value;
    row.estimator = estimator_kind_name(cell.estimator);
    row.loss = cell.estimator == EstimatorKind::two_step ||
                       cell.estimator == EstimatorKind::two_step_trig
                   ? "nce"
                   : loss_name(cell.loss);
    row.path = path_name_for(cell.estimator);
    row.k = effective_k(cell.estimator, config.k);
    row.n = config.n;
    row.dim = cell.dim;
    return row;
}

std::vector<SweepRow> run_sweep_cells(const SweepConfig& config) {
    const std::vector<CellSpec> cells = build_cells(config);
    std::vector<SweepRow> rows(cells.size());
    parallel_for(cells.size(), config.jobs, [&](std::size_t i) {
        const CellSpec& cell = cells[i];
        SweepRow row = base_row(config, cell);
        row.seed = cell.seed_index;
        try {
            const GaussianDiag p0 = proposal_for(cell.dim);
            const UnnormalizedModel f1 = target_for(cell);
            // one substream per (grid point, seed); estimators and losses
            // share it so their comparisons are seed-paired
            const std::uint64_t cell_seed = Rng::derive(
                config.seed, {cell.grid_index,
                              static_cast<std::uint64_t>(cell.seed_index)});
            const EstimateResult res = run_estimator_cell(
                cell.estimator, cell.loss, p0, f1, config.k, config.n,
                config.nu, cell_seed, config.two_step_split_budget);
            row.log_z_hat = res.log_z1_hat;
            row.true_log_z = f1.true_log_z();
            const double err = row.log_z_hat - row.true_log_z;
            row.squared_error = err * err;
        } catch (const std::exception& e) {
            row.failed = true;
            row.fail_reason = sanitize(e.what());
        }
        rows[i] = row;
    });

    // summary rows per (grid, estimator, loss), in cell order
    std::vector<SweepRow> out;
    out.reserve(rows.size() + rows.size() / std::max(1, config.seeds) + 1);
    for (std::size_t i = 0; i < rows.size();) {
        const CellSpec& cell = cells[i];
        const std::size_t block = static_cast<std::size_t>(config.seeds);
        double sum = 0.0, sum_err2 = 0.0, sum_err4 = 0.0;
        long ok_count = 0;
        for (std::size_t j = i; j < i + block; ++j) {
            out.push_back(rows[j]);
            if (!rows[j].failed) {
                sum += rows[j].log_z_hat;
                sum_err2 += rows[j].squared_error;
                sum_err4 += rows[j].squared_error * rows[j].squared_error;
                ++ok_count;
            }
        }
        SweepRow summary = base_row(config, cell);
        summary.seed = -1;
        if (ok_count >= 1) {
            summary.log_z_hat = sum / ok_count;
            summary.true_log_z = rows[i].failed ? 0.0 : rows[i].true_log_z;
            const double mse = sum_err2 / ok_count;
            summary.mse_empirical = mse;
            if (ok_count >= 2)
                summary.se_empirical = std::sqrt(
                    std::max(0.0, sum_err4 / ok_count - mse * mse) /
                    (ok_count - 1.0));
        } else {
            summary.failed = true;
            summary.fail_reason = "all seeds failed";
        }
        // theory columns
        try {
            const GaussianDiag p0 = proposal_for(cell.dim);
            const UnnormalizedModel f1 = target_for(cell);
            summary.true_log_z = f1.true_log_z();
            const PathSpec path = theory_path_for(cell.estimator, p0, f1);
            const int k_eff = effective_k(cell.estimator, config.k);
            const Loss pred_loss =
                cell.estimator == EstimatorKind::two_step ||
                        cell.estimator == EstimatorKind::two_step_trig
                    ? Loss::nce
                    : cell.loss;
            summary.mse_pred = mse_pred_annealed(
                path, k_eff, static_cast<double>(config.n), pred_loss,
                config.nu);
            try {
                summary.fisher_rao_over_n = TheoryValue::of(
                    fisher_rao_length(path) / static_cast<double>(config.n));
            } catch (const Error&) {
                summary.fisher_rao_over_n = TheoryValue::unavailable();
            }
            const TheoremBounds bounds =
                theorem_bounds(p0, f1, static_cast<double>(config.n));
            summary.binary_lower_bound = TheoryValue::of(bounds.binary_lower_bound);
            summary.geometric_upper_bound = TheoryValue::of(bounds.geometric_upper_bound);
            summary.vanilla_lower_bound = bounds.vanilla_lower_bound;
            summary.oracle_upper_bound = TheoryValue::of(bounds.oracle_upper_bound);
        } catch (const std::exception&) {
            // leave theory columns unavailable
        }
        out.push_back(std::move(summary));
        i += block;
    }
    return out;
}

constexpr const char* sweep_header =
    "experiment,sweep_value,estimator,loss,path,K,N,dim,seed,log_z_hat,"
    "true_log_z,squared_error,mse_empirical,se_empirical,mse_pred,"
    "fisher_rao_over_n,binary_lower_bound,geometric_upper_bound,vanilla_lower_bound,oracle_upper_bound,note";

void write_sweep_row(std::ostream& out, const SweepRow& row) {
    out << row.experiment << ',' << fmt_double(row.sweep_value) << ','
        << row.estimator << ',' << row.loss << ',' << row.path << ',' << row.k
        << ',' << row.n << ',' << row.dim << ','
        << (row.seed < 0 ? std::string("summary") : std::to_string(row.seed))
        << ',';
    if (row.failed) {
        out << ",,,";
    } else {
        out << fmt_double(row.log_z_hat) << ',' << fmt_double(row.true_log_z)
            << ',';
        if (row.seed >= 0)
            out << fmt_double(row.squared_error);
        out << ',';
    }
    out << (row.mse_empirical ? fmt_double(*row.mse_empirical) : "") << ','
        << (row.se_empirical ? fmt_double(*row.se_empirical) : "") << ',';
    if (row.seed < 0) {
        out << fmt_theory(row.mse_pred) << ','
            << fmt_theory(row.fisher_rao_over_n) << ','
            << fmt_theory(row.binary_lower_bound) << ',' << fmt_theory(row.geometric_upper_bound)
            << ',' << fmt_theory(row.vanilla_lower_bound) << ','
            << fmt_theory(row.oracle_upper_bound) << ',';
    } else {
        out << ",,,,,,";
    }
    out << (row.failed ? "fail:" + row.fail_reason : "") << '\n';
}

void write_theory_csv(const SweepConfig& config, std::ostream& out) {
    out << "# annealed-estimation theory report, version " << version_string
        << "\n";
    out << "# config: " << config_summary(config) << "\n";
    out << "# sentinels: inf = provably infinite divergence; fail:<reason> = "
           "value not computable in this configuration\n";
    out << "experiment,sweep_value,dim,K,N,nu,path,schedule,param_distance,"
           "m_const,l_const,d_chi2_fwd,d_chi2_rev,d_hellinger2,d_harmonic,"
           "epsilon,alpha_h,optimal_fisher_rao,optimal_mse,mse_binary_is,"
           "mse_binary_revis,mse_binary_nce,mse_binary_is_revis,"
           "fisher_rao_length,mse_annealed_nce,binary_lower_bound,geometric_upper_bound,"
           "vanilla_lower_bound,oracle_upper_bound\n";
    struct PathChoice {
        const char* name;
        const char* schedule;
    };
    for (double d : config.distances) {
        const double v = variance_for_distance(d, config.dim);
        const GaussianDiag p0 = proposal_for(config.dim);
        const UnnormalizedModel f1 = UnnormalizedModel::simply_unnormalized(
            GaussianDiag::isotropic(config.dim, 0.0, v));
        const double z1 = std::exp(f1.true_log_z());
        const std::vector<std::pair<std::string, PathSpec>> paths = {
            {"geometric", PathSpec::geometric(p0, f1)},
            {"arithmetic-vanilla",
             PathSpec::arithmetic(p0, f1, Schedule::vanilla())},
            {"arithmetic-oracle",
             PathSpec::arithmetic(p0, f1, Schedule::oracle(z1))},
            {"arithmetic-oracle-trig",
             PathSpec::arithmetic(p0, f1, Schedule::oracle_trig(z1))},
            {"optimal", PathSpec::optimal(p0, f1)},
        };
        for (const auto& [name, path] : paths) {
            TheoryReport r =
                make_theory_report(p0, f1, path, config.k,
                                   static_cast<double>(config.n), config.nu);
            out << experiment_name(config.experiment) << ',' << fmt_double(d)
                << ',' << config.dim << ',' << config.k << ',' << config.n
                << ',' << fmt_double(config.nu) << ',' << name << ','
                << (path.kind == PathKind::arithmetic
                        ? (path.schedule.kind == ScheduleKind::vanilla
                               ? "vanilla"
                               : (path.schedule.kind == ScheduleKind::oracle
                                      ? "oracle"
                                      : "oracle-trig"))
                        : "-")
                << ',' << fmt_double(r.bounds.param_distance) << ','
                << fmt_double(r.bounds.m_const) << ','
                << fmt_double(r.bounds.l_const) << ','
                << fmt_theory(r.d_chi2_fwd) << ',' << fmt_theory(r.d_chi2_rev)
                << ',' << fmt_double(r.d_hellinger2) << ','
                << fmt_theory(r.d_harmonic) << ',' << fmt_double(r.epsilon)
                << ',' << fmt_double(r.alpha_h_value) << ','
                << fmt_double(r.optimal_fisher_rao) << ','
                << fmt_double(r.optimal_mse) << ','
                << fmt_theory(r.mse_binary_is) << ','
                << fmt_theory(r.mse_binary_revis) << ','
                << fmt_theory(r.mse_binary_nce) << ','
                << fmt_theory(r.mse_binary_is_revis) << ','
                << fmt_theory(r.fisher_rao_len) << ','
                << fmt_theory(r.mse_annealed) << ','
                << fmt_double(r.bounds.binary_lower_bound) << ','
                << fmt_double(r.bounds.geometric_upper_bound) << ','
                << fmt_theory(r.bounds.vanilla_lower_bound) << ','
                << fmt_double(r.bounds.oracle_upper_bound) << '\n';
        }
    }
}

} // namespace

bool nce_ordering_holds(const std::vector<SweepRow>& rows) {
    for (const SweepRow& nce_row : rows) {
        if (nce_row.seed != -1 || nce_row.loss != "nce" ||
            !nce_row.mse_empirical)
            continue;
        for (const SweepRow& other : rows) {
            if (other.seed != -1 || !other.mse_empirical) continue;
            if (other.estimator != nce_row.estimator ||
                other.sweep_value != nce_row.sweep_value)
                continue;
            if (*nce_row.mse_empirical > *other.mse_empirical) return false;
        }
    }
    return true;
}

std::vector<SweepRow> run_experiment_rows(const SweepConfig& config) {
    config.validate();
    require(config.experiment != ExperimentKind::theory_report,
            ErrorCode::invalid_argument,
            "theory_report has a dedicated writer");
    return run_sweep_cells(config);
}

void write_rows_csv(const SweepConfig& config, const std::vector<SweepRow>& rows,
                    std::ostream& out) {
    out << "# annealed-estimation experiment, version " << version_string
        << "\n";
    out << "# config: " << config_summary(config) << "\n";
    out << "# sentinels: inf = provably infinite divergence; fail:<reason> = "
           "failed cell or value not computable; empty = not applicable\n";
    out << sweep_header << '\n';
    for (const SweepRow& row : rows) write_sweep_row(out, row);
}

void run_experiment(const SweepConfig& config, std::ostream& out) {
    config.validate();
    if (config.experiment == ExperimentKind::theory_report) {
        write_theory_csv(config, out);
        return;
    }
    write_rows_csv(config, run_experiment_rows(config), out);
}

std::string run_experiment_to_file(const SweepConfig& config) {
    if (config.out.empty()) {
        run_experiment(config, std::cout);
        return "";
    }
    std::ofstream out(config.out, std::ios::binary);
    require(out.good(), ErrorCode::io, "cannot open output file: " + config.out);
    run_experiment(config, out);
    return config.out;
}

void emit_plot(const std::string& csv_path, const std::string& svg_path) {
    std::ifstream csv(csv_path);
    require(csv.good(), ErrorCode::io, "cannot open CSV: " + csv_path);
    std::ofstream svg(svg_path, std::ios::binary);
    require(svg.good(), ErrorCode::io, "cannot open SVG output: " + svg_path);
    render_plot(csv, svg);
}

} // namespace abe
