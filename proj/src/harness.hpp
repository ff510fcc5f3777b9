#ifndef ABE_HARNESS_HPP
#define ABE_HARNESS_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "estimator.hpp"
#include "theory.hpp"

namespace abe {

// Long-format result row. Per-seed rows carry the estimate and its squared
// error; one summary row per (sweep value, estimator, loss) carries the
// empirical MSE and the theory columns. seed == -1 marks a summary row.
struct SweepRow {
    std::string experiment;
    double sweep_value = 0.0;
    std::string estimator;
    std::string loss;
    std::string path;
    int k = 1;
    long n = 0;
    int dim = 1;
    long seed = -1;
    bool failed = false;
    std::string fail_reason;

    double log_z_hat = 0.0;
    double true_log_z = 0.0;
    double squared_error = 0.0;

    std::optional<double> mse_empirical;
    std::optional<double> se_empirical;
    TheoryValue mse_pred = TheoryValue::unavailable();
    TheoryValue fisher_rao_over_n = TheoryValue::unavailable();
    TheoryValue binary_lower_bound = TheoryValue::unavailable();
    TheoryValue geometric_upper_bound = TheoryValue::unavailable();
    TheoryValue vanilla_lower_bound = TheoryValue::unavailable();
    TheoryValue oracle_upper_bound = TheoryValue::unavailable();
};

// target variance such that the natural-parameter distance from N(0, I) is
// `distance` in `dim` dimensions
double variance_for_distance(double distance, int dim);

// Run one estimator cell (shared by the harness and the acceptance suite).
EstimateResult run_estimator_cell(EstimatorKind kind, Loss loss,
                                  const GaussianDiag& p0,
                                  const UnnormalizedModel& f1, int k, long n,
                                  double nu, std::uint64_t seed,
                                  bool two_step_split_budget);

// Full experiment: builds rows (deterministic order independent of the worker
// count) and serializes them as CSV with a config/version header comment.
std::vector<SweepRow> run_experiment_rows(const SweepConfig& config);
void write_rows_csv(const SweepConfig& config, const std::vector<SweepRow>& rows,
                    std::ostream& out);

// summary-row check: NCE empirical MSE no worse than every other loss at the
// same sweep value and estimator (true when NCE is absent)
bool nce_ordering_holds(const std::vector<SweepRow>& rows);

// theory_report emits its own schema (one row per sweep point and path)
void run_experiment(const SweepConfig& config, std::ostream& out);

// Writes to config.out (or stdout when empty). Returns the CSV path used.
std::string run_experiment_to_file(const SweepConfig& config);

// Self-contained line chart of summary rows: empirical MSE per estimator on a
// log axis, theory predictions dashed. Deterministic output bytes.
void emit_plot(const std::string& csv_path, const std::string& svg_path);

} // namespace abe

#endif
