#ifndef ABE_CONFIG_HPP
#define ABE_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bregman.hpp"

namespace abe {

inline constexpr const char* version_string = "0.2.0";

enum class ExperimentKind {
    compare_losses,
    sweep_distance,
    sweep_dimension,
    estimate_once,
    theory_report,
};

enum class EstimatorKind { none, geometric, arithmetic, two_step, two_step_trig };

const char* experiment_name(ExperimentKind kind);
std::optional<ExperimentKind> experiment_from_name(const std::string& name);
const char* estimator_kind_name(EstimatorKind kind);
std::optional<EstimatorKind> estimator_kind_from_name(const std::string& name);

// Flat key=value experiment configuration; field names are the config-file
// keys. Unknown keys are errors.
struct SweepConfig {
    ExperimentKind experiment = ExperimentKind::estimate_once;
    int dim = 1;
    long n = 10000;
    int k = 9;
    int seeds = 50;
    double nu = 1.0;
    double target_variance = 2.0;
    std::vector<double> distances{1, 2, 5, 10, 15, 20, 25, 30};
    std::vector<int> dims{5, 10, 20, 50};
    std::vector<EstimatorKind> estimators{EstimatorKind::geometric};
    std::vector<Loss> losses{Loss::nce};
    std::uint64_t seed = 1;
    int jobs = 0; // 0 = hardware concurrency
    bool paper_scale = false;
    bool two_step_split_budget = false;
    std::string out;

    void validate() const;
};

// Desk-scale defaults per experiment; paper_scale switches N/seeds/dim to the
// full reference setup.
SweepConfig default_config(ExperimentKind kind);
void apply_paper_scale(SweepConfig& config);

SweepConfig parse_config_text(const std::string& text,
                              std::optional<ExperimentKind> experiment_override);
SweepConfig load_config_file(const std::string& path,
                             std::optional<ExperimentKind> experiment_override);

// one-line key=value rendering (embedded in CSV headers)
std::string config_summary(const SweepConfig& config);

} // namespace abe

#endif
