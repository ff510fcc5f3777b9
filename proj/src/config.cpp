#include "config.hpp"

#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace abe {

const char* experiment_name(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::compare_losses: return "compare_losses";
    case ExperimentKind::sweep_distance: return "sweep_distance";
    case ExperimentKind::sweep_dimension: return "sweep_dimension";
    case ExperimentKind::estimate_once: return "estimate_once";
    case ExperimentKind::theory_report: return "theory_report";
    }
    return "?";
}

std::optional<ExperimentKind> experiment_from_name(const std::string& name) {
    for (ExperimentKind kind :
         {ExperimentKind::compare_losses, ExperimentKind::sweep_distance,
          ExperimentKind::sweep_dimension, ExperimentKind::estimate_once,
          ExperimentKind::theory_report})
        if (name == experiment_name(kind)) return kind;
    return std::nullopt;
}

const char* estimator_kind_name(EstimatorKind kind) {
    switch (kind) {
    case EstimatorKind::none: return "none";
    case EstimatorKind::geometric: return "geometric";
    case EstimatorKind::arithmetic: return "arithmetic";
    case EstimatorKind::two_step: return "two_step";
    case EstimatorKind::two_step_trig: return "two_step_trig";
    }
    return "?";
}

std::optional<EstimatorKind> estimator_kind_from_name(const std::string& name) {
    for (EstimatorKind kind :
         {EstimatorKind::none, EstimatorKind::geometric, EstimatorKind::arithmetic,
          EstimatorKind::two_step, EstimatorKind::two_step_trig})
        if (name == estimator_kind_name(kind)) return kind;
    return std::nullopt;
}

void SweepConfig::validate() const {
    require(dim >= 1, ErrorCode::config, "dim must be >= 1");
    require(n >= 2, ErrorCode::config, "n must be >= 2");
    require(k >= 1, ErrorCode::config, "k must be >= 1");
    require(seeds >= 1, ErrorCode::config, "seeds must be >= 1");
    require(nu > 0.0, ErrorCode::config, "nu must be positive");
    require(target_variance > 0.0, ErrorCode::config,
            "target_variance must be positive");
    require(!losses.empty(), ErrorCode::config, "losses must be non-empty");
    require(!estimators.empty(), ErrorCode::config,
            "estimators must be non-empty");
    if (experiment == ExperimentKind::sweep_distance ||
        experiment == ExperimentKind::theory_report)
        require(!distances.empty(), ErrorCode::config,
                "distance grid must be non-empty");
    if (experiment == ExperimentKind::sweep_dimension)
        require(!dims.empty(), ErrorCode::config,
                "dimension grid must be non-empty");
    if (seeds < 2 && (experiment == ExperimentKind::compare_losses ||
                      experiment == ExperimentKind::sweep_distance ||
                      experiment == ExperimentKind::sweep_dimension))
        fail(ErrorCode::config, "MSE aggregation needs seeds >= 2");
}

SweepConfig default_config(ExperimentKind kind) {
    SweepConfig c;
    c.experiment = kind;
    switch (kind) {
    case ExperimentKind::compare_losses:
        c.dim = 50;
        c.k = 2;
        c.target_variance = 2.0;
        c.losses = {Loss::nce, Loss::is, Loss::rev_is};
        c.estimators = {EstimatorKind::geometric};
        break;
    case ExperimentKind::sweep_distance:
        c.dim = 10;
        c.k = 9;
        c.estimators = {EstimatorKind::none, EstimatorKind::geometric,
                        EstimatorKind::arithmetic, EstimatorKind::two_step,
                        EstimatorKind::two_step_trig};
        break;
    case ExperimentKind::sweep_dimension:
        c.k = 9;
        c.target_variance = 0.25;
        c.estimators = {EstimatorKind::none, EstimatorKind::geometric,
                        EstimatorKind::arithmetic, EstimatorKind::two_step};
        break;
    case ExperimentKind::estimate_once:
        c.dim = 1;
        c.seeds = 1;
        c.target_variance = 2.0;
        break;
    case ExperimentKind::theory_report:
        c.dim = 10;
        c.seeds = 1;
        break;
    }
    return c;
}

void apply_paper_scale(SweepConfig& config) {
    config.paper_scale = true;
    config.n = 50000;
    config.seeds = 100;
    if (config.experiment == ExperimentKind::sweep_distance ||
        config.experiment == ExperimentKind::theory_report)
        config.dim = 50;
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        require(used == value.size(), ErrorCode::config, "");
        return v;
    } catch (...) {
        fail(ErrorCode::config, "bad numeric value for '" + key + "': " + value);
    }
}

long parse_long(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long v = std::stol(value, &used);
        require(used == value.size(), ErrorCode::config, "");
        return v;
    } catch (...) {
        fail(ErrorCode::config, "bad integer value for '" + key + "': " + value);
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    fail(ErrorCode::config, "bad boolean value for '" + key + "': " + value);
}

} // namespace

SweepConfig parse_config_text(const std::string& text,
                              std::optional<ExperimentKind> experiment_override) {
    // experiment key first, so the remaining keys land on its defaults
    std::optional<ExperimentKind> kind = experiment_override;
    {
        std::stringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            line = trim(line);
            if (line.empty() || line[0] == '#') continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            if (trim(line.substr(0, eq)) == "experiment" && !experiment_override) {
                const std::string value = trim(line.substr(eq + 1));
                kind = experiment_from_name(value);
                require(kind.has_value(), ErrorCode::config,
                        "unknown experiment '" + value + "'");
            }
        }
    }
    SweepConfig config =
        default_config(kind.value_or(ExperimentKind::estimate_once));

    std::stringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        require(eq != std::string::npos, ErrorCode::config,
                "line " + std::to_string(line_no) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "experiment") {
            // already handled; still validate
            require(experiment_from_name(value).has_value(), ErrorCode::config,
                    "unknown experiment '" + value + "'");
        } else if (key == "dim") {
            config.dim = static_cast<int>(parse_long(key, value));
        } else if (key == "n") {
            config.n = parse_long(key, value);
        } else if (key == "k") {
            config.k = static_cast<int>(parse_long(key, value));
        } else if (key == "seeds") {
            config.seeds = static_cast<int>(parse_long(key, value));
        } else if (key == "nu") {
            config.nu = parse_double(key, value);
        } else if (key == "target_variance") {
            config.target_variance = parse_double(key, value);
        } else if (key == "distances") {
            config.distances.clear();
            for (const std::string& item : split_list(value))
                config.distances.push_back(parse_double(key, item));
        } else if (key == "dims") {
            config.dims.clear();
            for (const std::string& item : split_list(value))
                config.dims.push_back(static_cast<int>(parse_long(key, item)));
        } else if (key == "estimators") {
            config.estimators.clear();
            for (const std::string& item : split_list(value)) {
                auto est = estimator_kind_from_name(item);
                require(est.has_value(), ErrorCode::config,
                        "unknown estimator '" + item + "'");
                config.estimators.push_back(*est);
            }
        } else if (key == "losses") {
            config.losses.clear();
            for (const std::string& item : split_list(value)) {
                auto loss = loss_from_name(item);
                require(loss.has_value(), ErrorCode::config,
                        "unknown loss '" + item + "'");
                config.losses.push_back(*loss);
            }
        } else if (key == "seed") {
            config.seed = static_cast<std::uint64_t>(parse_long(key, value));
        } else if (key == "jobs") {
            config.jobs = static_cast<int>(parse_long(key, value));
        } else if (key == "paper_scale") {
            if (parse_bool(key, value)) apply_paper_scale(config);
        } else if (key == "two_step_split_budget") {
            config.two_step_split_budget = parse_bool(key, value);
        } else if (key == "out") {
            config.out = value;
        } else {
            fail(ErrorCode::config,
                 "unknown config key '" + key + "' (line " +
                     std::to_string(line_no) + ")");
        }
    }
    if (experiment_override) config.experiment = *experiment_override;
    config.validate();
    return config;
}

SweepConfig load_config_file(const std::string& path,
                             std::optional<ExperimentKind> experiment_override) {
    std::ifstream in(path);
    require(in.good(), ErrorCode::io, "cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), experiment_override);
}

std::string config_summary(const SweepConfig& c) {
    std::ostringstream out;
    out << "experiment=" << experiment_name(c.experiment) << " dim=" << c.dim
        << " n=" << c.n << " k=" << c.k << " seeds=" << c.seeds << " nu=" << c.nu
        << " target_variance=" << c.target_variance;
    out << " distances=";
    for (std::size_t i = 0; i < c.distances.size(); ++i)
        out << (i ? "," : "") << c.distances[i];
    out << " dims=";
    for (std::size_t i = 0; i < c.dims.size(); ++i)
        out << (i ? "," : "") << c.dims[i];
    out << " estimators=";
    for (std::size_t i = 0; i < c.estimators.size(); ++i)
        out << (i ? "," : "") << estimator_kind_name(c.estimators[i]);
    out << " losses=";
    for (std::size_t i = 0; i < c.losses.size(); ++i)
        out << (i ? "," : "") << loss_name(c.losses[i]);
    out << " seed=" << c.seed << " paper_scale=" << (c.paper_scale ? 1 : 0)
        << " two_step_split_budget=" << (c.two_step_split_budget ? 1 : 0);
    return out.str();
}

} // namespace abe
