#pragma once

#include "rpca/csv.hpp"
#include "rpca/rng.hpp"
#include "rpca/robust_stats.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rpca {

inline constexpr const char* kLibraryVersion = "0.1.0";

struct ExperimentConfig {
    std::string dataset; // "iris", "no2", "bus", or a CSV path
    std::vector<std::string> methods{"pca", "sph", "lld", "nl1", "mdr"};
    int T = 1;
    int K = 94; // rounding trials
    std::optional<double> gamma;
    std::string gamma_mode = "model-fit"; // or "rank-control"
    std::optional<double> lambda;
    std::uint64_t seed = 0;
    std::string centering = "euclidean-median"; // or "none"
    std::string column_scaling = "none";        // or "madn"
    std::vector<int> drop_columns;              // 1-based indices
    // spread statistics come from the first stats_rows observations (0 = all);
    // components always use every row. The iris subset puts its bulk species
    // first, so that dataset defaults to 50.
    int stats_rows = 0;
    std::string output;                         // empty = stdout
    std::string format = "json";                // or "csv"
    CsvOptions csv;
};

// rejects unknown methods / modes / flags before any work starts
void validate_config(const ExperimentConfig& config);

Eigen::MatrixXd load_dataset(const ExperimentConfig& config);

// column drop, then MADN column scaling, then Euclidean-median row centering
Eigen::MatrixXd preprocess(const Eigen::MatrixXd& X, const ExperimentConfig& config,
                           RandomSource& rng);

struct ProjectionEntry {
    std::string method;
    bool ok = false;
    std::string error;
    BoxStats stats;
    Eigen::VectorXd component;
    Eigen::VectorXd projected;
    std::map<std::string, double> extras;
    double timing_ms = 0.0;
};

struct ProjectionReport {
    ExperimentConfig config;
    Eigen::Index n = 0, p = 0;
    std::vector<ProjectionEntry> entries;
};

// top component per method, data projected onto it, spread statistics;
// a failing method is reported in place without aborting the others
ProjectionReport run_projection_experiment(const ExperimentConfig& config);

struct RegressionEntry {
    std::string method;
    bool ok = false;
    std::string error;
    Eigen::MatrixXd components; // p x T
    Eigen::VectorXd sorted_distances;
    double fraction_below_pca = 0.0;
    std::map<std::string, double> extras;
    double timing_ms = 0.0;
};

struct RegressionReport {
    ExperimentConfig config;
    Eigen::Index n = 0, p = 0;
    Eigen::VectorXd pca_sorted; // reference distances, ascending
    std::vector<RegressionEntry> entries;
};

// T components per method, distances to the fitted subspace, and the paired
// sorted-distance comparison against the PCA reference
RegressionReport run_regression_experiment(const ExperimentConfig& config);

struct SyntheticConfig {
    int n = 200, p = 30, rank = 2;
    double corrupt_fraction = 0.1;
    double corrupt_scale = 5.0;
    std::uint64_t seed = 0;
    std::optional<double> gamma;
    std::string output;
    std::string format = "json";
};

struct SyntheticReport {
    SyntheticConfig config;
    double gamma = 0.0;
    int corrupted = 0;
    int detected = 0;
    int true_positives = 0;
    double precision = 1.0;
    double recall = 1.0;
    double principal_angle_deg = 0.0;
    int iterations = 0;
    double final_residual = 0.0;
};

// plant row corruption on a known support, decompose, score the recovery
SyntheticReport run_synthetic(const SyntheticConfig& config);

std::string to_json_string(const ProjectionReport& report);
std::string to_json_string(const RegressionReport& report);
std::string to_json_string(const SyntheticReport& report);
std::string to_csv_string(const ProjectionReport& report);
std::string to_csv_string(const RegressionReport& report);
std::string to_csv_string(const SyntheticReport& report);

} // namespace rpca
