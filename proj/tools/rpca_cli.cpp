#include "rpca/bruteforce.hpp"
#include "rpca/datasets.hpp"
#include "rpca/errors.hpp"
#include "rpca/experiment.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

// exit codes: 0 success, 2 configuration / input errors, 3 solver failures
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw rpca::DatasetError("cannot open output file: " + path);
    out << text;
}

void add_common_options(CLI::App* cmd, rpca::ExperimentConfig& config,
                        double& gamma_opt, double& lambda_opt,
                        std::string& delimiter_opt) {
    cmd->add_option("--dataset", config.dataset,
                    "iris, no2, bus, or a path to a CSV file")
        ->required();
    cmd->add_option("--methods", config.methods,
                    "subset of pca, sph, lld, nl1, mdr")
        ->delimiter(',');
    cmd->add_option("-T,--components", config.T, "number of components");
    cmd->add_option("-K,--trials", config.K, "rounding trials per direction");
    cmd->add_option("--gamma", gamma_opt, "row-sparsity weight (default: heuristic)");
    cmd->add_option("--gamma-mode", config.gamma_mode, "model-fit or rank-control");
    cmd->add_option("--lambda", lambda_opt,
                    "entrywise-sparsity weight (default: 1/sqrt(n))");
    cmd->add_option("--seed", config.seed, "random seed");
    cmd->add_option("--centering", config.centering, "euclidean-median or none");
    cmd->add_option("--column-scaling", config.column_scaling, "madn or none");
    cmd->add_option("--drop-columns", config.drop_columns,
                    "1-based column indices to remove")
        ->delimiter(',');
    cmd->add_option("--stats-rows", config.stats_rows,
                    "compute spread statistics over the first N rows only "
                    "(0 = all rows; iris defaults to its 50-row bulk)");
    cmd->add_option("-o,--output", config.output, "output file (default: stdout)");
    cmd->add_option("--format", config.format, "json or csv");
    cmd->add_option("--delimiter", delimiter_opt, "CSV field delimiter");
    cmd->add_flag("--header", config.csv.header, "CSV file has a header row");
    cmd->add_flag_callback(
        "--na-drop",
        [&config]() { config.csv.na_policy = rpca::CsvOptions::NaPolicy::drop_row; },
        "drop rows containing NA cells instead of rejecting the file");
}

void finalize_optionals(const CLI::App* cmd, rpca::ExperimentConfig& config,
                        double gamma_opt, double lambda_opt,
                        const std::string& delimiter_opt) {
    if (cmd->count("--gamma")) config.gamma = gamma_opt;
    if (cmd->count("--lambda")) config.lambda = lambda_opt;
    if (cmd->count("--delimiter")) {
        if (delimiter_opt.size() != 1)
            throw rpca::InvalidArgumentError("delimiter must be a single character");
        config.csv.delimiter = delimiter_opt[0];
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"robust principal component analysis toolbox"};
    app.require_subcommand(1);

    rpca::ExperimentConfig config;
    double gamma_opt = 0.0, lambda_opt = 0.0;
    std::string delimiter_opt;

    CLI::App* project = app.add_subcommand(
        "project", "project the data onto each method's top component");
    add_common_options(project, config, gamma_opt, lambda_opt, delimiter_opt);

    CLI::App* regress = app.add_subcommand(
        "regress", "fit a T-dimensional subspace per method and compare residuals");
    add_common_options(regress, config, gamma_opt, lambda_opt, delimiter_opt);

    rpca::SyntheticConfig syn;
    double syn_gamma = 0.0;
    CLI::App* synthetic = app.add_subcommand(
        "synthetic", "plant row corruption on low-rank data and score the recovery");
    synthetic->add_option("-n,--rows", syn.n, "number of rows");
    synthetic->add_option("-p,--cols", syn.p, "number of columns");
    synthetic->add_option("-r,--rank", syn.rank, "rank of the clean part");
    synthetic->add_option("--corrupt-fraction", syn.corrupt_fraction,
                          "fraction of rows replaced by noise");
    synthetic->add_option("--corrupt-scale", syn.corrupt_scale,
                          "amplitude of the corrupted rows");
    synthetic->add_option("--seed", syn.seed, "random seed");
    synthetic->add_option("--gamma", syn_gamma, "row-sparsity weight");
    synthetic->add_option("-o,--output", syn.output, "output file (default: stdout)");
    synthetic->add_option("--format", syn.format, "json or csv");

    std::string fetch_name;
    CLI::App* fetch = app.add_subcommand(
        "fetch-data", "download a remote dataset into the local cache");
    fetch->add_option("name", fetch_name, "dataset name (no2 or bus)")->required();

    rpca::ExperimentConfig oconfig;
    std::string oracle_delimiter;
    CLI::App* oracle = app.add_subcommand(
        "oracle", "print the exhaustively enumerated norms of a small matrix");
    oracle->add_option("--dataset", oconfig.dataset,
                       "iris, no2, bus, or a path to a CSV file (at most 25 rows)")
        ->required();
    oracle->add_option("--delimiter", oracle_delimiter, "CSV field delimiter");
    oracle->add_flag("--header", oconfig.csv.header, "CSV file has a header row");
    oracle->add_flag_callback(
        "--na-drop",
        [&oconfig]() { oconfig.csv.na_policy = rpca::CsvOptions::NaPolicy::drop_row; },
        "drop rows containing NA cells instead of rejecting the file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (project->parsed()) {
            finalize_optionals(project, config, gamma_opt, lambda_opt, delimiter_opt);
            rpca::ProjectionReport report = rpca::run_projection_experiment(config);
            write_output(config.output, config.format == "csv"
                                            ? rpca::to_csv_string(report)
                                            : rpca::to_json_string(report));
        } else if (regress->parsed()) {
            finalize_optionals(regress, config, gamma_opt, lambda_opt, delimiter_opt);
            rpca::RegressionReport report = rpca::run_regression_experiment(config);
            write_output(config.output, config.format == "csv"
                                            ? rpca::to_csv_string(report)
                                            : rpca::to_json_string(report));
        } else if (synthetic->parsed()) {
            if (synthetic->count("--gamma")) syn.gamma = syn_gamma;
            if (syn.format != "json" && syn.format != "csv")
                throw rpca::InvalidArgumentError("unknown output format: " + syn.format);
            rpca::SyntheticReport report = rpca::run_synthetic(syn);
            write_output(syn.output, syn.format == "csv"
                                         ? rpca::to_csv_string(report)
                                         : rpca::to_json_string(report));
        } else if (fetch->parsed()) {
            auto path = rpca::fetch_dataset(fetch_name);
            std::cout << "cached " << fetch_name << " at " << path.string() << "\n";
        } else if (oracle->parsed()) {
            if (oracle->count("--delimiter")) {
                if (oracle_delimiter.size() != 1)
                    throw rpca::InvalidArgumentError("delimiter must be a single character");
                oconfig.csv.delimiter = oracle_delimiter[0];
            }
            Eigen::MatrixXd X = rpca::load_dataset(oconfig);
            double two_one = rpca::norm_2to1_bruteforce(X);
            double inf_one = rpca::norm_inf_to_1_bruteforce(X * X.transpose());
            std::cout << "rows " << X.rows() << " cols " << X.cols() << "\n"
                      << "norm_2to1 " << two_one << "\n"
                      << "norm_2to1_squared " << two_one * two_one << "\n"
                      << "gram_norm_inf_to_1 " << inf_one << "\n";
        }
    } catch (const rpca::ConvergenceFailureError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    } catch (const rpca::RankDeficientError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    } catch (const rpca::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return 0;
}
