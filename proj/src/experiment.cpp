#include "rpca/experiment.hpp"

#include "rpca/baselines.hpp"
#include "rpca/datasets.hpp"
#include "rpca/errors.hpp"
#include "rpca/linalg.hpp"
#include "rpca/lld.hpp"
#include "rpca/mdr.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <set>
#include <sstream>

namespace rpca {

namespace {

using nlohmann::json;

const std::set<std::string> kKnownMethods{"pca", "sph", "lld", "nl1", "mdr"};

GammaMode parse_gamma_mode(const std::string& mode) {
    if (mode == "model-fit") return GammaMode::model_fit;
    if (mode == "rank-control") return GammaMode::rank_control;
    throw InvalidArgumentError("unknown gamma mode: " + mode);
}

double resolve_gamma(const ExperimentConfig& config, Eigen::Index n, Eigen::Index p) {
    if (config.gamma) {
        if (*config.gamma <= 0.0)
            throw InvalidArgumentError("gamma must be positive");
        return *config.gamma;
    }
    return gamma_heuristic(static_cast<int>(n), static_cast<int>(p), config.T,
                           parse_gamma_mode(config.gamma_mode));
}

double resolve_lambda(const ExperimentConfig& config, Eigen::Index n) {
    if (config.lambda) {
        if (*config.lambda <= 0.0)
            throw InvalidArgumentError("lambda must be positive");
        return *config.lambda;
    }
    return 1.0 / std::sqrt(static_cast<double>(n));
}

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        auto d = std::chrono::steady_clock::now() - start_;
        return std::chrono::duration<double, std::milli>(d).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

// rank of P at the scale that matters for extracting T directions
Eigen::Index usable_rank(const Eigen::MatrixXd& P) {
    SvdTriple svd = compact_svd(P);
    if (svd.sigma.size() == 0) return 0;
    double cutoff = 1e-6 * svd.sigma(0);
    Eigen::Index r = 0;
    while (r < svd.sigma.size() && svd.sigma(r) > cutoff) ++r;
    return r;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

json config_to_json(const ExperimentConfig& c) {
    json j;
    j["dataset"] = c.dataset;
    j["methods"] = c.methods;
    j["T"] = c.T;
    j["K"] = c.K;
    if (c.gamma)
        j["gamma"] = *c.gamma;
    else
        j["gamma"] = nullptr;
    j["gamma_mode"] = c.gamma_mode;
    if (c.lambda)
        j["lambda"] = *c.lambda;
    else
        j["lambda"] = nullptr;
    j["seed"] = c.seed;
    j["centering"] = c.centering;
    j["column_scaling"] = c.column_scaling;
    j["drop_columns"] = c.drop_columns;
    j["stats_rows"] = c.stats_rows;
    j["format"] = c.format;
    return j;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

json matrix_to_json(const Eigen::MatrixXd& M) {
    json arr = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) arr.push_back(vector_to_json(M.col(j)));
    return arr;
}

json stats_to_json(const BoxStats& s) {
    json j;
    j["min"] = s.min;
    j["q25"] = s.q25;
    j["median"] = s.median;
    j["q75"] = s.q75;
    j["max"] = s.max;
    j["iqr"] = s.iqr;
    j["outlier_fraction"] = s.outlier_fraction;
    return j;
}

} // namespace

void validate_config(const ExperimentConfig& config) {
    if (config.dataset.empty())
        throw InvalidArgumentError("dataset must be set");
    if (config.methods.empty())
        throw InvalidArgumentError("at least one method required");
    for (const auto& m : config.methods)
        if (!kKnownMethods.count(m))
            throw InvalidArgumentError("unknown method: " + m);
    if (config.T < 1) throw InvalidArgumentError("T must be at least 1");
    if (config.K < 1) throw InvalidArgumentError("K must be at least 1");
    parse_gamma_mode(config.gamma_mode);
    if (config.gamma && *config.gamma <= 0.0)
        throw InvalidArgumentError("gamma must be positive");
    if (config.lambda && *config.lambda <= 0.0)
        throw InvalidArgumentError("lambda must be positive");
    if (config.centering != "euclidean-median" && config.centering != "none")
        throw InvalidArgumentError("unknown centering: " + config.centering);
    if (config.column_scaling != "madn" && config.column_scaling != "none")
        throw InvalidArgumentError("unknown column scaling: " + config.column_scaling);
    if (config.format != "json" && config.format != "csv")
        throw InvalidArgumentError("unknown output format: " + config.format);
    for (int c : config.drop_columns)
        if (c < 1) throw InvalidArgumentError("drop columns are 1-based");
    if (config.stats_rows < 0)
        throw InvalidArgumentError("stats_rows cannot be negative");
}

Eigen::MatrixXd load_dataset(const ExperimentConfig& config) {
    if (config.dataset == "iris") return iris_projection_subset();
    if (config.dataset == "no2") return load_no2();
    if (config.dataset == "bus") return load_bus();
    return load_csv(config.dataset, config.csv).X;
}

Eigen::MatrixXd preprocess(const Eigen::MatrixXd& X, const ExperimentConfig& config,
                           RandomSource& rng) {
    Eigen::MatrixXd Y = X;

    if (!config.drop_columns.empty()) {
        std::set<int> drop(config.drop_columns.begin(), config.drop_columns.end());
        for (int c : drop)
            if (c < 1 || c > Y.cols())
                throw InvalidArgumentError("drop column out of range: " +
                                           std::to_string(c));
        Eigen::MatrixXd kept(Y.rows(), Y.cols() - static_cast<Eigen::Index>(drop.size()));
        Eigen::Index out = 0;
        for (Eigen::Index j = 0; j < Y.cols(); ++j)
            if (!drop.count(static_cast<int>(j) + 1)) kept.col(out++) = Y.col(j);
        Y = std::move(kept);
    }

    if (config.column_scaling == "madn") {
        for (Eigen::Index j = 0; j < Y.cols(); ++j) {
            double s = madn(Y.col(j));
            if (s <= 1e-12 * std::max(1.0, Y.col(j).cwiseAbs().maxCoeff()))
                throw DegenerateColumnError(
                    "column " + std::to_string(j + 1) + " has zero spread; cannot scale",
                    static_cast<int>(j) + 1);
            Y.col(j) /= s;
        }
    }

    if (config.centering == "euclidean-median") {
        RandomSource sub = rng.substream("centering");
        auto [mu, report] = euclidean_median(Y, 1e-10, 10000, sub);
        (void)report;
        Y = center_rows(Y, mu);
    }
    return Y;
}

namespace {

ProjectionEntry run_projection_method(const std::string& method,
                                      const Eigen::MatrixXd& X,
                                      const ExperimentConfig& config,
                                      RandomSource rng) {
    ProjectionEntry entry;
    entry.method = method;
    Stopwatch watch;
    try {
        Eigen::VectorXd v;
        if (method == "pca") {
            v = pca_components(X, 1).V.col(0);
        } else if (method == "sph") {
            v = sph_components(X, 1).V.col(0);
        } else if (method == "mdr") {
            MdrResult res = mdr_top_component(X, config.K, CgParams{}, rng);
            entry.extras["ratio"] = res.ratio;
            entry.extras["alpha_star"] = res.alpha_star;
            v = res.v_star;
        } else if (method == "lld") {
            double gamma = resolve_gamma(config, X.rows(), X.cols());
            LldResult res = lld_solve(X, gamma);
            entry.extras["gamma"] = gamma;
            entry.extras["iterations"] = res.iterations;
            entry.extras["final_residual"] = res.final_residual;
            Eigen::Index r = usable_rank(res.P);
            if (r < 1)
                throw RankDeficientError("low-rank part vanished; no direction to report",
                                         static_cast<int>(r), 1);
            v = compact_svd(res.P).V.col(0);
        } else if (method == "nl1") {
            double lambda = resolve_lambda(config, X.rows());
            Nl1Result res = nl1_solve(X, lambda);
            entry.extras["lambda"] = lambda;
            entry.extras["iterations"] = res.iterations;
            entry.extras["final_residual"] = res.final_residual;
            Eigen::Index r = usable_rank(res.L);
            if (r < 1)
                throw RankDeficientError("low-rank part vanished; no direction to report",
                                         static_cast<int>(r), 1);
            v = compact_svd(res.L).V.col(0);
        } else {
            throw InvalidArgumentError("unknown method: " + method);
        }
        entry.component = make_component_set(v, method).V.col(0);
        entry.projected = X * entry.component;
        entry.stats = box_stats(config.stats_rows > 0
                                    ? entry.projected.head(config.stats_rows).eval()
                                    : entry.projected);
        entry.ok = true;
    } catch (const std::exception& e) {
        entry.ok = false;
        entry.error = e.what();
    }
    entry.timing_ms = watch.ms();
    return entry;
}

} // namespace

ProjectionReport run_projection_experiment(const ExperimentConfig& raw_config) {
    validate_config(raw_config);
    ExperimentConfig config = raw_config;
    // the iris subset puts the 50 bulk observations first; its published
    // spread statistics are taken over that bulk
    if (config.dataset == "iris" && config.stats_rows == 0) config.stats_rows = 50;

    RandomSource rng(config.seed);
    Eigen::MatrixXd raw = load_dataset(config);
    Eigen::MatrixXd X = preprocess(raw, config, rng);
    if (config.stats_rows > X.rows())
        throw InvalidArgumentError("stats_rows exceeds the number of observations");

    ProjectionReport report;
    report.config = config;
    report.n = X.rows();
    report.p = X.cols();

    std::vector<std::future<ProjectionEntry>> futures;
    futures.reserve(config.methods.size());
    for (const auto& method : config.methods)
        futures.push_back(std::async(std::launch::async, run_projection_method, method,
                                     std::cref(X), std::cref(config),
                                     rng.substream(method)));
    for (auto& f : futures) report.entries.push_back(f.get());
    return report;
}

namespace {

RegressionEntry run_regression_method(const std::string& method,
                                      const Eigen::MatrixXd& X,
                                      const ExperimentConfig& config,
                                      RandomSource rng) {
    RegressionEntry entry;
    entry.method = method;
    Stopwatch watch;
    try {
        ComponentSet set;
        if (method == "pca") {
            set = pca_components(X, config.T);
        } else if (method == "sph") {
            set = sph_components(X, config.T);
        } else if (method == "mdr") {
            MdrPursuit pursuit = mdr_pursuit(X, config.T, config.K, CgParams{}, rng);
            for (std::size_t t = 0; t < pursuit.ratios.size(); ++t) {
                entry.extras["ratio_" + std::to_string(t + 1)] = pursuit.ratios[t];
                entry.extras["alpha_star_" + std::to_string(t + 1)] =
                    pursuit.alpha_stars[t];
            }
            set = pursuit.components;
        } else if (method == "lld") {
            double gamma = resolve_gamma(config, X.rows(), X.cols());
            entry.extras["gamma"] = gamma;
            set = lld_components(X, config.T, gamma);
        } else if (method == "nl1") {
            double lambda = resolve_lambda(config, X.rows());
            entry.extras["lambda"] = lambda;
            set = nl1_components(X, lambda, config.T);
        } else {
            throw InvalidArgumentError("unknown method: " + method);
        }
        entry.components = set.V;
        Eigen::VectorXd d = surface_distances(X, set.V);
        std::sort(d.data(), d.data() + d.size());
        entry.sorted_distances = d;
        entry.ok = true;
    } catch (const std::exception& e) {
        entry.ok = false;
        entry.error = e.what();
    }
    entry.timing_ms = watch.ms();
    return entry;
}

} // namespace

RegressionReport run_regression_experiment(const ExperimentConfig& config) {
    validate_config(config);
    RandomSource rng(config.seed);
    Eigen::MatrixXd raw = load_dataset(config);
    Eigen::MatrixXd X = preprocess(raw, config, rng);

    RegressionReport report;
    report.config = config;
    report.n = X.rows();
    report.p = X.cols();

    {
        ComponentSet pca = pca_components(X, config.T);
        Eigen::VectorXd d = surface_distances(X, pca.V);
        std::sort(d.data(), d.data() + d.size());
        report.pca_sorted = d;
    }

    std::vector<std::future<RegressionEntry>> futures;
    futures.reserve(config.methods.size());
    for (const auto& method : config.methods)
        futures.push_back(std::async(std::launch::async, run_regression_method, method,
                                     std::cref(X), std::cref(config),
                                     rng.substream(method)));
    for (auto& f : futures) {
        RegressionEntry entry = f.get();
        if (entry.ok) {
            Eigen::Index below = 0;
            for (Eigen::Index i = 0; i < entry.sorted_distances.size(); ++i)
                if (entry.sorted_distances(i) < report.pca_sorted(i)) ++below;
            entry.fraction_below_pca =
                static_cast<double>(below) / static_cast<double>(report.n);
        }
        report.entries.push_back(std::move(entry));
    }
    return report;
}

SyntheticReport run_synthetic(const SyntheticConfig& config) {
    if (config.n < 2 || config.p < 1)
        throw InvalidArgumentError("synthetic data needs n >= 2 and p >= 1");
    if (config.rank < 1 || config.rank > std::min(config.n, config.p))
        throw InvalidArgumentError("synthetic rank out of range");
    if (config.corrupt_fraction < 0.0 || config.corrupt_fraction > 1.0)
        throw InvalidArgumentError("corrupt fraction must lie in [0,1]");

    RandomSource rng(config.seed);
    RandomSource gen = rng.substream("generate");
    Eigen::MatrixXd Gu = gen.gaussian_matrix(config.n, config.rank);
    Eigen::MatrixXd Gv = gen.gaussian_matrix(config.p, config.rank);
    Eigen::MatrixXd L = Gu * Gv.transpose();

    int m = static_cast<int>(std::lround(config.corrupt_fraction * config.n));
    std::vector<int> order(config.n);
    for (int i = 0; i < config.n; ++i) order[i] = i;
    for (int i = config.n - 1; i > 0; --i) {
        auto j = gen.uniform_index(static_cast<std::uint64_t>(i) + 1);
        std::swap(order[i], order[static_cast<int>(j)]);
    }
    std::vector<int> support(order.begin(), order.begin() + m);
    std::sort(support.begin(), support.end());

    Eigen::MatrixXd X = L;
    for (int i : support)
        X.row(i) = config.corrupt_scale * gen.gaussian_vector(config.p).transpose();

    double gamma = config.gamma
                       ? *config.gamma
                       : gamma_heuristic(config.n, config.p, config.rank,
                                         GammaMode::model_fit);
    LldResult res = lld_solve(X, gamma);

    // flag rows whose sparse part is at least 1% of the root-mean-square row
    // norm; rows that merely graze the leverage cap leak less than that
    double threshold = 1e-2 * X.norm() / std::sqrt(static_cast<double>(config.n));
    std::vector<int> detected;
    for (Eigen::Index i = 0; i < res.C.rows(); ++i)
        if (res.C.row(i).norm() > threshold) detected.push_back(static_cast<int>(i));

    int tp = 0;
    {
        std::set<int> truth(support.begin(), support.end());
        for (int i : detected)
            if (truth.count(i)) ++tp;
    }

    SyntheticReport report;
    report.config = config;
    report.gamma = gamma;
    report.corrupted = m;
    report.detected = static_cast<int>(detected.size());
    report.true_positives = tp;
    report.precision = detected.empty()
                           ? 1.0
                           : static_cast<double>(tp) / static_cast<double>(detected.size());
    report.recall = (m == 0) ? 1.0 : static_cast<double>(tp) / static_cast<double>(m);
    report.iterations = res.iterations;
    report.final_residual = res.final_residual;

    // principal angle between the planted row space and the recovered one
    SvdTriple truth_svd = compact_svd(L);
    SvdTriple rec_svd = compact_svd(res.P);
    Eigen::Index r = std::min<Eigen::Index>(config.rank,
                                            std::min(truth_svd.rank(), rec_svd.rank()));
    if (r == 0) {
        report.principal_angle_deg = 90.0;
    } else {
        Eigen::MatrixXd Vt = truth_svd.V.leftCols(r);
        Eigen::MatrixXd Vr = rec_svd.V.leftCols(r);
        Eigen::JacobiSVD<Eigen::MatrixXd> overlap(Vt.transpose() * Vr);
        double c = overlap.singularValues().minCoeff();
        c = std::clamp(c, -1.0, 1.0);
        report.principal_angle_deg = std::acos(c) * 180.0 / M_PI;
    }
    return report;
}

std::string to_json_string(const ProjectionReport& report) {
    json j;
    j["config"] = config_to_json(report.config);
    j["library_version"] = kLibraryVersion;
    j["experiment"] = "projection";
    j["n"] = report.n;
    j["p"] = report.p;
    json results = json::array();
    for (const auto& e : report.entries) {
        json r;
        r["method"] = e.method;
        r["ok"] = e.ok;
        r["timing_ms"] = e.timing_ms;
        if (!e.ok) {
            r["error"] = e.error;
        } else {
            r["stats"] = stats_to_json(e.stats);
            r["component"] = vector_to_json(e.component);
            r["projected"] = vector_to_json(e.projected);
        }
        if (!e.extras.empty()) r["extras"] = e.extras;
        results.push_back(std::move(r));
    }
    j["results"] = std::move(results);
    return j.dump(2) + "\n";
}

std::string to_json_string(const RegressionReport& report) {
    json j;
    j["config"] = config_to_json(report.config);
    j["library_version"] = kLibraryVersion;
    j["experiment"] = "regression";
    j["n"] = report.n;
    j["p"] = report.p;
    j["pca_sorted_distances"] = vector_to_json(report.pca_sorted);
    json results = json::array();
    for (const auto& e : report.entries) {
        json r;
        r["method"] = e.method;
        r["ok"] = e.ok;
        r["timing_ms"] = e.timing_ms;
        if (!e.ok) {
            r["error"] = e.error;
        } else {
            r["components"] = matrix_to_json(e.components);
            r["sorted_distances"] = vector_to_json(e.sorted_distances);
            r["fraction_below_pca"] = e.fraction_below_pca;
        }
        if (!e.extras.empty()) r["extras"] = e.extras;
        results.push_back(std::move(r));
    }
    j["results"] = std::move(results);
    return j.dump(2) + "\n";
}

std::string to_json_string(const SyntheticReport& report) {
    json j;
    json c;
    c["n"] = report.config.n;
    c["p"] = report.config.p;
    c["rank"] = report.config.rank;
    c["corrupt_fraction"] = report.config.corrupt_fraction;
    c["corrupt_scale"] = report.config.corrupt_scale;
    c["seed"] = report.config.seed;
    if (report.config.gamma)
        c["gamma"] = *report.config.gamma;
    else
        c["gamma"] = nullptr;
    c["format"] = report.config.format;
    j["config"] = std::move(c);
    j["library_version"] = kLibraryVersion;
    j["experiment"] = "synthetic";
    j["gamma"] = report.gamma;
    j["corrupted"] = report.corrupted;
    j["detected"] = report.detected;
    j["true_positives"] = report.true_positives;
    j["precision"] = report.precision;
    j["recall"] = report.recall;
    j["principal_angle_deg"] = report.principal_angle_deg;
    j["iterations"] = report.iterations;
    j["final_residual"] = report.final_residual;
    return j.dump(2) + "\n";
}

std::string to_csv_string(const ProjectionReport& report) {
    std::ostringstream out;
    out << "Method,IQR,min,25th,75th,max,out%\n";
    for (const auto& e : report.entries) {
        if (!e.ok) {
            out << e.method << ",,,,,," << '"' << e.error << '"' << "\n";
            continue;
        }
        out << e.method << ',' << format_double(e.stats.iqr) << ','
            << format_double(e.stats.min) << ',' << format_double(e.stats.q25) << ','
            << format_double(e.stats.q75) << ',' << format_double(e.stats.max) << ','
            << format_double(100.0 * e.stats.outlier_fraction) << "\n";
    }
    return out.str();
}

std::string to_csv_string(const RegressionReport& report) {
    std::ostringstream out;
    out << "Method,FractionBelowPCA,Q75,PcaQ75\n";
    double pca_q75 = quantile_sorted(report.pca_sorted, 0.75);
    for (const auto& e : report.entries) {
        if (!e.ok) {
            out << e.method << ",,," << '"' << e.error << '"' << "\n";
            continue;
        }
        out << e.method << ',' << format_double(e.fraction_below_pca) << ','
            << format_double(quantile_sorted(e.sorted_distances, 0.75)) << ','
            << format_double(pca_q75) << "\n";
    }
    return out.str();
}

std::string to_csv_string(const SyntheticReport& report) {
    std::ostringstream out;
    out << "gamma,corrupted,detected,true_positives,precision,recall,"
           "principal_angle_deg,iterations,final_residual\n";
    out << format_double(report.gamma) << ',' << report.corrupted << ','
        << report.detected << ',' << report.true_positives << ','
        << format_double(report.precision) << ',' << format_double(report.recall) << ','
        << format_double(report.principal_angle_deg) << ',' << report.iterations << ','
        << format_double(report.final_residual) << "\n";
    return out.str();
}

} // namespace rpca
