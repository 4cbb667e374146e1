#include "rpca/robust_stats.hpp"

#include "rpca/errors.hpp"
#include "rpca/linalg.hpp"
#include "rpca/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace rpca {

double std_scale(const VectorXd& y) {
    if (!y.allFinite()) throw InvalidInputError("std_scale: non-finite input");
    return y.norm();
}

double md_scale(const VectorXd& y) {
    if (!y.allFinite()) throw InvalidInputError("md_scale: non-finite input");
    return y.lpNorm<1>();
}

double median_of(VectorXd x) {
    const Index n = x.size();
    if (n == 0) throw InvalidArgumentError("median_of: empty input");
    std::sort(x.data(), x.data() + n);
    if (n % 2 == 1) return x(n / 2);
    return 0.5 * (x(n / 2 - 1) + x(n / 2));
}

double madn(const VectorXd& x) {
    if (!x.allFinite()) throw InvalidInputError("madn: non-finite input");
    const double med = median_of(x);
    return median_of((x.array() - med).abs().matrix());
}

namespace {

double sum_of_distances(const MatrixXd& X, const VectorXd& mu) {
    return (X.rowwise() - mu.transpose()).rowwise().norm().sum();
}

} // namespace

std::pair<VectorXd, CenteringReport> euclidean_median(const MatrixXd& X, double tol,
                                                      int max_iter, RandomSource& rng) {
    if (X.rows() < 1) throw InvalidArgumentError("euclidean_median: no observations");
    if (!X.allFinite()) throw InvalidInputError("euclidean_median: non-finite input");
    const Index n = X.rows(), p = X.cols();
    const double data_scale = X.norm();
    const double prox_tol = 1e-12 * std::max(1.0, data_scale);
    const double step_denom = std::max(data_scale / std::sqrt(double(n)),
                                       std::numeric_limits<double>::min());

    CenteringReport report;
    VectorXd mu = X.colwise().mean();
    double best_obj = sum_of_distances(X, mu);
    VectorXd best_mu = mu;

    int iter = 0;
    bool converged = false;
    double residual = std::numeric_limits<double>::infinity();
    while (iter < max_iter) {
        ++iter;
        VectorXd dist = (X.rowwise() - mu.transpose()).rowwise().norm();
        Index nearest;
        const double dmin = dist.minCoeff(&nearest);
        if (dmin <= prox_tol) {
            // Weiszfeld map is singular at a data point. If that point is
            // itself the minimizer (classical multiplicity test), stop there;
            // otherwise nudge off it and continue.
            VectorXd pull = VectorXd::Zero(p);
            Index multiplicity = 0;
            for (Index i = 0; i < n; ++i) {
                if (dist(i) <= prox_tol) {
                    ++multiplicity;
                    continue;
                }
                pull += (X.row(i).transpose() - mu) / dist(i);
            }
            if (pull.norm() <= double(multiplicity) + 1e-12) {
                mu = X.row(nearest).transpose();
                residual = 0.0;
                converged = true;
                break;
            }
            VectorXd dir = rng.gaussian_vector(p);
            const double dn = dir.norm();
            if (dn > 0.0) mu += (1e-9 * std::max(1.0, data_scale) / dn) * dir;
            continue;
        }
        VectorXd weights = dist.cwiseInverse();
        VectorXd mu_new = (X.transpose() * weights) / weights.sum();
        residual = (mu_new - mu).norm() / step_denom;
        mu = mu_new;
        const double obj = sum_of_distances(X, mu);
        if (obj < best_obj) {
            best_obj = obj;
            best_mu = mu;
        }
        if (residual <= tol) {
            converged = true;
            break;
        }
    }

    if (!converged)
        throw CenteringConvergenceError(
            "euclidean_median: no convergence within " + std::to_string(max_iter) +
                " iterations (residual " + std::to_string(residual) + ")",
            best_mu, iter, residual);

    // the returned center must not be beaten by the coordinatewise mean or by
    // any data point; fall back to the best such anchor if it is
    double obj = sum_of_distances(X, mu);
    const double slack = tol * std::max(1.0, data_scale);
    VectorXd mean = X.colwise().mean();
    if (sum_of_distances(X, mean) < obj - slack) {
        mu = mean;
        obj = sum_of_distances(X, mu);
    }
    for (Index i = 0; i < n; ++i) {
        const double anchor_obj = sum_of_distances(X, X.row(i).transpose());
        if (anchor_obj < obj - slack) {
            mu = X.row(i).transpose();
            obj = anchor_obj;
        }
    }

    report.mu_hat = mu;
    report.iterations = iter;
    report.residual = residual;
    return {mu, report};
}

MatrixXd center_rows(const MatrixXd& X, const VectorXd& mu) {
    if (X.cols() != mu.size())
        throw DimensionMismatchError("center_rows: dimension mismatch");
    return X.rowwise() - mu.transpose();
}

VectorXd leverage_scores(const MatrixXd& P) {
    const SvdTriple svd = compact_svd(P);
    if (svd.rank() == 0) return VectorXd::Zero(P.rows());
    return svd.U.rowwise().squaredNorm();
}

double quantile_sorted(const VectorXd& sorted, double q) {
    const Index n = sorted.size();
    if (n == 0) throw InvalidArgumentError("quantile_sorted: empty input");
    if (q < 0.0 || q > 1.0) throw InvalidArgumentError("quantile_sorted: q outside [0,1]");
    const double idx = (double(n) - 1.0) * q;
    const Index lo = static_cast<Index>(std::floor(idx));
    const Index hi = std::min(lo + 1, n - 1);
    const double frac = idx - double(lo);
    return sorted(lo) + frac * (sorted(hi) - sorted(lo));
}

BoxStats box_stats(const VectorXd& y) {
    const Index n = y.size();
    if (n < 4)
        throw InvalidArgumentError("box_stats: need at least 4 values, got " +
                                   std::to_string(n));
    if (!y.allFinite()) throw InvalidInputError("box_stats: non-finite input");
    VectorXd s = y;
    std::sort(s.data(), s.data() + n);
    BoxStats b;
    b.min = s(0);
    b.max = s(n - 1);
    b.q25 = quantile_sorted(s, 0.25);
    b.median = quantile_sorted(s, 0.50);
    b.q75 = quantile_sorted(s, 0.75);
    b.iqr = b.q75 - b.q25;
    const double lo = b.q25 - 1.5 * b.iqr;
    const double hi = b.q75 + 1.5 * b.iqr;
    Index outliers = 0;
    for (Index i = 0; i < n; ++i)
        if (s(i) < lo || s(i) > hi) ++outliers;
    b.outlier_fraction = double(outliers) / double(n);
    return b;
}

VectorXd surface_distances(const MatrixXd& X, const MatrixXd& V) {
    if (X.cols() != V.rows())
        throw DimensionMismatchError("surface_distances: dimension mismatch");
    const MatrixXd gram = V.transpose() * V;
    const MatrixXd eye = MatrixXd::Identity(V.cols(), V.cols());
    if ((gram - eye).cwiseAbs().maxCoeff() > 1e-8)
        throw InvalidArgumentError("surface_distances: V is not orthonormal");
    const MatrixXd residual = X - (X * V) * V.transpose();
    return residual.rowwise().norm();
}

} // namespace rpca
