#pragma once

#include <Eigen/Dense>
#include <utility>

namespace rpca {

class RandomSource;

struct BoxStats {
    double min = 0.0;
    double q25 = 0.0;
    double median = 0.0;
    double q75 = 0.0;
    double max = 0.0;
    double iqr = 0.0;
    double outlier_fraction = 0.0; // beyond 1.5*iqr whiskers
};

struct CenteringReport {
    Eigen::VectorXd mu_hat;
    int iterations = 0;
    double residual = 0.0; // final relative step size
};

// scale in the classical sense: the l2 norm of the (already centered) data
double std_scale(const Eigen::VectorXd& y);

// mean-absolute-deviation scale: the l1 norm
double md_scale(const Eigen::VectorXd& y);

// median of a copy of the data; even length averages the two central values
double median_of(Eigen::VectorXd x);

// median absolute deviation from the median (no consistency constant)
double madn(const Eigen::VectorXd& x);

// Minimizer of the sum of Euclidean distances to the rows of X
// (Weiszfeld iteration). Stops when the relative step size drops below tol.
// Iterates landing on a data point are nudged off it; the random source
// supplies the nudge direction so runs stay reproducible.
std::pair<Eigen::VectorXd, CenteringReport>
euclidean_median(const Eigen::MatrixXd& X, double tol, int max_iter,
                 RandomSource& rng);

Eigen::MatrixXd center_rows(const Eigen::MatrixXd& X, const Eigen::VectorXd& mu);

// diagonal of the hat matrix of P, computed as squared row norms of the
// compact-SVD U factor; entries lie in [0,1] and sum to rank(P)
Eigen::VectorXd leverage_scores(const Eigen::MatrixXd& P);

// Quantile convention: linear interpolation at order-statistic index
// h = (n-1) q + 1. Input must be sorted ascending.
double quantile_sorted(const Eigen::VectorXd& sorted, double q);

// five-number summary + IQR + outlier fraction (1.5*IQR fences); n >= 4
BoxStats box_stats(const Eigen::VectorXd& y);

// distance of each row of X to the subspace spanned by the orthonormal
// columns of V
Eigen::VectorXd surface_distances(const Eigen::MatrixXd& X, const Eigen::MatrixXd& V);

} // namespace rpca
