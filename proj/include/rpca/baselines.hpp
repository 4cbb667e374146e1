#pragma once

#include "rpca/almm.hpp"
#include "rpca/components.hpp"
#include "rpca/lld.hpp"

#include <Eigen/Dense>
#include <vector>

namespace rpca {

// classical PCA: top-T right singular vectors of X
ComponentSet pca_components(const Eigen::MatrixXd& X, int T);

// spherical PCA: classical PCA of the row-normalized data; zero rows are
// dropped with a warning (a direction cannot be assigned to them)
ComponentSet sph_components(const Eigen::MatrixXd& X, int T);

// entrywise soft threshold a -> sign(a) max(|a| - nu, 0)
Eigen::MatrixXd shrink_entries(const Eigen::MatrixXd& A, double nu);

// nuclear-norm + entrywise-l1 split, the rank-sparsity baseline:
// min ||L||_nuclear + lambda ||S||_1 subject to L + S = X,
// solved by the same fixed-penalty splitting as lld_solve
struct Nl1Result {
    Eigen::MatrixXd L;
    Eigen::MatrixXd S;
    double lambda = 0.0;
    int iterations = 0;
    double final_residual = 0.0;
    std::vector<double> residual_history;
};

Nl1Result nl1_solve(const Eigen::MatrixXd& X, double lambda,
                    const AlmmOptions& opts = {});

// top-T right singular vectors of the converged L
ComponentSet nl1_components(const Eigen::MatrixXd& X, double lambda, int T,
                            const AlmmOptions& opts = {});

// weak-duality bound analogous to lld_duality_gap, with the entrywise dual:
// |q_ij| <= lambda on the support of S, sigma_1(Q) <= 1
DualityGap nl1_duality_gap(const Eigen::MatrixXd& X, const Eigen::MatrixXd& L,
                           const Eigen::MatrixXd& S, double lambda);

} // namespace rpca
