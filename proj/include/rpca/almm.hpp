#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace rpca {

enum class SvdMode { full, truncated };

// Thresholds for the two prox steps. `prox` uses (reg/mu, 1/mu), which are
// the minimizers of the augmented Lagrangian blocks and converge to the
// optimum of the underlying program; `mu_scaled` uses (mu*reg, mu), the
// variant sometimes quoted for this algorithm family, kept for fidelity
// experiments (it reaches the same fixed points, since scaling both
// thresholds by mu^2 rescales the whole objective).
enum class ThresholdConvention { prox, mu_scaled };

struct AlmmOptions {
    double feas_tol = 1e-7; // relative primal feasibility || X - P - C ||_F / || X ||_F
    double dual_tol = 1e-6; // relative dual residual mu * max(||dC||, ||dP||) / || X ||_F
    int max_iter = 5000;
    SvdMode svd_mode = SvdMode::full;
    ThresholdConvention threshold_convention = ThresholdConvention::prox;
};

struct AlmmOutcome {
    Eigen::MatrixXd P; // spectrally shrunk block
    Eigen::MatrixXd C; // sparsity-shrunk block
    int iterations = 0;
    double final_residual = 0.0; // relative primal feasibility at stop
    std::vector<double> residual_history;
};

// Alternating-direction augmented Lagrangian split X = P + C with a fixed
// penalty mu = n p / (sum of row norms of X). Per iteration: shrink the
// sparse block from (X - P + Q/mu), then the spectral block from
// (X - C + Q/mu), then the multiplier step Q += mu (X - P - C).
// `shrink_sparse` customizes the sparse prox (rows or entries).
AlmmOutcome almm_split(const Eigen::MatrixXd& X, double reg,
                       const std::function<Eigen::MatrixXd(const Eigen::MatrixXd&, double)>&
                           shrink_sparse,
                       const AlmmOptions& opts, const char* label);

} // namespace rpca
