#pragma once

#include "rpca/almm.hpp"
#include "rpca/components.hpp"

#include <Eigen/Dense>
#include <vector>

namespace rpca {

// Low-leverage decomposition: split X into P + C minimizing
// ||P||_nuclear + gamma * (sum of row norms of C). The P part has leverage
// scores bounded by gamma^2 and its rank bounded by n gamma^2 + 1.

struct LldResult {
    Eigen::MatrixXd P;
    Eigen::MatrixXd C;
    int iterations = 0;
    double final_residual = 0.0; // relative feasibility || X - P - C ||_F / || X ||_F
    double gamma = 0.0;
    Eigen::VectorXd leverage; // diag of the hat matrix of P
    std::vector<double> residual_history;
};

// row-wise soft threshold: row -> max(1 - nu/||row||, 0) * row
Eigen::MatrixXd shrink_rows(const Eigen::MatrixXd& A, double nu);

// singular-value soft threshold via the compact SVD
Eigen::MatrixXd shrink_spectral(const Eigen::MatrixXd& A, double nu);

LldResult lld_solve(const Eigen::MatrixXd& X, double gamma,
                    const AlmmOptions& opts = {});

// top-T right singular vectors of the converged P
ComponentSet lld_components(const Eigen::MatrixXd& X, int T, double gamma,
                            const AlmmOptions& opts = {});

enum class GammaMode { rank_control, model_fit };

// rank-control: sqrt(T^2 / n); model-fit: 0.8 sqrt(p / n);
// clamped to the meaningful interval [sqrt(T/n), 1]
double gamma_heuristic(int n, int p, int T, GammaMode mode);

// Diagnostic dual-certificate check. The candidate dual takes gamma-scaled
// row directions of C on its support and rows of U V' (compact SVD of P)
// elsewhere; the report measures how far it is from tightness (inner
// products) and feasibility (norm caps).
struct CertificateReport {
    double max_leverage = 0.0;
    bool spectral_ok = false;
    bool row_ok = false;
    double spec_inner_gap = 0.0; // | <Q,P> - ||P||_* | relative
    double spec_norm_gap = 0.0;  // excess of sigma_1(Q) over 1
    double row_inner_gap = 0.0;  // | <Q,C> - gamma ||C||_row | relative
    double row_norm_gap = 0.0;   // excess of max row norm of Q over gamma, relative
};

CertificateReport check_optimality_certificate(const Eigen::MatrixXd& X,
                                               const Eigen::MatrixXd& P,
                                               const Eigen::MatrixXd& C, double gamma);

// Weak-duality bound from the same candidate certificate, rescaled into the
// dual-feasible set. gap = (primal - dual) / primal upper-bounds the
// relative suboptimality of (P, C).
struct DualityGap {
    double primal = 0.0;
    double dual = 0.0;
    double gap = 0.0;
};

DualityGap lld_duality_gap(const Eigen::MatrixXd& X, const Eigen::MatrixXd& P,
                           const Eigen::MatrixXd& C, double gamma);

} // namespace rpca
