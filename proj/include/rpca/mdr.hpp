#pragma once

#include "rpca/components.hpp"
#include "rpca/rng.hpp"

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace rpca {

// Maximum mean-absolute-deviation direction via semidefinite relaxation:
// the PSD variable Z (diag Z = 1) is factored as R R' with unit-norm rows,
// the smooth surrogate || X' N(R) ||_F^2 is maximized by nonlinear conjugate
// gradient, and K sign roundings convert the factor into a unit direction.

struct CgParams {
    double grad_tol = 1e-9; // relative to the initial gradient norm
    int max_iter = 2000;
    int restarts = 3; // independent random initializations, best kept
};

struct FactorMatrix {
    Eigen::MatrixXd R; // n x k, unit rows
    Eigen::Index k = 0;
};

// default factor rank floor((1 + sqrt(9 + 8 n)) / 2), enough for the
// factored problem to share its global optimum with the semidefinite one
Eigen::Index default_factor_rank(Eigen::Index n);

// value || X' N(R) ||_F^2 and its exact gradient in R; the gradient of each
// row is orthogonal to that row (the objective is constant along rays)
std::pair<double, Eigen::MatrixXd> bm_objective(const Eigen::MatrixXd& R,
                                                const Eigen::MatrixXd& X);

// maximize the factored objective from random starts; returns the unit-row
// factor and alpha_star = || X' R ||_F at the best converged run
std::pair<FactorMatrix, double> solve_sdp_bm(const Eigen::MatrixXd& X,
                                             const CgParams& params,
                                             const RandomSource& rng);

struct RoundingTrial {
    Eigen::VectorXd y; // sign vector, +-1 entries
    Eigen::VectorXd v; // unit direction X' y / || X' y ||
    double value = 0.0; // || X v ||_1
};

// one randomized rounding: y = sign(R g) for standard normal g (sign of an
// exact zero is +1), direction v = X' y normalized
RoundingTrial round_once(const Eigen::MatrixXd& R_star, const Eigen::MatrixXd& X,
                         RandomSource& rng);

struct MdrResult {
    Eigen::VectorXd v_star;
    double alpha_star = 0.0;
    double ratio = 0.0; // || X v_star ||_1 / alpha_star
    std::vector<double> trial_values;
    std::uint64_t seed = 0;
};

// full pipeline: solve the relaxation, run K rounding trials, keep the best
// direction (ties broken by lowest trial index); deterministic given the seed
MdrResult mdr_top_component(const Eigen::MatrixXd& X, int K, const CgParams& params,
                            const RandomSource& rng);

// T orthonormal components by greedy pursuit: after each direction the data
// is restricted to its orthogonal complement via a Householder reflector and
// the next direction is lifted back to original coordinates
ComponentSet mdr_components(const Eigen::MatrixXd& X, int T, int K,
                            const CgParams& params, const RandomSource& rng);

// pursuit with the per-component diagnostics kept
struct MdrPursuit {
    ComponentSet components;
    std::vector<double> ratios;      // approximation ratio per deflation step
    std::vector<double> alpha_stars; // relaxation value per deflation step
};

MdrPursuit mdr_pursuit(const Eigen::MatrixXd& X, int T, int K, const CgParams& params,
                       const RandomSource& rng);

} // namespace rpca
