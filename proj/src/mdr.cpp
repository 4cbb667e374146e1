#include "rpca/mdr.hpp"

#include "rpca/errors.hpp"
#include "rpca/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace rpca {

Index default_factor_rank(Index n) {
    return static_cast<Index>(std::floor((1.0 + std::sqrt(9.0 + 8.0 * double(n))) / 2.0));
}

std::pair<double, MatrixXd> bm_objective(const MatrixXd& R, const MatrixXd& X) {
    if (R.rows() != X.rows())
        throw DimensionMismatchError("bm_objective: R and X row counts differ");
    const MatrixXd N = row_normalize(R); // throws on a degenerate row
    const MatrixXd M = X.transpose() * N;
    const double value = M.squaredNorm();
    const MatrixXd G = 2.0 * (X * M);
    MatrixXd grad(R.rows(), R.cols());
    for (Index i = 0; i < R.rows(); ++i) {
        const double rnorm = R.row(i).norm();
        const double along = G.row(i).dot(N.row(i));
        grad.row(i) = (G.row(i) - along * N.row(i)) / rnorm;
    }
    return {value, grad};
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// minimize phi = -objective; evaluations carry the gradient of phi
struct Eval {
    double phi = kInf;
    MatrixXd grad;
    bool ok = false;
};

Eval eval_phi(const MatrixXd& R, const MatrixXd& X) {
    Eval e;
    try {
        auto [value, grad] = bm_objective(R, X);
        e.phi = -value;
        e.grad = -grad;
        e.ok = true;
    } catch (const DegenerateRowError&) {
        // off the feasible region; the line search treats this as +inf
    }
    return e;
}

struct LineSearchResult {
    double alpha = 0.0;
    Eval eval;
    bool ok = false;
};

// strong Wolfe conditions, bracketing then bisection zoom
LineSearchResult wolfe_line_search(const MatrixXd& R, const MatrixXd& D,
                                   const MatrixXd& X, double phi0, double dphi0,
                                   double alpha_init) {
    constexpr double c1 = 1e-4;
    constexpr double c2 = 0.1;
    LineSearchResult out;

    auto zoom = [&](double lo, double hi, double phi_lo) {
        for (int j = 0; j < 50; ++j) {
            const double alpha = 0.5 * (lo + hi);
            Eval e = eval_phi(R + alpha * D, X);
            if (!e.ok || e.phi > phi0 + c1 * alpha * dphi0 || e.phi >= phi_lo) {
                hi = alpha;
                continue;
            }
            const double dphi = e.grad.cwiseProduct(D).sum();
            if (std::abs(dphi) <= -c2 * dphi0) {
                out.alpha = alpha;
                out.eval = std::move(e);
                out.ok = true;
                return;
            }
            if (dphi * (hi - lo) >= 0.0) hi = lo;
            lo = alpha;
            phi_lo = e.phi;
            if (std::abs(hi - lo) <= 1e-16 * std::max(1.0, std::abs(lo))) break;
        }
        // sufficient decrease holds at lo even when the curvature side gave up
        if (lo > 0.0) {
            Eval e = eval_phi(R + lo * D, X);
            if (e.ok && e.phi < phi0) {
                out.alpha = lo;
                out.eval = std::move(e);
                out.ok = true;
            }
        }
    };

    double alpha_prev = 0.0, phi_prev = phi0;
    double alpha = alpha_init;
    for (int i = 0; i < 30; ++i) {
        Eval e = eval_phi(R + alpha * D, X);
        if (!e.ok || e.phi > phi0 + c1 * alpha * dphi0 || (i > 0 && e.phi >= phi_prev)) {
            zoom(alpha_prev, alpha, phi_prev);
            return out;
        }
        const double dphi = e.grad.cwiseProduct(D).sum();
        if (std::abs(dphi) <= -c2 * dphi0) {
            out.alpha = alpha;
            out.eval = std::move(e);
            out.ok = true;
            return out;
        }
        if (dphi >= 0.0) {
            zoom(alpha, alpha_prev, e.phi);
            return out;
        }
        alpha_prev = alpha;
        phi_prev = e.phi;
        alpha = std::min(2.0 * alpha, 1e10);
    }
    return out;
}

struct NcgOutcome {
    MatrixXd R; // unit rows
    double value = -kInf;
    bool converged = false;
};

// The objective is the quadratic form tr(N' (XX') N) over unit rows, so the
// conditional maximizer of row i keeping the others fixed is the normalized
// off-diagonal combination sum_{j != i} A_ij n_j. Sweeping these closed-form
// updates never compares function values, so it keeps contracting after the
// Wolfe search runs out of floating-point resolution.
bool coordinate_polish(MatrixXd& R, const MatrixXd& X, double target, Eval& e) {
    const MatrixXd A = X * X.transpose();
    const VectorXd diag = A.diagonal();
    R = row_normalize(R);
    for (int sweep = 0; sweep < 300; ++sweep) {
        for (Index i = 0; i < R.rows(); ++i) {
            Eigen::RowVectorXd s = A.row(i) * R - diag(i) * R.row(i);
            const double sn = s.norm();
            if (sn > 1e-13 * A.row(i).norm()) R.row(i) = s / sn;
        }
        e = eval_phi(R, X);
        if (e.ok && e.grad.norm() <= target) return true;
    }
    return false;
}

NcgOutcome ncg_maximize(const MatrixXd& X, const MatrixXd& R0, const CgParams& params) {
    NcgOutcome outcome;
    MatrixXd R = row_normalize(R0);
    Eval e = eval_phi(R, X);
    const double g0 = e.grad.norm();
    const double target = std::max(params.grad_tol * g0,
                                   1e-14 * std::max(1.0, std::abs(e.phi)));
    MatrixXd D = -e.grad;
    bool steepest = true;
    double alpha_used = 1.0 / std::max(1.0, g0);

    for (int iter = 0; iter < params.max_iter; ++iter) {
        const double gnorm = e.grad.norm();
        if (gnorm <= target) {
            outcome.converged = true;
            break;
        }
        double dphi0 = D.cwiseProduct(e.grad).sum();
        if (dphi0 >= -1e-14 * std::max(1.0, D.norm() * gnorm)) {
            D = -e.grad; // lost descent; restart
            steepest = true;
            dphi0 = -gnorm * gnorm;
        }
        LineSearchResult ls = wolfe_line_search(R, D, X, e.phi, dphi0, alpha_used);
        if (!ls.ok && !steepest) {
            D = -e.grad;
            steepest = true;
            dphi0 = -gnorm * gnorm;
            ls = wolfe_line_search(R, D, X, e.phi, dphi0, 1.0 / std::max(1.0, gnorm));
        }
        if (!ls.ok) break; // stalled below line-search resolution

        R += ls.alpha * D;
        alpha_used = ls.alpha;
        const double beta_raw =
            ls.eval.grad.cwiseProduct(ls.eval.grad - e.grad).sum() /
            std::max(e.grad.squaredNorm(), 1e-300);
        const double beta = std::max(0.0, beta_raw); // Polak-Ribiere+
        D = -ls.eval.grad + beta * D;
        steepest = (beta == 0.0);
        e = std::move(ls.eval);

        // the objective is scale-free per row; re-anchor if norms drift
        const VectorXd norms = R.rowwise().norm();
        if (norms.minCoeff() < 0.5 || norms.maxCoeff() > 2.0) {
            R = row_normalize(R);
            e = eval_phi(R, X);
            D = -e.grad;
            steepest = true;
        }
    }

    if (!outcome.converged && e.ok && e.grad.norm() <= target) outcome.converged = true;
    if (!outcome.converged) outcome.converged = coordinate_polish(R, X, target, e);

    outcome.R = row_normalize(R);
    outcome.value = bm_objective(outcome.R, X).first;
    return outcome;
}

// A factor is only determined up to right rotation, and different data
// orderings of the same problem converge to different points on that orbit.
// Rounding draws z ~ N(0, NN') either way, so factoring NN' canonically
// (descending eigenpairs, sign fixed by the largest entry) makes the trials
// a function of the solved matrix alone.
MatrixXd canonical_factor(const MatrixXd& N) {
    const MatrixXd Y = N * N.transpose();
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(Y);
    const VectorXd& lam = eig.eigenvalues(); // ascending
    const double cutoff = 1e-12 * std::max(lam.cwiseAbs().maxCoeff(), 1e-300);
    std::vector<Index> keep;
    for (Index j = lam.size() - 1; j >= 0; --j)
        if (lam(j) > cutoff) keep.push_back(j);
    MatrixXd F(N.rows(), static_cast<Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) {
        VectorXd u = eig.eigenvectors().col(keep[c]);
        Index imax = 0;
        for (Index i = 1; i < u.size(); ++i)
            if (std::abs(u(i)) > std::abs(u(imax))) imax = i;
        if (u(imax) < 0.0) u = -u;
        F.col(static_cast<Index>(c)) = std::sqrt(lam(keep[c])) * u;
    }
    return F;
}

} // namespace

std::pair<FactorMatrix, double> solve_sdp_bm(const MatrixXd& X, const CgParams& params,
                                             const RandomSource& rng) {
    const Index n = X.rows();
    if (n < 2) throw InvalidArgumentError("solve_sdp_bm: need at least 2 observations");
    if (!X.allFinite()) throw InvalidInputError("solve_sdp_bm: non-finite input");
    const Index k = default_factor_rank(n);
    const int runs = std::max(1, params.restarts);

    NcgOutcome best_converged, best_any;
    for (int run = 0; run < runs; ++run) {
        RandomSource rs = rng.substream("restart-" + std::to_string(run));
        MatrixXd R0 = rs.gaussian_matrix(n, k);
        NcgOutcome out = ncg_maximize(X, R0, params);
        if (out.value > best_any.value) best_any = out;
        if (out.converged && out.value > best_converged.value) best_converged = out;
    }
    if (!best_converged.converged)
        throw CgConvergenceError("solve_sdp_bm: no run met the gradient tolerance",
                                 best_any.R, best_any.value);
    FactorMatrix factor{best_converged.R, k};
    return {std::move(factor), std::sqrt(std::max(best_converged.value, 0.0))};
}

RoundingTrial round_once(const MatrixXd& R_star, const MatrixXd& X, RandomSource& rng) {
    if (R_star.rows() != X.rows())
        throw DimensionMismatchError("round_once: R and X row counts differ");
    const VectorXd g = rng.gaussian_vector(R_star.cols());
    const VectorXd z = R_star * g;
    RoundingTrial trial;
    trial.y = VectorXd(z.size());
    for (Index i = 0; i < z.size(); ++i) trial.y(i) = (z(i) >= 0.0) ? 1.0 : -1.0;
    VectorXd w = X.transpose() * trial.y;
    const double wnorm = w.norm();
    if (wnorm <= 1e-300)
        throw DegenerateTrialError("round_once: X' y vanished");
    trial.v = w / wnorm;
    trial.value = (X * trial.v).lpNorm<1>();
    return trial;
}

MdrResult mdr_top_component(const MatrixXd& X, int K, const CgParams& params,
                            const RandomSource& rng) {
    if (K < 1) throw InvalidArgumentError("mdr_top_component: K must be positive");
    auto [factor, alpha_star] = solve_sdp_bm(X, params, rng.substream("solver"));

    MdrResult result;
    result.alpha_star = alpha_star;
    result.seed = rng.seed();
    result.trial_values.assign(K, -kInf);

    const MatrixXd F = canonical_factor(factor.R);
    VectorXd best_v;
    double best_value = -kInf;
    int best_index = -1;
    for (int k = 0; k < K; ++k) {
        RandomSource rs = rng.substream("trial-" + std::to_string(k));
        try {
            RoundingTrial trial = round_once(F, X, rs);
            result.trial_values[k] = trial.value;
            if (trial.value > best_value) {
                best_value = trial.value;
                best_v = trial.v;
                best_index = k;
            }
        } catch (const DegenerateTrialError&) {
            // recorded as -inf; skipped
        }
    }
    if (best_index < 0)
        throw RoundingFailureError("mdr_top_component: every rounding trial degenerated");
    result.v_star = best_v;
    result.ratio = best_value / alpha_star;
    return result;
}

MdrPursuit mdr_pursuit(const MatrixXd& X, int T, int K, const CgParams& params,
                       const RandomSource& rng) {
    const Index p = X.cols();
    if (T < 1 || T > p)
        throw InvalidArgumentError("mdr_components: T = " + std::to_string(T) +
                                   " outside [1, " + std::to_string(p) + "]");
    MdrPursuit pursuit;
    MatrixXd V(p, T);
    MatrixXd current = X;
    HouseholderStack stack;
    for (int t = 0; t < T; ++t) {
        MdrResult res = mdr_top_component(current, K, params,
                                          rng.substream("component-" + std::to_string(t)));
        V.col(t) = lift_component(res.v_star, stack);
        pursuit.ratios.push_back(res.ratio);
        pursuit.alpha_stars.push_back(res.alpha_star);
        if (t + 1 < T) current = householder_reduce(current, res.v_star, stack);
    }
    pursuit.components = make_component_set(std::move(V), "mdr");
    return pursuit;
}

ComponentSet mdr_components(const MatrixXd& X, int T, int K, const CgParams& params,
                            const RandomSource& rng) {
    return mdr_pursuit(X, T, K, params, rng).components;
}

} // namespace rpca
