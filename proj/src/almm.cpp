#include "rpca/almm.hpp"

#include "rpca/errors.hpp"
#include "rpca/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace rpca {

namespace {

MatrixXd assemble_shrunk(const SvdTriple& svd, double nu, Index rows, Index cols,
                         int* kept_out) {
    Index kept = 0;
    while (kept < svd.rank() && svd.sigma(kept) > nu) ++kept;
    if (kept_out) *kept_out = static_cast<int>(kept);
    if (kept == 0) return MatrixXd::Zero(rows, cols);
    const VectorXd shrunk = svd.sigma.head(kept).array() - nu;
    return svd.U.leftCols(kept) * shrunk.asDiagonal() * svd.V.leftCols(kept).transpose();
}

// spectral soft threshold that only computes as much of the spectrum as the
// threshold keeps, growing the computed block when it saturates
MatrixXd shrink_spectral_truncated(const MatrixXd& A, double nu, int& rank_guess) {
    const Index minmn = std::min(A.rows(), A.cols());
    Index r = std::clamp<Index>(rank_guess + 5, 1, minmn);
    SvdTriple svd;
    while (true) {
        svd = truncated_svd(A, r);
        const bool exhausted = svd.rank() < r || r == minmn;
        const bool threshold_reached = svd.rank() > 0 && svd.sigma(svd.rank() - 1) <= nu;
        if (exhausted || threshold_reached || svd.rank() == 0) break;
        r = std::min(minmn, 2 * r + 5);
    }
    int kept = 0;
    MatrixXd out = assemble_shrunk(svd, nu, A.rows(), A.cols(), &kept);
    rank_guess = kept;
    return out;
}

} // namespace

AlmmOutcome almm_split(const MatrixXd& X, double reg,
                       const std::function<MatrixXd(const MatrixXd&, double)>& shrink_sparse,
                       const AlmmOptions& opts, const char* label) {
    if (!X.allFinite())
        throw InvalidInputError(std::string(label) + ": non-finite input");
    const double xnorm = X.norm();
    const double row_sum = row_norm_sum(X);
    if (row_sum <= 0.0)
        throw InvalidArgumentError(std::string(label) + ": zero input matrix");
    if (reg <= 0.0)
        throw InvalidArgumentError(std::string(label) + ": regularizer must be positive");

    const Index n = X.rows(), p = X.cols();
    const double mu = double(n) * double(p) / row_sum; // fixed for the whole run

    double nu_sparse, nu_spectral;
    if (opts.threshold_convention == ThresholdConvention::prox) {
        nu_sparse = reg / mu;
        nu_spectral = 1.0 / mu;
    } else {
        nu_sparse = mu * reg;
        nu_spectral = mu;
    }

    AlmmOutcome out;
    MatrixXd P = MatrixXd::Zero(n, p);
    MatrixXd C = MatrixXd::Zero(n, p);
    MatrixXd Q = MatrixXd::Zero(n, p);
    int rank_guess = 0;
    out.residual_history.reserve(std::min(opts.max_iter, 4096));

    for (int k = 1; k <= opts.max_iter; ++k) {
        const MatrixXd C_new = shrink_sparse(X - P + Q / mu, nu_sparse);
        MatrixXd P_new;
        if (opts.svd_mode == SvdMode::truncated)
            P_new = shrink_spectral_truncated(X - C_new + Q / mu, nu_spectral, rank_guess);
        else {
            SvdTriple svd = compact_svd(X - C_new + Q / mu);
            P_new = assemble_shrunk(svd, nu_spectral, n, p, nullptr);
        }
        const MatrixXd R = X - P_new - C_new;
        Q += mu * R;

        const double feas = R.norm() / xnorm;
        const double dual =
            mu * std::max((C_new - C).norm(), (P_new - P).norm()) / xnorm;
        P = P_new;
        C = C_new;
        out.residual_history.push_back(feas);

        if (feas <= opts.feas_tol && dual <= opts.dual_tol) {
            out.P = std::move(P);
            out.C = std::move(C);
            out.iterations = k;
            out.final_residual = feas;
            return out;
        }
    }

    const double last = out.residual_history.empty() ? 0.0 : out.residual_history.back();
    throw AlmmConvergenceError(std::string(label) + ": no convergence within " +
                                   std::to_string(opts.max_iter) + " iterations " +
                                   "(relative residual " + std::to_string(last) + ")",
                               P, C, opts.max_iter, last);
}

} // namespace rpca
