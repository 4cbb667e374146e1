#include "rpca/lld.hpp"

#include "rpca/errors.hpp"
#include "rpca/linalg.hpp"
#include "rpca/robust_stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace rpca {

MatrixXd shrink_rows(const MatrixXd& A, double nu) {
    if (nu < 0.0) throw InvalidArgumentError("shrink_rows: negative threshold");
    MatrixXd out = MatrixXd::Zero(A.rows(), A.cols());
    for (Index i = 0; i < A.rows(); ++i) {
        const double norm = A.row(i).norm();
        if (norm > nu) out.row(i) = (1.0 - nu / norm) * A.row(i);
    }
    return out;
}

MatrixXd shrink_spectral(const MatrixXd& A, double nu) {
    if (nu < 0.0) throw InvalidArgumentError("shrink_spectral: negative threshold");
    const SvdTriple svd = compact_svd(A);
    Index kept = 0;
    while (kept < svd.rank() && svd.sigma(kept) > nu) ++kept;
    if (kept == 0) return MatrixXd::Zero(A.rows(), A.cols());
    const VectorXd shrunk = svd.sigma.head(kept).array() - nu;
    return svd.U.leftCols(kept) * shrunk.asDiagonal() * svd.V.leftCols(kept).transpose();
}

LldResult lld_solve(const MatrixXd& X, double gamma, const AlmmOptions& opts) {
    if (gamma <= 0.0)
        throw InvalidArgumentError("lld_solve: gamma must be positive");
    AlmmOutcome out = almm_split(
        X, gamma, [](const MatrixXd& A, double nu) { return shrink_rows(A, nu); }, opts,
        "lld_solve");
    LldResult result;
    result.P = std::move(out.P);
    result.C = std::move(out.C);
    result.iterations = out.iterations;
    result.final_residual = out.final_residual;
    result.gamma = gamma;
    result.leverage = leverage_scores(result.P);
    result.residual_history = std::move(out.residual_history);
    return result;
}

namespace {

Index numerical_rank(const VectorXd& sigma) {
    if (sigma.size() == 0) return 0;
    const double cutoff = 1e-6 * sigma(0);
    Index r = 0;
    while (r < sigma.size() && sigma(r) > cutoff) ++r;
    return r;
}

} // namespace

ComponentSet lld_components(const MatrixXd& X, int T, double gamma,
                            const AlmmOptions& opts) {
    if (T < 1) throw InvalidArgumentError("lld_components: T must be positive");
    const LldResult result = lld_solve(X, gamma, opts);
    const SvdTriple svd = compact_svd(result.P);
    const Index rank = numerical_rank(svd.sigma);
    if (rank < T)
        throw RankDeficientError("lld_components: decomposition has rank " +
                                     std::to_string(rank) + " but " + std::to_string(T) +
                                     " components were requested",
                                 static_cast<int>(rank), T);
    return make_component_set(svd.V.leftCols(T), "lld");
}

double gamma_heuristic(int n, int p, int T, GammaMode mode) {
    if (n < 1 || p < 1 || T < 1)
        throw InvalidArgumentError("gamma_heuristic: n, p, T must be positive");
    const double raw = (mode == GammaMode::rank_control)
                           ? std::sqrt(double(T) * double(T) / double(n))
                           : 0.8 * std::sqrt(double(p) / double(n));
    const double lo = std::min(1.0, std::sqrt(double(T) / double(n)));
    return std::clamp(raw, lo, 1.0);
}

namespace {

// candidate dual: gamma-scaled row directions of C on its support, rows of
// U V' from the compact SVD of P elsewhere
MatrixXd certificate_candidate(const MatrixXd& P, const MatrixXd& C, double gamma) {
    const SvdTriple svd = compact_svd(P);
    MatrixXd Q = (svd.rank() > 0)
                     ? MatrixXd(svd.U * svd.V.transpose())
                     : MatrixXd::Zero(P.rows(), P.cols());
    const VectorXd cn = C.rowwise().norm();
    const double cmax = cn.size() > 0 ? cn.maxCoeff() : 0.0;
    if (cmax > 0.0) {
        const double support_tol = 1e-8 * cmax;
        for (Index i = 0; i < C.rows(); ++i)
            if (cn(i) > support_tol) Q.row(i) = (gamma / cn(i)) * C.row(i);
    }
    return Q;
}

} // namespace

CertificateReport check_optimality_certificate(const MatrixXd& X, const MatrixXd& P,
                                               const MatrixXd& C, double gamma) {
    if (gamma <= 0.0)
        throw InvalidArgumentError("check_optimality_certificate: gamma must be positive");
    if ((X - P - C).norm() > 1e-6 * X.norm())
        throw InvalidArgumentError("check_optimality_certificate: (P, C) not feasible");

    const MatrixXd Q = certificate_candidate(P, C, gamma);
    const double nuc = nuclear_norm(P);
    const double rowsum = gamma * row_norm_sum(C);

    CertificateReport report;
    const VectorXd lev = leverage_scores(P);
    report.max_leverage = lev.size() > 0 ? lev.maxCoeff() : 0.0;
    report.spec_inner_gap =
        std::abs(Q.cwiseProduct(P).sum() - nuc) / std::max(1.0, nuc);
    report.spec_norm_gap = std::max(0.0, spectral_norm(Q) - 1.0);
    report.row_inner_gap =
        std::abs(Q.cwiseProduct(C).sum() - rowsum) / std::max(1.0, rowsum);
    report.row_norm_gap =
        std::max(0.0, Q.rowwise().norm().maxCoeff() - gamma) / gamma;
    constexpr double kDiagnosticTol = 1e-3;
    report.spectral_ok = report.spec_inner_gap <= kDiagnosticTol &&
                         report.spec_norm_gap <= kDiagnosticTol;
    report.row_ok =
        report.row_inner_gap <= kDiagnosticTol && report.row_norm_gap <= kDiagnosticTol;
    return report;
}

DualityGap lld_duality_gap(const MatrixXd& X, const MatrixXd& P, const MatrixXd& C,
                           double gamma) {
    MatrixXd Q = certificate_candidate(P, C, gamma);
    // rescale into the dual-feasible set { sigma_1 <= 1, row norms <= gamma }
    double t = 1.0;
    const double spec = spectral_norm(Q);
    if (spec > 0.0) t = std::min(t, 1.0 / spec);
    const double maxrow = Q.rows() > 0 ? Q.rowwise().norm().maxCoeff() : 0.0;
    if (maxrow > 0.0) t = std::min(t, gamma / maxrow);

    DualityGap result;
    result.primal = nuclear_norm(P) + gamma * row_norm_sum(C);
    result.dual = t * Q.cwiseProduct(X).sum();
    result.gap = (result.primal - result.dual) / std::max(result.primal, 1e-300);
    return result;
}

} // namespace rpca
