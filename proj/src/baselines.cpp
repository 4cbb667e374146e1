#include "rpca/baselines.hpp"

#include "rpca/errors.hpp"
#include "rpca/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <string>

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace rpca {

ComponentSet pca_components(const MatrixXd& X, int T) {
    if (T < 1) throw InvalidArgumentError("pca_components: T must be positive");
    const SvdTriple svd = compact_svd(X);
    if (svd.rank() < T)
        throw RankDeficientError("pca_components: data has rank " +
                                     std::to_string(svd.rank()) + " but " +
                                     std::to_string(T) + " components were requested",
                                 static_cast<int>(svd.rank()), T);
    return make_component_set(svd.V.leftCols(T), "pca");
}

ComponentSet sph_components(const MatrixXd& X, int T) {
    if (T < 1) throw InvalidArgumentError("sph_components: T must be positive");
    std::vector<Index> keep;
    keep.reserve(X.rows());
    for (Index i = 0; i < X.rows(); ++i)
        if (X.row(i).norm() > 1e-12) keep.push_back(i);
    if (keep.empty())
        throw InvalidInputError("sph_components: all rows are zero");
    if (static_cast<Index>(keep.size()) < X.rows())
        std::cerr << "warning: sph_components dropped "
                  << (X.rows() - static_cast<Index>(keep.size()))
                  << " zero rows before normalization\n";
    MatrixXd kept(keep.size(), X.cols());
    for (std::size_t i = 0; i < keep.size(); ++i) kept.row(i) = X.row(keep[i]);
    const MatrixXd normalized = row_normalize(kept);
    const SvdTriple svd = compact_svd(normalized);
    if (svd.rank() < T)
        throw RankDeficientError("sph_components: normalized data has rank " +
                                     std::to_string(svd.rank()) + " but " +
                                     std::to_string(T) + " components were requested",
                                 static_cast<int>(svd.rank()), T);
    return make_component_set(svd.V.leftCols(T), "sph");
}

MatrixXd shrink_entries(const MatrixXd& A, double nu) {
    if (nu < 0.0) throw InvalidArgumentError("shrink_entries: negative threshold");
    return A.unaryExpr([nu](double a) {
        const double mag = std::abs(a) - nu;
        return mag > 0.0 ? (a > 0.0 ? mag : -mag) : 0.0;
    });
}

Nl1Result nl1_solve(const MatrixXd& X, double lambda, const AlmmOptions& opts) {
    if (lambda <= 0.0)
        throw InvalidArgumentError("nl1_solve: lambda must be positive");
    AlmmOutcome out = almm_split(
        X, lambda, [](const MatrixXd& A, double nu) { return shrink_entries(A, nu); },
        opts, "nl1_solve");
    Nl1Result result;
    result.L = std::move(out.P);
    result.S = std::move(out.C);
    result.lambda = lambda;
    result.iterations = out.iterations;
    result.final_residual = out.final_residual;
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

ComponentSet nl1_components(const MatrixXd& X, double lambda, int T,
                            const AlmmOptions& opts) {
    if (T < 1) throw InvalidArgumentError("nl1_components: T must be positive");
    const Nl1Result result = nl1_solve(X, lambda, opts);
    const SvdTriple svd = compact_svd(result.L);
    const Index rank = numerical_rank(svd.sigma);
    if (rank < T)
        throw RankDeficientError("nl1_components: low-rank part has rank " +
                                     std::to_string(rank) + " but " + std::to_string(T) +
                                     " components were requested",
                                 static_cast<int>(rank), T);
    return make_component_set(svd.V.leftCols(T), "nl1");
}

DualityGap nl1_duality_gap(const MatrixXd& X, const MatrixXd& L, const MatrixXd& S,
                           double lambda) {
    // candidate multiplier Q = UV' + W with U'W = 0, WV = 0; W is completed by
    // alternating projections so that Q matches lambda sign(S) on the support
    const SvdTriple svd = compact_svd(L);
    const Index rank = numerical_rank(svd.sigma);
    MatrixXd base = MatrixXd::Zero(L.rows(), L.cols());
    MatrixXd proj_u = MatrixXd::Identity(L.rows(), L.rows());
    MatrixXd proj_v = MatrixXd::Identity(L.cols(), L.cols());
    if (rank > 0) {
        const MatrixXd U = svd.U.leftCols(rank);
        const MatrixXd V = svd.V.leftCols(rank);
        base = U * V.transpose();
        proj_u -= U * U.transpose();
        proj_v -= V * V.transpose();
    }

    const double smax = S.size() > 0 ? S.cwiseAbs().maxCoeff() : 0.0;
    const double support_tol = 1e-8 * smax;
    MatrixXd W = MatrixXd::Zero(L.rows(), L.cols());
    if (smax > 0.0) {
        for (int iter = 0; iter < 200; ++iter) {
            for (Index i = 0; i < S.rows(); ++i)
                for (Index j = 0; j < S.cols(); ++j)
                    if (std::abs(S(i, j)) > support_tol)
                        W(i, j) = (S(i, j) > 0.0 ? lambda : -lambda) - base(i, j);
            W = proj_u * W * proj_v;
        }
    }
    const MatrixXd Q = base + W;

    double t = 1.0;
    const double spec = spectral_norm(Q);
    if (spec > 0.0) t = std::min(t, 1.0 / spec);
    const double maxabs = Q.size() > 0 ? Q.cwiseAbs().maxCoeff() : 0.0;
    if (maxabs > 0.0) t = std::min(t, lambda / maxabs);

    DualityGap result;
    result.primal = nuclear_norm(L) + lambda * S.cwiseAbs().sum();
    result.dual = t * Q.cwiseProduct(X).sum();
    result.gap = (result.primal - result.dual) / std::max(result.primal, 1e-300);
    return result;
}

} // namespace rpca
