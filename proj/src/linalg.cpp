#include "rpca/linalg.hpp"

#include "rpca/errors.hpp"
#include "rpca/rng.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace rpca {

namespace {

constexpr double kRankCutoff = 1e-12; // relative to sigma_1

SvdTriple truncate_triple(const Eigen::BDCSVD<MatrixXd>& svd, Index keep) {
    SvdTriple t;
    t.U = svd.matrixU().leftCols(keep);
    t.sigma = svd.singularValues().head(keep);
    t.V = svd.matrixV().leftCols(keep);
    return t;
}

Index count_above_cutoff(const VectorXd& sigma) {
    if (sigma.size() == 0) return 0;
    const double cutoff = kRankCutoff * sigma(0);
    if (sigma(0) <= 0.0) return 0;
    Index r = 0;
    while (r < sigma.size() && sigma(r) > cutoff) ++r;
    return r;
}

} // namespace

SvdTriple compact_svd(const MatrixXd& A) {
    if (!A.allFinite())
        throw InvalidInputError("compact_svd: input has non-finite entries");
    if (A.rows() == 0 || A.cols() == 0) {
        SvdTriple t;
        t.U = MatrixXd(A.rows(), 0);
        t.sigma = VectorXd(0);
        t.V = MatrixXd(A.cols(), 0);
        return t;
    }
    Eigen::BDCSVD<MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return truncate_triple(svd, count_above_cutoff(svd.singularValues()));
}

namespace {

// Randomized range finder with power iterations. Accepted only if every
// returned triplet satisfies both residual identities A v = s u and
// A' u = s v to 1e-10 * sigma_1; otherwise the caller falls back to the
// dense path.
bool randomized_svd_attempt(const MatrixXd& A, Index r, SvdTriple& out) {
    const Index m = A.rows(), n = A.cols();
    const Index sketch = std::min(n, r + 10);
    RandomSource rng(0x5eed5eedULL); // fixed: the result is checked, not trusted
    MatrixXd omega = rng.gaussian_matrix(n, sketch);
    MatrixXd Y = A * omega;
    Eigen::HouseholderQR<MatrixXd> qr(Y);
    MatrixXd Q = qr.householderQ() * MatrixXd::Identity(m, std::min(m, sketch));
    for (int it = 0; it < 4; ++it) {
        Eigen::HouseholderQR<MatrixXd> qr1(A.transpose() * Q);
        MatrixXd Z = qr1.householderQ() * MatrixXd::Identity(n, std::min(n, sketch));
        Eigen::HouseholderQR<MatrixXd> qr2(A * Z);
        Q = qr2.householderQ() * MatrixXd::Identity(m, std::min(m, sketch));
    }
    MatrixXd B = Q.transpose() * A;
    Eigen::BDCSVD<MatrixXd> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Index keep = std::min(r, count_above_cutoff(svd.singularValues()));
    if (keep == 0) {
        out.U = MatrixXd(m, 0);
        out.sigma = VectorXd(0);
        out.V = MatrixXd(n, 0);
        return true;
    }
    SvdTriple t;
    t.U = Q * svd.matrixU().leftCols(keep);
    t.sigma = svd.singularValues().head(keep);
    t.V = svd.matrixV().leftCols(keep);
    const double tol = 1e-10 * t.sigma(0);
    MatrixXd res1 = A * t.V - t.U * t.sigma.asDiagonal();
    MatrixXd res2 = A.transpose() * t.U - t.V * t.sigma.asDiagonal();
    if (res1.colwise().norm().maxCoeff() > tol ||
        res2.colwise().norm().maxCoeff() > tol)
        return false;
    out = std::move(t);
    return true;
}

} // namespace

SvdTriple truncated_svd(const MatrixXd& A, Index r) {
    if (!A.allFinite())
        throw InvalidInputError("truncated_svd: input has non-finite entries");
    const Index minmn = std::min(A.rows(), A.cols());
    if (r < 1 || r > minmn)
        throw InvalidArgumentError("truncated_svd: rank " + std::to_string(r) +
                                   " out of range [1, " + std::to_string(minmn) + "]");
    // sketching only pays off well below the full spectrum on larger inputs
    if (minmn > 200 && r <= minmn / 4) {
        SvdTriple t;
        if (randomized_svd_attempt(A, r, t)) return t;
    }
    Eigen::BDCSVD<MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Index keep = std::min(r, count_above_cutoff(svd.singularValues()));
    return truncate_triple(svd, keep);
}

double spectral_norm(const MatrixXd& A) {
    if (A.rows() == 0 || A.cols() == 0) return 0.0;
    return Eigen::BDCSVD<MatrixXd>(A).singularValues()(0);
}

double nuclear_norm(const MatrixXd& A) {
    if (A.rows() == 0 || A.cols() == 0) return 0.0;
    const VectorXd sigma = Eigen::BDCSVD<MatrixXd>(A).singularValues();
    return sigma.head(count_above_cutoff(sigma)).sum();
}

double row_norm_sum(const MatrixXd& A) {
    return A.rowwise().norm().sum();
}

MatrixXd row_normalize(const MatrixXd& A) {
    MatrixXd out(A.rows(), A.cols());
    for (Index i = 0; i < A.rows(); ++i) {
        const double norm = A.row(i).norm();
        if (norm <= 1e-12)
            throw DegenerateRowError(
                "row_normalize: row " + std::to_string(i) + " has near-zero norm", i);
        out.row(i) = A.row(i) / norm;
    }
    return out;
}

MatrixXd householder_reduce(const MatrixXd& X, const VectorXd& v,
                            HouseholderStack& stack) {
    const Index q = v.size();
    if (X.cols() != q)
        throw DimensionMismatchError("householder_reduce: X has " +
                                     std::to_string(X.cols()) + " columns, v has " +
                                     std::to_string(q));
    if (std::abs(v.norm() - 1.0) > 1e-10)
        throw InvalidArgumentError("householder_reduce: v is not unit norm");
    // reflector sends v to -s * e1; complement = remaining coordinates
    const double s = (v(0) >= 0.0) ? 1.0 : -1.0;
    VectorXd w = v;
    w(0) += s;
    VectorXd u = w / w.norm();
    MatrixXd reduced = X - 2.0 * (X * u) * u.transpose();
    stack.reflectors.push_back(std::move(u));
    return reduced.rightCols(q - 1);
}

VectorXd lift_component(const VectorXd& v_reduced, const HouseholderStack& stack) {
    VectorXd w = v_reduced;
    for (auto it = stack.reflectors.rbegin(); it != stack.reflectors.rend(); ++it) {
        const VectorXd& u = *it;
        if (w.size() + 1 != u.size())
            throw DimensionMismatchError(
                "lift_component: vector length " + std::to_string(w.size()) +
                " does not match reflector length " + std::to_string(u.size()));
        VectorXd padded(u.size());
        padded(0) = 0.0;
        padded.tail(w.size()) = w;
        w = padded - 2.0 * u * u.dot(padded);
    }
    return w;
}

} // namespace rpca
