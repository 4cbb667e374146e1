#pragma once

#include <Eigen/Dense>
#include <vector>

namespace rpca {

// compact SVD: only singular values above the rank cutoff are kept
struct SvdTriple {
    Eigen::MatrixXd U;     // m x r, orthonormal columns
    Eigen::VectorXd sigma; // r positive values, weakly decreasing
    Eigen::MatrixXd V;     // n x r, orthonormal columns

    Eigen::Index rank() const { return sigma.size(); }
    Eigen::MatrixXd reconstruct() const {
        if (rank() == 0) return Eigen::MatrixXd::Zero(U.rows(), V.rows());
        return U * sigma.asDiagonal() * V.transpose();
    }
};

// rank cutoff 1e-12 * sigma_1; zero matrix yields an empty triple
SvdTriple compact_svd(const Eigen::MatrixXd& A);

// top-r singular triplets (fewer if rank < r). Uses a randomized
// range-finder with power iterations for thin targets, falling back to the
// dense decomposition when the sketch cannot certify 1e-8 agreement.
SvdTriple truncated_svd(const Eigen::MatrixXd& A, Eigen::Index r);

// largest singular value (0 for an empty or zero matrix)
double spectral_norm(const Eigen::MatrixXd& A);

// nuclear norm = sum of singular values
double nuclear_norm(const Eigen::MatrixXd& A);

// sum of row l2 norms (dual of the 2->inf operator norm)
double row_norm_sum(const Eigen::MatrixXd& A);

// each row divided by its l2 norm; rows with norm <= 1e-12 raise
// DegenerateRowError naming the row
Eigen::MatrixXd row_normalize(const Eigen::MatrixXd& A);

// Sequence of Householder reflectors recording a chain of one-dimension
// reductions. Reflector d maps the extracted direction (in the coordinates
// current at depth d) onto +/- e1; the orthogonal complement lives in the
// remaining coordinates.
struct HouseholderStack {
    std::vector<Eigen::VectorXd> reflectors; // unit vectors, shrinking lengths

    std::size_t depth() const { return reflectors.size(); }
};

// Restrict X (n x q, in current reduced coordinates) to the orthogonal
// complement of unit vector v, producing n x (q-1), and push the reflector.
Eigen::MatrixXd householder_reduce(const Eigen::MatrixXd& X,
                                   const Eigen::VectorXd& v,
                                   HouseholderStack& stack);

// Map a vector expressed in the reduced coordinates at the top of the stack
// back to original coordinates. Unit norm is preserved.
Eigen::VectorXd lift_component(const Eigen::VectorXd& v_reduced,
                               const HouseholderStack& stack);

} // namespace rpca
