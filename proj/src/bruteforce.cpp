#include "rpca/bruteforce.hpp"

#include "rpca/errors.hpp"

#include <cmath>
#include <cstdint>
#include <string>

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace rpca {

double norm_inf_to_1_bruteforce(const MatrixXd& M) {
    const Index n = M.rows();
    if (M.cols() != n)
        throw InvalidArgumentError("norm_inf_to_1_bruteforce: matrix not square");
    if (n < 1)
        throw InvalidArgumentError("norm_inf_to_1_bruteforce: empty matrix");
    if (n > 25)
        throw ResourceLimitError("norm_inf_to_1_bruteforce: n = " + std::to_string(n) +
                                 " exceeds the enumeration budget (25)");
    const double scale = M.cwiseAbs().maxCoeff();
    if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(scale, 1.0))
        throw InvalidArgumentError("norm_inf_to_1_bruteforce: matrix not symmetric");

    // Gray-code walk over y in {+-1}^n with y1 = +1: each step flips one
    // coordinate and updates s = M y and the quadratic form incrementally.
    VectorXd y = VectorXd::Ones(n);
    VectorXd s = M.rowwise().sum();
    double val = y.dot(s);
    double best = val;
    if (n == 1) return best;

    const std::uint64_t total = (1ULL << (n - 1)) - 1;
    for (std::uint64_t g = 1; g <= total; ++g) {
        const int j = __builtin_ctzll(g) + 1; // flip among coordinates 2..n
        const double yj = y(j);
        val += -4.0 * yj * s(j) + 4.0 * M(j, j);
        s -= 2.0 * yj * M.col(j);
        y(j) = -yj;
        // refresh accumulated state periodically to cap floating-point drift
        if ((g & 0xffffULL) == 0) {
            s = M * y;
            val = y.dot(s);
        }
        if (val > best) best = val;
    }
    return best;
}

double norm_2to1_bruteforce(const MatrixXd& X) {
    if (X.rows() > 25)
        throw ResourceLimitError("norm_2to1_bruteforce: n = " + std::to_string(X.rows()) +
                                 " exceeds the enumeration budget (25)");
    const double val = norm_inf_to_1_bruteforce(X * X.transpose());
    return std::sqrt(std::max(val, 0.0));
}

double l1_of_projection(const MatrixXd& X, const VectorXd& v) {
    if (X.cols() != v.size())
        throw DimensionMismatchError("l1_of_projection: dimension mismatch");
    if (std::abs(v.norm() - 1.0) > 1e-8)
        throw InvalidArgumentError("l1_of_projection: v is not unit norm");
    return (X * v).lpNorm<1>();
}

} // namespace rpca
