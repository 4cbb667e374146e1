#pragma once

#include <Eigen/Dense>

namespace rpca {

// Exponential-time oracles for small instances. Both enumerate sign vectors
// with y1 fixed to +1 (the objective is sign-symmetric), so the work is
// 2^(n-1) evaluations; n is capped at 25.

// max over y in {+-1}^n of y' M y, for symmetric positive semidefinite M
// (the inf->1 operator norm is attained at sign vectors in that case)
double norm_inf_to_1_bruteforce(const Eigen::MatrixXd& M);

// exact 2->1 operator norm sqrt(norm_inf_to_1_bruteforce(X X'))
double norm_2to1_bruteforce(const Eigen::MatrixXd& X);

// || X v ||_1 for a unit vector v (checked to 1e-8)
double l1_of_projection(const Eigen::MatrixXd& X, const Eigen::VectorXd& v);

} // namespace rpca
