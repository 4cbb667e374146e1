#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <utility>

namespace rpca {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// non-finite or otherwise unusable input data
class InvalidInputError : public Error {
public:
    using Error::Error;
};

class InvalidArgumentError : public Error {
public:
    using Error::Error;
};

class DimensionMismatchError : public InvalidArgumentError {
public:
    using InvalidArgumentError::InvalidArgumentError;
};

class DegenerateRowError : public Error {
public:
    DegenerateRowError(const std::string& what, Eigen::Index row)
        : Error(what), row_(row) {}
    Eigen::Index row() const { return row_; }

private:
    Eigen::Index row_;
};

class DegenerateColumnError : public Error {
public:
    DegenerateColumnError(const std::string& what, Eigen::Index column)
        : Error(what), column_(column) {}
    Eigen::Index column() const { return column_; }

private:
    Eigen::Index column_;
};

// brute-force oracle asked for an instance beyond its enumeration budget
class ResourceLimitError : public Error {
public:
    using Error::Error;
};

class ConvergenceFailureError : public Error {
public:
    using Error::Error;
};

// iterative centering stopped at max_iter; carries the best iterate seen
class CenteringConvergenceError : public ConvergenceFailureError {
public:
    CenteringConvergenceError(const std::string& what, Eigen::VectorXd best,
                              int iterations, double residual)
        : ConvergenceFailureError(what), best_(std::move(best)),
          iterations_(iterations), residual_(residual) {}
    const Eigen::VectorXd& best_iterate() const { return best_; }
    int iterations() const { return iterations_; }
    double residual() const { return residual_; }

private:
    Eigen::VectorXd best_;
    int iterations_;
    double residual_;
};

// conjugate-gradient solver exhausted restarts; carries the best factor found
class CgConvergenceError : public ConvergenceFailureError {
public:
    CgConvergenceError(const std::string& what, Eigen::MatrixXd best_factor,
                       double best_value)
        : ConvergenceFailureError(what), best_factor_(std::move(best_factor)),
          best_value_(best_value) {}
    const Eigen::MatrixXd& best_factor() const { return best_factor_; }
    double best_value() const { return best_value_; }

private:
    Eigen::MatrixXd best_factor_;
    double best_value_;
};

// splitting solver hit max_iter before the feasibility tolerance;
// carries the last (low_rank, sparse) iterate pair and its residual
class AlmmConvergenceError : public ConvergenceFailureError {
public:
    AlmmConvergenceError(const std::string& what, Eigen::MatrixXd low_rank,
                         Eigen::MatrixXd sparse, int iterations, double residual)
        : ConvergenceFailureError(what), low_rank_(std::move(low_rank)),
          sparse_(std::move(sparse)), iterations_(iterations), residual_(residual) {}
    const Eigen::MatrixXd& low_rank_iterate() const { return low_rank_; }
    const Eigen::MatrixXd& sparse_iterate() const { return sparse_; }
    int iterations() const { return iterations_; }
    double residual() const { return residual_; }

private:
    Eigen::MatrixXd low_rank_;
    Eigen::MatrixXd sparse_;
    int iterations_;
    double residual_;
};

// a single randomized rounding trial produced a zero direction
class DegenerateTrialError : public Error {
public:
    using Error::Error;
};

// every rounding trial was degenerate
class RoundingFailureError : public Error {
public:
    using Error::Error;
};

class RankDeficientError : public Error {
public:
    RankDeficientError(const std::string& what, int achieved, int requested)
        : Error(what), achieved_(achieved), requested_(requested) {}
    int achieved_rank() const { return achieved_; }
    int requested_rank() const { return requested_; }

private:
    int achieved_;
    int requested_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// dataset download / checksum / cache problems
class DatasetError : public Error {
public:
    using Error::Error;
};

} // namespace rpca
