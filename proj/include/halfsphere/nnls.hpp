#pragma once

#include <optional>

#include <Eigen/Core>

namespace halfsphere {

struct NnlsResult {
    Eigen::VectorXd x;         // nonnegative coefficients
    Eigen::VectorXd residual;  // a x - b
    int iterations = 0;
};

// Lawson-Hanson active-set solution of min |a x - b| subject to x >= 0.
// Throws IterationLimit once more than max_iterations least-squares solves
// have been performed.
NnlsResult solve_nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int max_iterations);

// Least-distance programming: the minimum-norm c with g c >= h (row-wise),
// or nullopt when the constraints are infeasible. Solved through the NNLS dual.
std::optional<Eigen::VectorXd> least_distance(const Eigen::MatrixXd& g, const Eigen::VectorXd& h);

}  // namespace halfsphere
