#pragma once

#include <Eigen/Dense>

#include <optional>

namespace cylcert {

/// Singular values below this fraction of the largest one count as zero.
inline constexpr double kRankThreshold = 1e-9;

int numerical_rank(const Eigen::MatrixXd& a, double rel_tol = kRankThreshold);

/// Orthonormal basis (as columns) of {x : A x = 0}.
Eigen::MatrixXd null_space(const Eigen::MatrixXd& a, double rel_tol = kRankThreshold);

/// Orthonormal basis (as columns) of {y : y^T A = 0}.
Eigen::MatrixXd left_null_space(const Eigen::MatrixXd& a, double rel_tol = kRankThreshold);

/// Reduced row echelon form with partial pivoting; entries below `tol` are
/// cleared.
Eigen::MatrixXd rref(const Eigen::MatrixXd& a, double tol = 1e-10);

/// A feasible point of {x >= 0 : A x = b}, found by the phase-one simplex
/// method with Bland's rule, or std::nullopt when the system is infeasible.
std::optional<Eigen::VectorXd> find_nonnegative_solution(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                                         double tol = 1e-10);

}  // namespace cylcert
