#pragma once

#include "argpca/subspace.hpp"

#include <Eigen/Dense>

#include <vector>

namespace argpca {

/// Principal angles theta_1 <= ... <= theta_k. theta_1 is the smallest angle, i.e. it
/// corresponds to the largest singular value of A^T B.
struct AngleReport {
    std::vector<double> angles;   ///< radians, each in [0, pi/2]
    std::vector<double> cosines;  ///< clamped singular values, nonincreasing
    int clamped = 0;              ///< singular values that fell outside [0, 1] before clamping
};

/// arccos of the singular values of A^T B. Inputs must have orthonormal columns
/// (Gram deviation <= 1e-6) and the same number of rows.
AngleReport principal_angles(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);
AngleReport principal_angles(const SubspaceBasis& A, const SubspaceBasis& B);

/// 1-D principal angle arccos(|u^T v| / (|u||v|)), in [0, pi/2].
double vector_angle(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// |B^T x|^2.
double projection_norm_sq(const Eigen::VectorXd& x, const SubspaceBasis& B);

/// Smallest eigenvalue of M^T M, clamped at 0.
double gram_min_eig(const Eigen::MatrixXd& M);

}  // namespace argpca
