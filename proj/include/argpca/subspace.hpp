#pragma once

#include <Eigen/Dense>

namespace argpca {

/// p x k matrix with orthonormal columns (B^T B = I_k to 1e-8).
class SubspaceBasis {
public:
    explicit SubspaceBasis(Eigen::MatrixXd basis);

    const Eigen::MatrixXd& matrix() const noexcept { return b_; }
    Eigen::Index dim() const noexcept { return b_.cols(); }
    Eigen::Index ambient() const noexcept { return b_.rows(); }

private:
    Eigen::MatrixXd b_;
};

struct Orthonormalized {
    SubspaceBasis basis;  ///< first `rank` columns of the pivoted QR factor
    Eigen::Index rank;
    Eigen::VectorXd singular_values;  ///< of the input, descending
};

/// Thin QR with column pivoting. Numerical rank counts singular values above
/// 1e-10 times the largest. Throws DegenerateGeometryError on rank 0.
Orthonormalized orthonormalize(const Eigen::MatrixXd& M);

}  // namespace argpca
