#pragma once

#include <Eigen/Dense>

namespace argpca {

/// Sample PCA of a p x n (p >= n) data matrix.
///
/// The sample covariance uses divisor n, not n-1:
///     S = X_c X_c^T / n
/// It has rank n-1, so only the n-1 nonzero eigenpairs are kept.
struct SamplePca {
    Eigen::VectorXd lambdas;  ///< n-1 sample eigenvalues, nonincreasing
    Eigen::MatrixXd U_hat;    ///< p x (n-1), orthonormal columns (arbitrary signs)
    double lambda_tilde = 0;  ///< mean of lambdas[m..n-2]
    Eigen::Index m = 0;
    Eigen::MatrixXd X_centered;
    /// |lambda_hat_m - lambda_tilde| < 1e-10 lambda_hat_1; the ridge estimators refuse such input.
    bool near_singular_ridge = false;

    Eigen::Index p() const noexcept { return U_hat.rows(); }
    Eigen::Index n() const noexcept { return X_centered.cols(); }
    auto leading_directions() const { return U_hat.leftCols(m); }
    auto leading_lambdas() const { return lambdas.head(m); }
};

/// X - mean(X) 1^T (row means removed). Requires n >= 2.
Eigen::MatrixXd center(const Eigen::MatrixXd& X);

/// Eigendecomposes the n x n Gram matrix X_c^T X_c / n and maps eigenvectors back:
/// u_i = X_c w_i / sqrt(n lambda_i). Never forms a p x p matrix.
/// Throws DegenerateDataError when lambda_{n-1} < 1e-12 lambda_1.
SamplePca gram_pca(const Eigen::MatrixXd& X_centered, Eigen::Index m);

/// lambda_tilde = sum_{i>m} lambda_i / (n - m - 1) over the n-1 nonzero eigenvalues.
double noise_level(const Eigen::VectorXd& lambdas, Eigen::Index m);

/// Flips columns of U so that U.col(i)^T truth.col(i) >= 0 (reporting only).
void align_signs(Eigen::MatrixXd& U, const Eigen::MatrixXd& truth);

}  // namespace argpca
