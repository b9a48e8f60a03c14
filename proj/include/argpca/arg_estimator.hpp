#pragma once

#include "argpca/hdlss_pca.hpp"
#include "argpca/spiked_model.hpp"
#include "argpca/subspace.hpp"

#include <Eigen/Dense>

namespace argpca {

/// Negatively ridged discriminant vectors d_i = -lambda_tilde (S_m - lambda_tilde I)^{-1} v_i
/// together with the components v~_i = (I - U_m U_m^T) v_i of the references orthogonal to
/// the leading sample PC subspace. Columns are not normalized.
struct RidgeVectors {
    Eigen::MatrixXd D;        ///< p x r
    Eigen::MatrixXd V_tilde;  ///< p x r
};

/// Throws SingularRidgeError unless |lambda_hat_j - lambda_tilde| > 1e-10 lambda_hat_1 for j <= m.
void check_ridge(const SamplePca& pca);

/// Woodbury expansion
///   d_i = -sum_{j<=m} lambda_tilde (u_j^T v_i) / (lambda_j - lambda_tilde) u_j + v~_i
/// in O(p m r).
RidgeVectors ridge_vectors_expansion(const SamplePca& pca, const ReferenceSet& refs);

/// Dense solve of (S_m - lambda_tilde I) d_i = -lambda_tilde v_i. Test oracle; p <= 2000.
RidgeVectors ridge_vectors_direct(const SamplePca& pca, const ReferenceSet& refs);

/// Closed form of D^T D:
///   (D^T D)_ij = sum_k lambda_tilde^2 (u_k^T v_i)(u_k^T v_j) / (lambda_k - lambda_tilde)^2
///                + v_i^T (I - U_m U_m^T) v_j
Eigen::MatrixXd ridge_inner_products(const SamplePca& pca, const ReferenceSet& refs);

/// Non-orthonormal ARG basis (S_m - lambda_tilde I)(I - P_V) U_m, computed as
/// U_m diag(lambda_1..m) (U_m^T B0) - lambda_tilde B0 with B0 = (I - P_V) U_m.
/// P_V is applied through a solve with V^T V, so V need not be orthonormal.
Eigen::MatrixXd arg_raw_basis(const SamplePca& pca, const ReferenceSet& refs);

/// Orthonormal basis of the ARG subspace: the orthogonal complement of span(D) inside
/// span(U_m, V). Throws DegenerateGeometryError if the raw basis loses rank.
SubspaceBasis arg_subspace(const SamplePca& pca, const ReferenceSet& refs);

/// Single-spike, single-reference closed form (unnormalized):
///   (lambda_1 / lambda_tilde (1 - c^2) - 1) u_1 + c v_1,  c = u_1^T v_1.
/// This is the James-Stein shrinkage of u_1 toward v_1.
Eigen::VectorXd arg_vector_single(const SamplePca& pca, const Eigen::VectorXd& v1);

}  // namespace argpca
