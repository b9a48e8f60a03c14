#include "argpca/arg_estimator.hpp"

#include "argpca/errors.hpp"

#include <cmath>
#include <string>

namespace argpca {

namespace {

constexpr double kRidgeTol = 1e-10;
constexpr double kDirectMaxP = 2000;

void check_shapes(const SamplePca& pca, const ReferenceSet& refs) {
    if (refs.p() != pca.p())
        throw InvalidArgument("ARG: reference dimension " + std::to_string(refs.p()) +
                              " does not match data dimension " + std::to_string(pca.p()));
    if (pca.m + refs.r() > pca.p()) throw InvalidArgument("ARG: need m + r <= p");
}

}  // namespace

void check_ridge(const SamplePca& pca) {
    const double top = pca.lambdas(0);
    for (Eigen::Index j = 0; j < pca.m; ++j)
        if (!(std::abs(pca.lambdas(j) - pca.lambda_tilde) > kRidgeTol * top))
            throw SingularRidgeError(
                "ARG: S_m - lambda_tilde I is singular (lambda_hat_" + std::to_string(j + 1) +
                " equals the noise average lambda_tilde, i.e. lambda_hat_m = ... = lambda_hat_{n-1})");
}

RidgeVectors ridge_vectors_expansion(const SamplePca& pca, const ReferenceSet& refs) {
    check_shapes(pca, refs);
    check_ridge(pca);
    const auto U = pca.leading_directions();
    const Eigen::MatrixXd& V = refs.directions();
    const Eigen::MatrixXd coords = U.transpose() * V;  // m x r, (u_j^T v_i)

    RidgeVectors out;
    out.V_tilde = V - U * coords;
    Eigen::VectorXd weight(pca.m);
    for (Eigen::Index j = 0; j < pca.m; ++j)
        weight(j) = -pca.lambda_tilde / (pca.lambdas(j) - pca.lambda_tilde);
    out.D = out.V_tilde;
    out.D.noalias() += U * (weight.asDiagonal() * coords);
    return out;
}

RidgeVectors ridge_vectors_direct(const SamplePca& pca, const ReferenceSet& refs) {
    check_shapes(pca, refs);
    check_ridge(pca);
    if (pca.p() > kDirectMaxP)
        throw InvalidArgument("ridge_vectors_direct: dense oracle limited to p <= 2000");
    const auto U = pca.leading_directions();
    const Eigen::Index p = pca.p();
    Eigen::MatrixXd A = -pca.lambda_tilde * Eigen::MatrixXd::Identity(p, p);
    A.noalias() += U * pca.leading_lambdas().asDiagonal() * U.transpose();

    RidgeVectors out;
    out.D = A.partialPivLu().solve(-pca.lambda_tilde * refs.directions());
    Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(p, p);
    proj.noalias() -= U * U.transpose();
    out.V_tilde = proj * refs.directions();
    return out;
}

Eigen::MatrixXd ridge_inner_products(const SamplePca& pca, const ReferenceSet& refs) {
    check_shapes(pca, refs);
    check_ridge(pca);
    const auto U = pca.leading_directions();
    const Eigen::MatrixXd& V = refs.directions();
    const Eigen::MatrixXd coords = U.transpose() * V;
    const Eigen::Index r = refs.r();
    Eigen::MatrixXd out = V.transpose() * V - coords.transpose() * coords;
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < r; ++j)
            for (Eigen::Index k = 0; k < pca.m; ++k) {
                const double gap = pca.lambdas(k) - pca.lambda_tilde;
                out(i, j) += pca.lambda_tilde * pca.lambda_tilde * coords(k, i) * coords(k, j) /
                             (gap * gap);
            }
    return out;
}

Eigen::MatrixXd arg_raw_basis(const SamplePca& pca, const ReferenceSet& refs) {
    check_shapes(pca, refs);
    check_ridge(pca);
    const auto U = pca.leading_directions();
    const Eigen::MatrixXd& V = refs.directions();

    const Eigen::MatrixXd vtv = V.transpose() * V;
    Eigen::LDLT<Eigen::MatrixXd> gram(vtv);
    if (gram.info() != Eigen::Success || !gram.isPositive())
        throw InvalidArgument("ARG: reference Gram matrix V^T V is singular");
    const Eigen::MatrixXd b0 = U - V * gram.solve(V.transpose() * U);

    Eigen::MatrixXd M = U * (pca.leading_lambdas().asDiagonal() * (U.transpose() * b0));
    M.noalias() -= pca.lambda_tilde * b0;
    return M;
}

SubspaceBasis arg_subspace(const SamplePca& pca, const ReferenceSet& refs) {
    const Eigen::MatrixXd M = arg_raw_basis(pca, refs);
    Orthonormalized q = orthonormalize(M);
    if (q.rank != pca.m)
        throw DegenerateGeometryError("ARG: basis (S_m - lambda_tilde I)(I - P_V) U_m has rank " +
                                      std::to_string(q.rank) + " < m = " + std::to_string(pca.m));

    // Defining identity: the estimate is orthogonal to every ridge vector.
    const RidgeVectors ridge = ridge_vectors_expansion(pca, refs);
    const Eigen::MatrixXd d_unit = ridge.D.colwise().normalized();
    const double leak = (d_unit.transpose() * q.basis.matrix()).cwiseAbs().maxCoeff();
    if (!(leak < 1e-8))
        throw DegenerateGeometryError("ARG: estimate is not orthogonal to the ridge vectors (" +
                                      std::to_string(leak) + ")");
    return std::move(q.basis);
}

Eigen::VectorXd arg_vector_single(const SamplePca& pca, const Eigen::VectorXd& v1) {
    if (pca.m != 1) throw InvalidArgument("arg_vector_single: requires m = 1");
    if (v1.size() != pca.p()) throw InvalidArgument("arg_vector_single: dimension mismatch");
    if (!(pca.lambda_tilde > 0.0)) throw InvalidArgument("arg_vector_single: lambda_tilde must be positive");
    const auto u1 = pca.U_hat.col(0);
    const double c = u1.dot(v1);
    const double shrink = pca.lambdas(0) / pca.lambda_tilde * (1.0 - c * c) - 1.0;
    Eigen::VectorXd out = shrink * u1 + c * v1;
    const double scale = std::abs(shrink) + std::abs(c);
    if (!(out.norm() > 1e-10 * std::max(scale, 1.0)))
        throw DegenerateGeometryError("arg_vector_single: estimate vanishes (v1 coincides with u1)");
    return out;
}

}  // namespace argpca
