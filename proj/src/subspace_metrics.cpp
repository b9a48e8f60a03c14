#include "argpca/subspace_metrics.hpp"

#include "argpca/errors.hpp"

#include <algorithm>
#include <cmath>

namespace argpca {

namespace {

void require_orthonormal(const Eigen::MatrixXd& M, const char* name) {
    if (M.cols() < 1) throw InvalidArgument(std::string("principal_angles: empty basis ") + name);
    const double dev =
        (M.transpose() * M - Eigen::MatrixXd::Identity(M.cols(), M.cols())).cwiseAbs().maxCoeff();
    if (!(dev <= 1e-6))
        throw InvalidArgument(std::string("principal_angles: basis ") + name +
                              " does not have orthonormal columns");
}

}  // namespace

AngleReport principal_angles(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    if (A.rows() != B.rows())
        throw InvalidArgument("principal_angles: bases live in different ambient dimensions");
    require_orthonormal(A, "A");
    require_orthonormal(B, "B");

    const Eigen::MatrixXd cross = A.transpose() * B;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross);
    const Eigen::VectorXd& sv = svd.singularValues();  // descending

    // Sines from the residual of the smaller basis, used for angles below pi/4.
    const bool a_smaller = A.cols() < B.cols();
    const Eigen::MatrixXd& S = a_smaller ? A : B;
    const Eigen::MatrixXd& L = a_smaller ? B : A;
    const Eigen::MatrixXd resid = S - L * (L.transpose() * S);
    Eigen::JacobiSVD<Eigen::MatrixXd> rsvd(resid);
    const Eigen::VectorXd sines = rsvd.singularValues().reverse();  // ascending

    AngleReport out;
    out.angles.reserve(sv.size());
    out.cosines.reserve(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        double c = sv(i);
        if (c > 1.0 || c < 0.0) ++out.clamped;
        c = std::clamp(c, 0.0, 1.0);
        out.cosines.push_back(c);
        if (c * c >= 0.5)
            out.angles.push_back(std::asin(std::clamp(sines(i), 0.0, 1.0)));
        else
            out.angles.push_back(std::acos(c));
    }
    return out;
}

AngleReport principal_angles(const SubspaceBasis& A, const SubspaceBasis& B) {
    return principal_angles(A.matrix(), B.matrix());
}

double vector_angle(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    if (u.size() != v.size()) throw InvalidArgument("vector_angle: length mismatch");
    const double nu = u.norm();
    const double nv = v.norm();
    if (!(nu > 0.0) || !(nv > 0.0)) throw InvalidArgument("vector_angle: zero vector");
    const Eigen::VectorXd a = u / nu;
    const Eigen::VectorXd b = (u.dot(v) < 0.0 ? -1.0 : 1.0) * v / nv;
    return 2.0 * std::atan2((a - b).norm(), (a + b).norm());
}

double projection_norm_sq(const Eigen::VectorXd& x, const SubspaceBasis& B) {
    if (x.size() != B.ambient()) throw InvalidArgument("projection_norm_sq: dimension mismatch");
    return (B.matrix().transpose() * x).squaredNorm();
}

double gram_min_eig(const Eigen::MatrixXd& M) {
    if (M.cols() < 1) throw InvalidArgument("gram_min_eig: need at least one column");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M.transpose() * M, Eigen::EigenvaluesOnly);
    return std::max(eig.eigenvalues()(0), 0.0);
}

}  // namespace argpca
