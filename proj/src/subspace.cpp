#include "argpca/subspace.hpp"

#include "argpca/errors.hpp"

namespace argpca {

SubspaceBasis::SubspaceBasis(Eigen::MatrixXd basis) : b_(std::move(basis)) {
    if (b_.cols() < 1 || b_.cols() > b_.rows())
        throw InvalidArgument("subspace basis: need 1 <= k <= p columns");
    const Eigen::MatrixXd gram = b_.transpose() * b_;
    const double dev = (gram - Eigen::MatrixXd::Identity(b_.cols(), b_.cols())).cwiseAbs().maxCoeff();
    if (!(dev <= 1e-8)) throw InvalidArgument("subspace basis: columns are not orthonormal");
}

Orthonormalized orthonormalize(const Eigen::MatrixXd& M) {
    const Eigen::Index p = M.rows();
    const Eigen::Index k = M.cols();
    if (k < 1 || k > p) throw InvalidArgument("orthonormalize: need 1 <= k <= p");
    if (!M.allFinite()) throw InvalidArgument("orthonormalize: non-finite input");

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
    // R carries the singular values of M; it is only k x k.
    const Eigen::MatrixXd r = qr.matrixR().topRows(k).triangularView<Eigen::Upper>();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(r);
    Eigen::VectorXd sv = svd.singularValues();

    const double largest = sv.size() ? sv(0) : 0.0;
    Eigen::Index rank = 0;
    if (largest > 0.0)
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv(i) > 1e-10 * largest) ++rank;
    if (rank == 0) throw DegenerateGeometryError("orthonormalize: matrix has numerical rank 0");

    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(p, rank);
    return Orthonormalized{SubspaceBasis(std::move(q)), rank, std::move(sv)};
}

}  // namespace argpca
