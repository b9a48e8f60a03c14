#include "argpca/hdlss_pca.hpp"

#include "argpca/errors.hpp"

#include <cmath>
#include <string>

namespace argpca {

Eigen::MatrixXd center(const Eigen::MatrixXd& X) {
    if (X.cols() < 2) throw InvalidArgument("center: need at least 2 observations (columns)");
    return X.colwise() - X.rowwise().mean();
}

double noise_level(const Eigen::VectorXd& lambdas, Eigen::Index m) {
    const Eigen::Index count = lambdas.size() - m;
    if (m < 1 || count < 1) throw InvalidArgument("noise_level: need 1 <= m <= n-2");
    return lambdas.tail(count).sum() / static_cast<double>(count);
}

SamplePca gram_pca(const Eigen::MatrixXd& X_centered, Eigen::Index m) {
    const Eigen::Index p = X_centered.rows();
    const Eigen::Index n = X_centered.cols();
    if (n < 3) throw InvalidArgument("gram_pca: need n >= 3");
    if (p < n)
        throw InvalidArgument("gram_pca: requires p >= n (p=" + std::to_string(p) +
                              ", n=" + std::to_string(n) + ")");
    if (m < 1 || m > n - 2)
        throw InvalidArgument("gram_pca: spike count must satisfy 1 <= m <= n-2");
    if (!X_centered.allFinite()) throw InvalidArgument("gram_pca: non-finite data");

    const double dn = static_cast<double>(n);
    const Eigen::MatrixXd gram = (X_centered.transpose() * X_centered) / dn;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    if (eig.info() != Eigen::Success) throw NumericalError("gram_pca: eigensolver failed");

    // Ascending order from the solver; index 0 is the centering null direction.
    const Eigen::VectorXd& evals = eig.eigenvalues();
    const Eigen::MatrixXd& evecs = eig.eigenvectors();

    SamplePca out;
    out.m = m;
    out.lambdas.resize(n - 1);
    out.U_hat.resize(p, n - 1);
    for (Eigen::Index i = 0; i < n - 1; ++i) {
        const Eigen::Index src = n - 1 - i;
        out.lambdas(i) = std::max(evals(src), 0.0);
    }
    const double top = out.lambdas(0);
    if (!(top > 0.0) || out.lambdas(n - 2) < 1e-12 * top)
        throw DegenerateDataError(
            "gram_pca: centered data has rank below n-1; data are not in general position");
    for (Eigen::Index i = 0; i < n - 1; ++i) {
        const Eigen::Index src = n - 1 - i;
        out.U_hat.col(i) = X_centered * evecs.col(src) / std::sqrt(dn * out.lambdas(i));
    }
    out.lambda_tilde = noise_level(out.lambdas, m);
    out.near_singular_ridge = std::abs(out.lambdas(m - 1) - out.lambda_tilde) < 1e-10 * top;
    out.X_centered = X_centered;
    return out;
}

void align_signs(Eigen::MatrixXd& U, const Eigen::MatrixXd& truth) {
    const Eigen::Index k = std::min(U.cols(), truth.cols());
    for (Eigen::Index i = 0; i < k; ++i)
        if (U.col(i).dot(truth.col(i)) < 0.0) U.col(i) *= -1.0;
}

}  // namespace argpca
