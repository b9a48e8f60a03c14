#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace argpca {

/// Ground-truth spiked covariance model
///
///   Sigma = sum_i sigma_i^2 * p * u_i u_i^T + tau^2 * I_p
///
/// with eigenvalues sigma_i^2 p + tau^2 on the spikes and tau^2 elsewhere.
/// Only a constant noise level tau^2 is supported.
class SpikedModelSpec {
public:
    /// Validates: 1 <= m <= n-2, sigma_sq nonincreasing and positive, tau_sq > 0,
    /// spike_directions p x m with orthonormal columns (1e-10), mean of length p
    /// (empty means zero).
    SpikedModelSpec(Eigen::Index p, Eigen::Index n, std::vector<double> sigma_sq, double tau_sq,
                    Eigen::MatrixXd spike_directions, Eigen::VectorXd mean = {});

    Eigen::Index p() const noexcept { return p_; }
    Eigen::Index n() const noexcept { return n_; }
    Eigen::Index m() const noexcept { return static_cast<Eigen::Index>(sigma_sq_.size()); }
    const std::vector<double>& sigma_sq() const noexcept { return sigma_sq_; }
    double tau_sq() const noexcept { return tau_sq_; }
    const Eigen::VectorXd& mean() const noexcept { return mean_; }
    const Eigen::MatrixXd& spike_directions() const noexcept { return u_; }

    /// Population eigenvalue lambda_i = sigma_i^2 p + tau^2 for i < m, tau^2 otherwise.
    double eigenvalue(Eigen::Index i) const;

    /// Dense p x p population covariance. For tests and small p only.
    Eigen::MatrixXd covariance() const;

private:
    Eigen::Index p_;
    Eigen::Index n_;
    std::vector<double> sigma_sq_;
    double tau_sq_;
    Eigen::MatrixXd u_;
    Eigen::VectorXd mean_;
};

/// Reference directions V (p x r, unit columns, linearly independent) and, when
/// synthesized from a known model, the alignment matrix A (m x r) with
/// A(k, j) = v_j^T u_k.
class ReferenceSet {
public:
    explicit ReferenceSet(Eigen::MatrixXd directions,
                          std::optional<Eigen::MatrixXd> alignment = std::nullopt);

    /// Normalizes each column first; rejects zero columns.
    static ReferenceSet normalized(Eigen::MatrixXd directions,
                                   std::optional<Eigen::MatrixXd> alignment = std::nullopt);

    const Eigen::MatrixXd& directions() const noexcept { return v_; }
    const std::optional<Eigen::MatrixXd>& alignment() const noexcept { return alignment_; }
    Eigen::Index p() const noexcept { return v_.rows(); }
    Eigen::Index r() const noexcept { return v_.cols(); }

private:
    Eigen::MatrixXd v_;
    std::optional<Eigen::MatrixXd> alignment_;
};

struct SampleDraw {
    Eigen::MatrixXd X;  ///< p x n
    /// n x m matrix W = [sigma_1 z_1, ..., sigma_m z_m] where z_i are the standardized
    /// true PC scores lambda_i^{-1/2} u_i^T (X - mu 1^T).
    std::optional<Eigen::MatrixXd> latent_scores;
    std::uint64_t seed = 0;
};

/// Omega = W^T (I_n - J_n) W from recorded latent scores (m x m).
Eigen::MatrixXd omega_from_scores(const Eigen::MatrixXd& W);

/// The four +-1 block patterns e_1..e_4 scaled by 1/sqrt(p), as columns of a p x 4 matrix.
/// Requires p divisible by 4.
Eigen::MatrixXd make_walsh_basis(Eigen::Index p);

/// v_1 = a1 e1 + sqrt(1 - a1^2) e2.
ReferenceSet reference_single(double a1, const Eigen::VectorXd& e1, const Eigen::VectorXd& e2);

/// v_1 = (e1 + e2 + e3 + e4)/2, v_2 = (e1 - e3)/sqrt(2); alignment against (e1, e2).
ReferenceSet reference_table2(const Eigen::MatrixXd& walsh);

/// Sigma = p e1 e1^T + 40 I_p, n = 40.
SpikedModelSpec single_spike_spec(Eigen::Index p, Eigen::Index n = 40, double sigma_sq = 1.0,
                                  double tau_sq = 40.0);

/// Sigma = 2p e1 e1^T + p e2 e2^T + 40 I_p, n = 40.
SpikedModelSpec two_spike_spec(Eigen::Index p, Eigen::Index n = 40, double tau_sq = 40.0);

/// X = mu 1^T + U_m diag(sqrt(sigma_i^2 p)) Z + tau N with Z (m x n) and N (p x n)
/// independent standard normal. Population covariance is exactly Sigma.
SampleDraw sample_gaussian(const SpikedModelSpec& spec, std::uint64_t seed);

/// Elliptical multivariate t with scale matrix Sigma: column j is
/// mu + G_j * sqrt(dof / chi2_j), G_j ~ N(0, Sigma), chi2_j ~ chi-square(dof).
SampleDraw sample_student_t(const SpikedModelSpec& spec, double dof, std::uint64_t seed);

/// Per-column mixing factors sqrt(dof / chi2_j) that sample_student_t uses for a seed.
Eigen::VectorXd student_t_mixing(Eigen::Index n, double dof, std::uint64_t seed);

}  // namespace argpca
