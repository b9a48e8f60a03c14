#include "argpca/spiked_model.hpp"

#include "argpca/errors.hpp"
#include "argpca/random.hpp"

#include <cmath>
#include <random>
#include <string>

namespace argpca {

namespace {

constexpr double kOrthoTol = 1e-10;

Eigen::MatrixXd standard_normal(Eigen::Index rows, Eigen::Index cols, Engine& eng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd out(rows, cols);
    // Column-major fill order is part of the determinism contract.
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = normal(eng);
    return out;
}

Eigen::MatrixXd latent_scores_of(const SpikedModelSpec& spec, const Eigen::MatrixXd& X) {
    const Eigen::MatrixXd centered = X.colwise() - spec.mean();
    Eigen::MatrixXd W = (spec.spike_directions().transpose() * centered).transpose();
    for (Eigen::Index i = 0; i < spec.m(); ++i)
        W.col(i) *= std::sqrt(spec.sigma_sq()[i] / spec.eigenvalue(i));
    return W;
}

}  // namespace

SpikedModelSpec::SpikedModelSpec(Eigen::Index p, Eigen::Index n, std::vector<double> sigma_sq,
                                 double tau_sq, Eigen::MatrixXd spike_directions,
                                 Eigen::VectorXd mean)
    : p_(p), n_(n), sigma_sq_(std::move(sigma_sq)), tau_sq_(tau_sq),
      u_(std::move(spike_directions)), mean_(std::move(mean)) {
    const auto m = static_cast<Eigen::Index>(sigma_sq_.size());
    if (p_ < 1 || n_ < 1) throw InvalidArgument("spiked model: p and n must be positive");
    if (m < 1 || m > n_ - 2)
        throw InvalidArgument("spiked model: spike count m must satisfy 1 <= m <= n-2 (m=" +
                              std::to_string(m) + ", n=" + std::to_string(n_) + ")");
    if (!(tau_sq_ > 0.0) || !std::isfinite(tau_sq_))
        throw InvalidArgument("spiked model: tau_sq must be positive");
    for (std::size_t i = 0; i < sigma_sq_.size(); ++i) {
        if (!(sigma_sq_[i] > 0.0) || !std::isfinite(sigma_sq_[i]))
            throw InvalidArgument("spiked model: spike strengths must be positive");
        if (i > 0 && sigma_sq_[i] > sigma_sq_[i - 1])
            throw InvalidArgument("spiked model: spike strengths must be nonincreasing");
    }
    if (u_.rows() != p_ || u_.cols() != m)
        throw InvalidArgument("spiked model: spike directions must be p x m");
    const double dev =
        (u_.transpose() * u_ - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff();
    if (dev > kOrthoTol)
        throw InvalidArgument("spiked model: spike directions are not orthonormal");
    if (mean_.size() == 0) mean_ = Eigen::VectorXd::Zero(p_);
    if (mean_.size() != p_) throw InvalidArgument("spiked model: mean must have length p");
}

double SpikedModelSpec::eigenvalue(Eigen::Index i) const {
    if (i < 0 || i >= p_) throw InvalidArgument("spiked model: eigenvalue index out of range");
    return i < m() ? sigma_sq_[i] * static_cast<double>(p_) + tau_sq_ : tau_sq_;
}

Eigen::MatrixXd SpikedModelSpec::covariance() const {
    Eigen::MatrixXd sigma = tau_sq_ * Eigen::MatrixXd::Identity(p_, p_);
    for (Eigen::Index i = 0; i < m(); ++i)
        sigma.noalias() += sigma_sq_[i] * static_cast<double>(p_) * u_.col(i) * u_.col(i).transpose();
    return sigma;
}

ReferenceSet::ReferenceSet(Eigen::MatrixXd directions, std::optional<Eigen::MatrixXd> alignment)
    : v_(std::move(directions)), alignment_(std::move(alignment)) {
    if (v_.cols() < 1 || v_.rows() < 1) throw InvalidArgument("references: need r >= 1 columns");
    for (Eigen::Index j = 0; j < v_.cols(); ++j) {
        if (!v_.col(j).allFinite()) throw InvalidArgument("references: non-finite entries");
        if (std::abs(v_.col(j).norm() - 1.0) > 1e-10)
            throw InvalidArgument("references: column " + std::to_string(j) + " is not unit norm");
    }
    if (v_.cols() > v_.rows()) throw InvalidArgument("references: more columns than rows");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(v_);
    if (svd.singularValues().minCoeff() <= 1e-8)
        throw InvalidArgument("references: columns are not linearly independent");
    if (alignment_ && alignment_->cols() != v_.cols())
        throw InvalidArgument("references: alignment matrix must have r columns");
}

ReferenceSet ReferenceSet::normalized(Eigen::MatrixXd directions,
                                      std::optional<Eigen::MatrixXd> alignment) {
    for (Eigen::Index j = 0; j < directions.cols(); ++j) {
        const double nrm = directions.col(j).norm();
        if (!(nrm > 0.0)) throw InvalidArgument("references: zero column " + std::to_string(j));
        directions.col(j) /= nrm;
    }
    return ReferenceSet(std::move(directions), std::move(alignment));
}

Eigen::MatrixXd omega_from_scores(const Eigen::MatrixXd& W) {
    const Eigen::MatrixXd centered = W.rowwise() - W.colwise().mean();
    return centered.transpose() * centered;
}

Eigen::MatrixXd make_walsh_basis(Eigen::Index p) {
    if (p < 4 || p % 4 != 0)
        throw InvalidArgument("walsh basis: p must be a positive multiple of 4 (got " +
                              std::to_string(p) + ")");
    static constexpr int kSigns[4][4] = {
        {1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, -1, 1}, {1, -1, 1, -1}};
    const Eigen::Index block = p / 4;
    const double scale = 1.0 / std::sqrt(static_cast<double>(p));
    Eigen::MatrixXd e(p, 4);
    for (int k = 0; k < 4; ++k)
        for (int b = 0; b < 4; ++b) e.col(k).segment(b * block, block).setConstant(kSigns[k][b] * scale);
    return e;
}

ReferenceSet reference_single(double a1, const Eigen::VectorXd& e1, const Eigen::VectorXd& e2) {
    if (!(a1 >= 0.0 && a1 <= 1.0)) throw InvalidArgument("reference_single: a1 must lie in [0, 1]");
    if (e1.size() != e2.size()) throw InvalidArgument("reference_single: e1, e2 length mismatch");
    if (std::abs(e1.norm() - 1.0) > 1e-10 || std::abs(e2.norm() - 1.0) > 1e-10 ||
        std::abs(e1.dot(e2)) > 1e-10)
        throw InvalidArgument("reference_single: e1, e2 must be orthonormal");
    Eigen::MatrixXd v(e1.size(), 1);
    v.col(0) = a1 * e1 + std::sqrt(1.0 - a1 * a1) * e2;
    Eigen::MatrixXd a(1, 1);
    a(0, 0) = a1;
    return ReferenceSet::normalized(std::move(v), std::move(a));
}

ReferenceSet reference_table2(const Eigen::MatrixXd& walsh) {
    if (walsh.cols() != 4) throw InvalidArgument("reference_table2: need e1..e4 as 4 columns");
    const double dev = (walsh.transpose() * walsh - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff();
    if (dev > 1e-10) throw InvalidArgument("reference_table2: e1..e4 must be orthonormal");
    Eigen::MatrixXd v(walsh.rows(), 2);
    v.col(0) = 0.5 * walsh.rowwise().sum();
    v.col(1) = (walsh.col(0) - walsh.col(2)) / std::sqrt(2.0);
    Eigen::MatrixXd a(2, 2);
    a << 0.5, 1.0 / std::sqrt(2.0),
         0.5, 0.0;
    return ReferenceSet::normalized(std::move(v), std::move(a));
}

SpikedModelSpec single_spike_spec(Eigen::Index p, Eigen::Index n, double sigma_sq, double tau_sq) {
    const Eigen::MatrixXd e = make_walsh_basis(p);
    return SpikedModelSpec(p, n, {sigma_sq}, tau_sq, e.leftCols(1));
}

SpikedModelSpec two_spike_spec(Eigen::Index p, Eigen::Index n, double tau_sq) {
    const Eigen::MatrixXd e = make_walsh_basis(p);
    return SpikedModelSpec(p, n, {2.0, 1.0}, tau_sq, e.leftCols(2));
}

SampleDraw sample_gaussian(const SpikedModelSpec& spec, std::uint64_t seed) {
    Engine eng = make_engine(seed);
    const Eigen::MatrixXd z = standard_normal(spec.m(), spec.n(), eng);
    const Eigen::MatrixXd noise = standard_normal(spec.p(), spec.n(), eng);

    Eigen::VectorXd spike_sd(spec.m());
    for (Eigen::Index i = 0; i < spec.m(); ++i)
        spike_sd(i) = std::sqrt(spec.sigma_sq()[i] * static_cast<double>(spec.p()));

    SampleDraw draw;
    draw.seed = seed;
    draw.X = std::sqrt(spec.tau_sq()) * noise;
    draw.X.noalias() += spec.spike_directions() * (spike_sd.asDiagonal() * z);
    draw.X.colwise() += spec.mean();
    draw.latent_scores = latent_scores_of(spec, draw.X);
    return draw;
}

Eigen::VectorXd student_t_mixing(Eigen::Index n, double dof, std::uint64_t seed) {
    if (!(dof > 0.0)) throw InvalidArgument("student t: degrees of freedom must be positive");
    Engine eng = make_engine(substream_seed(seed, {0x7d157ULL}));
    std::chi_squared_distribution<double> chi2(dof);
    Eigen::VectorXd w(n);
    for (Eigen::Index j = 0; j < n; ++j) w(j) = std::sqrt(dof / chi2(eng));
    return w;
}

SampleDraw sample_student_t(const SpikedModelSpec& spec, double dof, std::uint64_t seed) {
    const Eigen::VectorXd w = student_t_mixing(spec.n(), dof, seed);
    SampleDraw draw = sample_gaussian(spec, seed);
    draw.X.colwise() -= spec.mean();
    draw.X = draw.X * w.asDiagonal();
    draw.X.colwise() += spec.mean();
    draw.latent_scores = latent_scores_of(spec, draw.X);
    return draw;
}

}  // namespace argpca
