#pragma once

#include "argpca/spiked_model.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace argpca {

enum class Design { SingleSpikeGrid, TwoSpike, Custom };

std::string to_string(Design d);
Design parse_design(const std::string& s);

struct Distribution {
    enum class Kind { Gaussian, StudentT };
    Kind kind = Kind::Gaussian;
    double dof = 0.0;  ///< StudentT only

    static Distribution gaussian() { return {}; }
    static Distribution student_t(double dof) { return {Kind::StudentT, dof}; }
    bool is_student_t() const noexcept { return kind == Kind::StudentT; }
    /// "gaussian" or "student_t(5)"
    std::string label() const;
    static Distribution parse(const std::string& s);
};

/// One Monte-Carlo experiment grid.
///
/// Spike directions are always the leading Walsh vectors e_1..e_m (m <= 4).
/// single_spike_grid: v_1 = a1 e1 + sqrt(1 - a1^2) e2 for each a1^2 in a1_sq_list.
/// two_spike: the fixed pair (e1+e2+e3+e4)/2, (e1-e3)/sqrt(2).
/// custom: each entry of reference_coeffs gives a reference as coefficients over e1..e4.
struct ExperimentConfig {
    Design design = Design::SingleSpikeGrid;
    std::vector<Eigen::Index> p_list{100, 200, 500, 1000, 2000};
    Eigen::Index n = 40;
    std::vector<double> sigma_sq{1.0};
    double tau_sq = 40.0;
    std::vector<double> a1_sq_list{0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<std::array<double, 4>> reference_coeffs;
    Distribution distribution;
    int replications = 100;
    std::uint64_t base_seed = 20250101;

    Eigen::Index m() const noexcept { return static_cast<Eigen::Index>(sigma_sq.size()); }
    /// Throws InvalidArgument naming the offending field.
    void validate() const;
};

ExperimentConfig table1_config(Distribution dist = Distribution::gaussian());
ExperimentConfig table2_config(Distribution dist = Distribution::gaussian());

/// Model for one grid dimension p.
SpikedModelSpec model_for(const ExperimentConfig& cfg, Eigen::Index p);
/// Reference set for the subspace designs (two_spike / custom) at dimension p.
ReferenceSet references_for(const ExperimentConfig& cfg, Eigen::Index p);
/// Substream seed of replication `rep` at dimension p. The same draw is shared by every
/// estimator and every a1^2 in a cell row.
std::uint64_t replication_seed(const ExperimentConfig& cfg, Eigen::Index p, int rep);
SampleDraw draw_replication(const ExperimentConfig& cfg, const SpikedModelSpec& spec, int rep);

struct ReplicationSummary {
    std::string design;
    Eigen::Index p = 0;
    std::optional<double> a1_sq;  ///< single-spike ARG rows only
    std::string distribution;
    std::string estimator;  ///< "naive" or "arg"
    int angle_index = 1;    ///< 1-based; theta_1 is the smallest principal angle
    double mean = 0.0;
    double std = 0.0;
    int reps = 0;      ///< successful replications
    int failures = 0;  ///< replications aborted by an estimator error
    bool single_rep = false;
    std::optional<double> improvement_rate;  ///< ARG rows: fraction with ARG angle < naive angle
    std::uint64_t base_seed = 0;
};

struct RawAngle {
    std::string design;
    Eigen::Index p = 0;
    std::optional<double> a1_sq;
    int rep = 0;
    std::string estimator;
    int angle_index = 1;
    double angle = 0.0;
};

struct GridResult {
    std::vector<ReplicationSummary> summaries;
    std::vector<RawAngle> raw;
    int total_failures() const;
};

struct Execution {
    int threads = 0;              ///< <= 0: all available
    bool serial_reference = false;  ///< bypass OpenMP entirely
};

struct SampleStats {
    double mean = 0.0;
    double std = 0.0;  ///< divisor count-1; 0 for a single value
    int count = 0;
    bool single = false;
};

/// Mean and sample standard deviation. Throws on an empty list.
SampleStats summarize(const std::vector<double>& values);

/// Fraction of pairs with candidate[i] < baseline[i] (NaN pairs skipped). Throws if none usable.
double improvement_rate(const std::vector<double>& candidate, const std::vector<double>& baseline);

GridResult run_single_spike_grid(const ExperimentConfig& cfg, const Execution& exec = {});
/// two_spike and custom designs: principal angles of the naive and ARG m-subspaces to U_m.
GridResult run_two_spike(const ExperimentConfig& cfg, const Execution& exec = {});
/// Student-t variants of either design. Requires a student_t distribution.
GridResult run_student_t_variants(const ExperimentConfig& cfg, const Execution& exec = {});
/// Dispatches on cfg.design.
GridResult run_experiment(const ExperimentConfig& cfg, const Execution& exec = {});

/// Limit of (u1_ARG)^T u1 for m = r = 1 given Omega, tau^2 and a1:
///   sqrt( Omega/(Omega+tau^2) * (1 + tau^4 a1^2 / (Omega^2 (1-a1^2) + Omega tau^2)) )
double theorem2_limit(double omega, double tau_sq, double a1);
/// Limit of (u1_ARG)^T u1 / u1^T u1: sqrt(1 + tau^4 a1^2 / (Omega^2 (1-a1^2) + Omega tau^2)).
double theorem2_ratio_limit(double omega, double tau_sq, double a1);

struct Theorem2Report {
    std::vector<double> omega;
    std::vector<double> realized;   ///< |(u1_ARG)^T u1|
    std::vector<double> predicted;  ///< theorem2_limit(realized Omega)
    std::vector<double> abs_deviation;
    std::vector<double> realized_ratio;   ///< |(u1_ARG)^T u1| / |u1_hat^T u1|
    std::vector<double> predicted_ratio;
    int failures = 0;
    double median_abs_deviation() const;
    double median_ratio_deviation() const;
};

/// Single-spike model, v1 = a1 e1 + sqrt(1-a1^2) e2, compared against the Omega-dependent limit
/// per replication. Requires cfg.m() == 1.
Theorem2Report theorem2_oracle_check(const ExperimentConfig& cfg, Eigen::Index p, double a1_sq,
                                     const Execution& exec = {});

struct Lemma2Report {
    /// Per replication: max over i, j <= m of |u_i^T v_j - limit_ij| (signs aligned to truth).
    std::vector<double> spike_deviation;
    /// Per replication: max over m < i <= n-1, j of |u_i^T v_j|.
    std::vector<double> noise_block_max;
    int failures = 0;
};

/// Predicted limits of u_i^T v_j for i <= m (m x r):
///   sqrt(phi_i / (phi_i + tau^2)) sum_k A(k, j) v_ik(Omega),
/// with eigenvectors of Omega sign-normalized so that v_ii(Omega) >= 0.
Eigen::MatrixXd lemma2_limits(const Eigen::MatrixXd& omega, double tau_sq, const Eigen::MatrixXd& alignment);

/// Uses the subspace design references (or the single-spike reference for a1_sq when
/// design == single_spike_grid).
Lemma2Report lemma2_oracle_check(const ExperimentConfig& cfg, Eigen::Index p,
                                 const Execution& exec = {}, double a1_sq = 1.0);

struct Lemma1Report {
    std::vector<double> top_deviation;    ///< |n lambda_1 / p - (phi_1(Omega) + tau^2)|
    std::vector<double> noise_deviation;  ///< |n lambda_tilde / p - tau^2|
    std::vector<double> top_limit;        ///< phi_1(Omega) + tau^2
};
Lemma1Report lemma1_oracle_check(const ExperimentConfig& cfg, Eigen::Index p, const Execution& exec = {});

/// |u_1^T d_1| / |d_1| per replication under the single-spike model with reference a1_sq.
std::vector<double> ridge_orthogonality_check(const ExperimentConfig& cfg, Eigen::Index p,
                                              double a1_sq, const Execution& exec = {});

struct RidgeConditioningReport {
    std::vector<double> d_min_eig;        ///< smallest eigenvalue of D^T D
    std::vector<double> v_tilde_min_eig;  ///< smallest eigenvalue of V~^T V~
};
RidgeConditioningReport ridge_conditioning_check(const ExperimentConfig& cfg, Eigen::Index p,
                                                 const Execution& exec = {});

double median(std::vector<double> values);

}  // namespace argpca
