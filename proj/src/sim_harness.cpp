#include "argpca/sim_harness.hpp"

#include "argpca/arg_estimator.hpp"
#include "argpca/errors.hpp"
#include "argpca/hdlss_pca.hpp"
#include "argpca/parallel.hpp"
#include "argpca/random.hpp"
#include "argpca/subspace_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace argpca {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class Fn>
void run_indexed(std::int64_t count, const Execution& exec, Fn&& fn) {
    if (exec.serial_reference)
        serial_for(count, fn);
    else
        parallel_for(count, exec.threads, fn);
}

std::uint64_t design_code(Design d) {
    switch (d) {
        case Design::SingleSpikeGrid: return 1;
        case Design::TwoSpike: return 2;
        case Design::Custom: return 3;
    }
    return 0;
}

/// Naive and ARG angles of one replication; NaN marks an estimator failure.
struct SubspaceRep {
    std::vector<double> naive;
    std::vector<double> arg;
};

std::vector<double> collect_finite(const std::vector<double>& v) {
    std::vector<double> out;
    std::copy_if(v.begin(), v.end(), std::back_inserter(out), [](double x) { return std::isfinite(x); });
    return out;
}

ReplicationSummary make_row(const ExperimentConfig& cfg, Eigen::Index p, std::optional<double> a1_sq,
                            std::string estimator, int angle_index, const std::vector<double>& angles,
                            const std::vector<double>* baseline) {
    ReplicationSummary row;
    row.design = to_string(cfg.design);
    row.p = p;
    row.a1_sq = a1_sq;
    row.distribution = cfg.distribution.label();
    row.estimator = std::move(estimator);
    row.angle_index = angle_index;
    row.base_seed = cfg.base_seed;
    const std::vector<double> ok = collect_finite(angles);
    row.failures = static_cast<int>(angles.size() - ok.size());
    if (!ok.empty()) {
        const SampleStats s = summarize(ok);
        row.mean = s.mean;
        row.std = s.std;
        row.reps = s.count;
        row.single_rep = s.single;
    } else {
        row.mean = kNaN;
        row.std = kNaN;
    }
    if (baseline) {
        try {
            row.improvement_rate = improvement_rate(angles, *baseline);
        } catch (const InvalidArgument&) {
            row.improvement_rate.reset();
        }
    }
    return row;
}

void append_raw(GridResult& out, const ExperimentConfig& cfg, Eigen::Index p, std::optional<double> a1_sq,
                const std::string& estimator, int angle_index, const std::vector<double>& angles) {
    for (std::size_t rep = 0; rep < angles.size(); ++rep)
        out.raw.push_back(RawAngle{to_string(cfg.design), p, a1_sq, static_cast<int>(rep), estimator,
                                   angle_index, angles[rep]});
}

void require_design(const ExperimentConfig& cfg, std::initializer_list<Design> allowed, const char* op) {
    if (std::find(allowed.begin(), allowed.end(), cfg.design) == allowed.end())
        throw InvalidArgument(std::string(op) + ": unsupported design '" + to_string(cfg.design) + "'");
}

}  // namespace

std::string to_string(Design d) {
    switch (d) {
        case Design::SingleSpikeGrid: return "single_spike_grid";
        case Design::TwoSpike: return "two_spike";
        case Design::Custom: return "custom";
    }
    return "unknown";
}

Design parse_design(const std::string& s) {
    if (s == "single_spike_grid") return Design::SingleSpikeGrid;
    if (s == "two_spike") return Design::TwoSpike;
    if (s == "custom") return Design::Custom;
    throw InvalidArgument("design: expected single_spike_grid, two_spike or custom, got '" + s + "'");
}

std::string Distribution::label() const {
    if (kind == Kind::Gaussian) return "gaussian";
    std::ostringstream os;
    os << "student_t(" << dof << ")";
    return os.str();
}

Distribution Distribution::parse(const std::string& s) {
    if (s == "gaussian") return gaussian();
    const std::string prefix = "student_t(";
    if (s.rfind(prefix, 0) == 0 && s.size() > prefix.size() + 1 && s.back() == ')') {
        const std::string inner = s.substr(prefix.size(), s.size() - prefix.size() - 1);
        std::size_t used = 0;
        double dof = 0.0;
        try {
            dof = std::stod(inner, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != inner.size() || !(dof > 0.0))
            throw InvalidArgument("distribution: student_t degrees of freedom must be a positive number");
        return student_t(dof);
    }
    throw InvalidArgument("distribution: expected gaussian or student_t(<dof>), got '" + s + "'");
}

void ExperimentConfig::validate() const {
    if (replications < 1) throw InvalidArgument("replications: must be >= 1");
    if (p_list.empty()) throw InvalidArgument("p_list: must not be empty");
    if (n < 3) throw InvalidArgument("n: must be >= 3");
    if (m() < 1 || m() > n - 2) throw InvalidArgument("sigma_sq: spike count must satisfy 1 <= m <= n-2");
    if (m() > 4) throw InvalidArgument("sigma_sq: at most 4 spikes (Walsh directions e1..e4)");
    for (std::size_t i = 0; i < sigma_sq.size(); ++i) {
        if (!(sigma_sq[i] > 0.0)) throw InvalidArgument("sigma_sq: values must be positive");
        if (i > 0 && sigma_sq[i] > sigma_sq[i - 1]) throw InvalidArgument("sigma_sq: must be nonincreasing");
    }
    if (!(tau_sq > 0.0)) throw InvalidArgument("tau_sq: must be positive");
    if (distribution.is_student_t() && !(distribution.dof > 0.0))
        throw InvalidArgument("distribution: degrees of freedom must be positive");
    for (auto p : p_list) {
        if (p < 4 || p % 4 != 0) throw InvalidArgument("p_list: every p must be a positive multiple of 4");
        if (p < n) throw InvalidArgument("p_list: every p must be >= n");
    }
    switch (design) {
        case Design::SingleSpikeGrid:
            if (m() != 1) throw InvalidArgument("sigma_sq: single_spike_grid needs exactly one spike");
            if (a1_sq_list.empty()) throw InvalidArgument("a1_sq_list: must not be empty");
            for (double a : a1_sq_list)
                if (!(a >= 0.0 && a <= 1.0)) throw InvalidArgument("a1_sq_list: values must lie in [0, 1]");
            break;
        case Design::TwoSpike:
            if (m() != 2) throw InvalidArgument("sigma_sq: two_spike needs exactly two spikes");
            break;
        case Design::Custom:
            if (reference_coeffs.empty()) throw InvalidArgument("references: custom design needs references");
            if (m() + static_cast<Eigen::Index>(reference_coeffs.size()) > p_list.front())
                throw InvalidArgument("references: need m + r <= p");
            for (const auto& c : reference_coeffs)
                if (std::all_of(c.begin(), c.end(), [](double x) { return x == 0.0; }))
                    throw InvalidArgument("references: zero reference vector");
            break;
    }
}

ExperimentConfig table1_config(Distribution dist) {
    ExperimentConfig cfg;
    cfg.design = Design::SingleSpikeGrid;
    cfg.sigma_sq = {1.0};
    cfg.distribution = dist;
    return cfg;
}

ExperimentConfig table2_config(Distribution dist) {
    ExperimentConfig cfg;
    cfg.design = Design::TwoSpike;
    cfg.sigma_sq = {2.0, 1.0};
    cfg.a1_sq_list.clear();
    cfg.distribution = dist;
    return cfg;
}

SpikedModelSpec model_for(const ExperimentConfig& cfg, Eigen::Index p) {
    const Eigen::MatrixXd e = make_walsh_basis(p);
    return SpikedModelSpec(p, cfg.n, cfg.sigma_sq, cfg.tau_sq, e.leftCols(cfg.m()));
}

ReferenceSet references_for(const ExperimentConfig& cfg, Eigen::Index p) {
    const Eigen::MatrixXd e = make_walsh_basis(p);
    if (cfg.design == Design::TwoSpike) return reference_table2(e);
    if (cfg.design != Design::Custom)
        throw InvalidArgument("references_for: single_spike_grid references depend on a1^2");
    const auto r = static_cast<Eigen::Index>(cfg.reference_coeffs.size());
    Eigen::MatrixXd v(p, r);
    Eigen::MatrixXd a(cfg.m(), r);
    for (Eigen::Index j = 0; j < r; ++j) {
        const Eigen::Vector4d c = Eigen::Map<const Eigen::Vector4d>(cfg.reference_coeffs[j].data()).normalized();
        v.col(j) = e * c;
        a.col(j) = c.head(cfg.m());
    }
    return ReferenceSet::normalized(std::move(v), std::move(a));
}

std::uint64_t replication_seed(const ExperimentConfig& cfg, Eigen::Index p, int rep) {
    return substream_seed(cfg.base_seed, {design_code(cfg.design), static_cast<std::uint64_t>(p),
                                          static_cast<std::uint64_t>(rep)});
}

SampleDraw draw_replication(const ExperimentConfig& cfg, const SpikedModelSpec& spec, int rep) {
    const std::uint64_t seed = replication_seed(cfg, spec.p(), rep);
    if (cfg.distribution.is_student_t()) return sample_student_t(spec, cfg.distribution.dof, seed);
    return sample_gaussian(spec, seed);
}

int GridResult::total_failures() const {
    int total = 0;
    for (const auto& s : summaries) total += s.failures;
    return total;
}

SampleStats summarize(const std::vector<double>& values) {
    if (values.empty()) throw InvalidArgument("summarize: need at least one replication");
    SampleStats s;
    s.count = static_cast<int>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / s.count;
    if (s.count == 1) {
        s.single = true;
        return s;
    }
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / (s.count - 1));
    return s;
}

double improvement_rate(const std::vector<double>& candidate, const std::vector<double>& baseline) {
    if (candidate.size() != baseline.size()) throw InvalidArgument("improvement_rate: length mismatch");
    int usable = 0;
    int better = 0;
    for (std::size_t i = 0; i < candidate.size(); ++i) {
        if (!std::isfinite(candidate[i]) || !std::isfinite(baseline[i])) continue;
        ++usable;
        if (candidate[i] < baseline[i]) ++better;
    }
    if (usable == 0) throw InvalidArgument("improvement_rate: no usable pairs");
    return static_cast<double>(better) / usable;
}

GridResult run_single_spike_grid(const ExperimentConfig& cfg, const Execution& exec) {
    cfg.validate();
    require_design(cfg, {Design::SingleSpikeGrid}, "run_single_spike_grid");
    const std::size_t na = cfg.a1_sq_list.size();
    GridResult out;
    for (Eigen::Index p : cfg.p_list) {
        const SpikedModelSpec spec = model_for(cfg, p);
        const Eigen::MatrixXd e = make_walsh_basis(p);
        std::vector<Eigen::VectorXd> refs;
        for (double a1_sq : cfg.a1_sq_list)
            refs.push_back(reference_single(std::sqrt(a1_sq), e.col(0), e.col(1)).directions().col(0));

        std::vector<double> naive(cfg.replications, kNaN);
        std::vector<std::vector<double>> arg(na, std::vector<double>(cfg.replications, kNaN));
        run_indexed(cfg.replications, exec, [&](std::int64_t rep) {
            try {
                const SampleDraw draw = draw_replication(cfg, spec, static_cast<int>(rep));
                const SamplePca pca = gram_pca(center(draw.X), 1);
                const Eigen::VectorXd u1 = spec.spike_directions().col(0);
                naive[rep] = vector_angle(pca.U_hat.col(0), u1);
                for (std::size_t k = 0; k < na; ++k) {
                    try {
                        arg[k][rep] = vector_angle(arg_vector_single(pca, refs[k]), u1);
                    } catch (const std::exception&) {
                        arg[k][rep] = kNaN;
                    }
                }
            } catch (const std::exception&) {
                naive[rep] = kNaN;
            }
        });

        out.summaries.push_back(make_row(cfg, p, std::nullopt, "naive", 1, naive, nullptr));
        append_raw(out, cfg, p, std::nullopt, "naive", 1, naive);
        for (std::size_t k = 0; k < na; ++k) {
            out.summaries.push_back(make_row(cfg, p, cfg.a1_sq_list[k], "arg", 1, arg[k], &naive));
            append_raw(out, cfg, p, cfg.a1_sq_list[k], "arg", 1, arg[k]);
        }
    }
    return out;
}

GridResult run_two_spike(const ExperimentConfig& cfg, const Execution& exec) {
    cfg.validate();
    require_design(cfg, {Design::TwoSpike, Design::Custom}, "run_two_spike");
    const Eigen::Index m = cfg.m();
    GridResult out;
    for (Eigen::Index p : cfg.p_list) {
        const SpikedModelSpec spec = model_for(cfg, p);
        const ReferenceSet refs = references_for(cfg, p);
        std::vector<SubspaceRep> reps(cfg.replications);
        run_indexed(cfg.replications, exec, [&](std::int64_t rep) {
            SubspaceRep& slot = reps[rep];
            slot.naive.assign(m, kNaN);
            slot.arg.assign(m, kNaN);
            try {
                const SampleDraw draw = draw_replication(cfg, spec, static_cast<int>(rep));
                const SamplePca pca = gram_pca(center(draw.X), m);
                const Eigen::MatrixXd naive_basis = pca.leading_directions();
                slot.naive = principal_angles(naive_basis, spec.spike_directions()).angles;
                const SubspaceBasis arg = arg_subspace(pca, refs);
                slot.arg = principal_angles(arg.matrix(), spec.spike_directions()).angles;
            } catch (const std::exception&) {
                // Leaves NaN in the failed estimator's slots.
            }
        });

        for (Eigen::Index k = 0; k < m; ++k) {
            std::vector<double> naive(cfg.replications), arg(cfg.replications);
            for (int rep = 0; rep < cfg.replications; ++rep) {
                naive[rep] = reps[rep].naive[k];
                arg[rep] = reps[rep].arg[k];
            }
            const int idx = static_cast<int>(k) + 1;
            out.summaries.push_back(make_row(cfg, p, std::nullopt, "arg", idx, arg, &naive));
            out.summaries.push_back(make_row(cfg, p, std::nullopt, "naive", idx, naive, nullptr));
            append_raw(out, cfg, p, std::nullopt, "arg", idx, arg);
            append_raw(out, cfg, p, std::nullopt, "naive", idx, naive);
        }
    }
    return out;
}

GridResult run_student_t_variants(const ExperimentConfig& cfg, const Execution& exec) {
    if (!cfg.distribution.is_student_t())
        throw InvalidArgument("run_student_t_variants: distribution must be student_t(<dof>)");
    return cfg.design == Design::SingleSpikeGrid ? run_single_spike_grid(cfg, exec) : run_two_spike(cfg, exec);
}

GridResult run_experiment(const ExperimentConfig& cfg, const Execution& exec) {
    if (cfg.distribution.is_student_t()) return run_student_t_variants(cfg, exec);
    return cfg.design == Design::SingleSpikeGrid ? run_single_spike_grid(cfg, exec) : run_two_spike(cfg, exec);
}

double theorem2_ratio_limit(double omega, double tau_sq, double a1) {
    if (!(omega > 0.0)) throw InvalidArgument("theorem2_limit: Omega must be positive");
    if (!(tau_sq > 0.0)) throw InvalidArgument("theorem2_limit: tau^2 must be positive");
    if (!(a1 >= 0.0 && a1 <= 1.0)) throw InvalidArgument("theorem2_limit: a1 must lie in [0, 1]");
    const double a1_sq = a1 * a1;
    const double denom = omega * omega * (1.0 - a1_sq) + omega * tau_sq;
    if (!(denom > 0.0)) throw InvalidArgument("theorem2_limit: nonpositive denominator");
    return std::sqrt(1.0 + tau_sq * tau_sq * a1_sq / denom);
}

double theorem2_limit(double omega, double tau_sq, double a1) {
    const double ratio = theorem2_ratio_limit(omega, tau_sq, a1);
    const double naive = std::sqrt(omega / (omega + tau_sq));
    return std::min(naive * ratio, 1.0);
}

double median(std::vector<double> values) {
    values = collect_finite(values);
    if (values.empty()) throw InvalidArgument("median: no finite values");
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    const double hi = values[mid];
    if (values.size() % 2 == 1) return hi;
    const double lo = *std::max_element(values.begin(), values.begin() + mid);
    return 0.5 * (lo + hi);
}

double Theorem2Report::median_abs_deviation() const { return median(abs_deviation); }

double Theorem2Report::median_ratio_deviation() const {
    std::vector<double> dev(realized_ratio.size());
    for (std::size_t i = 0; i < dev.size(); ++i) dev[i] = std::abs(realized_ratio[i] - predicted_ratio[i]);
    return median(dev);
}

Theorem2Report theorem2_oracle_check(const ExperimentConfig& cfg, Eigen::Index p, double a1_sq,
                                     const Execution& exec) {
    if (cfg.m() != 1) throw InvalidArgument("theorem2_oracle_check: requires a single spike");
    const SpikedModelSpec spec = model_for(cfg, p);
    const Eigen::MatrixXd e = make_walsh_basis(p);
    const double a1 = std::sqrt(a1_sq);
    const Eigen::VectorXd v1 = reference_single(a1, e.col(0), e.col(1)).directions().col(0);
    const Eigen::VectorXd u1 = spec.spike_directions().col(0);

    const int reps = cfg.replications;
    Theorem2Report rep_out;
    rep_out.omega.assign(reps, kNaN);
    rep_out.realized.assign(reps, kNaN);
    rep_out.predicted.assign(reps, kNaN);
    rep_out.abs_deviation.assign(reps, kNaN);
    rep_out.realized_ratio.assign(reps, kNaN);
    rep_out.predicted_ratio.assign(reps, kNaN);
    run_indexed(reps, exec, [&](std::int64_t rep) {
        try {
            const SampleDraw draw = draw_replication(cfg, spec, static_cast<int>(rep));
            if (!draw.latent_scores) throw InvalidArgument("theorem2_oracle_check: missing latent scores");
            const double omega = omega_from_scores(*draw.latent_scores)(0, 0);
            const SamplePca pca = gram_pca(center(draw.X), 1);
            const Eigen::VectorXd arg = arg_vector_single(pca, v1).normalized();
            const double realized = std::abs(arg.dot(u1));
            const double naive = std::abs(pca.U_hat.col(0).dot(u1));
            rep_out.omega[rep] = omega;
            rep_out.realized[rep] = realized;
            rep_out.predicted[rep] = theorem2_limit(omega, cfg.tau_sq, a1);
            rep_out.abs_deviation[rep] = std::abs(realized - rep_out.predicted[rep]);
            rep_out.realized_ratio[rep] = realized / naive;
            rep_out.predicted_ratio[rep] = theorem2_ratio_limit(omega, cfg.tau_sq, a1);
        } catch (const std::exception&) {
        }
    });
    for (double d : rep_out.abs_deviation)
        if (!std::isfinite(d)) ++rep_out.failures;
    return rep_out;
}

Eigen::MatrixXd lemma2_limits(const Eigen::MatrixXd& omega, double tau_sq, const Eigen::MatrixXd& alignment) {
    const Eigen::Index m = omega.rows();
    if (omega.cols() != m || alignment.rows() != m)
        throw InvalidArgument("lemma2_limits: Omega must be m x m and alignment m x r");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(omega);
    Eigen::MatrixXd out(m, alignment.cols());
    for (Eigen::Index i = 0; i < m; ++i) {
        const Eigen::Index src = m - 1 - i;  // descending
        const double phi = std::max(eig.eigenvalues()(src), 0.0);
        Eigen::VectorXd vec = eig.eigenvectors().col(src);
        if (vec(i) < 0.0) vec = -vec;
        const double scale = std::sqrt(phi / (phi + tau_sq));
        for (Eigen::Index j = 0; j < alignment.cols(); ++j) out(i, j) = scale * alignment.col(j).dot(vec);
    }
    return out;
}

Lemma2Report lemma2_oracle_check(const ExperimentConfig& cfg, Eigen::Index p, const Execution& exec,
                                 double a1_sq) {
    const SpikedModelSpec spec = model_for(cfg, p);
    const ReferenceSet refs = [&] {
        if (cfg.design != Design::SingleSpikeGrid) return references_for(cfg, p);
        const Eigen::MatrixXd e = make_walsh_basis(p);
        return reference_single(std::sqrt(a1_sq), e.col(0), e.col(1));
    }();
    if (!refs.alignment()) throw InvalidArgument("lemma2_oracle_check: alignment matrix unknown");
    const Eigen::Index m = cfg.m();
    const Eigen::MatrixXd& U = spec.spike_directions();

    Lemma2Report out;
    out.spike_deviation.assign(cfg.replications, kNaN);
    out.noise_block_max.assign(cfg.replications, kNaN);
    run_indexed(cfg.replications, exec, [&](std::int64_t rep) {
        try {
            const SampleDraw draw = draw_replication(cfg, spec, static_cast<int>(rep));
            if (!draw.latent_scores) throw InvalidArgument("lemma2_oracle_check: missing latent scores");
            const Eigen::MatrixXd omega = omega_from_scores(*draw.latent_scores);
            const Eigen::MatrixXd limits = lemma2_limits(omega, cfg.tau_sq, *refs.alignment());
            SamplePca pca = gram_pca(center(draw.X), m);
            Eigen::MatrixXd lead = pca.leading_directions();
            align_signs(lead, U);
            const Eigen::MatrixXd realized = lead.transpose() * refs.directions();
            out.spike_deviation[rep] = (realized - limits).cwiseAbs().maxCoeff();
            const Eigen::MatrixXd rest = pca.U_hat.rightCols(pca.U_hat.cols() - m).transpose() * refs.directions();
            out.noise_block_max[rep] = rest.cwiseAbs().maxCoeff();
        } catch (const std::exception&) {
        }
    });
    for (double d : out.spike_deviation)
        if (!std::isfinite(d)) ++out.failures;
    return out;
}

Lemma1Report lemma1_oracle_check(const ExperimentConfig& cfg, Eigen::Index p, const Execution& exec) {
    const SpikedModelSpec spec = model_for(cfg, p);
    const double scale = static_cast<double>(cfg.n) / static_cast<double>(p);
    Lemma1Report out;
    out.top_deviation.assign(cfg.replications, kNaN);
    out.noise_deviation.assign(cfg.replications, kNaN);
    out.top_limit.assign(cfg.replications, kNaN);
    run_indexed(cfg.replications, exec, [&](std::int64_t rep) {
        try {
            const SampleDraw draw = draw_replication(cfg, spec, static_cast<int>(rep));
            const Eigen::MatrixXd omega = omega_from_scores(*draw.latent_scores);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(omega, Eigen::EigenvaluesOnly);
            const double phi1 = eig.eigenvalues()(omega.rows() - 1);
            const SamplePca pca = gram_pca(center(draw.X), cfg.m());
            out.top_limit[rep] = phi1 + cfg.tau_sq;
            out.top_deviation[rep] = std::abs(scale * pca.lambdas(0) - out.top_limit[rep]);
            out.noise_deviation[rep] = std::abs(scale * pca.lambda_tilde - cfg.tau_sq);
        } catch (const std::exception&) {
        }
    });
    return out;
}

std::vector<double> ridge_orthogonality_check(const ExperimentConfig& cfg, Eigen::Index p, double a1_sq,
                                              const Execution& exec) {
    if (cfg.m() != 1) throw InvalidArgument("ridge_orthogonality_check: requires a single spike");
    const SpikedModelSpec spec = model_for(cfg, p);
    const Eigen::MatrixXd e = make_walsh_basis(p);
    const ReferenceSet refs = reference_single(std::sqrt(a1_sq), e.col(0), e.col(1));
    const Eigen::VectorXd u1 = spec.spike_directions().col(0);
    std::vector<double> cosines(cfg.replications, kNaN);
    run_indexed(cfg.replications, exec, [&](std::int64_t rep) {
        try {
            const SampleDraw draw = draw_replication(cfg, spec, static_cast<int>(rep));
            const SamplePca pca = gram_pca(center(draw.X), 1);
            const Eigen::VectorXd d1 = ridge_vectors_expansion(pca, refs).D.col(0);
            cosines[rep] = std::abs(u1.dot(d1)) / d1.norm();
        } catch (const std::exception&) {
        }
    });
    return cosines;
}

RidgeConditioningReport ridge_conditioning_check(const ExperimentConfig& cfg, Eigen::Index p,
                                                 const Execution& exec) {
    const SpikedModelSpec spec = model_for(cfg, p);
    const ReferenceSet refs = references_for(cfg, p);
    RidgeConditioningReport out;
    out.d_min_eig.assign(cfg.replications, kNaN);
    out.v_tilde_min_eig.assign(cfg.replications, kNaN);
    run_indexed(cfg.replications, exec, [&](std::int64_t rep) {
        try {
            const SampleDraw draw = draw_replication(cfg, spec, static_cast<int>(rep));
            const SamplePca pca = gram_pca(center(draw.X), cfg.m());
            const RidgeVectors ridge = ridge_vectors_expansion(pca, refs);
            out.d_min_eig[rep] = gram_min_eig(ridge.D);
            out.v_tilde_min_eig[rep] = gram_min_eig(ridge.V_tilde);
        } catch (const std::exception&) {
        }
    });
    return out;
}

}  // namespace argpca
