#include "argpca/errors.hpp"
#include "argpca/sim_harness.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace argpca;

namespace {

const ReplicationSummary& row(const GridResult& g, Eigen::Index p, const std::string& est, int k,
                              std::optional<double> a1_sq = std::nullopt) {
    for (const auto& r : g.summaries)
        if (r.p == p && r.estimator == est && r.angle_index == k && r.a1_sq.has_value() == a1_sq.has_value() &&
            (!a1_sq || *r.a1_sq == *a1_sq))
            return r;
    FAIL("row not found");
    return g.summaries.front();
}

bool same_summaries(const GridResult& a, const GridResult& b) {
    if (a.summaries.size() != b.summaries.size()) return false;
    for (std::size_t i = 0; i < a.summaries.size(); ++i) {
        const auto& x = a.summaries[i];
        const auto& y = b.summaries[i];
        if (x.p != y.p || x.estimator != y.estimator || x.angle_index != y.angle_index || x.mean != y.mean ||
            x.std != y.std || x.improvement_rate != y.improvement_rate || x.a1_sq != y.a1_sq)
            return false;
    }
    return true;
}

}  // namespace

TEST_CASE("summarize") {
    const SampleStats s = summarize({0.1, 0.2, 0.3});
    CHECK(s.mean == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(s.std == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(s.count == 3);

    const SampleStats c = summarize({0.4, 0.4, 0.4, 0.4});
    CHECK(c.std == 0.0);

    const SampleStats one = summarize({0.7});
    CHECK(one.std == 0.0);
    CHECK(one.single);
    CHECK_THROWS_AS(summarize({}), InvalidArgument);
}

TEST_CASE("improvement rate") {
    CHECK(improvement_rate({0.1, 0.5, 0.2, 0.9}, {0.2, 0.4, 0.3, 1.0}) == doctest::Approx(0.75));
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK(improvement_rate({0.1, nan}, {0.2, 0.3}) == 1.0);
    CHECK_THROWS_AS(improvement_rate({nan}, {0.1}), InvalidArgument);
}

TEST_CASE("theorem2 limit") {
    const double omega = 37.0, tau_sq = 40.0;
    CHECK(theorem2_limit(omega, tau_sq, 0.0) == doctest::Approx(std::sqrt(omega / (omega + tau_sq))));
    CHECK(theorem2_limit(omega, tau_sq, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    // (2/3) * (1 + 0.5 / (4 * 0.5 + 2)) = 0.75
    CHECK(theorem2_limit(2.0, 1.0, std::sqrt(0.5)) == doctest::Approx(std::sqrt(0.75)).epsilon(1e-14));
    CHECK(theorem2_ratio_limit(2.0, 1.0, std::sqrt(0.5)) == doctest::Approx(std::sqrt(1.125)).epsilon(1e-14));
    CHECK(theorem2_ratio_limit(omega, tau_sq, 0.0) == 1.0);
    CHECK_THROWS_AS(theorem2_limit(0.0, 1.0, 0.5), InvalidArgument);
    CHECK_THROWS_AS(theorem2_limit(1.0, 1.0, 1.5), InvalidArgument);

    // The limit increases with the information coefficient.
    double prev = 0.0;
    for (double a : {0.0, 0.3, 0.6, 0.9, 1.0}) {
        const double v = theorem2_limit(omega, tau_sq, a);
        CHECK(v >= prev);
        CHECK(v <= 1.0);
        prev = v;
    }
}

TEST_CASE("lemma2 limits") {
    const Eigen::Matrix2d omega = (Eigen::Matrix2d() << 50.0, 0.0, 0.0, 20.0).finished();
    // References orthogonal to the spike span have zero limits.
    CHECK(lemma2_limits(omega, 40.0, Eigen::MatrixXd::Zero(2, 3)).cwiseAbs().maxCoeff() == 0.0);
    // Diagonal Omega: v(Omega) = I, so limit_ij = sqrt(phi_i / (phi_i + tau^2)) A(i, j).
    Eigen::Matrix2d a;
    a << 0.5, 0.7, 0.5, 0.0;
    const Eigen::MatrixXd lim = lemma2_limits(omega, 40.0, a);
    CHECK(lim(0, 0) == doctest::Approx(std::sqrt(50.0 / 90.0) * 0.5));
    CHECK(lim(0, 1) == doctest::Approx(std::sqrt(50.0 / 90.0) * 0.7));
    CHECK(lim(1, 0) == doctest::Approx(std::sqrt(20.0 / 60.0) * 0.5));
    CHECK(lim(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("config validation") {
    ExperimentConfig cfg = table1_config();
    CHECK_NOTHROW(cfg.validate());
    cfg.replications = 0;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("replications"), InvalidArgument);
    cfg = table1_config();
    cfg.a1_sq_list = {0.5, 1.2};
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("a1_sq"), InvalidArgument);
    cfg = table2_config();
    cfg.p_list = {102};
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    CHECK(parse_design("two_spike") == Design::TwoSpike);
    CHECK_THROWS_AS(parse_design("three_spike"), InvalidArgument);
    CHECK(Distribution::parse("student_t(5)").dof == 5.0);
    CHECK(Distribution::student_t(5).label() == "student_t(5)");
    CHECK_THROWS_AS(Distribution::parse("student_t(0)"), InvalidArgument);
    CHECK_THROWS_AS(Distribution::parse("cauchy"), InvalidArgument);
}

TEST_CASE("single-spike grid shape and determinism") {
    ExperimentConfig cfg = table1_config();
    cfg.p_list = {100, 400};
    cfg.replications = 20;
    const GridResult a = run_single_spike_grid(cfg, Execution{1, true});
    const GridResult b = run_single_spike_grid(cfg, Execution{4, false});
    CHECK(a.summaries.size() == 2 * 6);
    CHECK(same_summaries(a, b));
    CHECK(a.total_failures() == 0);
    for (const auto& r : a.summaries) {
        CHECK(r.mean >= 0.0);
        CHECK(r.mean <= M_PI / 2);
        CHECK(r.std >= 0.0);
        CHECK(r.reps == 20);
        if (r.estimator == "arg") {
            REQUIRE(r.improvement_rate.has_value());
            CHECK(*r.improvement_rate >= 0.0);
            CHECK(*r.improvement_rate <= 1.0);
        }
    }
    // Raw angles: one naive and one ARG angle per a1^2, per replication and dimension.
    CHECK(a.raw.size() == 2 * 20 * 6);

    cfg.base_seed += 1;
    const GridResult c = run_single_spike_grid(cfg, Execution{1, true});
    CHECK_FALSE(same_summaries(a, c));
}

TEST_CASE("two-spike grid paired comparisons") {
    ExperimentConfig cfg = table2_config();
    cfg.p_list = {200};
    cfg.replications = 10;
    const GridResult g = run_two_spike(cfg);
    CHECK(g.summaries.size() == 4);
    CHECK(row(g, 200, "arg", 1).mean < row(g, 200, "naive", 1).mean);
    CHECK(row(g, 200, "arg", 1).mean <= row(g, 200, "arg", 2).mean);
    CHECK(row(g, 200, "naive", 1).mean <= row(g, 200, "naive", 2).mean);
    CHECK_FALSE(row(g, 200, "naive", 1).improvement_rate.has_value());
    const GridResult serial = run_two_spike(cfg, Execution{1, true});
    CHECK(same_summaries(g, serial));
}

TEST_CASE("student t variants are deterministic and require a t distribution") {
    ExperimentConfig cfg = table2_config(Distribution::student_t(5));
    cfg.p_list = {100};
    cfg.replications = 10;
    const GridResult a = run_student_t_variants(cfg, Execution{1, true});
    const GridResult b = run_student_t_variants(cfg, Execution{3, false});
    CHECK(same_summaries(a, b));
    CHECK(a.summaries.front().distribution == "student_t(5)");
    CHECK_THROWS_AS(run_student_t_variants(table2_config()), InvalidArgument);
}

TEST_CASE("single-spike information ordering at p=2000") {
    ExperimentConfig cfg = table1_config();
    cfg.p_list = {2000};
    const GridResult g = run_single_spike_grid(cfg);
    double prev = row(g, 2000, "arg", 1, 0.0).mean;
    CHECK(std::abs(prev - row(g, 2000, "naive", 1).mean) < 0.01);
    for (double a1 : {0.25, 0.5, 0.75, 1.0}) {
        const double cur = row(g, 2000, "arg", 1, a1).mean;
        CHECK(cur <= prev + 0.01);
        prev = cur;
    }
}

TEST_CASE("full-information angle shrinks with p") {
    ExperimentConfig cfg = table1_config();
    cfg.a1_sq_list = {1.0};
    const GridResult g = run_single_spike_grid(cfg);
    double prev = 10.0;
    for (Eigen::Index p : cfg.p_list) {
        const double cur = row(g, p, "arg", 1, 1.0).mean;
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("references orthogonal to the spikes give no gain") {
    ExperimentConfig cfg = table2_config();
    cfg.design = Design::Custom;
    cfg.p_list = {2000};
    cfg.reference_coeffs = {{0, 0, 1, 0}, {0, 0, 0, 1}};
    const GridResult g = run_experiment(cfg);
    for (int k : {1, 2}) CHECK(std::abs(row(g, 2000, "arg", k).mean - row(g, 2000, "naive", k).mean) < 0.03);
}

TEST_CASE("ARG inner-product limit tracks realized Omega") {
    ExperimentConfig cfg = table1_config();
    const Theorem2Report big = theorem2_oracle_check(cfg, 2000, 0.75);
    const Theorem2Report small = theorem2_oracle_check(cfg, 100, 0.75);
    CHECK(big.failures == 0);
    CHECK(big.median_abs_deviation() < 0.05);
    CHECK(big.median_abs_deviation() < small.median_abs_deviation());

    const Theorem2Report none = theorem2_oracle_check(cfg, 2000, 0.0);
    std::vector<double> ratio_dev;
    for (double r : none.realized_ratio) ratio_dev.push_back(std::abs(r - 1.0));
    CHECK(median(ratio_dev) < 0.02);
    CHECK(none.median_ratio_deviation() < 0.02);

    cfg.sigma_sq = {2.0, 1.0};
    CHECK_THROWS_AS(theorem2_oracle_check(cfg, 100, 0.5), InvalidArgument);
}

TEST_CASE("reference inner-product limits in the two-spike design") {
    const Lemma2Report rep = lemma2_oracle_check(table2_config(), 2000);
    CHECK(rep.failures == 0);
    CHECK(median(rep.spike_deviation) < 0.05);
    CHECK(median(rep.noise_block_max) < 0.1);
}

TEST_CASE("median") {
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
    CHECK(median({1.0, std::numeric_limits<double>::quiet_NaN(), 3.0}) == 2.0);
}
