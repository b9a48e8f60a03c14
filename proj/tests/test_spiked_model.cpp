#include "argpca/errors.hpp"
#include "argpca/hdlss_pca.hpp"
#include "argpca/parallel.hpp"
#include "argpca/spiked_model.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace argpca;

TEST_CASE("walsh basis at p=4 is the 4-point Hadamard pattern") {
    const Eigen::MatrixXd e = make_walsh_basis(4);
    Eigen::Vector4d e1(0.5, 0.5, 0.5, 0.5), e2(0.5, 0.5, -0.5, -0.5);
    CHECK((e.col(0) - e1).norm() == 0.0);
    CHECK((e.col(1) - e2).norm() == 0.0);
    CHECK(e.col(0).dot(e.col(1)) == 0.0);
    CHECK(e.col(0).norm() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("walsh basis block signs") {
    const Eigen::MatrixXd e = make_walsh_basis(100);
    const int signs[4][4] = {{1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, -1, 1}, {1, -1, 1, -1}};
    for (int k = 0; k < 4; ++k)
        for (int b = 0; b < 4; ++b)
            for (int i = 0; i < 25; ++i) CHECK(e(b * 25 + i, k) == doctest::Approx(signs[k][b] / 10.0));
    CHECK(std::abs(e.col(2).dot(e.col(3))) < 1e-12);
    CHECK(std::abs(e.col(2).norm() - 1.0) < 1e-12);
}

TEST_CASE("walsh basis Gram is I4") {
    for (Eigen::Index p : {4, 8, 100, 2000}) {
        const Eigen::MatrixXd e = make_walsh_basis(p);
        const double dev = (e.transpose() * e - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff();
        CHECK(dev < 1e-12);
    }
}

TEST_CASE("walsh basis rejects p not divisible by 4") {
    CHECK_THROWS_AS(make_walsh_basis(6), InvalidArgument);
    CHECK_THROWS_AS(make_walsh_basis(0), InvalidArgument);
    CHECK_THROWS_WITH(make_walsh_basis(10), doctest::Contains("multiple of 4"));
}

TEST_CASE("reference_single endpoints and grid value") {
    const Eigen::MatrixXd e = make_walsh_basis(100);
    const ReferenceSet one = reference_single(1.0, e.col(0), e.col(1));
    CHECK((one.directions().col(0) - e.col(0)).norm() < 1e-15);
    CHECK((*one.alignment())(0, 0) == 1.0);

    const ReferenceSet zero = reference_single(0.0, e.col(0), e.col(1));
    CHECK((zero.directions().col(0) - e.col(1)).norm() < 1e-15);
    CHECK(std::abs(zero.directions().col(0).dot(e.col(0))) < 1e-15);

    const ReferenceSet half = reference_single(std::sqrt(0.5), e.col(0), e.col(1));
    CHECK(std::abs(half.directions().col(0).dot(e.col(0)) - 1.0 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(half.directions().col(0).norm() - 1.0) < 1e-12);

    CHECK_THROWS_AS(reference_single(-0.1, e.col(0), e.col(1)), InvalidArgument);
    CHECK_THROWS_AS(reference_single(1.1, e.col(0), e.col(1)), InvalidArgument);
}

TEST_CASE("reference_table2 geometry and recorded alignment") {
    const Eigen::MatrixXd e = make_walsh_basis(2000);
    const ReferenceSet refs = reference_table2(e);
    const Eigen::MatrixXd& v = refs.directions();
    CHECK(std::abs(v.col(0).squaredNorm() - 1.0) < 1e-12);
    CHECK(std::abs(v.col(1).squaredNorm() - 1.0) < 1e-12);
    CHECK(std::abs(v.col(0).dot(e.col(1)) - 0.5) < 1e-12);
    // (e1+e2+e3+e4)/2 . (e1-e3)/sqrt2 = 1/(2 sqrt2) - 1/(2 sqrt2) = 0
    CHECK(std::abs(v.col(0).dot(v.col(1))) < 1e-12);

    const Eigen::MatrixXd& a = *refs.alignment();
    CHECK(a.rows() == 2);
    CHECK(a.cols() == 2);
    // A(k, j) = v_j^T u_k must agree with the actual inner products.
    for (int k = 0; k < 2; ++k)
        for (int j = 0; j < 2; ++j) CHECK(std::abs(a(k, j) - v.col(j).dot(e.col(k))) < 1e-12);
    CHECK(a(0, 0) == doctest::Approx(0.5));
    CHECK(a(1, 0) == doctest::Approx(0.5));
    CHECK(a(0, 1) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(a(1, 1) == 0.0);
}

TEST_CASE("reference set validation") {
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(8, 2);
    v(0, 0) = 1.0;
    v(0, 1) = 1.0;
    CHECK_THROWS_AS(ReferenceSet{v}, InvalidArgument);  // collinear
    v(0, 1) = 2.0;
    CHECK_THROWS_AS(ReferenceSet{v}, InvalidArgument);  // not unit
    Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(8, 1);
    CHECK_THROWS_AS(ReferenceSet::normalized(zero), InvalidArgument);
}

TEST_CASE("spiked model validation") {
    const Eigen::MatrixXd e = make_walsh_basis(100);
    CHECK_NOTHROW(SpikedModelSpec(100, 40, {2.0, 1.0}, 40.0, e.leftCols(2)));
    CHECK_THROWS_AS(SpikedModelSpec(100, 40, {1.0, 2.0}, 40.0, e.leftCols(2)), InvalidArgument);
    CHECK_THROWS_AS(SpikedModelSpec(100, 40, {1.0}, 0.0, e.leftCols(1)), InvalidArgument);
    CHECK_THROWS_AS(SpikedModelSpec(100, 3, {2.0, 1.0}, 40.0, e.leftCols(2)), InvalidArgument);
    Eigen::MatrixXd bad = e.leftCols(2);
    bad.col(1) = bad.col(0);
    CHECK_THROWS_AS(SpikedModelSpec(100, 40, {2.0, 1.0}, 40.0, bad), InvalidArgument);

    const SpikedModelSpec spec = two_spike_spec(100);
    CHECK(spec.eigenvalue(0) == 240.0);
    CHECK(spec.eigenvalue(1) == 140.0);
    CHECK(spec.eigenvalue(2) == 40.0);
}

TEST_CASE("sampler construction reproduces Sigma exactly") {
    // X - mu 1^T = A xi with A = [U diag(sqrt(sigma^2 p)), tau I] and xi standard normal,
    // so the population covariance is A A^T.
    const SpikedModelSpec spec = two_spike_spec(40, 20);
    Eigen::MatrixXd A(spec.p(), spec.m() + spec.p());
    for (Eigen::Index i = 0; i < spec.m(); ++i)
        A.col(i) = std::sqrt(spec.sigma_sq()[i] * spec.p()) * spec.spike_directions().col(i);
    A.rightCols(spec.p()) = std::sqrt(spec.tau_sq()) * Eigen::MatrixXd::Identity(spec.p(), spec.p());
    CHECK((A * A.transpose() - spec.covariance()).cwiseAbs().maxCoeff() < 1e-10);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(spec.covariance());
    CHECK(eig.eigenvalues()(spec.p() - 1) == doctest::Approx(spec.eigenvalue(0)));
    CHECK(eig.eigenvalues()(spec.p() - 2) == doctest::Approx(spec.eigenvalue(1)));
    CHECK(eig.eigenvalues()(0) == doctest::Approx(40.0));
}

TEST_CASE("gaussian sampler variance along u1") {
    const SpikedModelSpec spec = single_spike_spec(1000, 40);
    const Eigen::VectorXd u1 = spec.spike_directions().col(0);
    double total = 0.0;
    for (int d = 0; d < 200; ++d) {
        const SampleDraw draw = sample_gaussian(spec, 1000 + d);
        const Eigen::VectorXd proj = (u1.transpose() * draw.X).transpose();
        const double mean = proj.mean();
        total += (proj.array() - mean).square().sum() / (proj.size() - 1);
    }
    const double avg = total / 200.0;
    CHECK(std::abs(avg - 1040.0) < 0.15 * 1040.0);
}

TEST_CASE("sample covariance along u1 matches lambda_1 on average") {
    const SpikedModelSpec spec = single_spike_spec(200, 40);
    const Eigen::VectorXd u1 = spec.spike_directions().col(0);
    double total = 0.0;
    const int reps = 500;
    for (int d = 0; d < reps; ++d) {
        const SampleDraw draw = sample_gaussian(spec, 77 + d);
        const Eigen::MatrixXd xc = center(draw.X);
        const double s11 = (u1.transpose() * xc).squaredNorm() / 40.0;  // u1^T S u1, divisor n
        total += s11 * 40.0 / 39.0;
    }
    CHECK(std::abs(total / reps - spec.eigenvalue(0)) < 0.1 * spec.eigenvalue(0));
}

TEST_CASE("noiseless limit stays in the spike span") {
    const Eigen::MatrixXd e = make_walsh_basis(64);
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(64);
    const SpikedModelSpec spec(64, 10, {2.0, 1.0}, 1e-12, e.leftCols(2), mu);
    const SampleDraw draw = sample_gaussian(spec, 3);
    const Eigen::MatrixXd U = spec.spike_directions();
    const Eigen::MatrixXd resid = draw.X - U * (U.transpose() * draw.X);
    CHECK(resid.cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("sampler determinism") {
    const SpikedModelSpec spec = two_spike_spec(200);
    const SampleDraw a = sample_gaussian(spec, 42);
    const SampleDraw b = sample_gaussian(spec, 42);
    const SampleDraw c = sample_gaussian(spec, 43);
    CHECK(a.X == b.X);
    CHECK(*a.latent_scores == *b.latent_scores);
    CHECK(a.X != c.X);
    CHECK(a.seed == 42);

    const SampleDraw t1 = sample_student_t(spec, 5.0, 42);
    const SampleDraw t2 = sample_student_t(spec, 5.0, 42);
    CHECK(t1.X == t2.X);
}

TEST_CASE("sampler determinism across threads") {
    const SpikedModelSpec spec = single_spike_spec(400);
    const int count = 16;
    std::vector<Eigen::MatrixXd> serial(count), parallel(count);
    serial_for(count, [&](std::int64_t i) { serial[i] = sample_student_t(spec, 5.0, 900 + i).X; });
    parallel_for(count, 4, [&](std::int64_t i) { parallel[i] = sample_student_t(spec, 5.0, 900 + i).X; });
    for (int i = 0; i < count; ++i) CHECK(serial[i] == parallel[i]);
}

TEST_CASE("latent scores are sigma-scaled standardized PC scores") {
    const SpikedModelSpec spec = two_spike_spec(100);
    const SampleDraw draw = sample_gaussian(spec, 11);
    const Eigen::MatrixXd& W = *draw.latent_scores;
    REQUIRE(W.rows() == spec.n());
    REQUIRE(W.cols() == 2);
    for (int i = 0; i < 2; ++i) {
        const Eigen::VectorXd z = (spec.spike_directions().col(i).transpose() * draw.X).transpose() /
                                  std::sqrt(spec.eigenvalue(i));
        CHECK((W.col(i) - std::sqrt(spec.sigma_sq()[i]) * z).norm() < 1e-10);
    }
    // Omega = W^T (I - J) W
    const Eigen::MatrixXd J = Eigen::MatrixXd::Constant(spec.n(), spec.n(), 1.0 / spec.n());
    const Eigen::MatrixXd omega = W.transpose() * (Eigen::MatrixXd::Identity(spec.n(), spec.n()) - J) * W;
    CHECK((omega - omega_from_scores(W)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("student t mixing concentrates for large dof") {
    const Eigen::VectorXd w = student_t_mixing(20000, 1e6, 5);
    const auto inside = ((w.array() - 1.0).abs() < 0.005).count();
    CHECK(static_cast<double>(inside) / w.size() > 0.99);
}

TEST_CASE("student t sampler scales each column by its mixing factor") {
    const SpikedModelSpec spec = single_spike_spec(100);
    const SampleDraw g = sample_gaussian(spec, 8);
    const SampleDraw t = sample_student_t(spec, 5.0, 8);
    const Eigen::VectorXd w = student_t_mixing(spec.n(), 5.0, 8);
    CHECK((t.X - g.X * w.asDiagonal()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK_THROWS_AS(sample_student_t(spec, 0.0, 1), InvalidArgument);
    CHECK_THROWS_AS(sample_student_t(spec, -2.0, 1), InvalidArgument);
}
