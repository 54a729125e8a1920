#include <doctest.h>

#include <numeric>

#include "helpers.hpp"
#include "l2relax/covariance.hpp"
#include "l2relax/error.hpp"
#include "oracles.hpp"

using namespace l2relax;

TEST_CASE("forecast_errors") {
    Panel p;
    p.values = Matrix::Zero(2, 1);
    p.unit_labels = {"f"};
    p.target = Vector::LinSpaced(2, 1.0, 2.0);
    const Matrix e = forecast_errors(p);
    CHECK(e(0, 0) == 1.0);
    CHECK(e(1, 0) == 2.0);

    RngStream rng(1, 0);
    Panel q;
    q.values = standard_normal(rng, 5, 3);
    q.unit_labels = {"a", "b", "c"};
    q.target = standard_normal(rng, 5, 1).col(0);
    const Matrix eq = forecast_errors(q);
    for (Eigen::Index t = 0; t < 5; ++t)
        for (Eigen::Index i = 0; i < 3; ++i) CHECK(eq(t, i) == (*q.target)(t) - q.values(t, i));

    Panel perfect = q;
    perfect.values = q.target->replicate(1, 3);
    CHECK(forecast_errors(perfect).isZero(0.0));

    Panel none = q;
    none.target.reset();
    CHECK_THROWS_AS(forecast_errors(none), Error);
}

TEST_CASE("Panel validation") {
    Panel p;
    p.values = Matrix::Zero(1, 2);
    p.unit_labels = {"a", "b"};
    CHECK_THROWS_AS(p.validate(), Error);
    p.values = Matrix::Zero(3, 2);
    CHECK_NOTHROW(p.validate());
    p.values(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("sample_vc") {
    Matrix x(3, 2);
    x << 1, 0, -1, 0, 0, 0;
    const Matrix s = sample_vc(x).sigma;
    CHECK(s(0, 0) == doctest::Approx(2.0 / 3.0));
    CHECK(s(0, 1) == 0.0);
    CHECK(s(1, 1) == 0.0);

    CHECK(sample_vc(Matrix::Constant(4, 3, 2.5)).sigma.isZero(1e-15));

    RngStream rng(2, 0);
    const Matrix y = standard_normal(rng, 20, 4);
    const Matrix yc = y.rowwise() - y.colwise().mean();
    const Matrix unc = yc.transpose() * yc / 20.0;
    CHECK(max_abs(sample_vc(y).sigma - unc) < 1e-14);

    Vector shift(4);
    shift << 3, -2, 10, 0.5;
    const Matrix shifted = y.rowwise() + shift.transpose();
    CHECK(max_abs(sample_vc(shifted).sigma - sample_vc(y).sigma) < 1e-12);
}

TEST_CASE("lw_linear_shrinkage endpoints and reference intensity") {
    RngStream rng(3, 0);
    const Matrix x = standard_normal(rng, 60, 10) + 0.3 * standard_normal(rng, 60, 1).replicate(1, 10);
    const Matrix s = sample_vc(x).sigma;
    const Matrix f = constant_correlation_target(s);

    CHECK(max_abs(lw_linear_shrinkage(x, 0.0).sigma - s) <= 1e-15);
    CHECK(max_abs(lw_linear_shrinkage(x, 1.0).sigma - f) <= 1e-15);

    const CovEstimate lw = lw_linear_shrinkage(x);
    REQUIRE(lw.shrinkage_intensity.has_value());
    CHECK(std::abs(*lw.shrinkage_intensity - oracle::lw_intensity(x)) <= 1e-10);
    CHECK(*lw.shrinkage_intensity >= 0.0);
    CHECK(*lw.shrinkage_intensity <= 1.0);
    CHECK(max_abs(lw.sigma - (*lw.shrinkage_intensity * f + (1 - *lw.shrinkage_intensity) * s)) < 1e-12);

    const double min_eig = sym_eigen(lw.sigma).values.minCoeff();
    const double bound = std::min(sym_eigen(s).values.minCoeff(), sym_eigen(f).values.minCoeff());
    CHECK(min_eig >= bound - 1e-10);
}

TEST_CASE("lw_linear_shrinkage reference on several panels") {
    RngStream rng(4, 0);
    for (int rep = 0; rep < 10; ++rep) {
        const Eigen::Index t = 15 + static_cast<Eigen::Index>(rng.uniform_index(60));
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.uniform_index(12));
        const Matrix mix = 0.5 * standard_normal(rng, n, n) + Matrix::Identity(n, n);
        const Matrix panel = standard_normal(rng, t, n) * mix;
        CHECK(std::abs(*lw_linear_shrinkage(panel).shrinkage_intensity - oracle::lw_intensity(panel)) <= 1e-10);
    }
}

TEST_CASE("lw_linear_shrinkage errors") {
    Matrix x = Matrix::Zero(10, 3);
    RngStream rng(5, 0);
    x.leftCols(2) = standard_normal(rng, 10, 2);
    CHECK_THROWS_AS(lw_linear_shrinkage(x), Error);
    CHECK_THROWS_AS(lw_linear_shrinkage(Matrix::Ones(1, 3)), Error);
    CHECK_THROWS_AS(estimate_covariance(standard_normal(rng, 10, 3), Estimator::LwNonlinear), Error);
}

TEST_CASE("estimators are permutation equivariant") {
    RngStream rng(6, 0);
    const Matrix x = standard_normal(rng, 40, 6) + standard_normal(rng, 40, 1).replicate(1, 6);
    std::vector<int> perm(6);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm.begin(), perm.end());
    Matrix xp(40, 6);
    for (int j = 0; j < 6; ++j) xp.col(j) = x.col(perm[static_cast<std::size_t>(j)]);
    for (const Estimator e : {Estimator::Sample, Estimator::LwLinear}) {
        const Matrix s = estimate_covariance(x, e).sigma;
        const Matrix sp = estimate_covariance(xp, e).sigma;
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                CHECK(std::abs(sp(i, j) - s(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)])) <
                      1e-12);
    }
}

TEST_CASE("parse_estimator") {
    CHECK(parse_estimator("sample") == Estimator::Sample);
    CHECK(parse_estimator("lw") == Estimator::LwLinear);
    CHECK(parse_estimator("lw_linear") == Estimator::LwLinear);
    CHECK(parse_estimator("lw_nonlinear") == Estimator::LwNonlinear);
    CHECK_THROWS_AS(parse_estimator("poet"), Error);
}
