#include <doctest.h>

#include <map>

#include "helpers.hpp"
#include "l2relax/competitors.hpp"
#include "l2relax/error.hpp"
#include "l2relax/kmeans.hpp"
#include "oracles.hpp"

using namespace l2relax;

TEST_CASE("simple_average") {
    CHECK(simple_average(1).w(0) == 1.0);
    CHECK(simple_average(4).w.isApprox(Vector::Constant(4, 0.25)));
    for (const Eigen::Index n : {3, 7, 10, 99}) CHECK(std::abs(simple_average(n).w.sum() - 1.0) < 1e-15);
}

TEST_CASE("ridge_recentered") {
    RngStream rng(31, 0);
    const Matrix s = testutil::random_spd(rng, 6);
    CHECK(testutil::sup_diff(ridge_recentered(s, 0.0).w, classical_weights(s).w) < 1e-12);
    const WeightSolution big = ridge_recentered(s, 1e8 * max_abs(s));
    CHECK(testutil::sup_diff(big.w, Vector::Constant(6, 1.0 / 6.0)) <= 1e-6);

    // The recentering constant does not matter under the adding-up constraint:
    // compare with argmin ½w′Σw + τ‖w − c1‖² for another constant c.
    const double tau = 0.3;
    for (const double c : {0.0, 2.5}) {
        Matrix k = Matrix::Zero(7, 7);
        k.topLeftCorner(6, 6) = s + 2 * tau * Matrix::Identity(6, 6);
        k.col(6).head(6).setOnes();
        k.row(6).head(6).setOnes();
        Vector rhs = Vector::Zero(7);
        rhs.head(6).setConstant(2 * tau * c);
        rhs(6) = 1.0;
        const Vector w = k.fullPivLu().solve(rhs).head(6);
        CHECK(testutil::sup_diff(ridge_recentered(s, tau).w, w) < 1e-12);
    }
    CHECK_THROWS_AS(ridge_recentered(s, -0.1), Error);
}

TEST_CASE("lasso_recentered endpoints") {
    RngStream rng(32, 0);
    const Matrix s = testutil::random_spd(rng, 5);
    CHECK(testutil::sup_diff(lasso_recentered(s, 0.0).w, classical_weights(s).w) < 1e-10);
    const Vector g = s * Vector::Constant(5, 0.2);
    const double tau_sa = (g.maxCoeff() - g.minCoeff()) / 2.0;
    CHECK(testutil::sup_diff(lasso_recentered(s, tau_sa * 1.01).w, Vector::Constant(5, 0.2)) < 1e-12);
}

TEST_CASE("lasso_recentered matches sign-pattern enumeration at N = 4") {
    RngStream rng(33, 0);
    const Matrix s = testutil::random_spd(rng, 4);
    const auto ref = oracle::lasso_recentered(s, 0.05);
    REQUIRE(ref.has_value());
    const WeightSolution w = lasso_recentered(s, 0.05);
    CHECK(testutil::sup_diff(w.w, *ref) <= 1e-6);
    CHECK(lasso_subgradient_residual(s, 0.05, w.w) <= 1e-7);
}

TEST_CASE("gec_weights") {
    RngStream rng(34, 0);
    for (int rep = 0; rep < 10; ++rep) {
        const Matrix s = testutil::random_sample_vc(rng, 8, 20);
        const WeightSolution w1 = gec_weights(s, 1.0);
        CHECK(w1.w.minCoeff() >= -1e-9);
        CHECK(std::abs(w1.w.sum() - 1.0) < 1e-9);
        const WeightSolution cl = classical_weights(s);
        const double l1 = cl.w.lpNorm<1>();
        CHECK(testutil::sup_diff(gec_weights(s, l1 + 0.5).w, cl.w) < 1e-9);
    }
    const Matrix s4 = testutil::random_sample_vc(rng, 4, 6);
    const auto ref = oracle::gec(s4, 1.5);
    REQUIRE(ref.has_value());
    CHECK(testutil::sup_diff(gec_weights(s4, 1.5).w, *ref) <= 1e-6);
    CHECK_THROWS_AS(gec_weights(s4, 0.5), Error);
}

TEST_CASE("right_singular_vectors sign convention") {
    RngStream rng(35, 0);
    const Matrix x = standard_normal(rng, 12, 5);
    const Matrix v = right_singular_vectors(x);
    CHECK(max_abs(v.transpose() * v - Matrix::Identity(v.cols(), v.cols())) < 1e-10);
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
        Eigen::Index imax = 0;
        v.col(j).cwiseAbs().maxCoeff(&imax);
        CHECK(v(imax, j) > 0.0);
    }
    CHECK(max_abs(right_singular_vectors(-x) - v) < 1e-10);
}

TEST_CASE("pc_grouping degenerate K") {
    RngStream rng(36, 0);
    const Matrix e = standard_normal(rng, 40, 6);
    const RngStream km(36, 1);
    const PcGrouping all = pc_grouping_weights(e, 6, 3, km);
    CHECK(testutil::sup_diff(all.solution.w, classical_weights(sample_vc(e)).w) < 1e-10);
    const PcGrouping one = pc_grouping_weights(e, 1, 3, km);
    CHECK(testutil::sup_diff(one.solution.w, Vector::Constant(6, 1.0 / 6.0)) < 1e-15);
}

TEST_CASE("pc_grouping recovers separated blocks") {
    RngStream rng(37, 0);
    const Eigen::Index t = 60;
    const Matrix fac = standard_normal(rng, t, 2);
    Matrix e(t, 8);
    for (int i = 0; i < 8; ++i) e.col(i) = fac.col(i < 4 ? 0 : 1) * (1.0 + 0.1 * i);
    const PcGrouping pc = pc_grouping_weights(e, 2, 2, RngStream(37, 1));
    const auto& m = pc.groups.membership();
    for (int i = 1; i < 4; ++i) CHECK(m[static_cast<std::size_t>(i)] == m[0]);
    for (int i = 5; i < 8; ++i) CHECK(m[static_cast<std::size_t>(i)] == m[4]);
    CHECK(m[0] != m[4]);
}

TEST_CASE("oracle_membership_weights") {
    RngStream rng(38, 0);
    const Matrix e = standard_normal(rng, 30, 6) + standard_normal(rng, 30, 1).replicate(1, 6);
    CHECK(testutil::sup_diff(oracle_membership_weights(e, GroupStructure::equal_blocks(6, 1)).w,
                             Vector::Constant(6, 1.0 / 6.0)) < 1e-15);
    CHECK(testutil::sup_diff(oracle_membership_weights(e, GroupStructure::equal_blocks(6, 6)).w,
                             classical_weights(sample_vc(e)).w) < 1e-10);
    const Vector w = oracle_membership_weights(e, GroupStructure::equal_blocks(6, 2)).w;
    CHECK(std::abs(w.sum() - 1.0) < 1e-12);
    CHECK(w(0) == w(2));
    CHECK(w(3) == w(5));
}

TEST_CASE("kmeans") {
    Matrix pts(6, 2);
    pts << 0, 0, 0.1, 0, 0, 0.1, 5, 5, 5.1, 5, 5, 5.1;
    const KMeansResult r = kmeans(pts, 2, RngStream(1, 0));
    CHECK(r.labels == std::vector<int>{0, 0, 0, 1, 1, 1});
    CHECK(r.inertia == doctest::Approx(4 * 0.1 * 0.1 / 3.0 * 2).epsilon(1e-9));
    const KMeansResult again = kmeans(pts, 2, RngStream(1, 0));
    CHECK(again.labels == r.labels);
    CHECK(again.inertia == r.inertia);
    CHECK_THROWS_AS(kmeans(pts, 7, RngStream(1, 0)), Error);
    const KMeansResult single = kmeans(pts, 1, RngStream(1, 0));
    CHECK(single.labels == std::vector<int>(6, 0));
}

TEST_CASE("fit_competitor dispatch and spec validation") {
    RngStream rng(39, 0);
    const Matrix e = standard_normal(rng, 30, 4);
    CompetitorSpec sa;
    CHECK(fit_competitor(sa, e, Estimator::Sample).w.isApprox(Vector::Constant(4, 0.25)));
    CompetitorSpec ridge{Method::Ridge, 0.2};
    CHECK(testutil::sup_diff(fit_competitor(ridge, e, Estimator::Sample).w,
                             ridge_recentered(sample_vc(e), 0.2).w) < 1e-14);
    CompetitorSpec pc{Method::PcGrouping, 0.0, 2, 2};
    CHECK_THROWS_AS(fit_competitor(pc, e, Estimator::Sample), Error);
    CompetitorSpec bad{Method::Gec, 0.5};
    CHECK_THROWS_AS(bad.validate(), Error);
    CHECK(parse_method("pc") == Method::PcGrouping);
    CHECK_THROWS_AS(parse_method("bogus"), Error);
}
