#include <doctest.h>

#include "helpers.hpp"
#include "l2relax/backtest.hpp"
#include "l2relax/competitors.hpp"
#include "l2relax/error.hpp"

using namespace l2relax;

namespace {

Vector vec(std::initializer_list<double> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (const double x : xs) v(i++) = x;
    return v;
}

const FitFn kSimpleAverage = [](const Matrix& train, std::span<const double> grid) {
    return std::vector<Vector>(grid.size(), simple_average(train.cols()).w);
};

}  // namespace

TEST_CASE("sharpe_ratio") {
    CHECK(sharpe_ratio(vec({1, -1})) == 0.0);
    CHECK(sharpe_ratio(vec({2, 4})) == doctest::Approx(3.0 / std::sqrt(2.0)));
    RngStream rng(51, 0);
    const Vector r = standard_normal(rng, 30, 1).col(0).array() + 0.2;
    CHECK(sharpe_ratio(r * 7.5) == doctest::Approx(sharpe_ratio(r)).epsilon(1e-12));
    CHECK_THROWS_AS(sharpe_ratio(vec({1})), Error);
    CHECK_THROWS_AS(sharpe_ratio(vec({2, 2, 2})), Error);
}

TEST_CASE("msfe and mafe") {
    const Vector y = vec({1, 2});
    CHECK(msfe(y, y) == 0.0);
    CHECK(mafe(y, y) == 0.0);
    const Vector yhat = vec({0, 3});
    CHECK(msfe(y, yhat, 0.0) == 1.0);
    CHECK(msfe(y, yhat, 0.5) == doctest::Approx(0.75));
    CHECK(mafe(y, yhat, 0.0) == 1.0);
    CHECK(mafe(y, yhat, 1.0) == doctest::Approx(0.20212).epsilon(1e-4));
    CHECK_THROWS_AS(msfe(y, vec({1})), Error);
}

TEST_CASE("turnover") {
    std::vector<Rebalance> h;
    CHECK(turnover(h) == 0.0);
    h.push_back({0, vec({0.5, 0.5}), 0.1});
    h.push_back({12, vec({1.0, 0.0}), 0.1});
    h.push_back({24, vec({1.0, 0.0}), 0.1});
    CHECK(turnover(h) == doctest::Approx(0.5));
}

TEST_CASE("rolling_portfolio with a single asset") {
    RngStream rng(52, 0);
    const Matrix r = standard_normal(rng, 40, 1);
    const BacktestReport rep = rolling_portfolio(r, 10, kSimpleAverage, TuningGrid({0.0}), "sa");
    CHECK(rep.realized_returns.size() == 30);
    CHECK(max_abs(rep.realized_returns - r.col(0).tail(30)) == 0.0);
    for (const auto& rb : rep.weights_history) CHECK(rb.w(0) == 1.0);
    CHECK(rep.weights_history.size() == 3);
    CHECK(rep.weights_history[1].period == 22);
    CHECK(rep.sharpe == doctest::Approx(sharpe_ratio(r.col(0).tail(30))));
}

TEST_CASE("rolling_portfolio degenerate Sharpe on constant returns") {
    Matrix r(30, 3);
    for (int i = 0; i < 3; ++i) r.col(i).setConstant(1.0 + i);
    const FitFn fit = make_fit(Fitter::Gec, Estimator::Sample);
    CHECK_THROWS_AS(rolling_portfolio(r, 12, fit, TuningGrid({1.0, 2.0})), Error);
    const BacktestReport rep = rolling_portfolio(r, 12, kSimpleAverage, TuningGrid({0.0}));
    CHECK(rep.sharpe_degenerate);
    CHECK(std::isnan(rep.sharpe));
}

TEST_CASE("rolling_portfolio final partial stretch") {
    RngStream rng(53, 0);
    const Matrix r = standard_normal(rng, 60 + 25, 4) + Matrix::Constant(85, 4, 0.1);
    const BacktestReport rep =
        rolling_portfolio(r, 60, make_fit(Fitter::L2Relax, Estimator::Sample), TuningGrid::default_grid(), "l2");
    CHECK(rep.realized_returns.size() == 25);
    REQUIRE(rep.weights_history.size() == 3);
    CHECK(rep.weights_history[2].period == 84);
    CHECK(rep.weights_history[2].tau == rep.weights_history[1].tau);
    for (const auto& rb : rep.weights_history) CHECK(std::abs(rb.w.sum() - 1.0) < 1e-9);
    CHECK_THROWS_AS(rolling_portfolio(r.topRows(60), 60, kSimpleAverage, TuningGrid({0.0})), Error);
}

TEST_CASE("rolling_portfolio fits only on the training window") {
    RngStream rng(54, 0);
    const Matrix r = standard_normal(rng, 50, 3);
    std::vector<Eigen::Index> starts;
    const FitFn spy = [&](const Matrix& train, std::span<const double> grid) {
        REQUIRE(train.rows() == 20);
        Eigen::Index found = -1;
        for (Eigen::Index s = 0; s + 20 <= r.rows(); ++s)
            if (train == r.middleRows(s, 20)) found = s;
        REQUIRE(found >= 0);
        starts.push_back(found);
        return std::vector<Vector>(grid.size(), simple_average(train.cols()).w);
    };
    const BacktestReport rep = rolling_portfolio(r, 20, spy, TuningGrid({0.1, 0.2}));
    CHECK(starts == std::vector<Eigen::Index>{0, 12, 24});
    for (std::size_t k = 0; k < rep.weights_history.size(); ++k)
        CHECK(rep.weights_history[k].period == starts[k] + 20);
}
