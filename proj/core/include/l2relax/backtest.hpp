#pragma once

#include <optional>
#include <string>
#include <vector>

#include "l2relax/tuning.hpp"

namespace l2relax {

/// mean(r)/sd(r) with divisor n − 1, per period, no annualisation.
/// Throws DegenerateSharpe for n < 2 or zero variance.
double sharpe_ratio(const Vector& r);

/// Mean squared error, minus σ_y² when σ_y is supplied.
double msfe(const Vector& y_true, const Vector& y_hat, std::optional<double> sigma_y = std::nullopt);
/// Mean absolute error, minus σ_y√(2/π) when σ_y is supplied.
double mafe(const Vector& y_true, const Vector& y_hat, std::optional<double> sigma_y = std::nullopt);

struct Rebalance {
    Eigen::Index period = 0;  // first held-out row the weights apply to
    Vector w;
    double tau = 0.0;
};

struct BacktestReport {
    std::string method;
    Eigen::Index window = 0;
    Vector realized_returns;
    double sharpe = 0.0;
    bool sharpe_degenerate = false;
    std::vector<Rebalance> weights_history;
    double turnover = 0.0;  // mean ℓ1 change between consecutive rebalances (diagnostic)
};

/// Mean ‖w_k − w_{k−1}‖₁ over consecutive rebalances; 0 with fewer than two.
double turnover(const std::vector<Rebalance>& history);

/// Rolling evaluation: fit on [s, s + L), choose τ by the Sharpe ratio on the
/// next `step` rows, hold those weights over the same rows, then advance by
/// `step`. A final stretch shorter than `step` is still evaluated; with a
/// single row left the previous τ is reused.
BacktestReport rolling_portfolio(const Matrix& returns, Eigen::Index window, const FitFn& fit, const TuningGrid& grid,
                                 std::string method = {}, Eigen::Index step = 12);

}  // namespace l2relax
