#include "l2relax/backtest.hpp"

#include <cmath>
#include <numbers>

#include "l2relax/error.hpp"

namespace l2relax {

double sharpe_ratio(const Vector& r) {
    const Eigen::Index n = r.size();
    if (n < 2) fail(ErrorKind::DegenerateSharpe, "Sharpe ratio needs at least 2 returns");
    const double mean = r.mean();
    const double var = (r.array() - mean).square().sum() / static_cast<double>(n - 1);
    const double scale = std::max(1.0, r.cwiseAbs().maxCoeff());
    if (!(var > 1e-28 * scale * scale)) fail(ErrorKind::DegenerateSharpe, "Sharpe ratio of zero-variance returns");
    return mean / std::sqrt(var);
}

namespace {

void check_lengths(const Vector& a, const Vector& b, const char* what) {
    if (a.size() != b.size()) fail(ErrorKind::ContractViolation, std::string(what) + ": length mismatch");
    if (a.size() < 1) fail(ErrorKind::ContractViolation, std::string(what) + ": empty input");
}

}  // namespace

double msfe(const Vector& y_true, const Vector& y_hat, std::optional<double> sigma_y) {
    check_lengths(y_true, y_hat, "msfe");
    CompensatedSum acc;
    for (Eigen::Index i = 0; i < y_true.size(); ++i) acc.add((y_true(i) - y_hat(i)) * (y_true(i) - y_hat(i)));
    const double m = acc.value() / static_cast<double>(y_true.size());
    return sigma_y ? m - *sigma_y * *sigma_y : m;
}

double mafe(const Vector& y_true, const Vector& y_hat, std::optional<double> sigma_y) {
    check_lengths(y_true, y_hat, "mafe");
    CompensatedSum acc;
    for (Eigen::Index i = 0; i < y_true.size(); ++i) acc.add(std::abs(y_true(i) - y_hat(i)));
    const double m = acc.value() / static_cast<double>(y_true.size());
    return sigma_y ? m - *sigma_y * std::sqrt(2.0 / std::numbers::pi) : m;
}

double turnover(const std::vector<Rebalance>& history) {
    if (history.size() < 2) return 0.0;
    double sum = 0.0;
    for (std::size_t k = 1; k < history.size(); ++k) sum += (history[k].w - history[k - 1].w).lpNorm<1>();
    return sum / static_cast<double>(history.size() - 1);
}

BacktestReport rolling_portfolio(const Matrix& returns, Eigen::Index window, const FitFn& fit, const TuningGrid& grid,
                                 std::string method, Eigen::Index step) {
    const Eigen::Index t_len = returns.rows();
    if (window < 2) fail(ErrorKind::InvalidSpec, "rolling_portfolio: window must be >= 2");
    if (step < 2) fail(ErrorKind::InvalidSpec, "rolling_portfolio: step must be >= 2");
    if (t_len < window + step) fail(ErrorKind::InsufficientData, "rolling_portfolio: need T >= L + 12");

    BacktestReport rep;
    rep.method = std::move(method);
    rep.window = window;
    std::vector<double> realized;
    realized.reserve(static_cast<std::size_t>(t_len - window));
    std::optional<double> prev_tau;

    for (Eigen::Index s = 0; s + window < t_len; s += step) {
        const Eigen::Index hold = std::min(step, t_len - s - window);
        Rebalance rb;
        rb.period = s + window;
        if (hold >= 2) {
            const TuningResult tr = sharpe_validate(returns, grid, fit, window, hold, s);
            rb.tau = tr.chosen;
            rb.w = tr.chosen_weights;
        } else {
            const double tau = *prev_tau;
            const std::vector<Vector> ws = fit(returns.middleRows(s, window), std::span<const double>(&tau, 1));
            if (ws.size() != 1 || ws.front().size() != returns.cols())
                fail(ErrorKind::ContractViolation, "fit callback returned malformed weights");
            rb.tau = tau;
            rb.w = ws.front();
        }
        prev_tau = rb.tau;
        const Vector r = returns.middleRows(rb.period, hold) * rb.w;
        realized.insert(realized.end(), r.data(), r.data() + r.size());
        rep.weights_history.push_back(std::move(rb));
    }

    rep.realized_returns = Eigen::Map<const Vector>(realized.data(), static_cast<Eigen::Index>(realized.size()));
    try {
        rep.sharpe = sharpe_ratio(rep.realized_returns);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::DegenerateSharpe) throw;
        rep.sharpe = std::numeric_limits<double>::quiet_NaN();
        rep.sharpe_degenerate = true;
    }
    rep.turnover = turnover(rep.weights_history);
    return rep;
}

}  // namespace l2relax
