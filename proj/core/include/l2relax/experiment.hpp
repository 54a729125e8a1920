#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "l2relax/backtest.hpp"
#include "l2relax/simulation.hpp"

namespace l2relax {

/// Forecast-combination Monte Carlo for one DGP setting.
struct ForecastExperimentConfig {
    DgpSpec dgp;
    int reps = 200;
    int jobs = 1;
    TuningGrid grid = TuningGrid::default_grid();
    int folds = 5;
    int blocks = 5;
    /// Covariance used by ℓ2-relax⁰, Lasso and Ridge.
    Estimator competitor_estimator = Estimator::LwLinear;
    std::vector<int> pc_q = {5, 10, 20};

    /// k-fold CV for DGPs 1 and 3, chronological blocks for DGP 2.
    [[nodiscard]] Scheme scheme() const noexcept { return dgp.dgp == 2 ? Scheme::Oos : Scheme::KFold; }
};

/// Column labels, in output order.
std::vector<std::string> forecast_estimator_names(const ForecastExperimentConfig& cfg);

struct ForecastRecord {
    std::uint64_t replication = 0;
    std::vector<double> error;         // y_{T+2} − ŵ′f_{T+1}, one per estimator
    std::vector<double> chosen_tau;    // NaN for untuned estimators
};

struct ForecastRow {
    std::string estimator;
    double msfe = 0.0;  // σ_y² subtracted
    double mafe = 0.0;  // σ_y√(2/π) subtracted
};

struct ForecastExperimentResult {
    ForecastExperimentConfig config;
    std::vector<ForecastRow> rows;
    std::vector<ForecastRecord> records;
};

ForecastRecord run_forecast_replication(const ForecastExperimentConfig& cfg, std::uint64_t replication);
ForecastExperimentResult run_forecast_experiment(const ForecastExperimentConfig& cfg);

/// Every (DGP, SNR, T/N/K) combination of the full forecast table.
std::vector<DgpSpec> full_forecast_panels(std::uint64_t seed);

/// Rolling-window portfolio Monte Carlo on simulated five-factor returns.
struct PortfolioExperimentConfig {
    Ff5Spec ff5;
    Eigen::Index window = 60;
    int reps = 200;
    int jobs = 1;
    TuningGrid grid = TuningGrid::default_grid();
    std::vector<double> gec_c = {1.0, 2.0};
    /// Covariance used by GEC.
    Estimator gec_estimator = Estimator::LwLinear;
};

std::vector<std::string> portfolio_method_names(const PortfolioExperimentConfig& cfg);

struct PortfolioRecord {
    std::uint64_t replication = 0;
    std::vector<double> sharpe;  // one per method
    std::vector<double> turnover;
};

struct PortfolioRow {
    std::string method;
    double mean_sharpe = 0.0;
    double mean_turnover = 0.0;
};

struct PortfolioExperimentResult {
    PortfolioExperimentConfig config;
    std::vector<PortfolioRow> rows;
    std::vector<PortfolioRecord> records;
};

PortfolioRecord run_portfolio_replication(const PortfolioExperimentConfig& cfg, std::uint64_t replication);
PortfolioExperimentResult run_portfolio_experiment(const PortfolioExperimentConfig& cfg);

}  // namespace l2relax
