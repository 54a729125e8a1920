#include "l2relax/experiment.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "l2relax/competitors.hpp"
#include "l2relax/error.hpp"
#include "l2relax/parallel.hpp"

namespace l2relax {

namespace {

constexpr std::uint64_t kTagFolds = 100;
constexpr std::uint64_t kTagPc = 200;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Tuned {
    Vector w;
    double tau;
};

Tuned tune_and_fit(const ForecastExperimentConfig& cfg, const Panel& train, const FitFn& fit, const RngStream& root) {
    TuningResult tr;
    if (cfg.scheme() == Scheme::Oos) {
        tr = cv_oos(train, cfg.grid, fit, cfg.blocks);
    } else {
        RngStream folds = root.substream(kTagFolds);
        tr = cv_kfold(train, cfg.grid, fit, cfg.folds, folds);
    }
    const double tau = tr.chosen;
    std::vector<Vector> ws = fit(forecast_errors(train), std::span<const double>(&tau, 1));
    return {std::move(ws.front()), tau};
}

}  // namespace

std::vector<std::string> forecast_estimator_names(const ForecastExperimentConfig& cfg) {
    std::vector<std::string> names = {"oracle", "sa", "l2relax0", "lasso", "ridge"};
    for (const int q : cfg.pc_q) names.push_back("pc_q" + std::to_string(q));
    names.emplace_back("l2relax_sample");
    names.emplace_back("l2relax_lw");
    return names;
}

ForecastRecord run_forecast_replication(const ForecastExperimentConfig& cfg, std::uint64_t replication) {
    const DgpSpec& spec = cfg.dgp;
    const Panel full = generate_dgp(spec, replication);
    const Panel train = full.slice_rows(0, spec.T);
    const Vector f_next = full.values.row(spec.T).transpose();
    const double y_next = (*full.target)(spec.T);
    const Matrix errors = forecast_errors(train);
    const RngStream root(spec.seed, replication);

    ForecastRecord rec;
    rec.replication = replication;
    auto push = [&](const Vector& w, double tau) {
        rec.error.push_back(y_next - w.dot(f_next));
        rec.chosen_tau.push_back(tau);
    };

    push(oracle_membership_weights(errors, GroupStructure::equal_blocks(spec.N, spec.K)).w, kNaN);
    push(simple_average(spec.N).w, kNaN);
    const CovEstimate comp_cov = estimate_covariance(errors, cfg.competitor_estimator);
    push(solve_l2_relaxation(comp_cov, 0.0).w, 0.0);

    const Tuned lasso = tune_and_fit(cfg, train, make_fit(Fitter::Lasso, cfg.competitor_estimator), root);
    push(lasso.w, lasso.tau);
    const Tuned ridge = tune_and_fit(cfg, train, make_fit(Fitter::Ridge, cfg.competitor_estimator), root);
    push(ridge.w, ridge.tau);

    for (const int q : cfg.pc_q) {
        const RngStream pc_rng = root.substream(kTagPc + static_cast<std::uint64_t>(q));
        push(pc_grouping_weights(errors, static_cast<int>(spec.K), q, pc_rng).solution.w, kNaN);
    }

    const Tuned l2s = tune_and_fit(cfg, train, make_fit(Fitter::L2Relax, Estimator::Sample), root);
    push(l2s.w, l2s.tau);
    const Tuned l2lw = tune_and_fit(cfg, train, make_fit(Fitter::L2Relax, Estimator::LwLinear), root);
    push(l2lw.w, l2lw.tau);
    return rec;
}

ForecastExperimentResult run_forecast_experiment(const ForecastExperimentConfig& cfg) {
    cfg.dgp.validate();
    if (cfg.reps < 1) fail(ErrorKind::InvalidSpec, "reps must be >= 1");
    ForecastExperimentResult out;
    out.config = cfg;
    out.records.resize(static_cast<std::size_t>(cfg.reps));
    parallel_for(out.records.size(), cfg.jobs,
                 [&](std::size_t r) { out.records[r] = run_forecast_replication(cfg, r); });

    const std::vector<std::string> names = forecast_estimator_names(cfg);
    const double sy = cfg.dgp.sigma_y;
    for (std::size_t e = 0; e < names.size(); ++e) {
        CompensatedSum sq;
        CompensatedSum ab;
        for (const ForecastRecord& rec : out.records) {
            sq.add(rec.error[e] * rec.error[e]);
            ab.add(std::abs(rec.error[e]));
        }
        ForecastRow row;
        row.estimator = names[e];
        row.msfe = sq.value() / cfg.reps - sy * sy;
        row.mafe = ab.value() / cfg.reps - sy * std::sqrt(2.0 / std::numbers::pi);
        out.rows.push_back(std::move(row));
    }
    return out;
}

std::vector<DgpSpec> full_forecast_panels(std::uint64_t seed) {
    std::vector<DgpSpec> out;
    const Eigen::Index sizes[3][3] = {{50, 100, 2}, {100, 200, 4}, {200, 300, 6}};
    for (int dgp = 1; dgp <= 3; ++dgp)
        for (const double sy : {1.0, 0.1})
            for (const auto& s : sizes) {
                DgpSpec d;
                d.dgp = dgp;
                d.T = s[0];
                d.N = s[1];
                d.K = s[2];
                d.sigma_y = sy;
                d.seed = seed;
                out.push_back(d);
            }
    return out;
}

std::vector<std::string> portfolio_method_names(const PortfolioExperimentConfig& cfg) {
    std::vector<std::string> names = {"sa"};
    for (const double c : cfg.gec_c) {
        std::string label = std::to_string(c);
        label.erase(label.find_last_not_of('0') + 1);
        if (label.back() == '.') label.pop_back();
        names.push_back("gec_c" + label);
    }
    names.emplace_back("l2relax_sample");
    names.emplace_back("l2relax_lw");
    return names;
}

PortfolioRecord run_portfolio_replication(const PortfolioExperimentConfig& cfg, std::uint64_t replication) {
    const Matrix returns = generate_ff5(cfg.ff5, replication);
    PortfolioRecord rec;
    rec.replication = replication;
    auto run = [&](const FitFn& fit, const TuningGrid& grid) {
        const BacktestReport rep = rolling_portfolio(returns, cfg.window, fit, grid);
        rec.sharpe.push_back(rep.sharpe);
        rec.turnover.push_back(rep.turnover);
    };
    const FitFn sa = [](const Matrix& train, std::span<const double> grid) {
        return std::vector<Vector>(grid.size(), simple_average(train.cols()).w);
    };
    run(sa, TuningGrid({0.0}));
    for (const double c : cfg.gec_c) run(make_fit(Fitter::Gec, cfg.gec_estimator), TuningGrid({c}));
    run(make_fit(Fitter::L2Relax, Estimator::Sample), cfg.grid);
    run(make_fit(Fitter::L2Relax, Estimator::LwLinear), cfg.grid);
    return rec;
}

PortfolioExperimentResult run_portfolio_experiment(const PortfolioExperimentConfig& cfg) {
    cfg.ff5.validate();
    if (cfg.reps < 1) fail(ErrorKind::InvalidSpec, "reps must be >= 1");
    PortfolioExperimentResult out;
    out.config = cfg;
    out.records.resize(static_cast<std::size_t>(cfg.reps));
    parallel_for(out.records.size(), cfg.jobs,
                 [&](std::size_t r) { out.records[r] = run_portfolio_replication(cfg, r); });
    const std::vector<std::string> names = portfolio_method_names(cfg);
    for (std::size_t m = 0; m < names.size(); ++m) {
        CompensatedSum s;
        CompensatedSum t;
        for (const PortfolioRecord& rec : out.records) {
            s.add(rec.sharpe[m]);
            t.add(rec.turnover[m]);
        }
        out.rows.push_back({names[m], s.value() / cfg.reps, t.value() / cfg.reps});
    }
    return out;
}

}  // namespace l2relax
