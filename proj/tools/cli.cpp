#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "l2relax/backtest.hpp"
#include "l2relax/competitors.hpp"
#include "l2relax/csv.hpp"
#include "l2relax/error.hpp"
#include "l2relax/experiment.hpp"
#include "l2relax/simulation.hpp"

namespace l2relax::cli {

namespace {

using json = nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 20240601;

json to_json(const Vector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(std::isfinite(v(i)) ? json(v(i)) : json(nullptr));
    return a;
}

json to_json(const std::vector<double>& v) {
    json a = json::array();
    for (const double x : v) a.push_back(std::isfinite(x) ? json(x) : json(nullptr));
    return a;
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json solution_json(const WeightSolution& s, const std::vector<std::string>& labels) {
    json j;
    j["labels"] = labels;
    j["w"] = to_json(s.w);
    j["gamma"] = number_or_null(s.gamma);
    j["alpha"] = to_json(s.alpha);
    j["tau"] = s.tau;
    j["kkt"] = {{"sum_violation", s.kkt.sum_violation},
                {"supnorm_slack", s.kkt.supnorm_slack},
                {"stationarity_residual", s.kkt.stationarity_residual}};
    j["iterations"] = s.iterations;
    j["status"] = std::string(to_string(s.status));
    j["polished"] = s.polished;
    if (s.condition) j["condition"] = number_or_null(*s.condition);
    return j;
}

/// Options shared by every subcommand.
struct Common {
    std::optional<std::uint64_t> seed;
    int jobs = 1;
    std::string format = "json";
    std::string out_file;

    void add(CLI::App* app, const std::string& default_format) {
        format = default_format;
        app->add_option("--seed", seed, "Random seed (falls back to $L2RELAX_SEED)");
        app->add_option("--jobs", jobs, "Worker threads for replications (output does not depend on it)")
            ->check(CLI::PositiveNumber);
        app->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
        app->add_option("-o,--out", out_file, "Write output to FILE instead of stdout");
    }

    [[nodiscard]] std::uint64_t resolved_seed() const {
        if (seed) return *seed;
        if (const char* env = std::getenv("L2RELAX_SEED"); env != nullptr && *env != '\0') {
            char* end = nullptr;
            const unsigned long long v = std::strtoull(env, &end, 10);
            if (end == env || *end != '\0') fail(ErrorKind::Parse, "L2RELAX_SEED is not an unsigned integer");
            return v;
        }
        return kDefaultSeed;
    }
};

/// Writes to --out when given, else to the command's stream.
class Sink {
public:
    Sink(const std::string& file, std::ostream& fallback) {
        if (!file.empty()) {
            file_.open(file);
            if (!file_) fail(ErrorKind::Io, "cannot write " + file);
        }
        stream_ = file.empty() ? &fallback : &file_;
    }
    std::ostream& operator*() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

Estimator checked_estimator(const std::string& name) {
    const Estimator e = parse_estimator(name);
    if (e == Estimator::LwNonlinear)
        fail(ErrorKind::Unsupported,
             "estimator 'lw_nonlinear' (nonlinear shrinkage) is not implemented; use 'sample' or 'lw'");
    return e;
}

struct Input {
    CovEstimate cov;
    std::vector<std::string> labels;
};

Input load_input(const std::string& cov_file, const std::string& panel_file, const std::string& target,
                 Estimator est) {
    if (cov_file.empty() == panel_file.empty()) fail(ErrorKind::InvalidSpec, "give exactly one of --cov or --panel");
    Input in;
    if (!cov_file.empty()) {
        const LabeledMatrix m = read_csv(cov_file);
        in.cov = read_covariance_csv(cov_file);
        in.labels = m.labels;
    } else {
        const Panel p = read_panel_csv(panel_file, target);
        const Matrix x = p.target ? forecast_errors(p) : p.values;
        in.cov = estimate_covariance(x, est);
        in.labels = p.unit_labels;
    }
    return in;
}

void emit_weights_csv(std::ostream& out, const std::vector<std::string>& labels, const Vector& w) {
    write_csv(out, labels, w.transpose());
}

// --- solve -------------------------------------------------------------------

struct SolveCmd {
    Common common;
    std::string cov_file, panel_file, target = "y", estimator = "sample";
    double tau = 0.0;

    void add(CLI::App& root) {
        auto* app = root.add_subcommand("solve", "Solve the l2-relaxation problem for one tau");
        common.add(app, "json");
        auto* cov = app->add_option("--cov", cov_file, "Covariance matrix CSV");
        auto* panel = app->add_option("--panel", panel_file, "Panel CSV (forecasts plus target, or returns)");
        cov->excludes(panel);
        app->add_option("--target", target, "Target column name in the panel");
        app->add_option("--tau", tau, "Relaxation level tau >= 0")->required();
        app->add_option("--estimator", estimator, "Covariance estimator: sample | lw | lw_nonlinear");
    }

    int run(std::ostream& out) {
        const Input in = load_input(cov_file, panel_file, target, checked_estimator(estimator));
        const WeightSolution s = solve_l2_relaxation(in.cov, tau);
        Sink sink(common.out_file, out);
        if (common.format == "csv") {
            emit_weights_csv(*sink, in.labels, s.w);
        } else {
            json j = solution_json(s, in.labels);
            j["estimator"] = std::string(to_string(in.cov.estimator));
            if (in.cov.shrinkage_intensity) j["shrinkage_intensity"] = *in.cov.shrinkage_intensity;
            j["duality_gap"] = duality_gap(s, in.cov);
            *sink << j.dump(2) << '\n';
        }
        return s.status == SolveStatus::Optimal ? kOk : kNumerical;
    }
};

// --- combine -----------------------------------------------------------------

struct CombineCmd {
    Common common;
    std::string panel_file, target = "y", estimator = "sample", grid = "0.1:1:0.1", scheme = "kfold", method = "l2relax";
    int folds = 5;
    int blocks = 5;

    void add(CLI::App& root) {
        auto* app = root.add_subcommand("combine", "Cross-validated forecast combination on a panel CSV");
        common.add(app, "json");
        app->add_option("--panel", panel_file, "Panel CSV with forecasts and the target column")->required();
        app->add_option("--target", target, "Target column name");
        app->add_option("--estimator", estimator, "Covariance estimator: sample | lw");
        app->add_option("--grid", grid, "Tuning grid start:stop:step");
        app->add_option("--scheme", scheme, "Tuning scheme")->check(CLI::IsMember({"kfold", "oos"}));
        app->add_option("--method", method, "Estimator")->check(CLI::IsMember({"l2relax", "lasso", "ridge"}));
        app->add_option("--folds", folds, "Folds for k-fold CV")->check(CLI::Range(2, 1000));
        app->add_option("--blocks", blocks, "Blocks for out-of-sample evaluation")->check(CLI::Range(2, 1000));
    }

    int run(std::ostream& out) {
        const Estimator est = checked_estimator(estimator);
        const Panel p = read_panel_csv(panel_file, target);
        if (!p.target) fail(ErrorKind::MissingTarget, "panel has no '" + target + "' column");
        const TuningGrid g = TuningGrid::parse(grid);
        const Fitter fitter = method == "lasso" ? Fitter::Lasso : method == "ridge" ? Fitter::Ridge : Fitter::L2Relax;
        const FitFn fit = make_fit(fitter, est);
        TuningResult tr;
        if (scheme == "oos") {
            tr = cv_oos(p, g, fit, blocks);
        } else {
            RngStream rng(common.resolved_seed(), 0);
            tr = cv_kfold(p, g, fit, folds, rng);
        }
        const double tau = tr.chosen;
        const Vector w = fit(forecast_errors(p), std::span<const double>(&tau, 1)).front();
        Sink sink(common.out_file, out);
        if (common.format == "csv") {
            emit_weights_csv(*sink, p.unit_labels, w);
        } else {
            json j;
            j["method"] = method;
            j["estimator"] = std::string(to_string(est));
            j["scheme"] = std::string(to_string(tr.scheme));
            j["grid"] = g.values();
            j["scores"] = to_json(tr.scores);
            j["chosen_tau"] = tr.chosen;
            j["labels"] = p.unit_labels;
            j["w"] = to_json(w);
            *sink << j.dump(2) << '\n';
        }
        return kOk;
    }
};

// --- simulate ----------------------------------------------------------------

struct SimulateCmd {
    Common common;
    int dgp = 1;
    Eigen::Index t = 50, n = 100, k = 2;
    std::string snr = "low";
    double sigma_u = 5.0;
    std::optional<int> reps;
    bool full = false;
    std::string records_file;

    void add(CLI::App& root) {
        auto* app = root.add_subcommand("simulate", "Monte Carlo forecast-combination table");
        common.add(app, "csv");
        app->add_option("--dgp", dgp, "Data generating process 1, 2 or 3")->check(CLI::Range(1, 3));
        app->add_option("--T", t, "Training periods");
        app->add_option("--N", n, "Forecasters");
        app->add_option("--K", k, "Latent groups");
        app->add_option("--snr", snr, "Signal level: low (sigma_y = 1) or high (sigma_y = 0.1)")
            ->check(CLI::IsMember({"low", "high"}));
        app->add_option("--sigma-u", sigma_u, "Idiosyncratic noise sd");
        app->add_option("--reps", reps, "Replications (default 200, or 1000 with --full)")->check(CLI::PositiveNumber);
        app->add_flag("--full", full, "Run every DGP / SNR / size panel of the full table");
        app->add_option("--records", records_file, "Also write per-replication forecast errors to this CSV");
    }

    [[nodiscard]] ForecastExperimentConfig config(const DgpSpec& d) const {
        ForecastExperimentConfig cfg;
        cfg.dgp = d;
        cfg.reps = reps.value_or(full ? 1000 : 200);
        cfg.jobs = common.jobs;
        return cfg;
    }

    int run(std::ostream& out) {
        std::vector<DgpSpec> specs;
        if (full) {
            specs = full_forecast_panels(common.resolved_seed());
            for (auto& d : specs) d.sigma_u = sigma_u;
        } else {
            DgpSpec d;
            d.dgp = dgp;
            d.T = t;
            d.N = n;
            d.K = k;
            d.sigma_u = sigma_u;
            d.sigma_y = snr == "high" ? 0.1 : 1.0;
            d.seed = common.resolved_seed();
            d.validate();
            specs.push_back(d);
        }
        std::vector<ForecastExperimentResult> results;
        for (const auto& d : specs) results.push_back(run_forecast_experiment(config(d)));

        if (!records_file.empty()) {
            std::ofstream rf(records_file);
            if (!rf) fail(ErrorKind::Io, "cannot write " + records_file);
            rf << "dgp,snr,T,N,K,replication,estimator,error,chosen_tau\n";
            for (const auto& r : results) {
                const auto names = forecast_estimator_names(r.config);
                for (const auto& rec : r.records)
                    for (std::size_t e = 0; e < names.size(); ++e)
                        rf << r.config.dgp.dgp << ',' << (r.config.dgp.sigma_y == 1.0 ? "low" : "high") << ','
                           << r.config.dgp.T << ',' << r.config.dgp.N << ',' << r.config.dgp.K << ','
                           << rec.replication << ',' << names[e] << ',' << format_double(rec.error[e]) << ','
                           << format_double(rec.chosen_tau[e]) << '\n';
            }
        }

        Sink sink(common.out_file, out);
        if (common.format == "csv") {
            *sink << "dgp,snr,T,N,K,reps,estimator,msfe,mafe\n";
            for (const auto& r : results)
                for (const auto& row : r.rows)
                    *sink << r.config.dgp.dgp << ',' << (r.config.dgp.sigma_y == 1.0 ? "low" : "high") << ','
                          << r.config.dgp.T << ',' << r.config.dgp.N << ',' << r.config.dgp.K << ',' << r.config.reps
                          << ',' << row.estimator << ',' << format_double(row.msfe) << ','
                          << format_double(row.mafe) << '\n';
        } else {
            json panels = json::array();
            for (const auto& r : results) {
                json rows = json::array();
                for (const auto& row : r.rows)
                    rows.push_back({{"estimator", row.estimator}, {"msfe", row.msfe}, {"mafe", row.mafe}});
                panels.push_back({{"dgp", r.config.dgp.dgp},
                                  {"T", r.config.dgp.T},
                                  {"N", r.config.dgp.N},
                                  {"K", r.config.dgp.K},
                                  {"sigma_y", r.config.dgp.sigma_y},
                                  {"sigma_u", r.config.dgp.sigma_u},
                                  {"reps", r.config.reps},
                                  {"seed", r.config.dgp.seed},
                                  {"rows", rows}});
            }
            *sink << json{{"panels", panels}}.dump(2) << '\n';
        }
        return kOk;
    }
};

// --- backtest ----------------------------------------------------------------

struct BacktestCmd {
    Common common;
    std::string returns_file, method = "l2relax", estimator, grid = "0.1:1:0.1", sort = "size_bm",
                params_file, weights_file;
    Eigen::Index window = 60, t = 240, n = 100;
    int reps = 200;
    double gec_c = 2.0;

    void add(CLI::App& root) {
        auto* app = root.add_subcommand("backtest", "Rolling-window portfolio backtest");
        common.add(app, "json");
        app->add_option("--returns", returns_file, "Excess-return CSV (one backtest); omit to simulate");
        app->add_option("--method", method, "Portfolio rule for --returns")
            ->check(CLI::IsMember({"l2relax", "sa", "gec"}));
        app->add_option("--estimator", estimator,
                        "Covariance estimator: sample | lw (default: sample for --returns, lw for simulated GEC)");
        app->add_option("--grid", grid, "Tuning grid start:stop:step");
        app->add_option("--gec-c", gec_c, "Gross exposure bound c >= 1 for --method gec");
        app->add_option("--window", window, "Training window L")->check(CLI::Range(2, 100000));
        app->add_option("--weights-csv", weights_file, "Also write the weights history to this CSV");
        app->add_option("--sort", sort, "Parameter block for simulation")
            ->check(CLI::IsMember({"size_bm", "size_inv", "size_op"}));
        app->add_option("--params", params_file, "Parameter JSON (default: bundled ff5_params.json)");
        app->add_option("--reps", reps, "Simulation replications")->check(CLI::PositiveNumber);
        app->add_option("--T", t, "Simulated months");
        app->add_option("--N", n, "Simulated assets");
    }

    int run_single(std::ostream& out) {
        const LabeledMatrix m = read_csv(returns_file);
        if (estimator.empty()) estimator = "sample";
        FitFn fit;
        TuningGrid g({0.0});
        if (method == "sa") {
            fit = [](const Matrix& train, std::span<const double> gr) {
                return std::vector<Vector>(gr.size(), simple_average(train.cols()).w);
            };
        } else if (method == "gec") {
            fit = make_fit(Fitter::Gec, checked_estimator(estimator));
            g = TuningGrid({gec_c});
        } else {
            fit = make_fit(Fitter::L2Relax, checked_estimator(estimator));
            g = TuningGrid::parse(grid);
        }
        const BacktestReport rep = rolling_portfolio(m.values, window, fit, g, method);
        if (!weights_file.empty()) {
            std::ofstream wf(weights_file);
            if (!wf) fail(ErrorKind::Io, "cannot write " + weights_file);
            std::vector<std::string> labels = {"period", "tau"};
            labels.insert(labels.end(), m.labels.begin(), m.labels.end());
            Matrix rows(static_cast<Eigen::Index>(rep.weights_history.size()), m.values.cols() + 2);
            for (std::size_t i = 0; i < rep.weights_history.size(); ++i) {
                const auto& rb = rep.weights_history[i];
                rows(static_cast<Eigen::Index>(i), 0) = static_cast<double>(rb.period);
                rows(static_cast<Eigen::Index>(i), 1) = rb.tau;
                rows.row(static_cast<Eigen::Index>(i)).tail(m.values.cols()) = rb.w.transpose();
            }
            write_csv(wf, labels, rows);
        }
        json hist = json::array();
        for (const auto& rb : rep.weights_history) hist.push_back({{"period", rb.period}, {"tau", rb.tau}, {"w", to_json(rb.w)}});
        json j{{"method", rep.method},
               {"window", rep.window},
               {"labels", m.labels},
               {"realized_returns", to_json(rep.realized_returns)},
               {"sharpe", number_or_null(rep.sharpe)},
               {"sharpe_degenerate", rep.sharpe_degenerate},
               {"turnover", rep.turnover},
               {"weights_history", hist}};
        Sink sink(common.out_file, out);
        *sink << j.dump(2) << '\n';
        return rep.sharpe_degenerate ? kNumerical : kOk;
    }

    int run(std::ostream& out) {
        if (!returns_file.empty()) return run_single(out);
        PortfolioExperimentConfig cfg;
        const std::filesystem::path params = params_file.empty() ? default_data_dir() / "ff5_params.json" : std::filesystem::path(params_file);
        cfg.ff5.params = load_ff5_params(params, sort);
        cfg.ff5.N = n;
        cfg.ff5.T = t;
        cfg.ff5.seed = common.resolved_seed();
        cfg.window = window;
        cfg.reps = reps;
        cfg.jobs = common.jobs;
        cfg.grid = TuningGrid::parse(grid);
        if (!estimator.empty()) cfg.gec_estimator = checked_estimator(estimator);
        const PortfolioExperimentResult r = run_portfolio_experiment(cfg);
        Sink sink(common.out_file, out);
        if (common.format == "csv") {
            *sink << "sort,L,N,reps,method,mean_sharpe,mean_turnover\n";
            for (const auto& row : r.rows)
                *sink << sort << ',' << window << ',' << n << ',' << reps << ',' << row.method << ','
                      << format_double(row.mean_sharpe) << ',' << format_double(row.mean_turnover) << '\n';
        } else {
            json rows = json::array();
            for (const auto& row : r.rows)
                rows.push_back({{"method", row.method},
                                {"mean_sharpe", number_or_null(row.mean_sharpe)},
                                {"mean_turnover", row.mean_turnover}});
            *sink << json{{"sort", sort}, {"L", window}, {"N", n}, {"T", t}, {"reps", reps},
                          {"seed", cfg.ff5.seed}, {"rows", rows}}.dump(2)
                  << '\n';
        }
        return kOk;
    }
};

// --- path --------------------------------------------------------------------

struct PathCmd {
    Common common;
    std::string cov_file, panel_file, target = "y", estimator = "sample", grid;
    Eigen::Index t = 50, n = 100, k = 2;

    void add(CLI::App& root) {
        auto* app = root.add_subcommand("path", "Weights along a tau grid (plot data)");
        common.add(app, "csv");
        auto* cov = app->add_option("--cov", cov_file, "Covariance matrix CSV");
        auto* panel = app->add_option("--panel", panel_file, "Panel CSV");
        cov->excludes(panel);
        app->add_option("--target", target, "Target column name in the panel");
        app->add_option("--estimator", estimator, "Covariance estimator: sample | lw");
        app->add_option("--grid", grid, "Tuning grid start:stop:step (default 0:max(5, SA threshold):0.1)");
        app->add_option("--T", t, "Simulated periods when no input file is given");
        app->add_option("--N", n, "Simulated forecasters when no input file is given");
        app->add_option("--K", k, "Simulated groups when no input file is given");
    }

    int run(std::ostream& out) {
        const Estimator est = checked_estimator(estimator);
        Input in;
        if (cov_file.empty() && panel_file.empty()) {
            DgpSpec d;
            d.T = t;
            d.N = n;
            d.K = k;
            d.seed = common.resolved_seed();
            const Panel p = generate_dgp(d, 0).slice_rows(0, d.T);
            in.cov = estimate_covariance(forecast_errors(p), est);
            in.labels = p.unit_labels;
        } else {
            in = load_input(cov_file, panel_file, target, est);
        }
        TuningGrid g = grid.empty() ? TuningGrid({0.0}) : TuningGrid::parse(grid);
        if (grid.empty()) {
            const double step = 0.1;
            const double top = std::max(5.0, std::ceil(simple_average_threshold(in.cov.sigma) / step) * step);
            g = TuningGrid::range(0.0, top, step);
        }
        const std::vector<WeightSolution> path = weight_path(in.cov, g.span());
        Sink sink(common.out_file, out);
        if (common.format == "csv") {
            std::vector<std::string> labels = {"tau"};
            labels.insert(labels.end(), in.labels.begin(), in.labels.end());
            Matrix rows(static_cast<Eigen::Index>(path.size()), in.cov.dim() + 1);
            for (std::size_t i = 0; i < path.size(); ++i) {
                rows(static_cast<Eigen::Index>(i), 0) = path[i].tau;
                rows.row(static_cast<Eigen::Index>(i)).tail(in.cov.dim()) = path[i].w.transpose();
            }
            write_csv(*sink, labels, rows);
        } else {
            json w = json::array();
            for (const auto& s : path) w.push_back(to_json(s.w));
            *sink << json{{"labels", in.labels}, {"tau", g.values()}, {"weights", w}}.dump(2) << '\n';
        }
        for (const auto& s : path)
            if (s.status != SolveStatus::Optimal) return kNumerical;
        return kOk;
    }
};

// --- biasvar -----------------------------------------------------------------

struct BiasVarCmd {
    Common common;
    int reps = 1000;
    std::string grid = "0:0.1:0.005";

    void add(CLI::App& root) {
        auto* app = root.add_subcommand("biasvar", "Bias-variance sweep of the first weight over tau");
        common.add(app, "csv");
        app->add_option("--reps", reps, "Replications")->check(CLI::Range(2, 100000000));
        app->add_option("--grid", grid, "Tuning grid start:stop:step");
    }

    int run(std::ostream& out) {
        const RngStream rng(common.resolved_seed(), 0);
        const auto pts = bias_variance_sweep(rng, TuningGrid::parse(grid), reps, {}, common.jobs);
        Sink sink(common.out_file, out);
        if (common.format == "csv") {
            Matrix m(static_cast<Eigen::Index>(pts.size()), 5);
            for (std::size_t i = 0; i < pts.size(); ++i)
                m.row(static_cast<Eigen::Index>(i)) << pts[i].tau, pts[i].bias2_w1, pts[i].var_w1, pts[i].mse_w1,
                    pts[i].mse_yhat;
            write_csv(*sink, {"tau", "bias2_w1", "var_w1", "mse_w1", "mse_yhat"}, m);
        } else {
            json rows = json::array();
            for (const auto& p : pts)
                rows.push_back({{"tau", p.tau},
                                {"bias2_w1", p.bias2_w1},
                                {"var_w1", p.var_w1},
                                {"mse_w1", p.mse_w1},
                                {"mse_yhat", p.mse_yhat}});
            *sink << json{{"reps", reps}, {"rows", rows}}.dump(2) << '\n';
        }
        return kOk;
    }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Forecast combination and portfolio weights by l2-relaxation", "l2relax"};
    app.require_subcommand(1);
    SolveCmd solve;
    CombineCmd combine;
    SimulateCmd simulate;
    BacktestCmd backtest;
    PathCmd path;
    BiasVarCmd biasvar;
    solve.add(app);
    combine.add(app);
    simulate.add(app);
    backtest.add(app);
    path.add(app);
    biasvar.add(app);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) rev.pop_back();
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        const auto* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        if (name == "solve") return solve.run(out);
        if (name == "combine") return combine.run(out);
        if (name == "simulate") return simulate.run(out);
        if (name == "backtest") return backtest.run(out);
        if (name == "path") return path.run(out);
        if (name == "biasvar") return biasvar.run(out);
        err << "error: unknown command " << name << '\n';
        return kUsage;
    } catch (const Error& e) {
        err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return is_usage_error(e.kind()) ? kUsage : kNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kNumerical;
    }
}

}  // namespace l2relax::cli
