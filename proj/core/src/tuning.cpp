#include "l2relax/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "l2relax/backtest.hpp"
#include "l2relax/competitors.hpp"
#include "l2relax/error.hpp"

namespace l2relax {

TuningGrid::TuningGrid(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) fail(ErrorKind::InvalidSpec, "tuning grid is empty");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]) || values_[i] < 0.0)
            fail(ErrorKind::InvalidSpec, "tuning grid values must be finite and >= 0");
        if (i > 0 && !(values_[i] > values_[i - 1])) fail(ErrorKind::InvalidSpec, "tuning grid must be strictly ascending");
    }
}

TuningGrid TuningGrid::range(double start, double stop, double step) {
    if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step))
        fail(ErrorKind::InvalidSpec, "grid bounds must be finite");
    if (stop < start) fail(ErrorKind::InvalidSpec, "grid stop must be >= start");
    if (!(step > 0.0)) {
        if (stop == start) return TuningGrid({start});
        fail(ErrorKind::InvalidSpec, "grid step must be positive");
    }
    constexpr double tol = 1e-12;
    auto count = static_cast<long long>(std::floor((stop - start) / step));
    if (start + static_cast<double>(count + 1) * step <= stop + tol) ++count;
    if (count > 10'000'000) fail(ErrorKind::InvalidSpec, "grid has too many points");
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(count + 1));
    for (long long i = 0; i <= count; ++i) {
        double x = start + static_cast<double>(i) * step;
        if (std::abs(x - stop) <= tol) x = stop;
        v.push_back(x);
    }
    return TuningGrid(std::move(v));
}

namespace {

double parse_double(std::string_view s) {
    const std::string str(s);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(str, &used);
    } catch (const std::exception&) {
        fail(ErrorKind::Parse, "cannot parse number '" + str + "'");
    }
    if (used != str.size()) fail(ErrorKind::Parse, "cannot parse number '" + str + "'");
    return v;
}

}  // namespace

TuningGrid TuningGrid::parse(std::string_view text) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = text.find(':', pos);
        parts.push_back(text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    if (parts.size() == 1) return TuningGrid({parse_double(parts[0])});
    if (parts.size() != 3) fail(ErrorKind::Parse, "grid must look like start:stop:step");
    return range(parse_double(parts[0]), parse_double(parts[1]), parse_double(parts[2]));
}

std::string_view to_string(Scheme s) noexcept {
    switch (s) {
        case Scheme::KFold: return "kfold5";
        case Scheme::Oos: return "oos";
        case Scheme::SharpeRolling: return "sharpe_rolling";
    }
    return "unknown";
}

FitFn make_fit(Fitter fitter, Estimator estimator, const RelaxationOptions& opts) {
    return [fitter, estimator, opts](const Matrix& train, std::span<const double> grid) {
        const CovEstimate cov = estimate_covariance(train, estimator);
        std::vector<Vector> out;
        out.reserve(grid.size());
        switch (fitter) {
            case Fitter::L2Relax:
                for (auto& s : weight_path(cov, grid, opts)) out.push_back(std::move(s.w));
                break;
            case Fitter::Lasso:
                for (const double t : grid) out.push_back(lasso_recentered(cov, t, opts.qp).w);
                break;
            case Fitter::Ridge:
                for (const double t : grid) out.push_back(ridge_recentered(cov, t).w);
                break;
            case Fitter::Gec:
                for (const double c : grid) out.push_back(gec_weights(cov, c, opts.qp).w);
                break;
        }
        return out;
    };
}

std::size_t select_min_score(const std::vector<double>& scores) {
    if (scores.empty()) fail(ErrorKind::ContractViolation, "select_min_score: no scores");
    const double best = *std::min_element(scores.begin(), scores.end());
    const double tol = 1e-12 * (1.0 + std::abs(best));
    std::size_t idx = 0;
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (scores[i] <= best + tol) idx = i;
    return idx;
}

std::vector<int> kfold_assignment(Eigen::Index periods, int folds, RngStream& rng) {
    if (folds < 2) fail(ErrorKind::InvalidSpec, "k-fold CV needs at least 2 folds");
    if (periods < folds) fail(ErrorKind::InsufficientData, "k-fold CV needs T >= folds");
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(periods));
    for (Eigen::Index t = 0; t < periods; ++t) perm[static_cast<std::size_t>(t)] = t;
    rng.shuffle(perm.begin(), perm.end());
    const std::vector<Eigen::Index> bounds = block_bounds(periods, folds);
    std::vector<int> label(static_cast<std::size_t>(periods));
    for (int f = 0; f < folds; ++f)
        for (Eigen::Index j = bounds[static_cast<std::size_t>(f)]; j < bounds[static_cast<std::size_t>(f) + 1]; ++j)
            label[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])] = f;
    return label;
}

std::vector<Eigen::Index> block_bounds(Eigen::Index periods, int blocks) {
    if (blocks < 1) fail(ErrorKind::InvalidSpec, "need at least one block");
    const Eigen::Index base = periods / blocks;
    const Eigen::Index extra = periods % blocks;
    std::vector<Eigen::Index> b(static_cast<std::size_t>(blocks) + 1, 0);
    for (int k = 0; k < blocks; ++k) b[static_cast<std::size_t>(k) + 1] = b[static_cast<std::size_t>(k)] + base + (k < extra ? 1 : 0);
    return b;
}

namespace {

void check_fit_output(const std::vector<Vector>& ws, std::size_t grid_size, Eigen::Index n) {
    if (ws.size() != grid_size) fail(ErrorKind::ContractViolation, "fit callback returned the wrong number of weight vectors");
    for (const Vector& w : ws)
        if (w.size() != n) fail(ErrorKind::ContractViolation, "fit callback returned weights of the wrong length");
}

Matrix take_rows(const Matrix& x, const std::vector<Eigen::Index>& rows) {
    Matrix out(static_cast<Eigen::Index>(rows.size()), x.cols());
    for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = x.row(rows[r]);
    return out;
}

/// Accumulate Σ_t (w′e_t)² for each grid weight vector; 1′w = 1 makes w′e_t the combined forecast error.
void accumulate_sq(const Matrix& test, const std::vector<Vector>& ws, std::vector<CompensatedSum>& acc) {
    for (std::size_t g = 0; g < ws.size(); ++g) {
        const Vector e = test * ws[g];
        for (Eigen::Index t = 0; t < e.size(); ++t) acc[g].add(e(t) * e(t));
    }
}

TuningResult finalize(const TuningGrid& grid, std::vector<double> scores, Scheme scheme) {
    for (const double s : scores)
        if (!std::isfinite(s)) fail(ErrorKind::DegenerateVariance, "tuning produced a non-finite score");
    TuningResult r;
    r.chosen_index = select_min_score(scores);
    r.chosen = grid[r.chosen_index];
    r.scores = std::move(scores);
    r.scheme = scheme;
    return r;
}

}  // namespace

TuningResult cv_kfold(const Panel& panel, const TuningGrid& grid, const FitFn& fit, int folds, RngStream& rng) {
    const Matrix errors = forecast_errors(panel);
    const Eigen::Index t_len = errors.rows();
    const std::vector<int> label = kfold_assignment(t_len, folds, rng);
    std::vector<CompensatedSum> acc(grid.size());
    for (int f = 0; f < folds; ++f) {
        std::vector<Eigen::Index> train_rows;
        std::vector<Eigen::Index> test_rows;
        for (Eigen::Index t = 0; t < t_len; ++t)
            (label[static_cast<std::size_t>(t)] == f ? test_rows : train_rows).push_back(t);
        if (train_rows.size() < 2) fail(ErrorKind::InsufficientData, "k-fold CV: training fold has fewer than 2 periods");
        const std::vector<Vector> ws = fit(take_rows(errors, train_rows), grid.span());
        check_fit_output(ws, grid.size(), errors.cols());
        accumulate_sq(take_rows(errors, test_rows), ws, acc);
    }
    std::vector<double> scores(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) scores[g] = acc[g].value() / static_cast<double>(t_len);
    return finalize(grid, std::move(scores), Scheme::KFold);
}

TuningResult cv_oos(const Panel& panel, const TuningGrid& grid, const FitFn& fit, int blocks) {
    if (blocks < 2) fail(ErrorKind::InvalidSpec, "out-of-sample CV needs at least 2 blocks");
    const Matrix errors = forecast_errors(panel);
    const Eigen::Index t_len = errors.rows();
    if (t_len < 2 * static_cast<Eigen::Index>(blocks))
        fail(ErrorKind::InsufficientData, "out-of-sample CV needs at least 2 periods per block");
    const std::vector<Eigen::Index> bounds = block_bounds(t_len, blocks);
    std::vector<CompensatedSum> acc(grid.size());
    Eigen::Index scored = 0;
    for (int b = 1; b < blocks; ++b) {
        const Eigen::Index begin = bounds[static_cast<std::size_t>(b)];
        const Eigen::Index end = bounds[static_cast<std::size_t>(b) + 1];
        const std::vector<Vector> ws = fit(errors.topRows(begin), grid.span());
        check_fit_output(ws, grid.size(), errors.cols());
        accumulate_sq(errors.middleRows(begin, end - begin), ws, acc);
        scored += end - begin;
    }
    std::vector<double> scores(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) scores[g] = acc[g].value() / static_cast<double>(scored);
    return finalize(grid, std::move(scores), Scheme::Oos);
}

TuningResult sharpe_validate(const Matrix& returns, const TuningGrid& grid, const FitFn& fit, Eigen::Index train_len,
                             Eigen::Index valid_len, Eigen::Index start) {
    if (train_len < 2 || valid_len < 2) fail(ErrorKind::InvalidSpec, "Sharpe validation needs train_len >= 2 and valid_len >= 2");
    if (start < 0 || start + train_len + valid_len > returns.rows())
        fail(ErrorKind::InsufficientData, "Sharpe validation window runs past the end of the sample");
    const std::vector<Vector> ws = fit(returns.middleRows(start, train_len), grid.span());
    check_fit_output(ws, grid.size(), returns.cols());
    const Matrix valid = returns.middleRows(start + train_len, valid_len);
    if (grid.size() == 1) {
        TuningResult r;
        r.chosen = grid[0];
        r.scores = {std::numeric_limits<double>::quiet_NaN()};
        r.scheme = Scheme::SharpeRolling;
        r.chosen_weights = ws[0];
        return r;
    }
    std::vector<double> scores(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) scores[g] = -sharpe_ratio(valid * ws[g]);
    TuningResult r = finalize(grid, std::move(scores), Scheme::SharpeRolling);
    r.chosen_weights = ws[r.chosen_index];
    return r;
}

}  // namespace l2relax
