#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "l2relax/covariance.hpp"
#include "l2relax/solver.hpp"

namespace l2relax {

/// Ascending, nonnegative, nonempty list of candidate tuning values.
class TuningGrid {
public:
    explicit TuningGrid(std::vector<double> values);

    /// start, start + step, ... up to stop; stop is included when it lies
    /// within 1e-12 of a grid step.
    static TuningGrid range(double start, double stop, double step);
    /// "start:stop:step" or a single number.
    static TuningGrid parse(std::string_view text);

    /// 0.1:1:0.1, used for cross-validation and Sharpe validation.
    static TuningGrid default_grid() { return range(0.1, 1.0, 0.1); }
    static TuningGrid coarse_grid() { return range(0.0, 5.0, 0.1); }
    static TuningGrid fine_grid() { return range(0.0, 5.0, 0.01); }

    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
    [[nodiscard]] std::span<const double> span() const noexcept { return values_; }

private:
    std::vector<double> values_;
};

enum class Scheme { KFold, Oos, SharpeRolling };
std::string_view to_string(Scheme s) noexcept;

struct TuningResult {
    double chosen = 0.0;
    std::size_t chosen_index = 0;
    std::vector<double> scores;  // pooled MSFE, or −Sharpe for SharpeRolling
    Scheme scheme = Scheme::KFold;
    Vector chosen_weights;  // filled by sharpe_validate
};

/// Maps a training block (errors or returns, rows = time) to one weight
/// vector per grid value. Must be pure.
using FitFn = std::function<std::vector<Vector>(const Matrix& train, std::span<const double> grid)>;

enum class Fitter { L2Relax, Lasso, Ridge, Gec };

/// Standard fits: covariance from the training block with `estimator`, then
/// the weight path of the chosen method over the grid.
FitFn make_fit(Fitter fitter, Estimator estimator, const RelaxationOptions& opts = {});

/// Index of the smallest score; near-ties (1e-12 relative) go to the larger τ.
std::size_t select_min_score(const std::vector<double>& scores);

/// Fold label of each period: a random permutation cut into `folds` pieces
/// whose sizes differ by at most one (earlier folds take the remainder).
std::vector<int> kfold_assignment(Eigen::Index periods, int folds, RngStream& rng);

/// Start index of each of `blocks` chronological blocks plus a final T.
std::vector<Eigen::Index> block_bounds(Eigen::Index periods, int blocks);

/// Random k-fold cross-validation on forecast errors.
TuningResult cv_kfold(const Panel& panel, const TuningGrid& grid, const FitFn& fit, int folds, RngStream& rng);

/// Chronological blocks; block b ≥ 2 is scored by a fit on all earlier blocks,
/// squared errors pooled over blocks 2..B.
TuningResult cv_oos(const Panel& panel, const TuningGrid& grid, const FitFn& fit, int blocks = 5);

/// Fit on rows [start, start + train_len) and score the Sharpe ratio of the
/// portfolio returns on the next `valid_len` rows.
TuningResult sharpe_validate(const Matrix& returns, const TuningGrid& grid, const FitFn& fit,
                             Eigen::Index train_len, Eigen::Index valid_len = 12, Eigen::Index start = 0);

}  // namespace l2relax
