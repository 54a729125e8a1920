#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "l2relax/numerics.hpp"

namespace l2relax {

/// T×N panel of forecasts (or returns). Row t pairs the forecasts f_t with the
/// outcome y_{t+1} stored at target(t).
struct Panel {
    Matrix values;
    std::vector<std::string> unit_labels;
    std::optional<Vector> target;

    [[nodiscard]] Eigen::Index periods() const noexcept { return values.rows(); }
    [[nodiscard]] Eigen::Index units() const noexcept { return values.cols(); }

    /// Throws on T < 2, N < 1, non-finite entries or mismatched sizes.
    void validate() const;

    /// Rows [begin, begin + count) as a new panel.
    [[nodiscard]] Panel slice_rows(Eigen::Index begin, Eigen::Index count) const;
};

enum class Estimator { Sample, LwLinear, LwNonlinear };

std::string_view to_string(Estimator e) noexcept;
/// Accepts "sample", "lw" / "lw_linear", "lw_nonlinear"; throws Parse otherwise.
Estimator parse_estimator(std::string_view name);

struct CovEstimate {
    Matrix sigma;
    Estimator estimator = Estimator::Sample;
    std::optional<double> shrinkage_intensity;

    [[nodiscard]] Eigen::Index dim() const noexcept { return sigma.rows(); }
};

/// e(t, i) = y_{t+1} − f_{it}.
Matrix forecast_errors(const Panel& panel);

/// Centered second moments with divisor T.
CovEstimate sample_vc(const Matrix& x);

/// Ledoit–Wolf shrinkage toward the constant-correlation target. When
/// `forced_intensity` is given it replaces the estimated optimal intensity.
CovEstimate lw_linear_shrinkage(const Matrix& x, std::optional<double> forced_intensity = std::nullopt);

/// Dispatch on the estimator tag; LwNonlinear raises Unsupported.
CovEstimate estimate_covariance(const Matrix& x, Estimator estimator);

/// Constant-correlation target built from a covariance matrix: sample
/// variances on the diagonal, average correlation off it.
Matrix constant_correlation_target(const Matrix& s);

}  // namespace l2relax
