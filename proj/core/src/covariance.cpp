#include "l2relax/covariance.hpp"

#include <algorithm>
#include <cmath>

#include "l2relax/error.hpp"

namespace l2relax {

void Panel::validate() const {
    if (values.rows() < 2) fail(ErrorKind::InsufficientData, "panel needs at least 2 periods");
    if (values.cols() < 1) fail(ErrorKind::InvalidSpec, "panel needs at least 1 unit");
    if (!values.allFinite()) fail(ErrorKind::InvalidSpec, "panel has missing or non-finite entries");
    if (!unit_labels.empty() && static_cast<Eigen::Index>(unit_labels.size()) != values.cols())
        fail(ErrorKind::InvalidSpec, "panel label count does not match column count");
    if (target) {
        if (target->size() != values.rows())
            fail(ErrorKind::InvalidSpec, "panel target length does not match row count");
        if (!target->allFinite()) fail(ErrorKind::InvalidSpec, "panel target has non-finite entries");
    }
}

Panel Panel::slice_rows(Eigen::Index begin, Eigen::Index count) const {
    Panel out;
    out.values = values.middleRows(begin, count);
    out.unit_labels = unit_labels;
    if (target) out.target = target->segment(begin, count);
    return out;
}

std::string_view to_string(Estimator e) noexcept {
    switch (e) {
        case Estimator::Sample: return "sample";
        case Estimator::LwLinear: return "lw_linear";
        case Estimator::LwNonlinear: return "lw_nonlinear";
    }
    return "unknown";
}

Estimator parse_estimator(std::string_view name) {
    if (name == "sample" || name == "s") return Estimator::Sample;
    if (name == "lw" || name == "lw_linear") return Estimator::LwLinear;
    if (name == "lw_nonlinear" || name == "lw2020") return Estimator::LwNonlinear;
    fail(ErrorKind::Parse, "unknown covariance estimator '" + std::string(name) + "'");
}

Matrix forecast_errors(const Panel& panel) {
    if (!panel.target) fail(ErrorKind::MissingTarget, "forecast_errors: panel has no target series");
    if (panel.target->size() != panel.values.rows())
        fail(ErrorKind::InvalidSpec, "forecast_errors: target length does not match row count");
    Matrix e = -panel.values;
    e.colwise() += *panel.target;
    return e;
}

CovEstimate sample_vc(const Matrix& x) {
    if (x.rows() < 2) fail(ErrorKind::InsufficientData, "sample_vc: need at least 2 observations");
    if (x.cols() < 1) fail(ErrorKind::InvalidSpec, "sample_vc: need at least 1 column");
    const Matrix centered = x.rowwise() - x.colwise().mean();
    Matrix s = centered.transpose() * centered / static_cast<double>(x.rows());
    s = 0.5 * (s + s.transpose());
    return CovEstimate{std::move(s), Estimator::Sample, std::nullopt};
}

Matrix constant_correlation_target(const Matrix& s) {
    const Eigen::Index n = s.rows();
    const Vector sd = s.diagonal().cwiseSqrt();
    double sum_corr = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) sum_corr += s(i, j) / (sd(i) * sd(j));
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    const double r_bar = pairs > 0 ? sum_corr / pairs : 0.0;
    Matrix f = r_bar * (sd * sd.transpose());
    f.diagonal() = s.diagonal();
    return f;
}

CovEstimate lw_linear_shrinkage(const Matrix& x, std::optional<double> forced_intensity) {
    if (x.rows() < 2) fail(ErrorKind::InsufficientData, "lw_linear_shrinkage: need at least 2 observations");
    if (x.cols() < 2) fail(ErrorKind::InvalidSpec, "lw_linear_shrinkage: need at least 2 columns");
    const auto t = static_cast<double>(x.rows());
    const Eigen::Index n = x.cols();
    const Matrix xc = x.rowwise() - x.colwise().mean();
    const Matrix s = sample_vc(x).sigma;

    const double var_scale = std::max(1.0, s.diagonal().maxCoeff());
    for (Eigen::Index i = 0; i < n; ++i)
        if (!(s(i, i) > 1e-14 * var_scale))
            fail(ErrorKind::DegenerateVariance,
                 "lw_linear_shrinkage: column " + std::to_string(i) + " has zero variance");

    const Matrix f = constant_correlation_target(s);
    double delta = 0.0;
    if (forced_intensity) {
        if (*forced_intensity < 0.0 || *forced_intensity > 1.0)
            fail(ErrorKind::Domain, "lw_linear_shrinkage: forced intensity must lie in [0, 1]");
        delta = *forced_intensity;
    } else {
        // pi: sum of asymptotic variances of sqrt(T)·s_ij.
        const Matrix x2 = xc.cwiseProduct(xc);
        const Matrix pi_mat = x2.transpose() * x2 / t - s.cwiseProduct(s);
        const double pi_hat = pi_mat.sum();

        // rho: diagonal part plus the correlation-target covariance terms.
        const Vector sd = s.diagonal().cwiseSqrt();
        const Matrix x3 = x2.cwiseProduct(xc);
        Matrix theta = x3.transpose() * xc / t;  // theta(i, j) = mean(x_i^3 x_j)
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) theta(i, j) -= s(i, i) * s(i, j);
        theta.diagonal().setZero();
        double r_bar = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j) r_bar += s(i, j) / (sd(i) * sd(j));
        r_bar /= static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
        double off = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) off += (sd(j) / sd(i)) * theta(i, j);
        const double rho_hat = pi_mat.diagonal().sum() + r_bar * off;

        const double gamma_hat = (s - f).squaredNorm();
        if (gamma_hat <= 0.0) {
            delta = 1.0;  // S already equals the target.
        } else {
            const double kappa = (pi_hat - rho_hat) / gamma_hat;
            delta = std::clamp(kappa / t, 0.0, 1.0);
        }
    }

    Matrix sigma = delta * f + (1.0 - delta) * s;
    sigma = 0.5 * (sigma + sigma.transpose());
    return CovEstimate{std::move(sigma), Estimator::LwLinear, delta};
}

CovEstimate estimate_covariance(const Matrix& x, Estimator estimator) {
    switch (estimator) {
        case Estimator::Sample: return sample_vc(x);
        case Estimator::LwLinear: return lw_linear_shrinkage(x);
        case Estimator::LwNonlinear:
            fail(ErrorKind::Unsupported,
                 "the nonlinear shrinkage estimator (lw_nonlinear) is not implemented; use 'sample' or 'lw'");
    }
    fail(ErrorKind::Unsupported, "unknown estimator");
}

}  // namespace l2relax
