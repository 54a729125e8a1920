#pragma once

#include <string_view>
#include <utility>

#include "l2relax/kmeans.hpp"
#include "l2relax/solver.hpp"

namespace l2relax {

enum class Method { SimpleAverage, Lasso, Ridge, Gec, PcGrouping, Oracle };

std::string_view to_string(Method m) noexcept;
/// "sa", "lasso", "ridge", "gec", "pc_grouping" / "pc", "oracle".
Method parse_method(std::string_view name);

struct CompetitorSpec {
    Method method = Method::SimpleAverage;
    double tuning = 0.0;  // τ for lasso and ridge, c for gec
    int q = 5;            // principal directions used by pc_grouping
    int k = 2;            // clusters used by pc_grouping

    /// Throws InvalidSpec on tuning < 0, gec with c < 1, or q, k < 1.
    void validate() const;
};

/// w = 1/N.
WeightSolution simple_average(Eigen::Index n);

/// argmin ½w′Σw + τ‖w − 1/N‖₂² s.t. 1′w = 1, i.e. w ∝ (Σ + 2τI)⁻¹1.
WeightSolution ridge_recentered(const CovEstimate& cov, double tau);
WeightSolution ridge_recentered(const Matrix& sigma, double tau);

/// argmin ½w′Σw + τ‖w − 1/N‖₁ s.t. 1′w = 1.
WeightSolution lasso_recentered(const CovEstimate& cov, double tau, const QpSettings& qp = {});
WeightSolution lasso_recentered(const Matrix& sigma, double tau, const QpSettings& qp = {});

/// Sup-norm violation of the subgradient condition Σw + τ∂‖w − 1/N‖₁ ∋ λ1
/// minimised over λ. Coordinates with |w_i − 1/N| ≤ zero_tol count as zero.
double lasso_subgradient_residual(const Matrix& sigma, double tau, const Vector& w, double zero_tol = 1e-9);

/// argmin ½w′Σw s.t. 1′w = 1, ‖w‖₁ ≤ c (c ≥ 1).
WeightSolution gec_weights(const CovEstimate& cov, double c, const QpSettings& qp = {});
WeightSolution gec_weights(const Matrix& sigma, double c, const QpSettings& qp = {});

struct PcGrouping {
    WeightSolution solution;
    GroupStructure groups;
};

/// Cluster the N rows of the first q right singular vectors of the raw error
/// matrix into K groups, then apply classical weights to the K group-average
/// error series and split each group weight evenly across its members.
PcGrouping pc_grouping_weights(const Matrix& errors, int k, int q, const RngStream& rng,
                               const KMeansOptions& opts = {});

/// Right singular vectors of `x` (columns, singular values descending), each
/// column signed so that its largest-magnitude entry is positive.
Matrix right_singular_vectors(const Matrix& x);

/// Classical weights on the K group-average error series for a known membership.
WeightSolution oracle_membership_weights(const Matrix& errors, const GroupStructure& groups);

/// Dispatch a competitor on a T×N error matrix. Methods that need a covariance
/// use `estimator`; pc_grouping and oracle need `rng` and `groups` respectively.
WeightSolution fit_competitor(const CompetitorSpec& spec, const Matrix& errors, Estimator estimator,
                              const RngStream* rng = nullptr, const GroupStructure* groups = nullptr);

}  // namespace l2relax
