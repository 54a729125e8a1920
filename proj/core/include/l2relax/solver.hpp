#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "l2relax/covariance.hpp"
#include "l2relax/qp_engine.hpp"

namespace l2relax {

enum class SolveStatus { Optimal, MaxIter, InfeasibleInput };
std::string_view to_string(SolveStatus s) noexcept;

struct KktReport {
    double sum_violation = 0.0;          // |1′w − 1|
    double supnorm_slack = 0.0;          // max(0, ‖Σw + γ1‖∞ − τ)
    double stationarity_residual = 0.0;  // ‖w − Âα − 1/N‖∞
};

/// Weights plus the multipliers that certify them.
struct WeightSolution {
    Vector w;
    double gamma = 0.0;  // multiplier of the adding-up constraint
    Vector alpha;        // sup-norm multipliers, α = α₂ − α₁ (positive where the lower bound binds)
    double tau = 0.0;
    KktReport kkt;
    int iterations = 0;
    SolveStatus status = SolveStatus::Optimal;
    bool polished = false;
    std::optional<double> condition;  // reported for τ = 0 and classical solves

    [[nodiscard]] Eigen::Index size() const noexcept { return w.size(); }
};

/// Membership map i → k over K groups (labels 0..K−1).
class GroupStructure {
public:
    explicit GroupStructure(std::vector<int> membership);
    /// N/K consecutive members per group; N must be divisible by K.
    static GroupStructure equal_blocks(Eigen::Index n, Eigen::Index k);

    [[nodiscard]] const std::vector<int>& membership() const noexcept { return membership_; }
    [[nodiscard]] int group_of(Eigen::Index i) const { return membership_[static_cast<std::size_t>(i)]; }
    [[nodiscard]] Eigen::Index units() const noexcept { return static_cast<Eigen::Index>(membership_.size()); }
    [[nodiscard]] Eigen::Index groups() const noexcept { return sizes_.size(); }
    [[nodiscard]] const Eigen::VectorXi& sizes() const noexcept { return sizes_; }
    [[nodiscard]] Vector shares() const;
    /// N×K indicator matrix Z.
    [[nodiscard]] Matrix indicator() const;

private:
    std::vector<int> membership_;
    Eigen::VectorXi sizes_;
};

/// w = Σ⁻¹1/(1′Σ⁻¹1), γ = −1/(1′Σ⁻¹1). Throws SingularMatrix for singular Σ.
WeightSolution classical_weights(const CovEstimate& cov);
WeightSolution classical_weights(const Matrix& sigma);

struct RelaxationOptions {
    QpSettings qp{};
};

/// Minimise ½‖w‖² subject to 1′w = 1 and ‖Σw + γ1‖∞ ≤ τ.
WeightSolution solve_l2_relaxation(const CovEstimate& cov, double tau, const RelaxationOptions& opts = {},
                                   const WeightSolution* warm = nullptr);
WeightSolution solve_l2_relaxation(const Matrix& sigma, double tau, const RelaxationOptions& opts = {},
                                   const WeightSolution* warm = nullptr);

/// max_i |Σ_i·1|/N. For τ at or above this value the simple average is the solution.
double simple_average_threshold(const Matrix& sigma);

/// Dual objective D(α) = ½α′Â′Âα + (1/N)1′Σα + τ‖α‖₁ − 1/(2N).
double dual_objective(const Matrix& sigma, const Vector& alpha, double tau);

/// ½‖w‖² + D(α); zero at a primal-dual optimal pair, positive otherwise.
double duality_gap(const WeightSolution& sol, const CovEstimate& cov);
double duality_gap(const WeightSolution& sol, const Matrix& sigma);

/// Recompute the KKT report of (w, γ, α) against Σ and τ.
KktReport kkt_report(const Matrix& sigma, double tau, const Vector& w, double gamma, const Vector& alpha);

/// Group weights of the block-equicorrelation oracle:
/// b₀* = r⁻¹ ∘ (Σco)⁻¹1 / (1′(Σco)⁻¹1), w_i = b₀*_{g(i)}/N.
Vector oracle_group_coefficients(const Matrix& core, const GroupStructure& groups);
WeightSolution oracle_group_weights(const Matrix& core, const GroupStructure& groups);

/// Σ*(i, j) = core(g(i), g(j)).
Matrix expand_block_equicorrelation(const Matrix& core, const GroupStructure& groups);

/// One warm-started solve per τ of an ascending, nonnegative grid.
std::vector<WeightSolution> weight_path(const CovEstimate& cov, std::span<const double> tau_grid,
                                        const RelaxationOptions& opts = {});
std::vector<WeightSolution> weight_path(const Matrix& sigma, std::span<const double> tau_grid,
                                        const RelaxationOptions& opts = {});

/// Within-group population standard deviation of the weights, averaged over groups.
double within_group_sd(const Vector& w, const GroupStructure& groups);

}  // namespace l2relax
