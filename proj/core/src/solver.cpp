#include "l2relax/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "l2relax/error.hpp"

namespace l2relax {

std::string_view to_string(SolveStatus s) noexcept {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::MaxIter: return "max_iter";
        case SolveStatus::InfeasibleInput: return "infeasible_input";
    }
    return "unknown";
}

GroupStructure::GroupStructure(std::vector<int> membership) : membership_(std::move(membership)) {
    if (membership_.empty()) fail(ErrorKind::InvalidSpec, "group structure needs at least one unit");
    const int k_max = *std::max_element(membership_.begin(), membership_.end());
    if (*std::min_element(membership_.begin(), membership_.end()) < 0)
        fail(ErrorKind::InvalidSpec, "group labels must be nonnegative");
    sizes_ = Eigen::VectorXi::Zero(k_max + 1);
    for (const int g : membership_) ++sizes_(g);
    for (Eigen::Index k = 0; k < sizes_.size(); ++k)
        if (sizes_(k) == 0)
            fail(ErrorKind::InvalidSpec, "group " + std::to_string(k) + " has no members");
}

GroupStructure GroupStructure::equal_blocks(Eigen::Index n, Eigen::Index k) {
    if (k < 1 || n < k || n % k != 0)
        fail(ErrorKind::InvalidSpec, "equal_blocks: N must be a positive multiple of K");
    std::vector<int> m(static_cast<std::size_t>(n));
    const Eigen::Index block = n / k;
    for (Eigen::Index i = 0; i < n; ++i) m[static_cast<std::size_t>(i)] = static_cast<int>(i / block);
    return GroupStructure(std::move(m));
}

Vector GroupStructure::shares() const {
    return sizes_.cast<double>() / static_cast<double>(units());
}

Matrix GroupStructure::indicator() const {
    Matrix z = Matrix::Zero(units(), groups());
    for (Eigen::Index i = 0; i < units(); ++i) z(i, group_of(i)) = 1.0;
    return z;
}

KktReport kkt_report(const Matrix& sigma, double tau, const Vector& w, double gamma, const Vector& alpha) {
    const auto n = static_cast<double>(w.size());
    KktReport r;
    r.sum_violation = std::abs(w.sum() - 1.0);
    const Vector slack = sigma * w + Vector::Constant(w.size(), gamma);
    r.supnorm_slack = std::max(0.0, slack.cwiseAbs().maxCoeff() - tau);
    // Â α = Σα − 1 (1′Σα)/N
    const Vector sa = sigma * alpha;
    const Vector a_alpha = sa.array() - sa.sum() / n;
    r.stationarity_residual = (w - a_alpha - Vector::Constant(w.size(), 1.0 / n)).cwiseAbs().maxCoeff();
    return r;
}

WeightSolution classical_weights(const Matrix& sigma) {
    require_symmetric(sigma, "classical_weights");
    const Eigen::Index n = sigma.rows();
    WeightSolution sol;
    sol.tau = 0.0;
    if (n == 1) {
        sol.w = Vector::Ones(1);
        sol.gamma = -sigma(0, 0);
        sol.alpha = Vector::Zero(1);
        sol.condition = 1.0;
    } else {
        LinearSolve ls;
        try {
            ls = solve_linear(sigma, Vector::Ones(n));
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::SingularMatrix)
                fail(ErrorKind::SingularMatrix, "classical_weights: covariance matrix is singular");
            throw;
        }
        const double denom = ls.x.sum();
        if (!(std::abs(denom) > 0.0) || !std::isfinite(denom))
            fail(ErrorKind::SingularMatrix, "classical_weights: 1′Σ⁻¹1 is zero");
        sol.w = ls.x / denom;
        sol.gamma = -1.0 / denom;
        // α = Σ⁻¹(w − 1/N + c1) with c chosen so that 1′α = 0.
        const Vector centered = sol.w - Vector::Constant(n, 1.0 / static_cast<double>(n));
        const Vector base = solve_linear(sigma, centered).x;
        sol.alpha = base - (base.sum() / denom) * ls.x;
        sol.condition = ls.condition;
    }
    sol.kkt = kkt_report(sigma, 0.0, sol.w, sol.gamma, sol.alpha);
    sol.status = SolveStatus::Optimal;
    return sol;
}

WeightSolution classical_weights(const CovEstimate& cov) { return classical_weights(cov.sigma); }

double simple_average_threshold(const Matrix& sigma) {
    const Vector row = sigma * Vector::Constant(sigma.rows(), 1.0 / static_cast<double>(sigma.rows()));
    return row.cwiseAbs().maxCoeff();
}

namespace {

/// Exact SA solution when the box admits w = 1/N for some γ.
std::optional<WeightSolution> simple_average_if_feasible(const Matrix& sigma, double tau) {
    const Eigen::Index n = sigma.rows();
    const Vector row = sigma * Vector::Constant(n, 1.0 / static_cast<double>(n));
    const double hi = row.maxCoeff();
    const double lo = row.minCoeff();
    if (0.5 * (hi - lo) > tau) return std::nullopt;
    WeightSolution sol;
    sol.w = Vector::Constant(n, 1.0 / static_cast<double>(n));
    sol.gamma = -0.5 * (hi + lo);
    sol.alpha = Vector::Zero(n);
    sol.tau = tau;
    sol.status = SolveStatus::Optimal;
    sol.polished = true;
    sol.kkt = kkt_report(sigma, tau, sol.w, sol.gamma, sol.alpha);
    return sol;
}

}  // namespace

WeightSolution solve_l2_relaxation(const Matrix& sigma, double tau, const RelaxationOptions& opts,
                                   const WeightSolution* warm) {
    if (!(tau >= 0.0) || !std::isfinite(tau))
        fail(ErrorKind::Domain, "solve_l2_relaxation: tau must be a finite nonnegative number");
    require_symmetric(sigma, "solve_l2_relaxation");
    const Eigen::Index n = sigma.rows();

    if (auto sa = simple_average_if_feasible(sigma, tau)) {
        if (tau == 0.0) sa->condition = std::numeric_limits<double>::infinity();
        return *sa;
    }

    // Scale so that max|Σ| = 1; w is invariant under (Σ, τ) → (Σ/s, τ/s).
    const double scale = std::max(max_abs(sigma), 1e-300);
    const Matrix sig = 0.5 * (sigma + sigma.transpose()) / scale;
    const double t = tau / scale;

    QpProblem qp;
    qp.P = Matrix::Zero(n + 1, n + 1);
    qp.P.topLeftCorner(n, n).setIdentity();
    qp.q = Vector::Zero(n + 1);
    qp.A.resize(n, n + 1);
    qp.A.leftCols(n) = sig;
    qp.A.col(n).setOnes();
    qp.lower = Vector::Constant(n, -t);
    qp.upper = Vector::Constant(n, t);
    qp.E = Matrix::Zero(1, n + 1);
    qp.E.leftCols(n).setOnes();
    qp.e_rhs = Vector::Ones(1);

    QpWarmStart ws;
    const QpWarmStart* wsp = nullptr;
    if (warm != nullptr && warm->w.size() == n && warm->alpha.size() == n) {
        ws.x.resize(n + 1);
        ws.x.head(n) = warm->w;
        ws.x(n) = warm->gamma / scale;
        ws.y = -warm->alpha * scale;
        wsp = &ws;
    }

    const QpResult r = solve_qp(qp, opts.qp, wsp);

    WeightSolution sol;
    sol.w = r.x.head(n);
    sol.gamma = r.x(n) * scale;
    sol.alpha = -r.y / scale;
    sol.tau = tau;
    sol.iterations = r.iterations;
    sol.polished = r.polished;
    sol.status = r.status == QpStatus::Optimal ? SolveStatus::Optimal : SolveStatus::MaxIter;
    sol.kkt = kkt_report(sigma, tau, sol.w, sol.gamma, sol.alpha);
    if (tau == 0.0) {
        const SymEigen eig = sym_eigen(sigma);
        const double lo = std::abs(eig.values(n - 1));
        sol.condition = lo > 0 ? std::abs(eig.values(0)) / lo : std::numeric_limits<double>::infinity();
    }
    return sol;
}

WeightSolution solve_l2_relaxation(const CovEstimate& cov, double tau, const RelaxationOptions& opts,
                                   const WeightSolution* warm) {
    return solve_l2_relaxation(cov.sigma, tau, opts, warm);
}

double dual_objective(const Matrix& sigma, const Vector& alpha, double tau) {
    const auto n = static_cast<double>(sigma.rows());
    const Vector sa = sigma * alpha;
    const Vector a_alpha = sa.array() - sa.sum() / n;
    return 0.5 * a_alpha.squaredNorm() + sa.sum() / n + tau * alpha.lpNorm<1>() - 0.5 / n;
}

double duality_gap(const WeightSolution& sol, const Matrix& sigma) {
    return 0.5 * sol.w.squaredNorm() + dual_objective(sigma, sol.alpha, sol.tau);
}

double duality_gap(const WeightSolution& sol, const CovEstimate& cov) { return duality_gap(sol, cov.sigma); }

Vector oracle_group_coefficients(const Matrix& core, const GroupStructure& groups) {
    const Eigen::Index k = core.rows();
    if (core.cols() != k || groups.groups() != k)
        fail(ErrorKind::ContractViolation, "oracle_group_weights: core size does not match group count");
    Vector inv_one;
    try {
        inv_one = solve_linear(core, Vector::Ones(k)).x;
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::SingularMatrix)
            fail(ErrorKind::SingularMatrix, "oracle_group_weights: core matrix is singular");
        throw;
    }
    const double denom = inv_one.sum();
    if (!(std::abs(denom) > 0.0)) fail(ErrorKind::SingularMatrix, "oracle_group_weights: 1′(Σco)⁻¹1 is zero");
    return (inv_one / denom).cwiseQuotient(groups.shares());
}

WeightSolution oracle_group_weights(const Matrix& core, const GroupStructure& groups) {
    const Vector b0 = oracle_group_coefficients(core, groups);
    const Eigen::Index n = groups.units();
    WeightSolution sol;
    sol.w.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) sol.w(i) = b0(groups.group_of(i)) / static_cast<double>(n);
    const Matrix sigma_star = expand_block_equicorrelation(core, groups);
    // KKT of the oracle problem: Σ*w + γ1 = 0.
    sol.gamma = -(sigma_star * sol.w).mean();
    sol.alpha = Vector::Zero(n);
    sol.tau = 0.0;
    sol.status = SolveStatus::Optimal;
    sol.kkt.sum_violation = std::abs(sol.w.sum() - 1.0);
    sol.kkt.supnorm_slack =
        (sigma_star * sol.w + Vector::Constant(n, sol.gamma)).cwiseAbs().maxCoeff();
    return sol;
}

Matrix expand_block_equicorrelation(const Matrix& core, const GroupStructure& groups) {
    if (core.rows() != groups.groups() || core.cols() != groups.groups())
        fail(ErrorKind::ContractViolation, "expand_block_equicorrelation: core size does not match group count");
    const Eigen::Index n = groups.units();
    Matrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) out(i, j) = core(groups.group_of(i), groups.group_of(j));
    return out;
}

std::vector<WeightSolution> weight_path(const Matrix& sigma, std::span<const double> tau_grid,
                                        const RelaxationOptions& opts) {
    if (tau_grid.empty()) fail(ErrorKind::Domain, "weight_path: grid is empty");
    for (std::size_t i = 0; i < tau_grid.size(); ++i) {
        if (!(tau_grid[i] >= 0.0)) fail(ErrorKind::Domain, "weight_path: grid values must be nonnegative");
        if (i > 0 && tau_grid[i] < tau_grid[i - 1]) fail(ErrorKind::Domain, "weight_path: grid must be ascending");
    }
    std::vector<WeightSolution> path;
    path.reserve(tau_grid.size());
    for (const double tau : tau_grid) {
        const WeightSolution* warm = path.empty() ? nullptr : &path.back();
        path.push_back(solve_l2_relaxation(sigma, tau, opts, warm));
    }
    return path;
}

std::vector<WeightSolution> weight_path(const CovEstimate& cov, std::span<const double> tau_grid,
                                        const RelaxationOptions& opts) {
    return weight_path(cov.sigma, tau_grid, opts);
}

double within_group_sd(const Vector& w, const GroupStructure& groups) {
    const Eigen::Index k = groups.groups();
    Vector mean = Vector::Zero(k);
    Vector sq = Vector::Zero(k);
    for (Eigen::Index i = 0; i < w.size(); ++i) mean(groups.group_of(i)) += w(i);
    mean = mean.cwiseQuotient(groups.sizes().cast<double>());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        const double d = w(i) - mean(groups.group_of(i));
        sq(groups.group_of(i)) += d * d;
    }
    return sq.cwiseQuotient(groups.sizes().cast<double>()).cwiseSqrt().mean();
}

}  // namespace l2relax
