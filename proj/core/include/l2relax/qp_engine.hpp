#pragma once

#include <optional>

#include "l2relax/numerics.hpp"

namespace l2relax {

/// Dense convex QP
///
///     minimize    ½ x′P x + q′x
///     subject to  E x = f            (exact, enforced in every x-update)
///                 l ≤ A x ≤ u        (box rows; ±inf allowed, l = u for equalities)
///
/// solved by operator splitting (OSQP-style ADMM with over-relaxation and
/// penalty adaptation) followed by an active-set polish that solves the
/// reduced KKT system exactly.
struct QpProblem {
    Matrix P;
    Vector q;
    Matrix A;
    Vector lower;
    Vector upper;
    Matrix E;
    Vector e_rhs;

    [[nodiscard]] Eigen::Index variables() const noexcept { return P.rows(); }
    [[nodiscard]] Eigen::Index box_rows() const noexcept { return A.rows(); }
    [[nodiscard]] Eigen::Index equality_rows() const noexcept { return E.rows(); }
};

struct QpSettings {
    double rho = 0.1;
    double sigma = 1e-6;
    double relaxation = 1.6;
    double eps_abs = 1e-9;
    double eps_rel = 1e-9;
    int max_iter = 200000;
    bool adaptive_rho = true;
    int adapt_interval = 25;
    int check_interval = 5;
    bool polish = true;
    int polish_interval = 50;
    int polish_passes = 30;
    double active_tol = 1e-7;
};

enum class QpStatus { Optimal, MaxIter };

struct QpResult {
    Vector x;
    Vector z;   // A x after projection onto the box
    Vector y;   // box multipliers: positive at an active upper bound, negative at a lower
    Vector nu;  // equality multipliers
    int iterations = 0;
    QpStatus status = QpStatus::MaxIter;
    bool polished = false;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
};

struct QpWarmStart {
    Vector x;
    Vector y;
};

/// Throws ContractViolation on inconsistent dimensions or l > u.
QpResult solve_qp(const QpProblem& problem, const QpSettings& settings = {},
                  const QpWarmStart* warm = nullptr);

/// Max-norm KKT residuals of a candidate (x, y, nu): primal feasibility and
/// stationarity. Complementarity is folded into the primal term by measuring
/// the distance of A x to the bound selected by the sign of y.
struct KktResiduals {
    double primal = 0.0;
    double stationarity = 0.0;
    double complementarity = 0.0;
};
KktResiduals kkt_residuals(const QpProblem& problem, const Vector& x, const Vector& y, const Vector& nu);

}  // namespace l2relax
