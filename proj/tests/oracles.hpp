#pragma once

// Brute-force reference solutions for small problems. Each routine enumerates
// every active set or sign pattern, solves the equality-constrained KKT system
// of that pattern, keeps the patterns whose inequalities and multiplier signs
// hold, and returns the feasible candidate with the smallest objective.

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kTol = 1e-9;

/// Calls f(pattern) for all 3^n patterns with entries in {-1, 0, 1}.
template <typename F>
void for_each_pattern(int n, F&& f) {
    std::vector<int> s(static_cast<std::size_t>(n), -1);
    while (true) {
        f(s);
        int i = 0;
        while (i < n && s[static_cast<std::size_t>(i)] == 1) s[static_cast<std::size_t>(i++)] = -1;
        if (i == n) return;
        ++s[static_cast<std::size_t>(i)];
    }
}

inline std::optional<Vector> solve_square(const Matrix& k, const Vector& rhs) {
    Eigen::FullPivLU<Matrix> lu(k);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) return std::nullopt;
    return Vector(lu.solve(rhs));
}

struct L2Solution {
    Vector w;
    double gamma = 0.0;
};

/// min ½‖w‖² s.t. 1′w = 1, −τ ≤ Σw + γ1 ≤ τ.
///
/// Pattern s_i = +1 / −1 pins row i at the upper / lower bound, 0 leaves it
/// free. Stationarity: w + ν1 + Σ_A α_A = 0, 1′α_A = 0, with α_i ≥ 0 on upper
/// rows and α_i ≤ 0 on lower rows.
inline std::optional<L2Solution> l2_relaxation(const Matrix& sigma, double tau) {
    const auto n = static_cast<int>(sigma.rows());
    std::optional<L2Solution> best;
    double best_obj = std::numeric_limits<double>::infinity();
    const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
    const double tol = kTol * scale;

    for_each_pattern(n, [&](const std::vector<int>& s) {
        std::vector<int> act;
        for (int i = 0; i < n; ++i)
            if (s[static_cast<std::size_t>(i)] != 0) act.push_back(i);
        const auto m = static_cast<int>(act.size());
        Vector w;
        double gamma = 0.0;
        if (m == 0) {
            w = Vector::Constant(n, 1.0 / n);
            const Vector g = sigma * w;
            gamma = -(g.maxCoeff() + g.minCoeff()) / 2.0;
        } else {
            // unknowns: w (n), gamma, nu, alpha_A (m)
            const int dim = n + 2 + m;
            Matrix k = Matrix::Zero(dim, dim);
            Vector rhs = Vector::Zero(dim);
            for (int i = 0; i < n; ++i) {
                k(i, i) = 1.0;
                k(i, n + 1) = 1.0;
                for (int a = 0; a < m; ++a) k(i, n + 2 + a) = sigma(i, act[static_cast<std::size_t>(a)]);
            }
            for (int a = 0; a < m; ++a) k(n, n + 2 + a) = 1.0;  // 1′α = 0
            for (int i = 0; i < n; ++i) k(n + 1, i) = 1.0;      // 1′w = 1
            rhs(n + 1) = 1.0;
            for (int a = 0; a < m; ++a) {
                const int i = act[static_cast<std::size_t>(a)];
                for (int j = 0; j < n; ++j) k(n + 2 + a, j) = sigma(i, j);
                k(n + 2 + a, n) = 1.0;
                rhs(n + 2 + a) = s[static_cast<std::size_t>(i)] * tau;
            }
            const auto x = solve_square(k, rhs);
            if (!x) return;
            for (int a = 0; a < m; ++a) {
                const int i = act[static_cast<std::size_t>(a)];
                if (s[static_cast<std::size_t>(i)] * (*x)(n + 2 + a) < -tol) return;
            }
            w = x->head(n);
            gamma = (*x)(n);
        }
        const Vector r = sigma * w + Vector::Constant(n, gamma);
        if (r.cwiseAbs().maxCoeff() > tau + tol) return;
        const double obj = 0.5 * w.squaredNorm();
        if (obj < best_obj - 1e-14) {
            best_obj = obj;
            best = L2Solution{w, gamma};
        }
    });
    return best;
}

/// min ½w′Σw + τ‖w − 1/N‖₁ s.t. 1′w = 1, by sign patterns of v = w − 1/N.
inline std::optional<Vector> lasso_recentered(const Matrix& sigma, double tau) {
    const auto n = static_cast<int>(sigma.rows());
    const Vector sa = Vector::Constant(n, 1.0 / n);
    const Vector g = sigma * sa;
    const double tol = kTol * std::max(1.0, sigma.cwiseAbs().maxCoeff());
    std::optional<Vector> best;
    double best_obj = std::numeric_limits<double>::infinity();

    for_each_pattern(n, [&](const std::vector<int>& s) {
        std::vector<int> free;
        for (int i = 0; i < n; ++i)
            if (s[static_cast<std::size_t>(i)] != 0) free.push_back(i);
        const auto m = static_cast<int>(free.size());
        Vector v = Vector::Zero(n);
        double lambda = 0.0;
        if (m == 0) {
            lambda = (g.maxCoeff() + g.minCoeff()) / 2.0;
        } else {
            // Σ_FF v_F − λ1 = −g_F − τ s_F,  1′v_F = 0
            Matrix k = Matrix::Zero(m + 1, m + 1);
            Vector rhs(m + 1);
            for (int a = 0; a < m; ++a) {
                const int i = free[static_cast<std::size_t>(a)];
                for (int b = 0; b < m; ++b) k(a, b) = sigma(i, free[static_cast<std::size_t>(b)]);
                k(a, m) = -1.0;
                k(m, a) = 1.0;
                rhs(a) = -g(i) - tau * s[static_cast<std::size_t>(i)];
            }
            rhs(m) = 0.0;
            const auto x = solve_square(k, rhs);
            if (!x) return;
            for (int a = 0; a < m; ++a) {
                const int i = free[static_cast<std::size_t>(a)];
                v(i) = (*x)(a);
                if (s[static_cast<std::size_t>(i)] * v(i) < -tol) return;
            }
            lambda = (*x)(m);
        }
        const Vector w = sa + v;
        const Vector grad = sigma * w;
        for (int i = 0; i < n; ++i)
            if (s[static_cast<std::size_t>(i)] == 0 && std::abs(grad(i) - lambda) > tau + tol) return;
        const double obj = 0.5 * w.dot(sigma * w) + tau * v.lpNorm<1>();
        if (obj < best_obj - 1e-14) {
            best_obj = obj;
            best = w;
        }
    });
    return best;
}

/// min ½w′Σw s.t. 1′w = 1, ‖w‖₁ ≤ c, by sign patterns of w with the ℓ1
/// constraint either slack or binding.
inline std::optional<Vector> gec(const Matrix& sigma, double c) {
    const auto n = static_cast<int>(sigma.rows());
    const double tol = kTol * std::max(1.0, sigma.cwiseAbs().maxCoeff());
    std::optional<Vector> best;
    double best_obj = std::numeric_limits<double>::infinity();

    auto consider = [&](const Vector& w) {
        if (w.lpNorm<1>() > c + 1e-9) return;
        const double obj = 0.5 * w.dot(sigma * w);
        if (obj < best_obj - 1e-14) {
            best_obj = obj;
            best = w;
        }
    };

    // Slack ℓ1 constraint: the unconstrained minimum-variance weights.
    {
        Matrix k = Matrix::Zero(n + 1, n + 1);
        k.topLeftCorner(n, n) = sigma;
        k.col(n).head(n).setConstant(-1.0);
        k.row(n).head(n).setConstant(1.0);
        Vector rhs = Vector::Zero(n + 1);
        rhs(n) = 1.0;
        if (const auto x = solve_square(k, rhs)) consider(x->head(n));
    }

    for_each_pattern(n, [&](const std::vector<int>& s) {
        std::vector<int> free;
        for (int i = 0; i < n; ++i)
            if (s[static_cast<std::size_t>(i)] != 0) free.push_back(i);
        const auto m = static_cast<int>(free.size());
        if (m == 0) return;
        // Σ_FF w_F − λ1 + μ s_F = 0,  1′w_F = 1,  s_F′w_F = c
        Matrix k = Matrix::Zero(m + 2, m + 2);
        Vector rhs = Vector::Zero(m + 2);
        for (int a = 0; a < m; ++a) {
            const int i = free[static_cast<std::size_t>(a)];
            for (int b = 0; b < m; ++b) k(a, b) = sigma(i, free[static_cast<std::size_t>(b)]);
            k(a, m) = -1.0;
            k(a, m + 1) = s[static_cast<std::size_t>(i)];
            k(m, a) = 1.0;
            k(m + 1, a) = s[static_cast<std::size_t>(i)];
        }
        rhs(m) = 1.0;
        rhs(m + 1) = c;
        const auto x = solve_square(k, rhs);
        if (!x) return;
        const double lambda = (*x)(m);
        const double mu = (*x)(m + 1);
        if (mu < -tol) return;
        Vector w = Vector::Zero(n);
        for (int a = 0; a < m; ++a) {
            const int i = free[static_cast<std::size_t>(a)];
            w(i) = (*x)(a);
            if (s[static_cast<std::size_t>(i)] * w(i) < -tol) return;
        }
        const Vector grad = sigma * w;
        for (int i = 0; i < n; ++i)
            if (s[static_cast<std::size_t>(i)] == 0 && std::abs(grad(i) - lambda) > mu + tol) return;
        consider(w);
    });
    return best;
}

/// Ledoit–Wolf (2004) constant-correlation shrinkage intensity, written out
/// element by element from the published estimator with divisor T.
inline double lw_intensity(const Matrix& x) {
    const auto t = static_cast<int>(x.rows());
    const auto n = static_cast<int>(x.cols());
    Vector mean = Vector::Zero(n);
    for (int i = 0; i < n; ++i) {
        for (int r = 0; r < t; ++r) mean(i) += x(r, i);
        mean(i) /= t;
    }
    Matrix y(t, n);
    for (int r = 0; r < t; ++r)
        for (int i = 0; i < n; ++i) y(r, i) = x(r, i) - mean(i);
    Matrix s = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            for (int r = 0; r < t; ++r) s(i, j) += y(r, i) * y(r, j);
            s(i, j) /= t;
        }
    double rbar = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) rbar += s(i, j) / std::sqrt(s(i, i) * s(j, j));
    rbar /= static_cast<double>(n) * (n - 1);

    double pi = 0.0;
    Matrix pi_ij(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int r = 0; r < t; ++r) {
                const double d = y(r, i) * y(r, j) - s(i, j);
                acc += d * d;
            }
            pi_ij(i, j) = acc / t;
            pi += pi_ij(i, j);
        }
    double rho = 0.0;
    for (int i = 0; i < n; ++i) rho += pi_ij(i, i);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            double th_ii = 0.0;
            double th_jj = 0.0;
            for (int r = 0; r < t; ++r) {
                const double c = y(r, i) * y(r, j) - s(i, j);
                th_ii += (y(r, i) * y(r, i) - s(i, i)) * c;
                th_jj += (y(r, j) * y(r, j) - s(j, j)) * c;
            }
            th_ii /= t;
            th_jj /= t;
            rho += rbar / 2.0 *
                   (std::sqrt(s(j, j) / s(i, i)) * th_ii + std::sqrt(s(i, i) / s(j, j)) * th_jj);
        }
    double gamma = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double f = i == j ? s(i, i) : rbar * std::sqrt(s(i, i) * s(j, j));
            gamma += (f - s(i, j)) * (f - s(i, j));
        }
    const double kappa = (pi - rho) / gamma;
    return std::max(0.0, std::min(1.0, kappa / t));
}

}  // namespace oracle
