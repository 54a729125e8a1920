#include "l2relax/qp_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "l2relax/error.hpp"

namespace l2relax {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRhoMin = 1e-6;
constexpr double kRhoMax = 1e6;
constexpr double kRhoEqualityScale = 1e3;

double inf_norm(const Vector& v) noexcept { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

void validate(const QpProblem& p) {
    const Eigen::Index n = p.P.rows();
    if (n == 0 || p.P.cols() != n) fail(ErrorKind::ContractViolation, "qp: P must be square and non-empty");
    if (p.q.size() != n) fail(ErrorKind::ContractViolation, "qp: q has wrong length");
    if (p.A.rows() > 0 && p.A.cols() != n) fail(ErrorKind::ContractViolation, "qp: A has wrong column count");
    if (p.lower.size() != p.A.rows() || p.upper.size() != p.A.rows())
        fail(ErrorKind::ContractViolation, "qp: bound vectors do not match A");
    if (p.E.rows() > 0 && p.E.cols() != n) fail(ErrorKind::ContractViolation, "qp: E has wrong column count");
    if (p.e_rhs.size() != p.E.rows()) fail(ErrorKind::ContractViolation, "qp: equality rhs has wrong length");
    for (Eigen::Index i = 0; i < p.A.rows(); ++i)
        if (p.lower(i) > p.upper(i)) fail(ErrorKind::ContractViolation, "qp: lower bound exceeds upper bound");
}

enum class RowState : signed char { Inactive = 0, Lower = -1, Upper = 1, Fixed = 2 };

/// Penalty per box row: loose rows get the floor, equality rows are stiffened.
Vector row_penalties(const QpProblem& p, double rho) {
    Vector r(p.A.rows());
    for (Eigen::Index i = 0; i < r.size(); ++i) {
        const bool free_row = !std::isfinite(p.lower(i)) && !std::isfinite(p.upper(i));
        if (free_row)
            r(i) = kRhoMin;
        else if (p.lower(i) == p.upper(i))
            r(i) = kRhoEqualityScale * rho;
        else
            r(i) = rho;
    }
    return r;
}

/// Factorisation of the x-update system
///   [ P + σI + A′diag(ρ)A   E′ ] [x]   [r]
///   [ E                     0  ] [ν] = [f]
/// via Cholesky of the (1,1) block and a Schur complement on the equalities.
class XStepSolver {
public:
    XStepSolver(const QpProblem& p, double sigma, const Vector& rho) : p_(p) { factor(sigma, rho); }

    void factor(double sigma, const Vector& rho) {
        const Eigen::Index n = p_.P.rows();
        Matrix m = p_.P;
        m.diagonal().array() += sigma;
        if (p_.A.rows() > 0) m.noalias() += p_.A.transpose() * rho.asDiagonal() * p_.A;
        llt_.compute(m);
        if (llt_.info() != Eigen::Success) {
            m.diagonal().array() += 1e-8 * std::max(1.0, m.diagonal().cwiseAbs().maxCoeff());
            llt_.compute(m);
        }
        if (p_.E.rows() > 0) {
            minv_et_ = llt_.solve(p_.E.transpose());
            schur_.compute(p_.E * minv_et_);
        } else {
            minv_et_.resize(n, 0);
        }
    }

    /// Solves for x and returns the equality multipliers in `nu`.
    Vector solve(const Vector& rhs, Vector& nu) const {
        Vector x = llt_.solve(rhs);
        if (p_.E.rows() > 0) {
            nu = schur_.solve(p_.E * x - p_.e_rhs);
            x.noalias() -= minv_et_ * nu;
        } else {
            nu.resize(0);
        }
        return x;
    }

private:
    const QpProblem& p_;
    Eigen::LLT<Matrix> llt_;
    Matrix minv_et_;
    Eigen::LDLT<Matrix> schur_;
};

/// Stationarity residual with the component in range(E′) removed, which the
/// equality multipliers absorb exactly.
class EqualityProjector {
public:
    explicit EqualityProjector(const Matrix& e) : e_(e) {
        if (e.rows() > 0) gram_.compute(e * e.transpose());
    }
    Vector project(const Vector& v) const {
        if (e_.rows() == 0) return v;
        return v - e_.transpose() * gram_.solve(e_ * v);
    }
    Vector multipliers(const Vector& v) const {
        if (e_.rows() == 0) return Vector(0);
        return -gram_.solve(e_ * v);
    }

private:
    const Matrix& e_;
    Eigen::LDLT<Matrix> gram_;
};

struct PolishOutcome {
    bool success = false;
    Vector x;
    Vector y;
    Vector nu;
};

/// Solves the equality-constrained KKT system for a fixed working set and
/// iterates add/drop corrections until primal and dual feasibility hold.
class Polisher {
public:
    Polisher(const QpProblem& p, const QpSettings& s) : p_(p), s_(s) {
        bound_scale_ = 1.0;
        for (Eigen::Index i = 0; i < p.A.rows(); ++i) {
            if (std::isfinite(p.lower(i))) bound_scale_ = std::max(bound_scale_, std::abs(p.lower(i)));
            if (std::isfinite(p.upper(i))) bound_scale_ = std::max(bound_scale_, std::abs(p.upper(i)));
        }
        data_scale_ = std::max({1.0, max_abs(p.P), p.A.size() ? max_abs(p.A) : 0.0,
                                p.q.size() ? inf_norm(p.q) : 0.0});
    }

    std::vector<RowState> guess(const Vector& z, const Vector& y) const {
        std::vector<RowState> st(static_cast<std::size_t>(p_.A.rows()), RowState::Inactive);
        for (Eigen::Index i = 0; i < p_.A.rows(); ++i) {
            const double l = p_.lower(i);
            const double u = p_.upper(i);
            auto& s = st[static_cast<std::size_t>(i)];
            if (l == u) {
                s = RowState::Fixed;
                continue;
            }
            const double tol = s_.active_tol * (1.0 + std::max(std::isfinite(l) ? std::abs(l) : 0.0,
                                                              std::isfinite(u) ? std::abs(u) : 0.0));
            const bool lo = std::isfinite(l) && (z(i) - l < -y(i) || z(i) - l <= tol);
            const bool up = std::isfinite(u) && (u - z(i) < y(i) || u - z(i) <= tol);
            if (lo && up)
                s = y(i) >= 0 ? RowState::Upper : RowState::Lower;
            else if (lo)
                s = RowState::Lower;
            else if (up)
                s = RowState::Upper;
        }
        return st;
    }

    PolishOutcome run(std::vector<RowState> state) const {
        std::set<std::vector<RowState>> seen;
        for (int pass = 0; pass < s_.polish_passes; ++pass) {
            if (!seen.insert(state).second) break;  // cycling
            PolishOutcome out;
            if (!solve_working_set(state, out)) return {};
            bool changed = false;
            const Vector ax = p_.A * out.x;
            const double feas_tol = 1e-11 * (bound_scale_ + inf_norm(ax));
            const double dual_tol = 1e-11 * (1.0 + inf_norm(out.y));
            std::vector<RowState> next = state;
            for (Eigen::Index i = 0; i < p_.A.rows(); ++i) {
                auto& s = next[static_cast<std::size_t>(i)];
                switch (s) {
                    case RowState::Fixed: break;
                    case RowState::Inactive:
                        if (ax(i) > p_.upper(i) + feas_tol) {
                            s = RowState::Upper;
                            changed = true;
                        } else if (ax(i) < p_.lower(i) - feas_tol) {
                            s = RowState::Lower;
                            changed = true;
                        }
                        break;
                    case RowState::Upper:
                        if (out.y(i) < -dual_tol) {
                            s = RowState::Inactive;
                            changed = true;
                        }
                        break;
                    case RowState::Lower:
                        if (out.y(i) > dual_tol) {
                            s = RowState::Inactive;
                            changed = true;
                        }
                        break;
                }
            }
            if (!changed) {
                // Clean tiny wrong-signed multipliers left by rounding.
                for (Eigen::Index i = 0; i < p_.A.rows(); ++i) {
                    const auto s = state[static_cast<std::size_t>(i)];
                    if (s == RowState::Upper) out.y(i) = std::max(out.y(i), 0.0);
                    if (s == RowState::Lower) out.y(i) = std::min(out.y(i), 0.0);
                }
                out.success = true;
                return out;
            }
            state = std::move(next);
        }
        return {};
    }

private:
    bool solve_working_set(const std::vector<RowState>& state, PolishOutcome& out) const {
        const Eigen::Index n = p_.P.rows();
        const Eigen::Index pe = p_.E.rows();
        std::vector<Eigen::Index> rows;
        for (Eigen::Index i = 0; i < p_.A.rows(); ++i)
            if (state[static_cast<std::size_t>(i)] != RowState::Inactive) rows.push_back(i);
        const auto m = static_cast<Eigen::Index>(rows.size());
        const Eigen::Index dim = n + pe + m;

        Matrix kkt = Matrix::Zero(dim, dim);
        Vector rhs = Vector::Zero(dim);
        kkt.topLeftCorner(n, n) = p_.P;
        rhs.head(n) = -p_.q;
        if (pe > 0) {
            kkt.block(n, 0, pe, n) = p_.E;
            kkt.block(0, n, n, pe) = p_.E.transpose();
            rhs.segment(n, pe) = p_.e_rhs;
        }
        for (Eigen::Index k = 0; k < m; ++k) {
            const Eigen::Index i = rows[static_cast<std::size_t>(k)];
            kkt.block(n + pe + k, 0, 1, n) = p_.A.row(i);
            kkt.block(0, n + pe + k, n, 1) = p_.A.row(i).transpose();
            const auto s = state[static_cast<std::size_t>(i)];
            rhs(n + pe + k) = (s == RowState::Lower) ? p_.lower(i) : p_.upper(i);
        }

        const double tol = 1e-11 * (data_scale_ + inf_norm(rhs)) * static_cast<double>(std::max<Eigen::Index>(dim, 1));
        Vector sol;
        bool ok = false;
        {
            Eigen::PartialPivLU<Matrix> lu(kkt);
            sol = lu.solve(rhs);
            if (sol.allFinite()) {
                for (int it = 0; it < 2; ++it) sol += lu.solve(rhs - kkt * sol);
                ok = sol.allFinite() && inf_norm(kkt * sol - rhs) <= tol;
            }
        }
        if (!ok) {
            // Rank-deficient working sets (repeated rows, singular P) are consistent
            // but need a rank-revealing factorisation.
            Eigen::FullPivLU<Matrix> lu(kkt);
            lu.setThreshold(1e-13);
            sol = lu.solve(rhs);
            if (!sol.allFinite()) return false;
            for (int it = 0; it < 2; ++it) {
                Vector corr = lu.solve(rhs - kkt * sol);
                if (!corr.allFinite()) break;
                sol += corr;
            }
            if (!(inf_norm(kkt * sol - rhs) <= tol)) {
                Eigen::CompleteOrthogonalDecomposition<Matrix> cod(kkt);
                sol = cod.solve(rhs);
                if (!sol.allFinite() || !(inf_norm(kkt * sol - rhs) <= tol)) return false;
            }
        }

        out.x = sol.head(n);
        out.nu = sol.segment(n, pe);
        out.y = Vector::Zero(p_.A.rows());
        for (Eigen::Index k = 0; k < m; ++k) out.y(rows[static_cast<std::size_t>(k)]) = sol(n + pe + k);
        return true;
    }

    const QpProblem& p_;
    const QpSettings& s_;
    double bound_scale_ = 1.0;
    double data_scale_ = 1.0;
};

}  // namespace

KktResiduals kkt_residuals(const QpProblem& p, const Vector& x, const Vector& y, const Vector& nu) {
    KktResiduals r;
    Vector grad = p.P * x + p.q;
    if (p.A.rows() > 0) grad.noalias() += p.A.transpose() * y;
    if (p.E.rows() > 0) grad.noalias() += p.E.transpose() * nu;
    r.stationarity = inf_norm(grad);
    double primal = p.E.rows() > 0 ? inf_norm(p.E * x - p.e_rhs) : 0.0;
    double comp = 0.0;
    if (p.A.rows() > 0) {
        const Vector ax = p.A * x;
        for (Eigen::Index i = 0; i < ax.size(); ++i) {
            primal = std::max({primal, ax(i) - p.upper(i), p.lower(i) - ax(i)});
            if (y(i) > 0) comp = std::max(comp, y(i) * std::abs(p.upper(i) - ax(i)));
            if (y(i) < 0) comp = std::max(comp, -y(i) * std::abs(ax(i) - p.lower(i)));
        }
    }
    r.primal = std::max(primal, 0.0);
    r.complementarity = comp;
    return r;
}

QpResult solve_qp(const QpProblem& p, const QpSettings& s, const QpWarmStart* warm) {
    validate(p);
    const Eigen::Index n = p.P.rows();
    const Eigen::Index m = p.A.rows();

    Vector x = Vector::Zero(n);
    Vector y = Vector::Zero(m);
    if (warm != nullptr) {
        if (warm->x.size() == n) x = warm->x;
        if (warm->y.size() == m) y = warm->y;
    }
    Vector z = (p.A * x).cwiseMax(p.lower).cwiseMin(p.upper);
    Vector nu;

    double rho = s.rho;
    Vector rho_vec = row_penalties(p, rho);
    XStepSolver xstep(p, s.sigma, rho_vec);
    const EqualityProjector projector(p.E);
    const Polisher polisher(p, s);

    QpResult result;
    auto finish_polished = [&](PolishOutcome&& po, int iter) {
        result.x = std::move(po.x);
        result.y = std::move(po.y);
        result.nu = std::move(po.nu);
        result.z = (p.A * result.x).cwiseMax(p.lower).cwiseMin(p.upper);
        result.iterations = iter;
        result.status = QpStatus::Optimal;
        result.polished = true;
        const KktResiduals kkt = kkt_residuals(p, result.x, result.y, result.nu);
        result.primal_residual = kkt.primal;
        result.dual_residual = kkt.stationarity;
        return result;
    };

    std::vector<RowState> last_attempt;
    auto try_polish = [&]() -> std::optional<PolishOutcome> {
        if (!s.polish) return std::nullopt;
        auto guess = polisher.guess(z, y);
        if (guess == last_attempt) return std::nullopt;
        last_attempt = guess;
        PolishOutcome po = polisher.run(std::move(guess));
        if (!po.success) return std::nullopt;
        return po;
    };

    if (warm != nullptr && s.polish) {
        if (auto po = try_polish()) return finish_polished(std::move(*po), 0);
    }

    Vector x_prev;
    Vector z_prev;
    double best_score = kInf;
    QpResult best;
    for (int iter = 1; iter <= s.max_iter; ++iter) {
        x_prev = x;
        z_prev = z;
        Vector rhs = s.sigma * x_prev - p.q;
        if (m > 0) rhs.noalias() += p.A.transpose() * (rho_vec.cwiseProduct(z_prev) - y);
        const Vector x_tilde = xstep.solve(rhs, nu);
        const Vector z_tilde = p.A * x_tilde;

        x = s.relaxation * x_tilde + (1.0 - s.relaxation) * x_prev;
        const Vector z_relaxed = s.relaxation * z_tilde + (1.0 - s.relaxation) * z_prev;
        z = (z_relaxed + y.cwiseQuotient(rho_vec)).cwiseMax(p.lower).cwiseMin(p.upper);
        y += rho_vec.cwiseProduct(z_relaxed - z);

        const bool check = (iter % s.check_interval == 0) || iter == s.max_iter;
        const bool adapt = s.adaptive_rho && (iter % s.adapt_interval == 0);
        if (!check && !adapt) continue;

        const Vector ax = p.A * x;
        const Vector px = p.P * x;
        const Vector aty = m > 0 ? Vector(p.A.transpose() * y) : Vector::Zero(n);
        const double r_prim = m > 0 ? inf_norm(ax - z) : 0.0;
        const double r_dual = inf_norm(projector.project(px + p.q + aty));
        const double prim_scale = std::max(inf_norm(ax), inf_norm(z));
        const double dual_scale = std::max({inf_norm(px), inf_norm(aty), inf_norm(p.q)});
        const double eps_prim = s.eps_abs + s.eps_rel * prim_scale;
        const double eps_dual = s.eps_abs + s.eps_rel * dual_scale;

        const double score = r_prim / eps_prim + r_dual / eps_dual;
        if (score < best_score) {
            best_score = score;
            best.x = x;
            best.z = z;
            best.y = y;
            best.primal_residual = r_prim;
            best.dual_residual = r_dual;
        }

        if (r_prim <= eps_prim && r_dual <= eps_dual) {
            if (s.polish) {
                last_attempt.clear();
                if (auto po = try_polish()) return finish_polished(std::move(*po), iter);
            }
            result.x = x;
            result.z = z;
            result.y = y;
            result.nu = projector.multipliers(px + p.q + aty);
            result.iterations = iter;
            result.status = QpStatus::Optimal;
            result.primal_residual = r_prim;
            result.dual_residual = r_dual;
            return result;
        }

        if (s.polish && iter % s.polish_interval == 0) {
            if (auto po = try_polish()) return finish_polished(std::move(*po), iter);
        }

        if (adapt && m > 0) {
            const double prim_rel = r_prim / std::max(prim_scale, 1e-30);
            const double dual_rel = r_dual / std::max(dual_scale, 1e-30);
            if (prim_rel > 0 && dual_rel > 0) {
                const double proposal = std::clamp(rho * std::sqrt(prim_rel / dual_rel), kRhoMin, kRhoMax);
                if (proposal > 5.0 * rho || proposal < 0.2 * rho) {
                    rho = proposal;
                    rho_vec = row_penalties(p, rho);
                    xstep.factor(s.sigma, rho_vec);
                }
            }
        }
    }

    best.iterations = s.max_iter;
    best.status = QpStatus::MaxIter;
    if (best.x.size() == 0) {
        best.x = x;
        best.z = z;
        best.y = y;
    }
    const Vector grad = p.P * best.x + p.q + (m > 0 ? Vector(p.A.transpose() * best.y) : Vector::Zero(n));
    best.nu = projector.multipliers(grad);
    return best;
}

}  // namespace l2relax
