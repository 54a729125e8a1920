#include "l2relax/competitors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "l2relax/error.hpp"

namespace l2relax {

std::string_view to_string(Method m) noexcept {
    switch (m) {
        case Method::SimpleAverage: return "sa";
        case Method::Lasso: return "lasso";
        case Method::Ridge: return "ridge";
        case Method::Gec: return "gec";
        case Method::PcGrouping: return "pc_grouping";
        case Method::Oracle: return "oracle";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    if (name == "sa") return Method::SimpleAverage;
    if (name == "lasso") return Method::Lasso;
    if (name == "ridge") return Method::Ridge;
    if (name == "gec") return Method::Gec;
    if (name == "pc_grouping" || name == "pc") return Method::PcGrouping;
    if (name == "oracle") return Method::Oracle;
    fail(ErrorKind::Parse, "unknown method '" + std::string(name) + "'");
}

void CompetitorSpec::validate() const {
    if (!(tuning >= 0.0) || !std::isfinite(tuning)) fail(ErrorKind::InvalidSpec, "competitor tuning must be finite and >= 0");
    if (method == Method::Gec && tuning < 1.0) fail(ErrorKind::InvalidSpec, "gec needs c >= 1");
    if (q < 1 || k < 1) fail(ErrorKind::InvalidSpec, "pc_grouping needs q >= 1 and K >= 1");
}

WeightSolution simple_average(Eigen::Index n) {
    if (n < 1) fail(ErrorKind::Domain, "simple_average: N must be >= 1");
    WeightSolution sol;
    sol.w = Vector::Constant(n, 1.0 / static_cast<double>(n));
    sol.alpha = Vector::Zero(n);
    sol.kkt.sum_violation = std::abs(sol.w.sum() - 1.0);
    return sol;
}

namespace {

/// γ is mapped back from the scaled equality multiplier.
WeightSolution finish(Vector w, double tau, double scale, const QpResult& r) {
    WeightSolution sol;
    sol.w = std::move(w);
    sol.tau = tau;
    sol.alpha = Vector::Zero(sol.w.size());
    sol.gamma = r.nu.size() > 0 ? scale * r.nu(0) : 0.0;
    sol.kkt.sum_violation = std::abs(sol.w.sum() - 1.0);
    sol.iterations = r.iterations;
    sol.polished = r.polished;
    sol.status = r.status == QpStatus::Optimal ? SolveStatus::Optimal : SolveStatus::MaxIter;
    return sol;
}

/// Split-variable QP over x = (p, m) ≥ 0 with w = p − m:
/// P = [Σ −Σ; −Σ Σ], one exact equality row.
QpProblem split_problem(const Matrix& sig) {
    const Eigen::Index n = sig.rows();
    QpProblem qp;
    qp.P.resize(2 * n, 2 * n);
    qp.P << sig, -sig, -sig, sig;
    qp.q = Vector::Zero(2 * n);
    qp.E.resize(1, 2 * n);
    qp.E.leftCols(n).setOnes();
    qp.E.rightCols(n).setConstant(-1.0);
    qp.e_rhs = Vector::Zero(1);
    return qp;
}

bool invertible(const Matrix& sigma) {
    const SymEigen eig = sym_eigen(sigma);
    const double top = std::abs(eig.values(0));
    return top > 0.0 && eig.values(eig.values.size() - 1) > 1e-12 * top;
}

Matrix group_average(const Matrix& errors, const GroupStructure& groups) {
    Matrix z = groups.indicator();
    for (Eigen::Index k = 0; k < groups.groups(); ++k) z.col(k) /= static_cast<double>(groups.sizes()(k));
    return errors * z;
}

WeightSolution expand_group_weights(const Vector& b, const GroupStructure& groups) {
    const Eigen::Index n = groups.units();
    WeightSolution sol;
    sol.w.resize(n);
    for (Eigen::Index i = 0; i < n; ++i)
        sol.w(i) = b(groups.group_of(i)) / static_cast<double>(groups.sizes()(groups.group_of(i)));
    sol.alpha = Vector::Zero(n);
    sol.kkt.sum_violation = std::abs(sol.w.sum() - 1.0);
    return sol;
}

WeightSolution grouped_classical(const Matrix& errors, const GroupStructure& groups) {
    if (groups.units() != errors.cols())
        fail(ErrorKind::ContractViolation, "group structure does not match the number of forecasters");
    const Matrix g = group_average(errors, groups);
    const WeightSolution inner = classical_weights(sample_vc(g));
    WeightSolution sol = expand_group_weights(inner.w, groups);
    sol.gamma = inner.gamma;
    sol.condition = inner.condition;
    return sol;
}

}  // namespace

WeightSolution ridge_recentered(const Matrix& sigma, double tau) {
    if (!(tau >= 0.0) || !std::isfinite(tau)) fail(ErrorKind::Domain, "ridge_recentered: tau must be >= 0");
    require_symmetric(sigma, "ridge_recentered");
    const Eigen::Index n = sigma.rows();
    const Matrix m = sigma + 2.0 * tau * Matrix::Identity(n, n);
    LinearSolve ls;
    try {
        ls = solve_linear(m, Vector::Ones(n));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::SingularMatrix)
            fail(ErrorKind::SingularMatrix, "ridge_recentered: Σ + 2τI is singular");
        throw;
    }
    const double denom = ls.x.sum();
    WeightSolution sol;
    sol.w = ls.x / denom;
    sol.tau = tau;
    sol.gamma = -(1.0 / denom - 2.0 * tau / static_cast<double>(n));
    sol.alpha = Vector::Zero(n);
    sol.kkt.sum_violation = std::abs(sol.w.sum() - 1.0);
    sol.condition = ls.condition;
    return sol;
}

WeightSolution ridge_recentered(const CovEstimate& cov, double tau) { return ridge_recentered(cov.sigma, tau); }

double lasso_subgradient_residual(const Matrix& sigma, double tau, const Vector& w, double zero_tol) {
    const Eigen::Index n = w.size();
    const Vector a = sigma * w;
    const double center = 1.0 / static_cast<double>(n);
    // Each coordinate asks for |c_i − λ| ≤ d_i; the best λ balances the extremes.
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double v = w(i) - center;
        double c = a(i);
        double d = tau;
        if (std::abs(v) > zero_tol) {
            c += tau * (v > 0 ? 1.0 : -1.0);
            d = 0.0;
        }
        hi = std::max(hi, c - d);
        lo = std::min(lo, c + d);
    }
    return std::max(0.0, 0.5 * (hi - lo));
}

WeightSolution lasso_recentered(const Matrix& sigma, double tau, const QpSettings& settings) {
    if (!(tau >= 0.0) || !std::isfinite(tau)) fail(ErrorKind::Domain, "lasso_recentered: tau must be >= 0");
    require_symmetric(sigma, "lasso_recentered");
    const Eigen::Index n = sigma.rows();

    if (tau == 0.0 && invertible(sigma)) {
        WeightSolution sol = classical_weights(sigma);
        sol.alpha = Vector::Zero(n);
        return sol;
    }
    const Vector g = sigma * Vector::Constant(n, 1.0 / static_cast<double>(n));
    if (0.5 * (g.maxCoeff() - g.minCoeff()) <= tau) {
        WeightSolution sol = simple_average(n);
        sol.tau = tau;
        sol.gamma = -0.5 * (g.maxCoeff() + g.minCoeff());
        return sol;
    }

    const double scale = std::max(max_abs(sigma), 1e-300);
    const Matrix sig = 0.5 * (sigma + sigma.transpose()) / scale;
    const Vector gs = g / scale;
    const double t = tau / scale;

    // v = p − m; objective ½v′Σv + (Σ1/N)′v + τ1′(p + m).
    QpProblem qp = split_problem(sig);
    qp.q.head(n) = gs.array() + t;
    qp.q.tail(n) = -gs.array() + t;
    qp.A = Matrix::Identity(2 * n, 2 * n);
    qp.lower = Vector::Zero(2 * n);
    qp.upper = Vector::Constant(2 * n, std::numeric_limits<double>::infinity());

    const QpResult r = solve_qp(qp, settings);
    const Vector v = r.x.head(n) - r.x.tail(n);
    return finish(v.array() + 1.0 / static_cast<double>(n), tau, scale, r);
}

WeightSolution lasso_recentered(const CovEstimate& cov, double tau, const QpSettings& qp) {
    return lasso_recentered(cov.sigma, tau, qp);
}

WeightSolution gec_weights(const Matrix& sigma, double c, const QpSettings& settings) {
    if (!(c >= 1.0) || !std::isfinite(c)) fail(ErrorKind::Domain, "gec_weights: c must be >= 1");
    require_symmetric(sigma, "gec_weights");
    const Eigen::Index n = sigma.rows();

    if (invertible(sigma)) {
        try {
            WeightSolution sol = classical_weights(sigma);
            if (sol.w.lpNorm<1>() <= c) {
                sol.tau = c;
                sol.alpha = Vector::Zero(n);
                return sol;
            }
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::SingularMatrix) throw;
        }
    }

    const double scale = std::max(max_abs(sigma), 1e-300);
    const Matrix sig = 0.5 * (sigma + sigma.transpose()) / scale;

    QpProblem qp = split_problem(sig);
    qp.e_rhs(0) = 1.0;
    qp.A = Matrix::Zero(2 * n + 1, 2 * n);
    qp.A.topRows(2 * n).setIdentity();
    qp.A.row(2 * n).setOnes();
    qp.lower = Vector::Zero(2 * n + 1);
    qp.upper = Vector::Constant(2 * n + 1, std::numeric_limits<double>::infinity());
    qp.lower(2 * n) = -std::numeric_limits<double>::infinity();
    qp.upper(2 * n) = c;

    const QpResult r = solve_qp(qp, settings);
    Vector w = r.x.head(n) - r.x.tail(n);
    return finish(std::move(w), c, scale, r);
}

WeightSolution gec_weights(const CovEstimate& cov, double c, const QpSettings& qp) {
    return gec_weights(cov.sigma, c, qp);
}

Matrix right_singular_vectors(const Matrix& x) {
    Eigen::BDCSVD<Matrix> svd(x, Eigen::ComputeThinV);
    Matrix v = svd.matrixV();
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
        Eigen::Index arg = 0;
        v.col(j).cwiseAbs().maxCoeff(&arg);
        if (v(arg, j) < 0.0) v.col(j) = -v.col(j);
    }
    return v;
}

PcGrouping pc_grouping_weights(const Matrix& errors, int k, int q, const RngStream& rng, const KMeansOptions& opts) {
    const Eigen::Index n = errors.cols();
    const Eigen::Index t = errors.rows();
    if (k < 1 || k > n) fail(ErrorKind::Domain, "pc_grouping_weights: K must lie in [1, N]");
    if (q < 1 || q > std::min(t, n)) fail(ErrorKind::Domain, "pc_grouping_weights: q must lie in [1, min(T, N)]");

    std::vector<int> labels(static_cast<std::size_t>(n), 0);
    if (k == n) {
        for (Eigen::Index i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = static_cast<int>(i);
    } else if (k > 1) {
        const Matrix v = right_singular_vectors(errors).leftCols(q);
        labels = kmeans(v, k, rng, opts).labels;
    }
    GroupStructure groups(std::move(labels));
    WeightSolution sol = grouped_classical(errors, groups);
    return {std::move(sol), std::move(groups)};
}

WeightSolution oracle_membership_weights(const Matrix& errors, const GroupStructure& groups) {
    return grouped_classical(errors, groups);
}

WeightSolution fit_competitor(const CompetitorSpec& spec, const Matrix& errors, Estimator estimator,
                              const RngStream* rng, const GroupStructure* groups) {
    spec.validate();
    switch (spec.method) {
        case Method::SimpleAverage: return simple_average(errors.cols());
        case Method::Lasso: return lasso_recentered(estimate_covariance(errors, estimator), spec.tuning);
        case Method::Ridge: return ridge_recentered(estimate_covariance(errors, estimator), spec.tuning);
        case Method::Gec: return gec_weights(estimate_covariance(errors, estimator), spec.tuning);
        case Method::PcGrouping:
            if (rng == nullptr) fail(ErrorKind::ContractViolation, "pc_grouping needs a random stream");
            return pc_grouping_weights(errors, spec.k, spec.q, *rng).solution;
        case Method::Oracle:
            if (groups == nullptr) fail(ErrorKind::InvalidSpec, "oracle needs a known group structure");
            return oracle_membership_weights(errors, *groups);
    }
    fail(ErrorKind::ContractViolation, "unhandled method");
}

}  // namespace l2relax
