#include "l2relax/numerics.hpp"

#include <cmath>
#include <string>

#include "l2relax/error.hpp"

namespace l2relax {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::ContractViolation: return "contract-violation";
        case ErrorKind::Domain: return "domain-error";
        case ErrorKind::SingularMatrix: return "singular-matrix";
        case ErrorKind::NotPsd: return "not-psd";
        case ErrorKind::InsufficientData: return "insufficient-data";
        case ErrorKind::MissingTarget: return "missing-target";
        case ErrorKind::DegenerateVariance: return "degenerate-variance";
        case ErrorKind::DegenerateSharpe: return "degenerate-sharpe";
        case ErrorKind::InvalidSpec: return "invalid-spec";
        case ErrorKind::Unsupported: return "unsupported";
        case ErrorKind::Io: return "io-error";
        case ErrorKind::Parse: return "parse-error";
    }
    return "unknown";
}

bool is_usage_error(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Domain:
        case ErrorKind::InvalidSpec:
        case ErrorKind::Unsupported:
        case ErrorKind::Io:
        case ErrorKind::Parse:
        case ErrorKind::MissingTarget:
        case ErrorKind::ContractViolation:
            return true;
        default:
            return false;
    }
}

double max_abs(const Matrix& a) noexcept {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

bool is_symmetric(const Matrix& a, double rel_tol) noexcept {
    if (a.rows() != a.cols()) return false;
    if (!a.allFinite()) return false;
    const double asym = max_abs(a - a.transpose());
    return asym <= rel_tol * std::max(1.0, max_abs(a));
}

void require_symmetric(const Matrix& a, const char* what) {
    if (a.rows() == 0 || a.rows() != a.cols())
        fail(ErrorKind::ContractViolation, std::string(what) + ": matrix must be square and non-empty");
    if (!a.allFinite())
        fail(ErrorKind::ContractViolation, std::string(what) + ": matrix has non-finite entries");
    if (!is_symmetric(a))
        fail(ErrorKind::ContractViolation, std::string(what) + ": matrix is not symmetric");
}

SymEigen sym_eigen(const Matrix& s) {
    require_symmetric(s, "sym_eigen");
    // Symmetrise exactly so the solver sees the lower triangle we validated.
    const Matrix sym = 0.5 * (s + s.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success)
        fail(ErrorKind::ContractViolation, "sym_eigen: QR iteration did not converge");
    const Eigen::Index n = s.rows();
    SymEigen out{Vector(n), Matrix(n, n)};
    for (Eigen::Index j = 0; j < n; ++j) {
        out.values(j) = solver.eigenvalues()(n - 1 - j);
        out.vectors.col(j) = solver.eigenvectors().col(n - 1 - j);
    }
    return out;
}

namespace {

constexpr double kNegEigTol = 1e-10;

Vector clipped_eigenvalues(const SymEigen& eig, const char* what) {
    Vector lam = eig.values;
    for (Eigen::Index j = 0; j < lam.size(); ++j) {
        if (lam(j) < -kNegEigTol)
            fail(ErrorKind::NotPsd, std::string(what) + ": eigenvalue " + std::to_string(lam(j)) +
                                        " below -1e-10");
        if (lam(j) < 0.0) lam(j) = 0.0;
    }
    return lam;
}

}  // namespace

Matrix psd_sqrt(const Matrix& s) {
    const SymEigen eig = sym_eigen(s);
    const Vector root = clipped_eigenvalues(eig, "psd_sqrt").cwiseSqrt();
    Matrix r = eig.vectors * root.asDiagonal() * eig.vectors.transpose();
    return 0.5 * (r + r.transpose());
}

LinearSolve solve_linear(const Matrix& s, const Vector& b) {
    require_symmetric(s, "solve_linear");
    if (b.size() != s.rows()) fail(ErrorKind::ContractViolation, "solve_linear: dimension mismatch");
    Eigen::FullPivLU<Matrix> lu(s);
    const Vector pivots = lu.matrixLU().diagonal().cwiseAbs();
    const double scale = max_abs(s);
    const double smallest = pivots.minCoeff();
    if (scale == 0.0 || smallest < 1e-13 * scale)
        fail(ErrorKind::SingularMatrix, "solve_linear: matrix is numerically singular");
    LinearSolve out;
    out.x = lu.solve(b);
    // One step of iterative refinement.
    const Vector r = b - s * out.x;
    out.x += lu.solve(r);
    out.condition = pivots.maxCoeff() / smallest;
    return out;
}

Matrix standard_normal(RngStream& rng, Eigen::Index n, Eigen::Index dim) {
    Matrix z(n, dim);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) z(i, j) = rng.normal();
    return z;
}

Matrix mvn_sample(RngStream& rng, const Vector& mean, const Matrix& cov, Eigen::Index n) {
    if (cov.rows() != mean.size())
        fail(ErrorKind::ContractViolation, "mvn_sample: mean/cov dimension mismatch");
    const SymEigen eig = sym_eigen(cov);
    const Vector root = clipped_eigenvalues(eig, "mvn_sample").cwiseSqrt();
    const Matrix factor = eig.vectors * root.asDiagonal();  // factor·factor′ = cov
    const Matrix z = standard_normal(rng, n, mean.size());
    Matrix out = z * factor.transpose();
    out.rowwise() += mean.transpose();
    return out;
}

void CompensatedSum::add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
        compensation_ += (sum_ - t) + x;
    else
        compensation_ += (x - t) + sum_;
    sum_ = t;
}

}  // namespace l2relax
