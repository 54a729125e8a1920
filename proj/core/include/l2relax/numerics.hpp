#pragma once

#include <Eigen/Dense>

#include "l2relax/rng.hpp"

namespace l2relax {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct SymEigen {
    Vector values;   // descending
    Matrix vectors;  // column j pairs with values(j)
};

/// Max-abs entry norm ‖A‖∞ used for all relative tolerances in this library.
double max_abs(const Matrix& a) noexcept;

/// True when max|A − A′| ≤ rel_tol·max(1, max|A|).
bool is_symmetric(const Matrix& a, double rel_tol = 1e-12) noexcept;

/// Throws ContractViolation unless `a` is square, finite and within the
/// asymmetry tolerance.
void require_symmetric(const Matrix& a, const char* what);

/// Eigendecomposition of a symmetric matrix (Householder tridiagonalisation
/// followed by implicit symmetric QR), eigenvalues sorted descending.
SymEigen sym_eigen(const Matrix& s);

/// Symmetric PSD square root. Eigenvalues in [−1e-10, 0) are clipped to zero;
/// anything more negative raises NotPsd.
Matrix psd_sqrt(const Matrix& s);

struct LinearSolve {
    Vector x;
    double condition = 0.0;  // ratio of largest to smallest pivot magnitude
};

/// Solve S x = b for symmetric S with full-pivot LU. A pivot below
/// 1e-13·‖S‖∞ raises SingularMatrix.
LinearSolve solve_linear(const Matrix& s, const Vector& b);

/// n draws from N(mean, cov); rows are observations. `cov` must be PSD
/// (same clipping rule as psd_sqrt).
Matrix mvn_sample(RngStream& rng, const Vector& mean, const Matrix& cov, Eigen::Index n);

/// n×dim matrix of independent standard normals, filled row by row.
Matrix standard_normal(RngStream& rng, Eigen::Index n, Eigen::Index dim);

/// Neumaier-compensated sum.
class CompensatedSum {
public:
    void add(double x) noexcept;
    [[nodiscard]] double value() const noexcept { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

}  // namespace l2relax
