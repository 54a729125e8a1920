#pragma once

#include <cmath>

#include "l2relax/numerics.hpp"
#include "l2relax/rng.hpp"

namespace testutil {

using l2relax::Matrix;
using l2relax::RngStream;
using l2relax::Vector;

/// Sample VC of T draws of N correlated normals (a random mixing matrix plus
/// independent noise), so the result is SPD whenever T > N.
inline Matrix random_sample_vc(RngStream& rng, Eigen::Index n, Eigen::Index t) {
    const Matrix mix = l2relax::standard_normal(rng, n, n) * 0.5;
    Matrix x = l2relax::standard_normal(rng, t, n) * mix + l2relax::standard_normal(rng, t, n);
    x.rowwise() -= x.colwise().mean();
    Matrix s = x.transpose() * x / static_cast<double>(t);
    return 0.5 * (s + s.transpose());
}

/// Random SPD matrix with eigenvalues in [lo, hi].
inline Matrix random_spd(RngStream& rng, Eigen::Index n, double lo = 0.2, double hi = 3.0) {
    const Matrix g = l2relax::standard_normal(rng, n, n);
    Eigen::HouseholderQR<Matrix> qr(g);
    const Matrix q = qr.householderQ();
    Vector ev(n);
    for (Eigen::Index i = 0; i < n; ++i) ev(i) = rng.uniform(lo, hi);
    Matrix s = q * ev.asDiagonal() * q.transpose();
    return 0.5 * (s + s.transpose());
}

inline double log_uniform(RngStream& rng, double lo, double hi) {
    return std::exp(rng.uniform(std::log(lo), std::log(hi)));
}

inline double sup_diff(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace testutil
