#include "l2relax/kmeans.hpp"

#include <limits>
#include <optional>

#include "l2relax/error.hpp"

namespace l2relax {

namespace {

Matrix plus_plus_seed(const Matrix& x, int k, RngStream& rng) {
    const Eigen::Index n = x.rows();
    Matrix centers(k, x.cols());
    centers.row(0) = x.row(static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(n))));
    Vector d2 = (x.rowwise() - centers.row(0)).rowwise().squaredNorm();
    for (int c = 1; c < k; ++c) {
        const double total = d2.sum();
        Eigen::Index pick = n - 1;
        if (total > 0.0) {
            const double target = rng.uniform() * total;
            double acc = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                acc += d2(i);
                if (acc > target) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(n)));
        }
        centers.row(c) = x.row(pick);
        d2 = d2.cwiseMin((x.rowwise() - centers.row(c)).rowwise().squaredNorm());
    }
    return centers;
}

struct Lloyd {
    std::vector<int> labels;
    Matrix centers;
    double inertia = 0.0;
    int iterations = 0;
};

/// Empty result when a cluster loses all members.
std::optional<Lloyd> lloyd(const Matrix& x, Matrix centers, int max_iter) {
    const Eigen::Index n = x.rows();
    const int k = static_cast<int>(centers.rows());
    std::vector<int> labels(static_cast<std::size_t>(n), -1);
    int it = 0;
    for (; it < max_iter; ++it) {
        bool changed = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                const double d = (x.row(i) - centers.row(c)).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (labels[static_cast<std::size_t>(i)] != best) {
                labels[static_cast<std::size_t>(i)] = best;
                changed = true;
            }
        }
        Matrix sums = Matrix::Zero(k, x.cols());
        Eigen::VectorXi counts = Eigen::VectorXi::Zero(k);
        for (Eigen::Index i = 0; i < n; ++i) {
            sums.row(labels[static_cast<std::size_t>(i)]) += x.row(i);
            ++counts(labels[static_cast<std::size_t>(i)]);
        }
        for (int c = 0; c < k; ++c) {
            if (counts(c) == 0) return std::nullopt;
            centers.row(c) = sums.row(c) / counts(c);
        }
        if (!changed) break;
    }
    Lloyd out;
    out.iterations = it;
    out.inertia = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        out.inertia += (x.row(i) - centers.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
    out.labels = std::move(labels);
    out.centers = std::move(centers);
    return out;
}

}  // namespace

KMeansResult kmeans(const Matrix& points, int k, const RngStream& rng, const KMeansOptions& opts) {
    const Eigen::Index n = points.rows();
    if (k < 1 || k > n) fail(ErrorKind::Domain, "kmeans: K must lie in [1, number of points]");
    if (opts.restarts < 1 || opts.max_iter < 1) fail(ErrorKind::InvalidSpec, "kmeans: restarts and max_iter must be positive");

    std::optional<Lloyd> best;
    int reseeds = 0;
    for (int r = 0; r < opts.restarts; ++r) {
        RngStream stream = rng.substream(static_cast<std::uint64_t>(r));
        std::optional<Lloyd> run;
        while (!(run = lloyd(points, plus_plus_seed(points, k, stream), opts.max_iter))) {
            if (++reseeds > opts.max_reseeds)
                fail(ErrorKind::Domain, "kmeans: clusters keep emptying; fewer than K distinct points?");
        }
        if (!best || run->inertia < best->inertia) best = std::move(run);
    }

    // Canonical labels: order of first appearance.
    std::vector<int> map(static_cast<std::size_t>(k), -1);
    int next = 0;
    KMeansResult out;
    out.labels.resize(static_cast<std::size_t>(n));
    out.centers.resize(k, points.cols());
    for (Eigen::Index i = 0; i < n; ++i) {
        int& m = map[static_cast<std::size_t>(best->labels[static_cast<std::size_t>(i)])];
        if (m < 0) {
            m = next++;
            out.centers.row(m) = best->centers.row(best->labels[static_cast<std::size_t>(i)]);
        }
        out.labels[static_cast<std::size_t>(i)] = m;
    }
    out.inertia = best->inertia;
    out.iterations = best->iterations;
    return out;
}

}  // namespace l2relax
