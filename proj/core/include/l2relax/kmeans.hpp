#pragma once

#include <vector>

#include "l2relax/numerics.hpp"

namespace l2relax {

struct KMeansOptions {
    int restarts = 10;
    int max_iter = 300;
    int max_reseeds = 100;  // total empty-cluster re-seeds across all restarts
};

struct KMeansResult {
    std::vector<int> labels;  // relabelled in order of first appearance
    Matrix centers;           // K×d, row k pairs with label k
    double inertia = 0.0;     // within-cluster sum of squares
    int iterations = 0;       // Lloyd iterations of the winning restart
};

/// Squared-Euclidean Lloyd iterations on the rows of `points` with k-means++
/// seeding. Restart r draws from rng.substream(r); the lowest inertia wins and
/// ties keep the earlier restart.
KMeansResult kmeans(const Matrix& points, int k, const RngStream& rng, const KMeansOptions& opts = {});

}  // namespace l2relax
