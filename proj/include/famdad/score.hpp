#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "famdad/tabular.hpp"

namespace famdad {

// One real score per row; higher = more anomalous for every method.
struct ScoreVector {
    std::vector<double> scores;
    std::string method;
};

// ---------------------------------------------------------------------------
// SPAD: per-dimension histogram/frequency scoring combined additively in
// negative log space (equivalently, a product of per-dimension frequencies
// under an independence assumption).

struct SpadDimension {
    bool categorical = false;
    // continuous dimensions: equal-width bins over the trained [lo, hi]
    double lo = 0.0;
    double hi = 0.0;
    int bins = 1;
    std::vector<double> log_prob;  // per bin (or per level), Laplace-smoothed
};

struct SpadModel {
    std::vector<SpadDimension> dimensions;
    std::size_t n_train = 0;
};

// Number of equal-width bins used when none is requested: ceil(log2 n) + 1.
int spad_default_bins(std::size_t n);

// Fit on a continuous matrix; each column is discretized into `bins`
// equal-width bins over its observed range (bins <= 0 selects the default
// rule). Per-bin probability is (count + 1) / (n + #bins). A constant column
// collapses to a single bin and contributes the same constant to every row.
SpadModel spad_fit(const Eigen::MatrixXd& data, int bins = 0);

// Fit directly on mixed data: categorical dimensions use their levels as
// bins, continuous dimensions use the equal-width rule.
SpadModel spad_fit(const MixedTable& table, int bins = 0);

// score(row) = -sum over dimensions of log p(bin of value). Values outside
// the trained range fall into the nearest edge bin.
ScoreVector spad_score(const SpadModel& model, const Eigen::MatrixXd& data);
ScoreVector spad_score(const SpadModel& model, const MixedTable& table);

// ---------------------------------------------------------------------------
// Isolation Forest: an ensemble of random axis-parallel partition trees built
// on subsamples; rows that isolate at shallow depth score higher.

struct IsoNode {
    int split_dim = -1;        // -1 marks a leaf
    double split_value = 0.0;  // rows with value < split_value go left
    int left = -1;
    int right = -1;
    int size = 0;              // rows that reached this node during fitting
};

struct IsoTree {
    std::vector<IsoNode> nodes;  // node 0 is the root
};

struct IsoForestModel {
    std::vector<IsoTree> trees;
    int n_trees = 100;
    int psi = 256;             // subsample size actually used (clamped to n)
    int height_limit = 0;      // ceil(log2 psi)
    std::uint64_t seed = 0;
    Eigen::Index n_dims = 0;
    std::vector<double> expected_path;  // c(m) for m = 0..psi
};

inline constexpr int kDefaultIsoTrees = 100;
inline constexpr int kDefaultIsoSubsample = 256;

// Average unsuccessful-search path length c(m) = 2 H(m-1) - 2 (m-1)/m,
// with exact harmonic numbers; c(0) = c(1) = 0.
double iso_expected_path(int m);

// Each tree is grown on an independent uniform subsample without
// replacement; the per-tree generator is derived from (seed, tree index), so
// the same seed always yields the same forest.
IsoForestModel iso_fit(const Eigen::MatrixXd& data, int n_trees = kDefaultIsoTrees,
                       int psi = kDefaultIsoSubsample, std::uint64_t seed = 0);

// score(x) = 2^(-mean path length / c(psi)), in (0, 1).
ScoreVector iso_score(const IsoForestModel& model, const Eigen::MatrixXd& data);

} // namespace famdad
