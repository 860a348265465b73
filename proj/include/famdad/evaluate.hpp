#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "famdad/embed.hpp"
#include "famdad/score.hpp"

namespace famdad {

struct LabeledScores {
    std::vector<double> scores;
    std::vector<std::uint8_t> labels;  // 1 = anomaly
};

// Ranks 1..n with ties assigned the average rank of their run.
std::vector<double> average_ranks(const std::vector<double>& values);

// Probability a random anomaly outscores a random inlier, ties counted 1/2.
// Computed from rank statistics; agrees exactly with the pairwise count.
double auc_roc(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels);
double auc_roc(const LabeledScores& ls);

// AUC of a frequency scorer fit on each embedding dimension alone, for the
// dimensions within the effective rank.
std::vector<double> per_dimension_auc(const Embedding& embedding,
                                      const std::vector<std::uint8_t>& labels,
                                      int bins = 0);

// |top-m(s1) ∩ top-m(s2)| / m with m = ceil(q*n); ties broken by lower row
// index so the result is deterministic.
double top_overlap(const ScoreVector& s1, const ScoreVector& s2, double q);

struct PairTable {
    std::vector<std::string> methods;
    std::vector<double> auc;    // per method, same order
    // Diagonal: AUC. Above diagonal: top-5% overlap. Below: top-10% overlap.
    Eigen::MatrixXd matrix;
    Eigen::MatrixXd pearson;    // linear correlation of raw scores
    Eigen::MatrixXd spearman;   // linear correlation of average ranks
};

PairTable pair_table(const std::vector<ScoreVector>& scores,
                     const std::vector<std::uint8_t>& labels);

} // namespace famdad
