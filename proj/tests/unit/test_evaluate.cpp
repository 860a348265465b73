#include <doctest.h>

#include <cmath>
#include <vector>

#include "famdad/evaluate.hpp"
#include "famdad/rng.hpp"

using namespace famdad;

namespace {

// O(n^2) reference: count anomaly-inlier pairs, ties worth one half.
double brute_auc(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels) {
    double wins = 0.0;
    double n_a = 0.0, n_i = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!labels[i]) continue;
        n_a += 1.0;
        for (std::size_t j = 0; j < labels.size(); ++j) {
            if (labels[j]) continue;
            if (scores[i] > scores[j]) wins += 1.0;
            else if (scores[i] == scores[j]) wins += 0.5;
        }
    }
    for (std::uint8_t l : labels) n_i += (l == 0) ? 1.0 : 0.0;
    return wins / (n_a * n_i);
}

ScoreVector sv(std::string method, std::vector<double> scores) {
    ScoreVector out;
    out.method = std::move(method);
    out.scores = std::move(scores);
    return out;
}

} // namespace

TEST_CASE("average ranks split ties evenly") {
    CHECK(average_ranks({10.0, 20.0, 20.0, 30.0}) ==
          std::vector<double>{1.0, 2.5, 2.5, 4.0});
    CHECK(average_ranks({5.0, 5.0, 5.0}) == std::vector<double>{2.0, 2.0, 2.0});
    CHECK(average_ranks({3.0, 1.0, 2.0}) == std::vector<double>{3.0, 1.0, 2.0});
}

TEST_CASE("auc matches the worked examples exactly") {
    CHECK(auc_roc({0.9, 0.1, 0.2}, {1, 0, 0}) == 1.0);
    CHECK(auc_roc({0.4, 0.4, 0.4, 0.4}, {1, 0, 1, 0}) == 0.5);
    CHECK(auc_roc({3.0, 1.0, 2.0, 2.0}, {1, 0, 0, 1}) == 0.875);
    LabeledScores ls{{0.9, 0.1, 0.2}, {1, 0, 0}};
    CHECK(auc_roc(ls) == 1.0);
}

TEST_CASE("auc requires both classes and aligned lengths") {
    CHECK_THROWS_AS(auc_roc({1.0, 2.0}, {1, 1}), Error);
    CHECK_THROWS_AS(auc_roc({1.0, 2.0}, {0, 0}), Error);
    CHECK_THROWS_AS(auc_roc({1.0, 2.0}, {0, 1, 1}), Error);
}

TEST_CASE("rank formula equals the pairwise count bit for bit") {
    Rng rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + rng.below(99);
        std::vector<double> scores(n);
        std::vector<std::uint8_t> labels(n);
        const bool gridded = rng.bernoulli(0.5);
        for (std::size_t i = 0; i < n; ++i) {
            scores[i] = gridded ? static_cast<double>(rng.below(5)) : rng.uniform();
            labels[i] = rng.bernoulli(0.3) ? 1 : 0;
        }
        labels[0] = 1;  // guarantee both classes
        labels[n - 1] = 0;
        CHECK(auc_roc(scores, labels) == brute_auc(scores, labels));
    }
}

TEST_CASE("per-dimension auc scores each coordinate in isolation") {
    Embedding e;
    e.F.resize(4, 2);
    e.F << 0, 1, 0, 2, 0, 3, 10, 4;
    e.effective_rank = 1;
    std::vector<std::uint8_t> labels{0, 0, 0, 1};
    std::vector<double> aucs = per_dimension_auc(e, labels);
    REQUIRE(aucs.size() == 1);  // only dimensions within the effective rank
    CHECK(aucs[0] == 1.0);

    e.effective_rank = 2;
    aucs = per_dimension_auc(e, labels);
    REQUIRE(aucs.size() == 2);
    // The second column is uniform over [1,4]: the anomaly shares the densest
    // bin, so it ranks below the two singleton-bin inliers and ties the third.
    CHECK(aucs[1] == 0.5 / 3.0);

    CHECK_THROWS_AS(per_dimension_auc(e, {0, 1}), Error);
}

TEST_CASE("top overlap compares ceil(q n) leaders with index tie-breaks") {
    ScoreVector a = sv("a", {10, 9, 8, 1, 2, 3, 4, 5, 6, 7});
    ScoreVector b = sv("b", {1, 9, 8, 2, 3, 4, 5, 6, 7, 10});
    // m = ceil(0.25 * 10) = 3: a keeps {0,1,2}, b keeps {1,2,9}.
    CHECK(top_overlap(a, b, 0.25) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(top_overlap(a, a, 0.25) == 1.0);
    CHECK(top_overlap(a, b, 1.0) == 1.0);

    ScoreVector flat = sv("flat", std::vector<double>(10, 4.0));
    // All tied: the leaders are the lowest indices.
    CHECK(top_overlap(a, flat, 0.25) == 1.0);

    CHECK_THROWS_AS(top_overlap(a, b, 0.0), Error);
    CHECK_THROWS_AS(top_overlap(a, b, 1.5), Error);
    CHECK_THROWS_AS(top_overlap(a, sv("short", {1.0}), 0.5), Error);
}

TEST_CASE("pair table collects auc, overlaps and correlations") {
    std::vector<std::uint8_t> labels(20, 0);
    labels[18] = labels[19] = 1;
    std::vector<double> base(20), cubed(20), noisy(20);
    for (int i = 0; i < 20; ++i) {
        base[i] = i + 1.0;
        cubed[i] = std::pow(i + 1.0, 3.0);
        noisy[i] = (i % 2 == 0) ? -static_cast<double>(i) : i;
    }
    std::vector<ScoreVector> methods{sv("m1", base), sv("m2", cubed), sv("m3", noisy)};
    PairTable table = pair_table(methods, labels);

    REQUIRE(table.methods == std::vector<std::string>{"m1", "m2", "m3"});
    for (int i = 0; i < 3; ++i) {
        CHECK(table.matrix(i, i) == table.auc[static_cast<std::size_t>(i)]);
    }
    CHECK(table.auc[0] == 1.0);
    CHECK(table.matrix(0, 1) == top_overlap(methods[0], methods[1], 0.05));
    CHECK(table.matrix(1, 0) == top_overlap(methods[0], methods[1], 0.10));

    // A strictly monotone transform preserves ranks but not linearity.
    CHECK(table.spearman(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(table.pearson(0, 1) < 0.95);
    CHECK(table.pearson(0, 1) == table.pearson(1, 0));
    CHECK(table.pearson(0, 0) == 1.0);

    std::vector<ScoreVector> with_flat{sv("m1", base),
                                       sv("flat", std::vector<double>(20, 1.0))};
    PairTable degenerate = pair_table(with_flat, labels);
    CHECK(degenerate.pearson(0, 1) == 0.0);  // undefined correlation reports zero

    CHECK_THROWS_AS(pair_table({sv("only", base)}, labels), Error);
    std::vector<ScoreVector> ragged{sv("m1", base), sv("short", {1.0, 2.0})};
    CHECK_THROWS_AS(pair_table(ragged, labels), Error);
}
