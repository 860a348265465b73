#include "famdad/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "famdad/error.hpp"

namespace famdad {

std::vector<double> average_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        // Positions i..j (0-based) share the average of ranks i+1..j+1.
        const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

double auc_roc(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels) {
    if (scores.size() != labels.size()) throw Error("scores and labels differ in length");
    std::size_t n_anom = 0;
    for (std::uint8_t l : labels) n_anom += (l != 0);
    const std::size_t n_in = labels.size() - n_anom;
    if (n_anom == 0 || n_in == 0) throw Error("AUC needs both classes present");

    const std::vector<double> ranks = average_ranks(scores);
    double rank_sum = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i]) rank_sum += ranks[i];
    }
    const double n_a = static_cast<double>(n_anom);
    // Mann-Whitney U from the anomaly rank sum; both terms are exact
    // multiples of 1/2, so this matches the pairwise count bit for bit.
    const double u = rank_sum - n_a * (n_a + 1.0) / 2.0;
    return u / (n_a * static_cast<double>(n_in));
}

double auc_roc(const LabeledScores& ls) { return auc_roc(ls.scores, ls.labels); }

std::vector<double> per_dimension_auc(const Embedding& embedding,
                                      const std::vector<std::uint8_t>& labels,
                                      int bins) {
    if (static_cast<std::size_t>(embedding.F.rows()) != labels.size()) {
        throw Error("labels do not match embedding rows");
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(embedding.effective_rank));
    for (Eigen::Index d = 0; d < embedding.effective_rank; ++d) {
        Eigen::MatrixXd column = embedding.F.col(d);
        SpadModel model = spad_fit(column, bins);
        out.push_back(auc_roc(spad_score(model, column).scores, labels));
    }
    return out;
}

namespace {

std::vector<std::size_t> top_indices(const std::vector<double>& scores, std::size_t m) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    order.resize(m);
    return order;
}

} // namespace

double top_overlap(const ScoreVector& s1, const ScoreVector& s2, double q) {
    if (s1.scores.size() != s2.scores.size()) throw Error("score vectors differ in length");
    if (!(q > 0.0 && q <= 1.0)) throw Error("need 0 < q <= 1");
    const std::size_t n = s1.scores.size();
    if (n == 0) throw Error("empty score vectors");
    const auto m = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));

    auto t1 = top_indices(s1.scores, m);
    auto t2 = top_indices(s2.scores, m);
    std::sort(t1.begin(), t1.end());
    std::sort(t2.begin(), t2.end());
    std::vector<std::size_t> common;
    std::set_intersection(t1.begin(), t1.end(), t2.begin(), t2.end(),
                          std::back_inserter(common));
    return static_cast<double>(common.size()) / static_cast<double>(m);
}

namespace {

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;  // constant vector: undefined, report 0
    return sxy / std::sqrt(sxx * syy);
}

} // namespace

PairTable pair_table(const std::vector<ScoreVector>& scores,
                     const std::vector<std::uint8_t>& labels) {
    if (scores.size() < 2) throw Error("pair table needs at least 2 score vectors");
    const std::size_t n = scores[0].scores.size();
    for (const auto& s : scores) {
        if (s.scores.size() != n) throw Error("score vectors differ in length");
    }

    PairTable out;
    const auto k = static_cast<Eigen::Index>(scores.size());
    out.matrix.resize(k, k);
    out.pearson.resize(k, k);
    out.spearman.resize(k, k);

    std::vector<std::vector<double>> ranks;
    ranks.reserve(scores.size());
    for (const auto& s : scores) {
        out.methods.push_back(s.method);
        out.auc.push_back(auc_roc(s.scores, labels));
        ranks.push_back(average_ranks(s.scores));
    }

    for (Eigen::Index i = 0; i < k; ++i) {
        out.matrix(i, i) = out.auc[static_cast<std::size_t>(i)];
        out.pearson(i, i) = 1.0;
        out.spearman(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < k; ++j) {
            const auto& si = scores[static_cast<std::size_t>(i)];
            const auto& sj = scores[static_cast<std::size_t>(j)];
            out.matrix(i, j) = top_overlap(si, sj, 0.05);
            out.matrix(j, i) = top_overlap(si, sj, 0.10);
            const double p = pearson(si.scores, sj.scores);
            out.pearson(i, j) = out.pearson(j, i) = p;
            const double sp = pearson(ranks[static_cast<std::size_t>(i)],
                                      ranks[static_cast<std::size_t>(j)]);
            out.spearman(i, j) = out.spearman(j, i) = sp;
        }
    }
    return out;
}

} // namespace famdad
