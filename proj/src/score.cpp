#include "famdad/score.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "famdad/rng.hpp"

namespace famdad {

int spad_default_bins(std::size_t n) {
    return static_cast<int>(std::ceil(std::log2(static_cast<double>(n)))) + 1;
}

namespace {

int bin_of(const SpadDimension& dim, double value) {
    if (dim.bins == 1 || dim.hi <= dim.lo) return 0;
    // Out-of-range values clamp into the edge bins; the trained maximum lands
    // in the top bin.
    double scaled = (value - dim.lo) / (dim.hi - dim.lo) * dim.bins;
    int idx = static_cast<int>(std::floor(scaled));
    if (idx < 0) idx = 0;
    if (idx >= dim.bins) idx = dim.bins - 1;
    return idx;
}

SpadDimension fit_continuous_dimension(const double* values, std::size_t n, int bins) {
    SpadDimension dim;
    dim.categorical = false;
    double lo = values[0], hi = values[0];
    for (std::size_t i = 1; i < n; ++i) {
        lo = std::min(lo, values[i]);
        hi = std::max(hi, values[i]);
    }
    dim.lo = lo;
    dim.hi = hi;
    dim.bins = (hi > lo) ? bins : 1;
    std::vector<double> counts(dim.bins, 0.0);
    for (std::size_t i = 0; i < n; ++i) counts[bin_of(dim, values[i])] += 1.0;
    dim.log_prob.resize(dim.bins);
    const double denom = static_cast<double>(n) + dim.bins;
    for (int b = 0; b < dim.bins; ++b) {
        dim.log_prob[b] = std::log((counts[b] + 1.0) / denom);
    }
    return dim;
}

} // namespace

SpadModel spad_fit(const Eigen::MatrixXd& data, int bins) {
    const std::size_t n = static_cast<std::size_t>(data.rows());
    if (n < 2) throw Error("SPAD needs at least 2 rows");
    const int use_bins = bins > 0 ? bins : spad_default_bins(n);
    SpadModel model;
    model.n_train = n;
    std::vector<double> column(n);
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
        for (std::size_t i = 0; i < n; ++i) column[i] = data(static_cast<Eigen::Index>(i), j);
        model.dimensions.push_back(fit_continuous_dimension(column.data(), n, use_bins));
    }
    return model;
}

SpadModel spad_fit(const MixedTable& table, int bins) {
    const std::size_t n = table.rows();
    if (n < 2) throw Error("SPAD needs at least 2 rows");
    const int use_bins = bins > 0 ? bins : spad_default_bins(n);
    SpadModel model;
    model.n_train = n;
    // Categorical dimensions first, matching the encoded column order.
    for (const auto& col : table.categorical()) {
        SpadDimension dim;
        dim.categorical = true;
        dim.bins = static_cast<int>(col.levels.size());
        std::vector<double> counts(col.levels.size(), 0.0);
        for (std::int32_t code : col.codes) counts[code] += 1.0;
        dim.log_prob.resize(dim.bins);
        const double denom = static_cast<double>(n) + dim.bins;
        for (int b = 0; b < dim.bins; ++b) {
            dim.log_prob[b] = std::log((counts[b] + 1.0) / denom);
        }
        model.dimensions.push_back(std::move(dim));
    }
    for (const auto& col : table.continuous()) {
        model.dimensions.push_back(fit_continuous_dimension(col.values.data(), n, use_bins));
    }
    return model;
}

ScoreVector spad_score(const SpadModel& model, const Eigen::MatrixXd& data) {
    if (static_cast<std::size_t>(data.cols()) != model.dimensions.size()) {
        throw Error("data dimensionality does not match SPAD model");
    }
    for (const auto& dim : model.dimensions) {
        if (dim.categorical) throw Error("matrix scoring requires a continuous-only SPAD model");
    }
    ScoreVector out;
    out.method = "spad";
    out.scores.resize(static_cast<std::size_t>(data.rows()));
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
        double s = 0.0;
        for (Eigen::Index j = 0; j < data.cols(); ++j) {
            s -= model.dimensions[static_cast<std::size_t>(j)]
                     .log_prob[bin_of(model.dimensions[static_cast<std::size_t>(j)], data(i, j))];
        }
        out.scores[static_cast<std::size_t>(i)] = s;
    }
    return out;
}

ScoreVector spad_score(const SpadModel& model, const MixedTable& table) {
    const std::size_t n_cat = table.categorical().size();
    const std::size_t n_cont = table.continuous().size();
    if (model.dimensions.size() != n_cat + n_cont) {
        throw Error("table dimensionality does not match SPAD model");
    }
    ScoreVector out;
    out.method = "spad";
    out.scores.assign(table.rows(), 0.0);
    for (std::size_t j = 0; j < n_cat; ++j) {
        const auto& dim = model.dimensions[j];
        if (!dim.categorical) throw Error("SPAD model/table dimension kind mismatch");
        const auto& col = table.categorical()[j];
        for (std::size_t i = 0; i < table.rows(); ++i) {
            const std::int32_t code = col.codes[i];
            if (code >= dim.bins) throw Error("level unseen at fit time in column '" + col.name + "'");
            out.scores[i] -= dim.log_prob[code];
        }
    }
    for (std::size_t j = 0; j < n_cont; ++j) {
        const auto& dim = model.dimensions[n_cat + j];
        if (dim.categorical) throw Error("SPAD model/table dimension kind mismatch");
        const auto& col = table.continuous()[j];
        for (std::size_t i = 0; i < table.rows(); ++i) {
            out.scores[i] -= dim.log_prob[bin_of(dim, col.values[i])];
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

double iso_expected_path(int m) {
    if (m <= 1) return 0.0;
    double harmonic = 0.0;
    for (int i = 1; i <= m - 1; ++i) harmonic += 1.0 / i;
    return 2.0 * harmonic - 2.0 * (m - 1) / static_cast<double>(m);
}

namespace {

struct TreeBuilder {
    const Eigen::MatrixXd& data;
    Rng& rng;
    int height_limit;
    IsoTree& tree;

    // Builds the node over rows[begin, end); returns its index.
    int build(std::vector<Eigen::Index>& rows, int begin, int end, int depth) {
        const int node_index = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes[node_index].size = end - begin;
        if (end - begin <= 1 || depth >= height_limit) return node_index;

        // Split dimensions must admit a point strictly inside the value
        // range; dimensions whose range holds no interior double cannot
        // split.
        std::vector<int> candidates;
        std::vector<std::pair<double, double>> ranges(static_cast<std::size_t>(data.cols()));
        for (Eigen::Index d = 0; d < data.cols(); ++d) {
            double lo = data(rows[begin], d), hi = lo;
            for (int i = begin + 1; i < end; ++i) {
                const double v = data(rows[i], d);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            ranges[static_cast<std::size_t>(d)] = {lo, hi};
            if (std::nextafter(lo, hi) < hi) candidates.push_back(static_cast<int>(d));
        }
        if (candidates.empty()) return node_index;  // duplicate-valued node

        // Candidates follow column order, so permuting input columns permutes
        // which dimension a given draw lands on: forests over reordered data
        // agree in distribution, not tree for tree.
        const int dim = candidates[rng.below(candidates.size())];
        const auto [lo, hi] = ranges[static_cast<std::size_t>(dim)];
        double split = lo + rng.uniform_open() * (hi - lo);
        if (split <= lo) split = std::nextafter(lo, hi);
        if (split >= hi) split = std::nextafter(hi, lo);

        auto mid_it = std::partition(rows.begin() + begin, rows.begin() + end,
                                     [&](Eigen::Index r) { return data(r, dim) < split; });
        const int mid = static_cast<int>(mid_it - rows.begin());

        tree.nodes[node_index].split_dim = dim;
        tree.nodes[node_index].split_value = split;
        const int left = build(rows, begin, mid, depth + 1);
        tree.nodes[node_index].left = left;
        const int right = build(rows, mid, end, depth + 1);
        tree.nodes[node_index].right = right;
        return node_index;
    }
};

double path_length(const IsoTree& tree, const IsoForestModel& model,
                   const Eigen::MatrixXd& data, Eigen::Index row) {
    int node = 0;
    int depth = 0;
    for (;;) {
        const IsoNode& n = tree.nodes[static_cast<std::size_t>(node)];
        if (n.split_dim < 0) {
            return depth + model.expected_path[static_cast<std::size_t>(n.size)];
        }
        node = data(row, n.split_dim) < n.split_value ? n.left : n.right;
        ++depth;
    }
}

} // namespace

IsoForestModel iso_fit(const Eigen::MatrixXd& data, int n_trees, int psi, std::uint64_t seed) {
    const Eigen::Index n = data.rows();
    if (n < 2) throw Error("isolation forest needs at least 2 rows");
    if (data.cols() < 1) throw Error("isolation forest needs at least 1 dimension");
    if (n_trees < 1) throw Error("isolation forest needs at least 1 tree");
    if (psi < 2) throw Error("subsample size must be at least 2");

    IsoForestModel model;
    model.n_trees = n_trees;
    model.psi = static_cast<int>(std::min<Eigen::Index>(psi, n));
    model.height_limit = static_cast<int>(std::ceil(std::log2(static_cast<double>(model.psi))));
    model.seed = seed;
    model.n_dims = data.cols();
    model.expected_path.resize(static_cast<std::size_t>(model.psi) + 1);
    for (int m = 0; m <= model.psi; ++m) {
        model.expected_path[static_cast<std::size_t>(m)] = iso_expected_path(m);
    }

    model.trees.resize(static_cast<std::size_t>(n_trees));
    for (int t = 0; t < n_trees; ++t) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));

        // Partial Fisher-Yates: the first psi entries become the subsample.
        std::vector<Eigen::Index> rows(static_cast<std::size_t>(n));
        std::iota(rows.begin(), rows.end(), 0);
        for (int i = 0; i < model.psi; ++i) {
            const std::size_t j = i + rng.below(static_cast<std::uint64_t>(n - i));
            std::swap(rows[static_cast<std::size_t>(i)], rows[j]);
        }
        rows.resize(static_cast<std::size_t>(model.psi));

        TreeBuilder builder{data, rng, model.height_limit, model.trees[static_cast<std::size_t>(t)]};
        builder.build(rows, 0, model.psi, 0);
    }
    return model;
}

ScoreVector iso_score(const IsoForestModel& model, const Eigen::MatrixXd& data) {
    if (data.cols() != model.n_dims) {
        throw Error("data dimensionality does not match isolation forest model");
    }
    const double norm = model.expected_path[static_cast<std::size_t>(model.psi)];
    if (!(norm > 0.0)) throw Error("degenerate normalization: c(psi) = 0");
    ScoreVector out;
    out.method = "iso";
    out.scores.resize(static_cast<std::size_t>(data.rows()));
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
        double total = 0.0;
        for (const auto& tree : model.trees) {
            total += path_length(tree, model, data, i);
        }
        const double mean_path = total / static_cast<double>(model.trees.size());
        out.scores[static_cast<std::size_t>(i)] = std::exp2(-mean_path / norm);
    }
    return out;
}

} // namespace famdad
