#include "famdad/weight.hpp"

#include <algorithm>

namespace famdad {

WeightVector famd_weights(const EncodeStats& stats) {
    const Eigen::Index b = stats.p.size();
    const Eigen::Index c = stats.mu.size();
    WeightVector wv;
    wv.mode = WeightMode::Famd;
    wv.w.resize(b + c);
    if (b > 0) wv.w.head(b) = stats.p;
    if (c > 0) wv.w.tail(c).setOnes();
    return wv;
}

WeightVector kurtosis_weights(const EncodeStats& stats, double cap) {
    if (!(cap > 0.0)) throw Error("kurtosis cap must be positive");
    const Eigen::Index b = stats.p.size();
    const Eigen::Index c = stats.mu.size();
    WeightVector wv;
    wv.mode = WeightMode::KurtosisWeighted;
    wv.kappa_cap = cap;
    wv.w.resize(b + c);
    if (b > 0) wv.w.head(b) = stats.p;
    for (Eigen::Index j = 0; j < c; ++j) {
        wv.w(b + j) = std::min(stats.kappa(j), cap) / 3.0;
    }
    return wv;
}

WeightVector make_weights(const EncodeStats& stats, WeightMode mode, double cap) {
    return mode == WeightMode::Famd ? famd_weights(stats) : kurtosis_weights(stats, cap);
}

} // namespace famdad
