#pragma once

#include <Eigen/Dense>

#include "famdad/encode.hpp"

namespace famdad {

enum class WeightMode { Famd, KurtosisWeighted };

// Diagonal of the variable weight matrix, one positive entry per column
// of Z (indicator columns first, continuous columns after).
struct WeightVector {
    Eigen::VectorXd w;
    WeightMode mode = WeightMode::Famd;
    double kappa_cap = 10.0;
};

inline constexpr double kDefaultKurtosisCap = 10.0;

// Standard weights: indicator columns get their category proportion,
// continuous columns get one.
WeightVector famd_weights(const EncodeStats& stats);

// Anomaly-oriented weights: indicator columns unchanged, continuous columns
// get min(kurtosis, cap) / 3, so heavy-tailed variables count for more and a
// normal column keeps unit weight.
WeightVector kurtosis_weights(const EncodeStats& stats, double cap = kDefaultKurtosisCap);

WeightVector make_weights(const EncodeStats& stats, WeightMode mode,
                          double cap = kDefaultKurtosisCap);

} // namespace famdad
