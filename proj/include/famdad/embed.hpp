#pragma once

#include <vector>

#include <Eigen/Dense>

#include "famdad/weight.hpp"

namespace famdad {

// Relative threshold under which trailing singular values are treated as the
// structural null space of the one-hot encoding (each variable's scaled
// indicators satisfy sum_q p_q * Z_col = 0 exactly). First/last subspace
// selection must not dip into that null space.
inline constexpr double kRankEpsilon = 1e-9;

// Weighted SVD embedding. With A = n^{-1/2} * Z * diag(w)^{1/2} = U S V^T:
//   singular_values = diag(S), descending
//   V               = right singular vectors, sign-normalized
//   F               = Z * diag(w)^{1/2} * V, the principal coordinates;
//                     each column has population variance equal to the
//                     squared singular value.
struct Embedding {
    Eigen::VectorXd singular_values;
    Eigen::MatrixXd V;
    Eigen::MatrixXd F;
    Eigen::Index effective_rank = 0;
    WeightMode weight_mode = WeightMode::Famd;
};

enum class SubspaceMode { First, FirstLast };

struct SubspaceSelection {
    SubspaceMode mode = SubspaceMode::First;
    int k = 0;                         // requested size
    std::vector<Eigen::Index> indices; // columns of F, leading block then trailing block
    bool clamped = false;              // k exceeded the effective rank
};

Embedding fit_embedding(const EncodedMatrix& encoded, const WeightVector& weights);

// First mode takes the k leading coordinates. FirstLast takes the leading
// ceil(k/2) plus the trailing floor(k/2) within the effective rank. If k
// exceeds the effective rank the selection clamps to all of it.
SubspaceSelection select_subspace(const Embedding& embedding, SubspaceMode mode, int k);

// Columns of F at the selected indices, in selection order.
Eigen::MatrixXd project(const Embedding& embedding, const SubspaceSelection& selection);

const char* subspace_mode_name(SubspaceMode mode);
const char* weight_mode_name(WeightMode mode);

} // namespace famdad
