#include "famdad/embed.hpp"

#include <cmath>

#include <Eigen/SVD>

namespace famdad {

const char* subspace_mode_name(SubspaceMode mode) {
    return mode == SubspaceMode::First ? "F" : "FL";
}

const char* weight_mode_name(WeightMode mode) {
    return mode == WeightMode::Famd ? "famd" : "wfamd";
}

Embedding fit_embedding(const EncodedMatrix& encoded, const WeightVector& weights) {
    const Eigen::Index n = encoded.Z.rows();
    const Eigen::Index t = encoded.Z.cols();
    if (n == 0 || t == 0) throw Error("cannot embed an empty matrix");
    if (weights.w.size() != t) {
        throw Error("weight vector length does not match encoded matrix width");
    }
    for (Eigen::Index j = 0; j < t; ++j) {
        if (!(weights.w(j) > 0.0)) throw Error("weights must be positive");
    }

    const Eigen::VectorXd sqrt_w = weights.w.cwiseSqrt();
    Eigen::MatrixXd scaled = encoded.Z * sqrt_w.asDiagonal();
    Eigen::MatrixXd A = scaled / std::sqrt(static_cast<double>(n));

    Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) {
        throw Error("SVD did not converge");
    }

    Embedding e;
    e.weight_mode = weights.mode;
    e.singular_values = svd.singularValues();
    e.V = svd.matrixV();

    // Fixed sign convention: each V column's largest-magnitude entry is made
    // positive (ties break to the lowest index), so repeated fits and
    // cross-run comparisons are bit-stable.
    for (Eigen::Index j = 0; j < e.V.cols(); ++j) {
        Eigen::Index arg = 0;
        double best = std::abs(e.V(0, j));
        for (Eigen::Index i = 1; i < e.V.rows(); ++i) {
            const double mag = std::abs(e.V(i, j));
            if (mag > best) {
                best = mag;
                arg = i;
            }
        }
        if (e.V(arg, j) < 0.0) e.V.col(j) = -e.V.col(j);
    }

    e.F = scaled * e.V;

    const double cutoff = kRankEpsilon * (e.singular_values.size() > 0 ? e.singular_values(0) : 0.0);
    Eigen::Index rank = 0;
    while (rank < e.singular_values.size() && e.singular_values(rank) > cutoff) ++rank;
    e.effective_rank = rank;
    return e;
}

SubspaceSelection select_subspace(const Embedding& embedding, SubspaceMode mode, int k) {
    if (k < 1) throw Error("subspace size k must be at least 1");
    const Eigen::Index rank = embedding.effective_rank;
    SubspaceSelection sel;
    sel.mode = mode;
    sel.k = k;
    if (rank == 0) throw Error("embedding has effective rank 0");

    if (static_cast<Eigen::Index>(k) >= rank) {
        sel.clamped = static_cast<Eigen::Index>(k) > rank;
        for (Eigen::Index i = 0; i < rank; ++i) sel.indices.push_back(i);
        return sel;
    }

    if (mode == SubspaceMode::First) {
        for (int i = 0; i < k; ++i) sel.indices.push_back(i);
    } else {
        const int lead = (k + 1) / 2;
        const int trail = k / 2;
        for (int i = 0; i < lead; ++i) sel.indices.push_back(i);
        for (int i = trail; i > 0; --i) sel.indices.push_back(rank - i);
    }
    return sel;
}

Eigen::MatrixXd project(const Embedding& embedding, const SubspaceSelection& selection) {
    Eigen::MatrixXd out(embedding.F.rows(), static_cast<Eigen::Index>(selection.indices.size()));
    for (std::size_t j = 0; j < selection.indices.size(); ++j) {
        const Eigen::Index idx = selection.indices[j];
        if (idx < 0 || idx >= embedding.F.cols()) throw Error("selection index out of range");
        out.col(static_cast<Eigen::Index>(j)) = embedding.F.col(idx);
    }
    return out;
}

} // namespace famdad
