#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "famdad/tabular.hpp"

namespace famdad {

// Fitted per-column statistics. All moments are population moments (1/n):
// that keeps the categorical inertia identity (a b-level variable contributes
// b-1 to total weighted variance) exact.
struct EncodeStats {
    Eigen::VectorXd p;       // category proportions, all categorical variables concatenated
    Eigen::VectorXd mu;      // continuous means
    Eigen::VectorXd sigma;   // continuous population standard deviations
    Eigen::VectorXd kappa;   // continuous sample kurtosis (normal = 3)
    std::vector<int> categories_per_variable;   // b_j per categorical variable
    std::vector<bool> degenerate;               // per continuous variable, sigma == 0
};

enum class ColumnOrigin { Discrete, Continuous };

struct EncodedColumn {
    ColumnOrigin origin = ColumnOrigin::Continuous;
    std::string variable;
    int variable_index = 0;   // within its kind's list in the source table
    std::string level;        // discrete columns only
    double proportion = 0.0;  // discrete columns only
    bool degenerate = false;  // continuous columns only
};

// The transformed matrix Z = [Z_D, Z_C]: scaled one-hot indicator block
// followed by standardized continuous block. Every column has mean zero.
struct EncodedMatrix {
    Eigen::MatrixXd Z;
    std::vector<EncodedColumn> columns;
    EncodeStats stats;

    Eigen::Index rows() const { return Z.rows(); }
    Eigen::Index cols() const { return Z.cols(); }
    Eigen::Index discrete_cols() const;
};

// Category proportions p: per categorical variable, the fraction of rows at
// each level, concatenated in variable order then level order.
Eigen::VectorXd proportions(const MixedTable& table);

// Indicator matrix Y: one column per (variable, level); each variable's row
// block sums to one.
Eigen::MatrixXd one_hot(const MixedTable& table);

// Z_D = Y / p - 1 columnwise: entries are 1/p - 1 where the category holds
// and -1 otherwise, giving every column mean zero.
Eigen::MatrixXd scale_onehot(const Eigen::MatrixXd& Y, const Eigen::VectorXd& p);

// Z_C: center and scale each continuous column to zero mean, unit population
// variance. Zero-variance columns are emitted as all zeros and flagged in
// `degenerate`. Requires n >= 2.
Eigen::MatrixXd standardize(const MixedTable& table, Eigen::VectorXd& mu,
                            Eigen::VectorXd& sigma, std::vector<bool>& degenerate);

// Sample kurtosis m4/m2^2 per continuous column (population moments).
// Degenerate columns get the neutral value 3.
Eigen::VectorXd kurtosis(const MixedTable& table);

// Full transform to Z = [Z_D, Z_C] with fitted statistics and per-column
// provenance. Either block may be empty.
EncodedMatrix encode(const MixedTable& table);

} // namespace famdad
