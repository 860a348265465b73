#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "famdad/rng.hpp"
#include "famdad/tabular.hpp"

namespace famdad {

enum class SimKind { Sim1, Sim2, Sim3, Unstructured };

const char* sim_kind_name(SimKind kind);
SimKind sim_kind_from_name(const std::string& name);

// Inlier covariance for the unstructured model. All variants produce a
// correlation matrix (unit diagonal).
enum class CovarianceKind { RandomCorrelation, Identity, Ar1, Explicit };

const char* covariance_kind_name(CovarianceKind kind);
CovarianceKind covariance_kind_from_name(const std::string& name);

struct CovarianceSpec {
    CovarianceKind kind = CovarianceKind::RandomCorrelation;
    double rho = 0.9;         // Ar1: C_ij = rho^|i-j|
    Eigen::MatrixXd matrix;   // Explicit: must be c x c, symmetric PSD, unit diagonal
};

struct SimSpec {
    SimKind kind = SimKind::Sim1;
    std::uint64_t seed = 0;

    // Subspace model (sim3): anomalies are inflated by sigma on an
    // s-dimensional subspace of the c latent dimensions.
    Eigen::Index c = 300;
    Eigen::Index s = 10;
    double sigma = 3.0;
    std::size_t n_inliers = 1000;
    std::size_t n_anomalies = 50;

    // Unstructured model: inliers N(0, C), anomalies N(0, sigma^2 I);
    // round(delta * n) of the n rows are anomalies.
    double delta = 0.05;
    std::size_t n = 1000;
    CovarianceSpec covariance;
};

// 100 inliers (X1, X2 standard normal; X3..X6 Bernoulli(0.5); X7..X10
// constant 1) plus 4 fixed anomaly rows. X3..X10 are 2-level categorical.
MixedTable gen_sim1(std::uint64_t seed);

// Four clusters of 22/28/33/17 rows with X1 centered at +5/+5/-5/-5
// (sd 0.1) and categorical X2 = 1/2/3/4, plus 3 fixed-pattern anomalies
// (0, cat 3), (5, cat 3), (-5, cat 1).
MixedTable gen_sim2(std::uint64_t seed);

// Inliers N(0, I_c); anomalies (I + sigma Q Q') r with r ~ N(0, I_c) and Q
// an orthonormal c x s basis from the QR of a standard-normal matrix.
MixedTable gen_sim3(const SimSpec& spec);

// Inliers N(0, C) for a correlation matrix C; anomalies N(0, sigma^2 I_c).
MixedTable gen_unstructured(const SimSpec& spec);

// Dispatch on spec.kind.
MixedTable generate(const SimSpec& spec);

// c x s orthonormal columns via the QR of a standard-normal matrix, retried
// in the (measure-zero) degenerate case. gen_sim3 draws its basis from the
// stream derive_seed(seed, 0).
Eigen::MatrixXd orthonormal_basis(Eigen::Index c, Eigen::Index s, Rng& rng);

// Correlation matrix built by normalizing G G^T (G a c x c standard-normal
// matrix) to unit diagonal; almost surely positive definite.
Eigen::MatrixXd random_correlation(Eigen::Index c, std::uint64_t seed);

Eigen::MatrixXd ar1_correlation(Eigen::Index c, double rho);

// rows x cols standard-normal draws, filled row by row.
Eigen::MatrixXd standard_normal_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng);

// Wraps a continuous matrix as a labeled table with columns X1..Xc.
MixedTable matrix_table(const Eigen::MatrixXd& data, std::vector<std::uint8_t> labels);

} // namespace famdad
