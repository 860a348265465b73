#include "famdad/simgen.hpp"

#include <cmath>
#include <cstdio>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace famdad {

const char* sim_kind_name(SimKind kind) {
    switch (kind) {
        case SimKind::Sim1: return "sim1";
        case SimKind::Sim2: return "sim2";
        case SimKind::Sim3: return "sim3";
        case SimKind::Unstructured: return "unstructured";
    }
    throw Error("unknown simulation kind");
}

SimKind sim_kind_from_name(const std::string& name) {
    if (name == "sim1") return SimKind::Sim1;
    if (name == "sim2") return SimKind::Sim2;
    if (name == "sim3") return SimKind::Sim3;
    if (name == "unstructured") return SimKind::Unstructured;
    throw Error("unknown simulation kind '" + name + "'");
}

const char* covariance_kind_name(CovarianceKind kind) {
    switch (kind) {
        case CovarianceKind::RandomCorrelation: return "random";
        case CovarianceKind::Identity: return "identity";
        case CovarianceKind::Ar1: return "ar1";
        case CovarianceKind::Explicit: return "explicit";
    }
    throw Error("unknown covariance kind");
}

CovarianceKind covariance_kind_from_name(const std::string& name) {
    if (name == "random") return CovarianceKind::RandomCorrelation;
    if (name == "identity") return CovarianceKind::Identity;
    if (name == "ar1") return CovarianceKind::Ar1;
    if (name == "explicit") return CovarianceKind::Explicit;
    throw Error("unknown covariance kind '" + name + "'");
}

Eigen::MatrixXd standard_normal_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
    }
    return m;
}

MixedTable matrix_table(const Eigen::MatrixXd& data, std::vector<std::uint8_t> labels) {
    std::vector<ContinuousColumn> cols(static_cast<std::size_t>(data.cols()));
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
        auto& col = cols[static_cast<std::size_t>(j)];
        col.name = "X" + std::to_string(j + 1);
        col.values.assign(data.col(j).data(), data.col(j).data() + data.rows());
    }
    return MixedTable(static_cast<std::size_t>(data.rows()), std::move(cols), {},
                      std::move(labels));
}

MixedTable gen_sim1(std::uint64_t seed) {
    constexpr std::size_t n_in = 100;
    Rng rng(seed);

    std::vector<ContinuousColumn> cont(2);
    cont[0].name = "X1";
    cont[1].name = "X2";
    std::vector<CategoricalColumn> cat(8);
    for (std::size_t j = 0; j < 8; ++j) {
        cat[j].name = "X" + std::to_string(j + 3);
        cat[j].levels = {"0", "1"};
    }

    for (std::size_t i = 0; i < n_in; ++i) {
        cont[0].values.push_back(rng.normal());
        cont[1].values.push_back(rng.normal());
        for (std::size_t j = 0; j < 4; ++j) {
            cat[j].codes.push_back(rng.bernoulli(0.5) ? 1 : 0);
        }
        for (std::size_t j = 4; j < 8; ++j) cat[j].codes.push_back(1);
    }

    struct AnomalyRow {
        double x1, x2;
        std::int32_t bits[8];
    };
    static const AnomalyRow anomalies[4] = {
        {-1.75, 0.34, {0, 0, 0, 0, 0, 0, 0, 0}},
        {0.98, 0.51, {0, 1, 0, 1, 1, 1, 1, 0}},
        {5.0, 5.0, {0, 1, 1, 1, 1, 1, 1, 1}},
        {-4.0, -4.0, {1, 0, 1, 1, 1, 1, 1, 1}},
    };
    for (const auto& row : anomalies) {
        cont[0].values.push_back(row.x1);
        cont[1].values.push_back(row.x2);
        for (std::size_t j = 0; j < 8; ++j) cat[j].codes.push_back(row.bits[j]);
    }

    std::vector<std::uint8_t> labels(n_in, 0);
    labels.insert(labels.end(), 4, 1);
    return MixedTable(n_in + 4, std::move(cont), std::move(cat), std::move(labels));
}

MixedTable gen_sim2(std::uint64_t seed) {
    Rng rng(seed);
    constexpr std::size_t cluster_sizes[4] = {22, 28, 33, 17};
    constexpr double cluster_means[4] = {5.0, 5.0, -5.0, -5.0};
    constexpr double sd = 0.1;

    ContinuousColumn x1{"X1", {}};
    CategoricalColumn x2{"X2", {"1", "2", "3", "4"}, {}};
    for (std::size_t k = 0; k < 4; ++k) {
        for (std::size_t i = 0; i < cluster_sizes[k]; ++i) {
            x1.values.push_back(cluster_means[k] + sd * rng.normal());
            x2.codes.push_back(static_cast<std::int32_t>(k));
        }
    }
    // Anomalies: off-cluster X1, and values legal on each axis alone but
    // wrong in combination.
    const std::pair<double, std::int32_t> anomalies[3] = {{0.0, 2}, {5.0, 2}, {-5.0, 0}};
    for (const auto& [v, code] : anomalies) {
        x1.values.push_back(v);
        x2.codes.push_back(code);
    }

    std::vector<std::uint8_t> labels(100, 0);
    labels.insert(labels.end(), 3, 1);
    return MixedTable(103, {std::move(x1)}, {std::move(x2)}, std::move(labels));
}

Eigen::MatrixXd orthonormal_basis(Eigen::Index c, Eigen::Index s, Rng& rng) {
    if (s < 1 || s > c) throw Error("need 1 <= s <= c");
    Eigen::MatrixXd q;
    for (int attempt = 0; attempt < 8; ++attempt) {
        Eigen::MatrixXd g = standard_normal_matrix(c, s, rng);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
        q = qr.householderQ() * Eigen::MatrixXd::Identity(c, s);
        Eigen::MatrixXd gram = q.transpose() * q;
        if ((gram - Eigen::MatrixXd::Identity(s, s)).cwiseAbs().maxCoeff() <= 1e-8) return q;
    }
    throw Error("QR basis failed to reach orthonormality");
}

MixedTable gen_sim3(const SimSpec& spec) {
    if (spec.s < 1 || spec.s > spec.c) throw Error("need 1 <= s <= c");
    if (!(spec.sigma > 0.0)) throw Error("sigma must be positive");
    if (spec.n_inliers < 1) throw Error("need at least one inlier");

    Rng q_rng(derive_seed(spec.seed, 0));
    Eigen::MatrixXd q = orthonormal_basis(spec.c, spec.s, q_rng);

    const auto n_in = static_cast<Eigen::Index>(spec.n_inliers);
    const auto n_an = static_cast<Eigen::Index>(spec.n_anomalies);
    Eigen::MatrixXd data(n_in + n_an, spec.c);

    Rng in_rng(derive_seed(spec.seed, 1));
    data.topRows(n_in) = standard_normal_matrix(n_in, spec.c, in_rng);

    if (n_an > 0) {
        Rng an_rng(derive_seed(spec.seed, 2));
        Eigen::MatrixXd r = standard_normal_matrix(n_an, spec.c, an_rng);
        // Row form of a = (I + sigma Q Q') r.
        data.bottomRows(n_an) = r + spec.sigma * ((r * q) * q.transpose());
    }

    std::vector<std::uint8_t> labels(spec.n_inliers, 0);
    labels.insert(labels.end(), spec.n_anomalies, 1);
    return matrix_table(data, std::move(labels));
}

namespace {

Eigen::MatrixXd build_correlation(const SimSpec& spec) {
    const auto& cov = spec.covariance;
    switch (cov.kind) {
        case CovarianceKind::Identity:
            return Eigen::MatrixXd::Identity(spec.c, spec.c);
        case CovarianceKind::Ar1:
            if (!(std::abs(cov.rho) < 1.0)) throw Error("ar1 rho must satisfy |rho| < 1");
            return ar1_correlation(spec.c, cov.rho);
        case CovarianceKind::RandomCorrelation:
            return random_correlation(spec.c, derive_seed(spec.seed, 0));
        case CovarianceKind::Explicit: {
            const Eigen::MatrixXd& m = cov.matrix;
            if (m.rows() != spec.c || m.cols() != spec.c) {
                throw Error("explicit covariance must be c x c");
            }
            if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-8) {
                throw Error("explicit covariance must be symmetric");
            }
            if ((m.diagonal().array() - 1.0).abs().maxCoeff() > 1e-8) {
                throw Error("explicit covariance must have unit diagonal");
            }
            return m;
        }
    }
    throw Error("unknown covariance kind");
}

} // namespace

MixedTable gen_unstructured(const SimSpec& spec) {
    if (spec.c < 1) throw Error("need c >= 1");
    if (!(spec.sigma > 0.0)) throw Error("sigma must be positive");
    if (!(spec.delta > 0.0 && spec.delta < 1.0)) throw Error("need 0 < delta < 1");
    if (spec.n < 2) throw Error("need n >= 2");

    const auto n_an = static_cast<std::size_t>(
        std::llround(spec.delta * static_cast<double>(spec.n)));
    if (n_an >= spec.n) throw Error("delta leaves no inliers");
    const std::size_t n_in = spec.n - n_an;

    Eigen::MatrixXd corr = build_correlation(spec);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(corr);
    if (eig.info() != Eigen::Success) throw Error("covariance eigendecomposition failed");
    if (eig.eigenvalues().minCoeff() < -1e-8) {
        throw Error("covariance is not positive semi-definite");
    }
    // Symmetric square root; tiny negative eigenvalues are rounding.
    Eigen::VectorXd sqrt_eig = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Eigen::MatrixXd root =
        eig.eigenvectors() * sqrt_eig.asDiagonal() * eig.eigenvectors().transpose();

    Eigen::MatrixXd data(static_cast<Eigen::Index>(spec.n), spec.c);
    Rng in_rng(derive_seed(spec.seed, 1));
    data.topRows(static_cast<Eigen::Index>(n_in)) =
        standard_normal_matrix(static_cast<Eigen::Index>(n_in), spec.c, in_rng) * root;
    if (n_an > 0) {
        Rng an_rng(derive_seed(spec.seed, 2));
        data.bottomRows(static_cast<Eigen::Index>(n_an)) =
            spec.sigma * standard_normal_matrix(static_cast<Eigen::Index>(n_an), spec.c, an_rng);
    }

    std::vector<std::uint8_t> labels(n_in, 0);
    labels.insert(labels.end(), n_an, 1);
    return matrix_table(data, std::move(labels));
}

MixedTable generate(const SimSpec& spec) {
    switch (spec.kind) {
        case SimKind::Sim1: return gen_sim1(spec.seed);
        case SimKind::Sim2: return gen_sim2(spec.seed);
        case SimKind::Sim3: return gen_sim3(spec);
        case SimKind::Unstructured: return gen_unstructured(spec);
    }
    throw Error("unknown simulation kind");
}

Eigen::MatrixXd random_correlation(Eigen::Index c, std::uint64_t seed) {
    if (c < 1) throw Error("need c >= 1");
    Rng rng(seed);
    Eigen::MatrixXd g = standard_normal_matrix(c, c, rng);
    Eigen::MatrixXd a = g * g.transpose();
    Eigen::VectorXd d = a.diagonal().cwiseSqrt();
    return a.array() / (d * d.transpose()).array();
}

Eigen::MatrixXd ar1_correlation(Eigen::Index c, double rho) {
    if (c < 1) throw Error("need c >= 1");
    Eigen::MatrixXd m(c, c);
    for (Eigen::Index i = 0; i < c; ++i) {
        for (Eigen::Index j = 0; j < c; ++j) {
            m(i, j) = std::pow(rho, std::abs(static_cast<double>(i - j)));
        }
    }
    return m;
}

} // namespace famdad
