#include "famdad/encode.hpp"

#include <cmath>

namespace famdad {

Eigen::Index EncodedMatrix::discrete_cols() const {
    Eigen::Index b = 0;
    for (const auto& col : columns) {
        if (col.origin == ColumnOrigin::Discrete) ++b;
    }
    return b;
}

Eigen::VectorXd proportions(const MixedTable& table) {
    if (table.categorical().empty()) throw Error("table has no categorical columns");
    const double n = static_cast<double>(table.rows());
    Eigen::VectorXd p(table.total_categories());
    Eigen::Index at = 0;
    for (const auto& col : table.categorical()) {
        std::vector<double> counts(col.levels.size(), 0.0);
        for (std::int32_t code : col.codes) counts[code] += 1.0;
        for (double count : counts) p(at++) = count / n;
    }
    return p;
}

Eigen::MatrixXd one_hot(const MixedTable& table) {
    if (table.categorical().empty()) throw Error("table has no categorical columns");
    const Eigen::Index n = static_cast<Eigen::Index>(table.rows());
    Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(table.total_categories()));
    Eigen::Index at = 0;
    for (const auto& col : table.categorical()) {
        for (Eigen::Index i = 0; i < n; ++i) {
            Y(i, at + col.codes[i]) = 1.0;
        }
        at += static_cast<Eigen::Index>(col.levels.size());
    }
    return Y;
}

Eigen::MatrixXd scale_onehot(const Eigen::MatrixXd& Y, const Eigen::VectorXd& p) {
    if (Y.cols() != p.size()) throw Error("one-hot matrix and proportion vector disagree");
    for (Eigen::Index j = 0; j < p.size(); ++j) {
        if (!(p(j) > 0.0 && p(j) <= 1.0)) throw Error("proportions must lie in (0, 1]");
    }
    Eigen::MatrixXd Z = Y;
    for (Eigen::Index j = 0; j < Z.cols(); ++j) {
        Z.col(j) = Z.col(j) / p(j) - Eigen::VectorXd::Ones(Z.rows());
    }
    return Z;
}

namespace {

// Sequential accumulation in a fixed order keeps results bitwise stable.
void column_moments(const std::vector<double>& values, double& mean, double& m2,
                    double& m4) {
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    mean = sum / n;
    m2 = 0.0;
    m4 = 0.0;
    for (double v : values) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m4 += d2 * d2;
    }
    m2 /= n;
    m4 /= n;
}

} // namespace

Eigen::MatrixXd standardize(const MixedTable& table, Eigen::VectorXd& mu,
                            Eigen::VectorXd& sigma, std::vector<bool>& degenerate) {
    if (table.rows() < 2) throw Error("standardization needs at least 2 rows");
    const Eigen::Index n = static_cast<Eigen::Index>(table.rows());
    const Eigen::Index c = static_cast<Eigen::Index>(table.continuous().size());
    mu.resize(c);
    sigma.resize(c);
    degenerate.assign(c, false);
    Eigen::MatrixXd Z(n, c);
    for (Eigen::Index j = 0; j < c; ++j) {
        const auto& values = table.continuous()[j].values;
        double mean, m2, m4;
        column_moments(values, mean, m2, m4);
        const double sd = std::sqrt(m2);
        mu(j) = mean;
        sigma(j) = sd;
        if (sd == 0.0) {
            degenerate[j] = true;
            Z.col(j).setZero();
        } else {
            for (Eigen::Index i = 0; i < n; ++i) {
                Z(i, j) = (values[i] - mean) / sd;
            }
        }
    }
    return Z;
}

Eigen::VectorXd kurtosis(const MixedTable& table) {
    if (table.rows() < 2) throw Error("kurtosis needs at least 2 rows");
    const Eigen::Index c = static_cast<Eigen::Index>(table.continuous().size());
    Eigen::VectorXd kappa(c);
    for (Eigen::Index j = 0; j < c; ++j) {
        double mean, m2, m4;
        column_moments(table.continuous()[j].values, mean, m2, m4);
        kappa(j) = (m2 == 0.0) ? 3.0 : m4 / (m2 * m2);
    }
    return kappa;
}

EncodedMatrix encode(const MixedTable& table) {
    const Eigen::Index n = static_cast<Eigen::Index>(table.rows());
    const bool has_cat = !table.categorical().empty();
    const bool has_cont = !table.continuous().empty();
    if (!has_cat && !has_cont) throw Error("table has no data columns");

    EncodedMatrix out;
    out.stats.p.resize(0);
    out.stats.mu.resize(0);
    out.stats.sigma.resize(0);
    out.stats.kappa.resize(0);

    Eigen::MatrixXd Zd(n, 0);
    if (has_cat) {
        out.stats.p = proportions(table);
        Zd = scale_onehot(one_hot(table), out.stats.p);
        Eigen::Index at = 0;
        int var_idx = 0;
        for (const auto& col : table.categorical()) {
            out.stats.categories_per_variable.push_back(static_cast<int>(col.levels.size()));
            for (const auto& level : col.levels) {
                EncodedColumn meta;
                meta.origin = ColumnOrigin::Discrete;
                meta.variable = col.name;
                meta.variable_index = var_idx;
                meta.level = level;
                meta.proportion = out.stats.p(at++);
                out.columns.push_back(std::move(meta));
            }
            ++var_idx;
        }
    }

    Eigen::MatrixXd Zc(n, 0);
    if (has_cont) {
        Zc = standardize(table, out.stats.mu, out.stats.sigma, out.stats.degenerate);
        out.stats.kappa = kurtosis(table);
        for (std::size_t j = 0; j < table.continuous().size(); ++j) {
            EncodedColumn meta;
            meta.origin = ColumnOrigin::Continuous;
            meta.variable = table.continuous()[j].name;
            meta.variable_index = static_cast<int>(j);
            meta.degenerate = out.stats.degenerate[j];
            out.columns.push_back(std::move(meta));
        }
    }

    out.Z.resize(n, Zd.cols() + Zc.cols());
    if (Zd.cols() > 0) out.Z.leftCols(Zd.cols()) = Zd;
    if (Zc.cols() > 0) out.Z.rightCols(Zc.cols()) = Zc;
    return out;
}

} // namespace famdad
