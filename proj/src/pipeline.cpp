#include "famdad/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "famdad/encode.hpp"
#include "famdad/format.hpp"
#include "famdad/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace famdad {

namespace {

// Scoring streams sit far from the simgen streams (0..2) so an isolation
// forest never replays the draws that generated its own input.
constexpr std::uint64_t kPipelineIsoStream = 0xf0;
constexpr std::uint64_t kBaselineIsoStream = 0xf1;

template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const std::exception& e) {
        throw Error(std::string(name) + " stage: " + e.what());
    }
}

void write_text_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
        out << content;
        out.flush();
        if (!out) throw Error("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw Error("rename to '" + path.string() + "' failed: " + ec.message());
}

struct Artifacts {
    fs::path dir;
    std::vector<std::string>* names;
    bool enabled;

    void write(const std::string& name, const std::string& content) const {
        if (!enabled) return;
        write_text_atomic(dir / name, content);
        names->push_back(name);
    }
};

std::string scores_csv(const std::vector<MethodScore>& methods) {
    std::ostringstream out;
    out << "row_index,method,score\n";
    for (const auto& m : methods) {
        for (std::size_t i = 0; i < m.scores.scores.size(); ++i) {
            out << i << ',' << csv_quote(m.scores.method) << ','
                << format_double(m.scores.scores[i]) << '\n';
        }
    }
    return out.str();
}

std::string auc_summary_csv(const std::vector<MethodScore>& methods, std::size_t n,
                            std::size_t n_anom, std::uint64_t seed) {
    std::ostringstream out;
    out << "method,auc,n,n_anomalies,seed\n";
    for (const auto& m : methods) {
        out << csv_quote(m.scores.method) << ',' << format_double(m.auc) << ',' << n << ','
            << n_anom << ',' << seed << '\n';
    }
    return out.str();
}

std::string spectrum_csv(const Eigen::VectorXd& sv, Eigen::Index effective_rank) {
    std::ostringstream out;
    out << "dimension,singular_value,variance,in_effective_rank\n";
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        out << (i + 1) << ',' << format_double(sv[i]) << ',' << format_double(sv[i] * sv[i])
            << ',' << (i < effective_rank ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string dimension_auc_csv(const std::vector<double>& auc) {
    std::ostringstream out;
    out << "dimension,auc\n";
    for (std::size_t i = 0; i < auc.size(); ++i) {
        out << (i + 1) << ',' << format_double(auc[i]) << '\n';
    }
    return out.str();
}

std::string embedding_csv(const Eigen::MatrixXd& fk, const SubspaceSelection& sel) {
    std::ostringstream out;
    out << "row_index";
    for (Eigen::Index idx : sel.indices) out << ",F" << (idx + 1);
    out << '\n';
    for (Eigen::Index i = 0; i < fk.rows(); ++i) {
        out << i;
        for (Eigen::Index j = 0; j < fk.cols(); ++j) out << ',' << format_double(fk(i, j));
        out << '\n';
    }
    return out.str();
}

std::string pair_matrix_csv(const PairTable& pt) {
    std::ostringstream out;
    out << "method";
    for (const auto& m : pt.methods) out << ',' << csv_quote(m);
    out << '\n';
    for (Eigen::Index i = 0; i < pt.matrix.rows(); ++i) {
        out << csv_quote(pt.methods[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < pt.matrix.cols(); ++j) {
            out << ',' << format_double(pt.matrix(i, j));
        }
        out << '\n';
    }
    return out.str();
}

std::string pair_correlations_csv(const PairTable& pt) {
    std::ostringstream out;
    out << "method_a,method_b,pearson,spearman\n";
    for (Eigen::Index i = 0; i < pt.pearson.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < pt.pearson.cols(); ++j) {
            out << csv_quote(pt.methods[static_cast<std::size_t>(i)]) << ','
                << csv_quote(pt.methods[static_cast<std::size_t>(j)]) << ','
                << format_double(pt.pearson(i, j)) << ',' << format_double(pt.spearman(i, j))
                << '\n';
        }
    }
    return out.str();
}

std::string pair_scores_csv(const std::vector<MethodScore>& methods,
                            const std::vector<std::uint8_t>& labels) {
    std::ostringstream out;
    out << "row_index";
    for (const auto& m : methods) out << ',' << csv_quote(m.scores.method);
    out << ",label\n";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out << i;
        for (const auto& m : methods) out << ',' << format_double(m.scores.scores[i]);
        out << ',' << int(labels[i]) << '\n';
    }
    return out.str();
}

json covariance_json(const CovarianceSpec& cov) {
    json j;
    j["kind"] = covariance_kind_name(cov.kind);
    if (cov.kind == CovarianceKind::Ar1) j["rho"] = cov.rho;
    if (cov.kind == CovarianceKind::Explicit) {
        json rows = json::array();
        for (Eigen::Index i = 0; i < cov.matrix.rows(); ++i) {
            json row = json::array();
            for (Eigen::Index jj = 0; jj < cov.matrix.cols(); ++jj) row.push_back(cov.matrix(i, jj));
            rows.push_back(std::move(row));
        }
        j["matrix"] = std::move(rows);
    }
    return j;
}

json input_json(const PipelineConfig& cfg) {
    json j;
    if (cfg.sim) {
        const SimSpec& s = *cfg.sim;
        j["kind"] = "sim";
        j["sim"] = {{"kind", sim_kind_name(s.kind)}, {"seed", s.seed}};
        if (s.kind == SimKind::Sim3) {
            j["sim"]["c"] = s.c;
            j["sim"]["s"] = s.s;
            j["sim"]["sigma"] = s.sigma;
            j["sim"]["n_inliers"] = s.n_inliers;
            j["sim"]["n_anomalies"] = s.n_anomalies;
        } else if (s.kind == SimKind::Unstructured) {
            j["sim"]["c"] = s.c;
            j["sim"]["sigma"] = s.sigma;
            j["sim"]["delta"] = s.delta;
            j["sim"]["n"] = s.n;
            j["sim"]["covariance"] = covariance_json(s.covariance);
        }
    } else {
        j["kind"] = "csv";
        j["csv"] = cfg.csv_path;
        j["schema"] = cfg.schema_path.empty() ? "(inferred)" : cfg.schema_path;
        if (!cfg.label_column.empty()) j["label_column"] = cfg.label_column;
    }
    return j;
}

json config_json(const PipelineConfig& cfg, const char* command) {
    json j;
    j["artifact_version"] = kVersion;
    j["command"] = command;
    j["input"] = input_json(cfg);
    j["weighting"] = {{"mode", weight_mode_name(cfg.weight_mode)},
                      {"kurtosis_cap", cfg.kurtosis_cap}};
    std::string sub = subspace_mode_name(cfg.subspace_mode);
    std::transform(sub.begin(), sub.end(), sub.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    j["subspace"] = {{"mode", sub}, {"k", cfg.k}};
    j["scorers"] = {{"spad", cfg.use_spad},
                    {"iso", cfg.use_iso},
                    {"spad_bins", cfg.spad_bins},
                    {"iso_trees", cfg.iso_trees},
                    {"iso_psi", cfg.iso_psi}};
    j["seed"] = cfg.seed;
    j["with_labels"] = cfg.with_labels;
    return j;
}

void write_manifest(const Artifacts& art, json manifest,
                    const std::vector<std::string>& notes) {
    manifest["notes"] = notes;
    manifest["outputs"] = *art.names;
    art.write("manifest.json", manifest.dump(2) + "\n");
}

std::size_t count_anomalies(const std::vector<std::uint8_t>& labels) {
    std::size_t n = 0;
    for (auto l : labels) n += (l != 0);
    return n;
}

Artifacts open_artifacts(const PipelineConfig& cfg, PipelineResult& result) {
    Artifacts art{fs::path(cfg.out_dir), &result.artifacts, !cfg.out_dir.empty()};
    if (art.enabled) {
        std::error_code ec;
        fs::create_directories(art.dir, ec);
        if (ec) throw Error("cannot create output directory '" + cfg.out_dir + "'");
    }
    return art;
}

void validate_common(const PipelineConfig& cfg) {
    if (cfg.k < 1) throw Error("k must be at least 1");
    if (!cfg.sim && cfg.csv_path.empty()) {
        throw Error("no input: give a CSV path or a simulation spec");
    }
}

} // namespace

std::string variant_tag(WeightMode mode, SubspaceMode sub) {
    std::string tag = weight_mode_name(mode);
    tag += '-';
    std::string s = subspace_mode_name(sub);
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return tag + s;
}

MixedTable load_input(const PipelineConfig& cfg) {
    if (cfg.sim) return generate(*cfg.sim);
    Schema schema = cfg.schema_path.empty()
                        ? infer_schema(cfg.csv_path,
                                       cfg.label_column.empty()
                                           ? std::nullopt
                                           : std::optional<std::string>(cfg.label_column))
                        : Schema::load(cfg.schema_path);
    return load_csv(cfg.csv_path, schema);
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
    validate_common(cfg);
    if (cfg.do_score && !cfg.use_spad && !cfg.use_iso) throw Error("no scorer enabled");

    PipelineResult result;
    MixedTable table = stage("ingest", [&] { return load_input(cfg); });
    result.n_rows = table.rows();
    result.labeled = cfg.with_labels && table.has_labels();

    EncodedMatrix enc = stage("encode", [&] { return encode(table); });
    result.encoded_cols = enc.cols();
    WeightVector weights = stage("weight", [&] {
        return make_weights(enc.stats, cfg.weight_mode, cfg.kurtosis_cap);
    });
    Embedding emb = stage("embed", [&] { return fit_embedding(enc, weights); });
    result.effective_rank = emb.effective_rank;
    result.singular_values = emb.singular_values;

    SubspaceSelection sel =
        stage("select", [&] { return select_subspace(emb, cfg.subspace_mode, cfg.k); });
    result.selection = sel;
    if (sel.clamped) {
        result.notes.push_back("k=" + std::to_string(cfg.k) + " clamped to effective rank " +
                               std::to_string(emb.effective_rank));
    }
    Eigen::MatrixXd fk = project(emb, sel);

    const std::string tag = variant_tag(cfg.weight_mode, cfg.subspace_mode);
    if (cfg.do_score) stage("score", [&] {
        if (cfg.use_spad) {
            SpadModel model = spad_fit(fk, cfg.spad_bins);
            MethodScore ms;
            ms.scores = spad_score(model, fk);
            ms.scores.method = tag + "-spad";
            result.methods.push_back(std::move(ms));
        }
        if (cfg.use_iso) {
            IsoForestModel model =
                iso_fit(fk, cfg.iso_trees, cfg.iso_psi, derive_seed(cfg.seed, kPipelineIsoStream));
            MethodScore ms;
            ms.scores = iso_score(model, fk);
            ms.scores.method = tag + "-iso";
            result.methods.push_back(std::move(ms));
        }
        return 0;
    });

    if (result.labeled) {
        stage("evaluate", [&] {
            for (auto& m : result.methods) m.auc = auc_roc(m.scores.scores, table.labels());
            if (cfg.sweep_dims) {
                result.dimension_auc = per_dimension_auc(emb, table.labels(), cfg.spad_bins);
            }
            return 0;
        });
    } else {
        result.notes.push_back("labels absent: AUC summary omitted");
        if (cfg.sweep_dims) result.notes.push_back("per-dimension AUC skipped (no labels)");
    }

    Artifacts art = open_artifacts(cfg, result);
    if (art.enabled) {
        stage("write", [&] {
            if (!result.methods.empty()) art.write("scores.csv", scores_csv(result.methods));
            art.write("spectrum.csv", spectrum_csv(emb.singular_values, emb.effective_rank));
            if (result.labeled) {
                if (!result.methods.empty()) {
                    art.write("auc_summary.csv",
                              auc_summary_csv(result.methods, table.rows(),
                                              count_anomalies(table.labels()), cfg.seed));
                }
                if (result.methods.size() >= 2) {
                    std::vector<ScoreVector> svs;
                    for (const auto& m : result.methods) svs.push_back(m.scores);
                    PairTable pt = pair_table(svs, table.labels());
                    art.write("pair_matrix.csv", pair_matrix_csv(pt));
                    art.write("pair_correlations.csv", pair_correlations_csv(pt));
                    art.write("pair_scores.csv", pair_scores_csv(result.methods, table.labels()));
                }
                if (cfg.sweep_dims) {
                    art.write("per_dimension_auc.csv", dimension_auc_csv(result.dimension_auc));
                }
            }
            if (cfg.write_embedding) art.write("embedding.csv", embedding_csv(fk, sel));

            json manifest = config_json(cfg, "pipeline");
            json indices = json::array();
            for (Eigen::Index idx : sel.indices) indices.push_back(idx + 1);
            manifest["resolved"] = {{"rows", result.n_rows},
                                    {"encoded_cols", result.encoded_cols},
                                    {"effective_rank", result.effective_rank},
                                    {"k_used", sel.indices.size()},
                                    {"clamped", sel.clamped},
                                    {"selected_dimensions", std::move(indices)},
                                    {"labeled", result.labeled}};
            write_manifest(art, std::move(manifest), result.notes);
            return 0;
        });
    }
    return result;
}

PipelineResult run_baselines(const PipelineConfig& cfg) {
    validate_common(cfg);

    PipelineResult result;
    MixedTable table = stage("ingest", [&] { return load_input(cfg); });
    result.n_rows = table.rows();
    result.labeled = cfg.with_labels && table.has_labels();

    stage("score", [&] {
        {
            SpadModel model = spad_fit(table, cfg.spad_bins);
            MethodScore ms;
            ms.scores = spad_score(model, table);
            ms.scores.method = "original-spad";
            result.methods.push_back(std::move(ms));
        }
        {
            // Raw indicators next to standardized continuous columns; no SVD.
            Eigen::MatrixXd y = one_hot(table);
            Eigen::VectorXd mu, sigma;
            std::vector<bool> degenerate;
            Eigen::MatrixXd zc = standardize(table, mu, sigma, degenerate);
            Eigen::MatrixXd m(table.rows(), y.cols() + zc.cols());
            m << y, zc;
            IsoForestModel model =
                iso_fit(m, cfg.iso_trees, cfg.iso_psi, derive_seed(cfg.seed, kBaselineIsoStream));
            MethodScore ms;
            ms.scores = iso_score(model, m);
            ms.scores.method = "onehot-iso";
            result.methods.push_back(std::move(ms));
        }
        return 0;
    });

    if (result.labeled) {
        stage("evaluate", [&] {
            for (auto& m : result.methods) m.auc = auc_roc(m.scores.scores, table.labels());
            return 0;
        });
    } else {
        result.notes.push_back("labels absent: AUC summary omitted");
    }

    Artifacts art = open_artifacts(cfg, result);
    if (art.enabled) {
        stage("write", [&] {
            art.write("scores.csv", scores_csv(result.methods));
            if (result.labeled) {
                art.write("auc_summary.csv",
                          auc_summary_csv(result.methods, table.rows(),
                                          count_anomalies(table.labels()), cfg.seed));
            }
            json manifest = config_json(cfg, "baselines");
            manifest["resolved"] = {{"rows", result.n_rows}, {"labeled", result.labeled}};
            write_manifest(art, std::move(manifest), result.notes);
            return 0;
        });
    }
    return result;
}

GridResult grid_search_k(const PipelineConfig& cfg, int k_max) {
    validate_common(cfg);
    if (k_max < 1) throw Error("k_max must be at least 1");

    MixedTable table = stage("ingest", [&] { return load_input(cfg); });
    if (!(cfg.with_labels && table.has_labels())) {
        throw Error("grid search needs labeled data");
    }
    EncodedMatrix enc = stage("encode", [&] { return encode(table); });

    GridResult result;
    for (WeightMode mode : {WeightMode::Famd, WeightMode::KurtosisWeighted}) {
        WeightVector weights = stage("weight", [&] {
            return make_weights(enc.stats, mode, cfg.kurtosis_cap);
        });
        Embedding emb = stage("embed", [&] { return fit_embedding(enc, weights); });
        const int grid_max =
            static_cast<int>(std::min<Eigen::Index>(k_max, emb.effective_rank));
        for (SubspaceMode sub : {SubspaceMode::First, SubspaceMode::FirstLast}) {
            GridBest best;
            best.variant = variant_tag(mode, sub);
            best.k_grid_max = grid_max;
            for (int k = 1; k <= grid_max; ++k) {
                SubspaceSelection sel = select_subspace(emb, sub, k);
                Eigen::MatrixXd fk = project(emb, sel);
                SpadModel model = spad_fit(fk, cfg.spad_bins);
                const double auc = auc_roc(spad_score(model, fk).scores, table.labels());
                result.cells.push_back({best.variant, k, auc});
                if (auc > best.best_auc) {
                    best.best_auc = auc;
                    best.best_k = k;
                }
            }
            result.best.push_back(std::move(best));
        }
    }

    if (!cfg.out_dir.empty()) {
        Artifacts art{fs::path(cfg.out_dir), &result.artifacts, true};
        std::error_code ec;
        fs::create_directories(art.dir, ec);
        if (ec) throw Error("cannot create output directory '" + cfg.out_dir + "'");
        stage("write", [&] {
            std::ostringstream grid;
            grid << "variant,k,auc\n";
            for (const auto& cell : result.cells) {
                grid << cell.variant << ',' << cell.k << ',' << format_double(cell.auc) << '\n';
            }
            art.write("grid.csv", grid.str());

            std::ostringstream bestcsv;
            bestcsv << "variant,best_k,best_auc,k_grid_max\n";
            for (const auto& b : result.best) {
                bestcsv << b.variant << ',' << b.best_k << ',' << format_double(b.best_auc)
                        << ',' << b.k_grid_max << '\n';
            }
            art.write("grid_best.csv", bestcsv.str());

            json manifest = config_json(cfg, "grid-k");
            manifest["k_max"] = k_max;
            write_manifest(art, std::move(manifest), {});
            return 0;
        });
    }
    return result;
}

} // namespace famdad
