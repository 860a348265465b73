#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "famdad/pipeline.hpp"

using namespace famdad;

namespace {

struct Options {
    PipelineConfig cfg;
    std::string kind;  // simulation kind; empty means CSV input
    SimSpec sim;
    std::string cov = "random";
    std::string weights = "wfamd";
    std::string subspace = "fl";
    int k_max = 30;
};

void add_input_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--csv", o.cfg.csv_path, "Input CSV path");
    cmd->add_option("--schema", o.cfg.schema_path,
                    "Schema file with name=kind lines; inferred when omitted");
    cmd->add_option("--label-column", o.cfg.label_column,
                    "Column treated as the 0/1 label during schema inference");
    cmd->add_option("--kind", o.kind, "Generate a dataset instead of reading a CSV")
        ->check(CLI::IsMember({"sim1", "sim2", "sim3", "unstructured"}));
    cmd->add_option("--seed", o.cfg.seed, "Seed for generation and scoring");
    cmd->add_option("--c", o.sim.c, "Latent dimension (sim3, unstructured)");
    cmd->add_option("--s", o.sim.s, "Anomaly subspace dimension (sim3)");
    cmd->add_option("--sigma", o.sim.sigma, "Anomaly scale (sim3, unstructured)");
    cmd->add_option("--n-inliers", o.sim.n_inliers, "Inlier count (sim3)");
    cmd->add_option("--n-anomalies", o.sim.n_anomalies, "Anomaly count (sim3)");
    cmd->add_option("--delta", o.sim.delta, "Anomaly fraction (unstructured)");
    cmd->add_option("--n", o.sim.n, "Total row count (unstructured)");
    cmd->add_option("--cov", o.cov, "Inlier covariance (unstructured)")
        ->check(CLI::IsMember({"random", "identity", "ar1"}));
    cmd->add_option("--rho", o.sim.covariance.rho, "Correlation for --cov ar1");
}

void add_model_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--weights", o.weights, "Variable weighting")
        ->check(CLI::IsMember({"famd", "wfamd"}));
    cmd->add_option("--cap", o.cfg.kurtosis_cap, "Kurtosis cap for wfamd");
    cmd->add_option("--subspace", o.subspace, "f = leading dims, fl = leading + trailing")
        ->check(CLI::IsMember({"f", "fl"}));
    cmd->add_option("--k", o.cfg.k, "Subspace size");
}

void add_scorer_flags(CLI::App* cmd, Options& o) {
    cmd->add_flag("--spad,!--no-spad", o.cfg.use_spad, "Frequency scorer on/off");
    cmd->add_flag("--iso,!--no-iso", o.cfg.use_iso, "Isolation forest on/off");
    cmd->add_option("--bins", o.cfg.spad_bins, "Histogram bins (0 = ceil(log2 n) + 1)");
    cmd->add_option("--trees", o.cfg.iso_trees, "Isolation forest size");
    cmd->add_option("--psi", o.cfg.iso_psi, "Isolation forest subsample size");
}

void resolve_input(Options& o) {
    if (!o.kind.empty()) {
        if (!o.cfg.csv_path.empty()) throw Error("give either --csv or --kind, not both");
        o.sim.kind = sim_kind_from_name(o.kind);
        o.sim.seed = o.cfg.seed;
        o.sim.covariance.kind = covariance_kind_from_name(o.cov);
        o.cfg.sim = o.sim;
    } else if (o.cfg.csv_path.empty()) {
        throw Error("no input: give --csv or --kind");
    }
    o.cfg.weight_mode = (o.weights == "famd") ? WeightMode::Famd : WeightMode::KurtosisWeighted;
    o.cfg.subspace_mode = (o.subspace == "f") ? SubspaceMode::First : SubspaceMode::FirstLast;
}

std::string auc_text(double auc) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", auc);
    return buf;
}

void print_result(const PipelineResult& r, const std::string& out_dir) {
    std::cout << "rows=" << r.n_rows;
    if (r.encoded_cols > 0) {
        std::cout << " encoded_cols=" << r.encoded_cols
                  << " effective_rank=" << r.effective_rank;
    }
    std::cout << '\n';
    if (!r.selection.indices.empty()) {
        std::cout << "selected dimensions:";
        for (Eigen::Index i : r.selection.indices) std::cout << ' ' << (i + 1);
        std::cout << '\n';
    }
    for (const auto& m : r.methods) {
        std::cout << m.scores.method;
        if (r.labeled) std::cout << " auc=" << auc_text(m.auc);
        std::cout << '\n';
    }
    if (!r.dimension_auc.empty()) {
        std::cout << "per-dimension auc over " << r.dimension_auc.size() << " dimensions\n";
    }
    for (const auto& n : r.notes) std::cerr << "note: " << n << '\n';
    for (const auto& a : r.artifacts) std::cout << "wrote " << out_dir << '/' << a << '\n';
}

int run_simulate(Options& o, const std::string& out_dir) {
    if (o.kind.empty()) throw Error("simulate needs --kind");
    resolve_input(o);
    MixedTable table = load_input(o.cfg);
    std::filesystem::create_directories(out_dir);
    const std::string data_path = out_dir + "/data.csv";
    const std::string schema_path = out_dir + "/schema.txt";
    write_csv(table, data_path);
    table_schema(table).save(schema_path);
    std::cout << "rows=" << table.rows() << " continuous=" << table.continuous().size()
              << " categorical=" << table.categorical().size() << '\n';
    std::cout << "wrote " << data_path << '\n' << "wrote " << schema_path << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mixed-data embedding and anomaly scoring"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    Options o;
    std::string out_dir;

    auto* simulate = app.add_subcommand("simulate", "Generate a benchmark dataset as CSV");
    add_input_flags(simulate, o);
    simulate->add_option("--out", out_dir, "Output directory")->required();
    simulate->callback([&] { run_simulate(o, out_dir); });

    auto add_run_command = [&](const char* name, const char* help, auto setup) {
        auto* cmd = app.add_subcommand(name, help);
        add_input_flags(cmd, o);
        add_model_flags(cmd, o);
        add_scorer_flags(cmd, o);
        cmd->add_option("--out", o.cfg.out_dir, "Output directory (omit to print only)");
        cmd->callback([&, setup] {
            resolve_input(o);
            setup();
            PipelineResult r = run_pipeline(o.cfg);
            print_result(r, o.cfg.out_dir);
        });
        return cmd;
    };

    add_run_command("embed", "Fit the embedding; write coordinates and spectrum", [&] {
        o.cfg.do_score = false;
        o.cfg.write_embedding = true;
    });
    add_run_command("score", "Score rows without looking at labels", [&] {
        o.cfg.with_labels = false;
    });
    add_run_command("eval", "Score and evaluate against labels", [&] {
        MixedTable probe = load_input(o.cfg);
        if (!probe.has_labels()) throw Error("eval needs labeled input");
    });
    add_run_command("sweep-dims", "AUC of each embedding dimension on its own", [&] {
        o.cfg.sweep_dims = true;
        MixedTable probe = load_input(o.cfg);
        if (!probe.has_labels()) throw Error("sweep-dims needs labeled input");
    });

    auto* pipeline = app.add_subcommand("pipeline", "Full run: embed, score, evaluate");
    add_input_flags(pipeline, o);
    add_model_flags(pipeline, o);
    add_scorer_flags(pipeline, o);
    pipeline->add_option("--out", o.cfg.out_dir, "Output directory (omit to print only)");
    pipeline->add_flag("--sweep-dims", o.cfg.sweep_dims, "Also compute per-dimension AUC");
    pipeline->add_flag("--write-embedding", o.cfg.write_embedding,
                       "Also write the selected coordinates");
    pipeline->add_flag("--no-labels", [&](std::int64_t) { o.cfg.with_labels = false; },
                       "Withhold labels even if present");
    pipeline->callback([&] {
        resolve_input(o);
        PipelineResult r = run_pipeline(o.cfg);
        print_result(r, o.cfg.out_dir);
    });

    auto* baselines =
        app.add_subcommand("baselines", "No-embedding reference scorers on the same input");
    add_input_flags(baselines, o);
    add_scorer_flags(baselines, o);
    baselines->add_option("--out", o.cfg.out_dir, "Output directory (omit to print only)");
    baselines->callback([&] {
        resolve_input(o);
        PipelineResult r = run_baselines(o.cfg);
        print_result(r, o.cfg.out_dir);
    });

    auto* grid = app.add_subcommand("grid-k", "Search k for all four embedding variants");
    add_input_flags(grid, o);
    add_model_flags(grid, o);
    grid->add_option("--k-max", o.k_max, "Largest k to try");
    grid->add_option("--bins", o.cfg.spad_bins, "Histogram bins (0 = ceil(log2 n) + 1)");
    grid->add_option("--out", o.cfg.out_dir, "Output directory (omit to print only)");
    grid->callback([&] {
        resolve_input(o);
        GridResult r = grid_search_k(o.cfg, o.k_max);
        for (const auto& b : r.best) {
            std::cout << b.variant << " best_k=" << b.best_k << " auc=" << auc_text(b.best_auc)
                      << " (searched 1.." << b.k_grid_max << ")\n";
        }
        for (const auto& a : r.artifacts) std::cout << "wrote " << o.cfg.out_dir << '/' << a << '\n';
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
