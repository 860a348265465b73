#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "famdad/embed.hpp"
#include "famdad/evaluate.hpp"
#include "famdad/score.hpp"
#include "famdad/simgen.hpp"
#include "famdad/tabular.hpp"

namespace famdad {

// One run = ingest -> encode -> weight -> embed -> select -> score -> eval.
// Input is either a CSV (schema file, or inference when none is given) or a
// simulation spec. With an output directory set, artifacts are CSV files plus
// a JSON manifest; all writes are temp-file-then-rename and byte-stable for
// a fixed config and seed.
struct PipelineConfig {
    std::string csv_path;
    std::string schema_path;
    std::string label_column;   // schema inference only
    std::optional<SimSpec> sim; // takes precedence over csv_path

    WeightMode weight_mode = WeightMode::KurtosisWeighted;
    double kurtosis_cap = kDefaultKurtosisCap;
    SubspaceMode subspace_mode = SubspaceMode::FirstLast;
    int k = 5;

    bool do_score = true;       // false = embed only
    bool use_spad = true;
    bool use_iso = true;
    int spad_bins = 0;          // 0 = ceil(log2 n) + 1
    int iso_trees = kDefaultIsoTrees;
    int iso_psi = kDefaultIsoSubsample;

    std::uint64_t seed = 0;
    std::string out_dir;        // empty = compute only

    bool sweep_dims = false;    // emit per-dimension AUC
    bool write_embedding = false;
    bool with_labels = true;    // false withholds labels even if present
};

struct MethodScore {
    ScoreVector scores;
    double auc = std::numeric_limits<double>::quiet_NaN();  // NaN when unlabeled
};

struct PipelineResult {
    std::size_t n_rows = 0;
    Eigen::Index encoded_cols = 0;
    Eigen::Index effective_rank = 0;
    SubspaceSelection selection;
    Eigen::VectorXd singular_values;
    std::vector<MethodScore> methods;
    std::vector<double> dimension_auc;  // sweep_dims runs only
    bool labeled = false;
    std::vector<std::string> notes;
    std::vector<std::string> artifacts; // file names written under out_dir
};

// Scores the selected embedding subspace with the configured scorers.
// Artifacts: scores.csv, spectrum.csv, manifest.json, plus auc_summary.csv
// and pair_* when labels are present, per_dimension_auc.csv when sweeping,
// embedding.csv on request.
PipelineResult run_pipeline(const PipelineConfig& cfg);

// No-embedding reference scorers on the same input: `original-spad` on the
// mixed table directly, `onehot-iso` on raw indicators plus standardized
// continuous columns. Same artifact formats.
PipelineResult run_baselines(const PipelineConfig& cfg);

struct GridCell {
    std::string variant;
    int k = 0;
    double auc = 0.0;
};

struct GridBest {
    std::string variant;
    int best_k = 1;
    double best_auc = -1.0;
    int k_grid_max = 0;  // min(k_max, effective rank) actually searched
};

struct GridResult {
    std::vector<GridCell> cells;
    std::vector<GridBest> best;
    std::vector<std::string> artifacts;
};

// Frequency-scorer AUC over k = 1..min(k_max, effective rank) for all four
// weighting/selection variants; ties go to the smallest k. Needs labels.
GridResult grid_search_k(const PipelineConfig& cfg, int k_max);

// "famd-f", "wfamd-fl", ...
std::string variant_tag(WeightMode mode, SubspaceMode sub);

// Resolves the configured input to a table (simulation or CSV load).
MixedTable load_input(const PipelineConfig& cfg);

} // namespace famdad
