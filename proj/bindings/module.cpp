#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "famdad/pipeline.hpp"

namespace py = pybind11;
using namespace famdad;

namespace {

WeightMode weight_mode_from(const std::string& name) {
    if (name == "famd") return WeightMode::Famd;
    if (name == "wfamd") return WeightMode::KurtosisWeighted;
    throw Error("unknown weighting '" + name + "' (famd or wfamd)");
}

SubspaceMode subspace_mode_from(const std::string& name) {
    if (name == "f") return SubspaceMode::First;
    if (name == "fl") return SubspaceMode::FirstLast;
    throw Error("unknown subspace mode '" + name + "' (f or fl)");
}

MixedTable py_load_csv(const std::string& path, const std::string& schema_path,
                       const std::string& label_column) {
    PipelineConfig cfg;
    cfg.csv_path = path;
    cfg.schema_path = schema_path;
    cfg.label_column = label_column;
    return load_input(cfg);
}

SimSpec make_spec(const std::string& kind, std::uint64_t seed, Eigen::Index c, Eigen::Index s,
                  double sigma, std::size_t n_inliers, std::size_t n_anomalies, double delta,
                  std::size_t n, const std::string& cov, double rho) {
    SimSpec spec;
    spec.kind = sim_kind_from_name(kind);
    spec.seed = seed;
    spec.c = c;
    spec.s = s;
    spec.sigma = sigma;
    spec.n_inliers = n_inliers;
    spec.n_anomalies = n_anomalies;
    spec.delta = delta;
    spec.n = n;
    spec.covariance.kind = covariance_kind_from_name(cov);
    spec.covariance.rho = rho;
    return spec;
}

Embedding py_fit(const MixedTable& table, const std::string& weights, double cap) {
    EncodedMatrix enc = encode(table);
    WeightVector w = make_weights(enc.stats, weight_mode_from(weights), cap);
    return fit_embedding(enc, w);
}

Eigen::MatrixXd py_project(const Embedding& emb, const std::string& subspace, int k) {
    return project(emb, select_subspace(emb, subspace_mode_from(subspace), k));
}

} // namespace

PYBIND11_MODULE(_famdad, m) {
    m.doc() = "Mixed-data embedding and anomaly scoring";
    m.attr("__version__") = kVersion;

    py::register_exception<Error>(m, "FamdadError", PyExc_ValueError);

    py::class_<MixedTable>(m, "MixedTable")
        .def_property_readonly("rows", &MixedTable::rows)
        .def_property_readonly("n_continuous",
                               [](const MixedTable& t) { return t.continuous().size(); })
        .def_property_readonly("n_categorical",
                               [](const MixedTable& t) { return t.categorical().size(); })
        .def_property_readonly("has_labels", &MixedTable::has_labels)
        .def_property_readonly("labels",
                               [](const MixedTable& t) {
                                   return std::vector<int>(t.labels().begin(), t.labels().end());
                               })
        .def("to_csv", [](const MixedTable& t, const std::string& path) { write_csv(t, path); },
             py::arg("path"))
        .def("__repr__", [](const MixedTable& t) {
            return "<MixedTable rows=" + std::to_string(t.rows()) + " continuous=" +
                   std::to_string(t.continuous().size()) + " categorical=" +
                   std::to_string(t.categorical().size()) + ">";
        });

    py::class_<Embedding>(m, "Embedding")
        .def_property_readonly("singular_values",
                               [](const Embedding& e) { return e.singular_values; })
        .def_property_readonly("F", [](const Embedding& e) { return e.F; })
        .def_property_readonly("V", [](const Embedding& e) { return e.V; })
        .def_property_readonly("effective_rank", [](const Embedding& e) { return e.effective_rank; });

    m.def("load_csv", &py_load_csv, py::arg("path"), py::arg("schema") = "",
          py::arg("label_column") = "",
          "Typed CSV load; schema is inferred when no schema file is given");

    m.def("generate", [](const std::string& kind, std::uint64_t seed, Eigen::Index c,
                         Eigen::Index s, double sigma, std::size_t n_inliers,
                         std::size_t n_anomalies, double delta, std::size_t n,
                         const std::string& cov, double rho) {
              return generate(make_spec(kind, seed, c, s, sigma, n_inliers, n_anomalies, delta, n,
                                        cov, rho));
          },
          py::arg("kind"), py::arg("seed") = 0, py::arg("c") = 300, py::arg("s") = 10,
          py::arg("sigma") = 3.0, py::arg("n_inliers") = 1000, py::arg("n_anomalies") = 50,
          py::arg("delta") = 0.05, py::arg("n") = 1000, py::arg("cov") = "random",
          py::arg("rho") = 0.9, "Benchmark dataset generator (sim1/sim2/sim3/unstructured)");

    m.def("encode_matrix", [](const MixedTable& t) { return encode(t).Z; }, py::arg("table"),
          "Scaled one-hot block next to standardized continuous block");

    m.def("fit", &py_fit, py::arg("table"), py::arg("weights") = "wfamd",
          py::arg("cap") = kDefaultKurtosisCap,
          "Encode, weight, and fit the SVD embedding in one step");

    m.def("project", &py_project, py::arg("embedding"), py::arg("subspace") = "fl",
          py::arg("k") = 5, "Coordinates of the selected subspace, leading block first");

    m.def("spad_scores", [](const Eigen::MatrixXd& x, int bins) {
              return spad_score(spad_fit(x, bins), x).scores;
          },
          py::arg("x"), py::arg("bins") = 0,
          "Histogram frequency scores (higher = more anomalous)");

    m.def("iso_scores", [](const Eigen::MatrixXd& x, int trees, int psi, std::uint64_t seed) {
              return iso_score(iso_fit(x, trees, psi, seed), x).scores;
          },
          py::arg("x"), py::arg("trees") = kDefaultIsoTrees,
          py::arg("psi") = kDefaultIsoSubsample, py::arg("seed") = 0,
          "Isolation forest scores (higher = more anomalous)");

    m.def("auc", [](const std::vector<double>& scores, const std::vector<int>& labels) {
              std::vector<std::uint8_t> l(labels.size());
              for (std::size_t i = 0; i < labels.size(); ++i) l[i] = labels[i] ? 1 : 0;
              return auc_roc(scores, l);
          },
          py::arg("scores"), py::arg("labels"),
          "Probability a random anomaly outscores a random inlier (ties count 1/2)");

    m.def("run", [](const std::string& kind, std::uint64_t seed, const std::string& weights,
                    const std::string& subspace, int k, const std::string& out_dir) {
              PipelineConfig cfg;
              cfg.sim = make_spec(kind, seed, 300, 10, 3.0, 1000, 50, 0.05, 1000, "random", 0.9);
              cfg.seed = seed;
              cfg.weight_mode = weight_mode_from(weights);
              cfg.subspace_mode = subspace_mode_from(subspace);
              cfg.k = k;
              cfg.out_dir = out_dir;
              PipelineResult r = run_pipeline(cfg);
              py::dict out;
              out["rows"] = r.n_rows;
              out["effective_rank"] = r.effective_rank;
              py::dict auc;
              for (const auto& ms : r.methods) auc[ms.scores.method.c_str()] = ms.auc;
              out["auc"] = auc;
              out["artifacts"] = r.artifacts;
              return out;
          },
          py::arg("kind"), py::arg("seed") = 0, py::arg("weights") = "wfamd",
          py::arg("subspace") = "fl", py::arg("k") = 5, py::arg("out_dir") = "",
          "Full scoring run on a generated dataset; returns a result summary");
}
