#include <sstream>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "boulderfit/analysis.hpp"
#include "boulderfit/cli.hpp"
#include "boulderfit/cv.hpp"
#include "boulderfit/data.hpp"
#include "boulderfit/error.hpp"
#include "boulderfit/logreg.hpp"
#include "boulderfit/manifest.hpp"
#include "boulderfit/metrics.hpp"
#include "boulderfit/pmf.hpp"
#include "boulderfit/synth.hpp"

namespace py = pybind11;
using namespace boulderfit;

namespace {

Round round_from(const std::string& code) {
  auto r = parse_round(code);
  if (!r) throw Error("unknown round '" + code + "' (expected Q, S or F)");
  return *r;
}

HoldType hold_type_from(const std::string& name) {
  auto t = parse_hold_type(name);
  if (!t) throw Error("unknown hold type '" + name + "' (expected top or zone)");
  return *t;
}

Dataset dataset_from_records(const std::vector<py::tuple>& records) {
  std::vector<AttemptRecord> out;
  out.reserve(records.size());
  for (const auto& t : records) {
    if (t.size() != 7) throw Error("attempt records are 7-tuples (competition_id, year, round, climber, problem_key, hold_type, outcome)");
    AttemptRecord a;
    a.competition_id = t[0].cast<std::string>();
    a.year = t[1].cast<int>();
    a.round = round_from(t[2].cast<std::string>());
    a.climber = t[3].cast<std::string>();
    a.problem_key = t[4].cast<std::string>();
    a.hold_type = hold_type_from(t[5].cast<std::string>());
    a.outcome = t[6].cast<int>();
    out.push_back(std::move(a));
  }
  return Dataset::from_attempts(std::move(out));
}

py::list dataset_records(const Dataset& d) {
  py::list out;
  for (const auto& a : d.attempts()) {
    out.append(py::make_tuple(a.competition_id, a.year, std::string(1, round_code(a.round)), a.climber, a.problem_key,
                              std::string(hold_type_name(a.hold_type)), a.outcome));
  }
  return out;
}

template <class T>
std::string to_text(const T& model) {
  std::ostringstream out;
  model.write(out);
  return out.str();
}

template <class T>
T from_text(const std::string& s) {
  std::istringstream in(s);
  return T::read(in, "<string>");
}

py::dict report_dict(const MetricsReport& r) {
  py::dict d;
  d["accuracy"] = r.accuracy;
  d["f1"] = r.f1;
  d["brier"] = r.brier;
  d["log_loss"] = r.log_loss;
  d["roc_auc"] = r.roc_auc ? py::cast(*r.roc_auc) : py::none();
  d["tp"] = r.counts.tp;
  d["tn"] = r.counts.tn;
  d["fp"] = r.counts.fp;
  d["fn"] = r.counts.fn;
  return d;
}

py::dict summary_dict(const CellResult& c) {
  py::dict d;
  for (Metric m : kAllMetrics) {
    const auto& s = c.metric(m);
    py::dict e;
    e["mean"] = s.mean ? py::cast(*s.mean) : py::none();
    e["ci_halfwidth"] = s.ci_halfwidth ? py::cast(*s.ci_halfwidth) : py::none();
    py::list folds;
    for (const auto& v : s.fold_values) folds.append(v ? py::cast(*v) : py::none());
    e["folds"] = folds;
    d[py::str(std::string(metric_name(m)))] = e;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Logistic regression and probabilistic matrix factorization skill models for climbing attempts";
  m.attr("__version__") = std::string(kToolVersion);

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<Error>(m, "BoulderfitError", PyExc_ValueError);

  m.attr("REPLACEMENT") = std::string(kReplacement);
  m.attr("RARE_PROBLEM") = std::string(kRareProblem);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init<>())
      .def_static("from_records", &dataset_from_records, py::arg("records"))
      .def_static("from_csv",
                  [](const std::string& text) {
                    std::istringstream in(text);
                    return parse_attempts(in, "<string>");
                  },
                  py::arg("text"))
      .def("__len__", &Dataset::size)
      .def_property_readonly("num_climbers", &Dataset::num_climbers)
      .def_property_readonly("num_problems", &Dataset::num_problems)
      .def_property_readonly("climbers", [](const Dataset& d) { return d.climber_index().labels(); })
      .def_property_readonly("problems", [](const Dataset& d) { return d.problem_index().labels(); })
      .def_property_readonly("climber_groups", &Dataset::climber_groups)
      .def_property_readonly("problem_groups", &Dataset::problem_groups)
      .def("records", &dataset_records)
      .def("rows", [](const Dataset& d) {
        std::vector<int> r(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) r[i] = d.row(i);
        return r;
      })
      .def("cols", [](const Dataset& d) {
        std::vector<int> c(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) c[i] = d.col(i);
        return c;
      })
      .def("outcomes", [](const Dataset& d) {
        std::vector<int> y(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) y[i] = d.attempt(i).outcome;
        return y;
      })
      .def("successes", &Dataset::successes)
      .def("subset", &Dataset::subset, py::arg("indices"))
      .def("to_csv", [](const Dataset& d) {
        std::ostringstream out;
        write_attempts(out, d.attempts());
        return out.str();
      })
      .def("__repr__", [](const Dataset& d) {
        return "<Dataset attempts=" + std::to_string(d.size()) + " climbers=" + std::to_string(d.num_climbers()) +
               " problems=" + std::to_string(d.num_problems()) + ">";
      });

  m.def("ingest_attempts", &ingest_attempts, py::arg("path"));
  m.def(
      "ingest_heights",
      [](const std::filesystem::path& path) {
        py::dict out;
        for (const auto& h : ingest_heights(path)) out[py::str(h.climber)] = h.height_cm ? py::cast(*h.height_cm) : py::none();
        return out;
      },
      py::arg("path"));
  m.def("apply_replacement_level", &apply_replacement_level, py::arg("dataset"), py::arg("n"));
  m.def("apply_problem_grouping", &apply_problem_grouping, py::arg("dataset"),
        py::arg("min_climbers") = kDefaultMinClimbersPerProblem);
  m.def(
      "split_folds", [](const Dataset& d, int k, std::uint64_t seed) { return split_folds(d, k, seed).assignments; },
      py::arg("dataset"), py::arg("k") = 5, py::arg("seed") = 0);

  py::class_<LogRegConfig>(m, "LogRegConfig")
      .def(py::init([](double lr, int epochs, double tolerance) {
             LogRegConfig c;
             c.learning_rate = lr;
             c.epochs = epochs;
             c.tolerance = tolerance;
             c.validate();
             return c;
           }),
           py::arg("learning_rate") = 0.1, py::arg("epochs") = 2000, py::arg("tolerance") = 1e-10)
      .def_readwrite("learning_rate", &LogRegConfig::learning_rate)
      .def_readwrite("epochs", &LogRegConfig::epochs)
      .def_readwrite("tolerance", &LogRegConfig::tolerance);

  py::class_<LogRegModel>(m, "LogRegModel")
      .def_property_readonly("beta0", &LogRegModel::beta0)
      .def_property_readonly("beta_round", [](const LogRegModel& mdl) {
        return py::dict(py::arg("Q") = mdl.beta_round(Round::Qualifier), py::arg("S") = mdl.beta_round(Round::SemiFinal),
                        py::arg("F") = mdl.beta_round(Round::Final));
      })
      .def_property_readonly("beta_type", [](const LogRegModel& mdl) {
        return py::dict(py::arg("top") = mdl.beta_type(HoldType::Top), py::arg("zone") = mdl.beta_type(HoldType::Zone));
      })
      .def("predict", py::overload_cast<std::string_view, std::string_view, std::string_view>(&LogRegModel::predict, py::const_),
           py::arg("round"), py::arg("hold_type"), py::arg("climber"))
      .def("coefficients", [](const LogRegModel& mdl) { return climber_coefficients(mdl); })
      .def("to_text", &to_text<LogRegModel>)
      .def_static("from_text", &from_text<LogRegModel>, py::arg("text"));

  m.def("train_logreg", [](const Dataset& d, const LogRegConfig& cfg) { return train_logreg(d, cfg); }, py::arg("dataset"),
        py::arg("config") = LogRegConfig{}, py::call_guard<py::gil_scoped_release>());

  py::class_<PmfConfig>(m, "PmfConfig")
      .def(py::init([](int d, int epochs, double lr, double init_scale, std::uint64_t seed, std::size_t batch_size) {
             PmfConfig c;
             c.d = d;
             c.epochs = epochs;
             c.learning_rate = lr;
             c.init_scale = init_scale;
             c.seed = seed;
             c.batch_size = batch_size;
             c.validate();
             return c;
           }),
           py::arg("d") = 2, py::arg("epochs") = 1000, py::arg("learning_rate") = 0.001, py::arg("init_scale") = 0.1,
           py::arg("seed") = 0, py::arg("batch_size") = 0)
      .def_readwrite("d", &PmfConfig::d)
      .def_readwrite("epochs", &PmfConfig::epochs)
      .def_readwrite("learning_rate", &PmfConfig::learning_rate)
      .def_readwrite("init_scale", &PmfConfig::init_scale)
      .def_readwrite("seed", &PmfConfig::seed)
      .def_readwrite("batch_size", &PmfConfig::batch_size);

  py::class_<PmfModel>(m, "PmfModel")
      .def(py::init<Eigen::MatrixXd, Eigen::MatrixXd, std::vector<std::string>, std::vector<std::string>, std::uint64_t>(),
           py::arg("U"), py::arg("V"), py::arg("climbers"), py::arg("problems"), py::arg("seed") = 0)
      .def_property_readonly("U", &PmfModel::U)
      .def_property_readonly("V", &PmfModel::V)
      .def_property_readonly("d", &PmfModel::d)
      .def_property_readonly("climbers", [](const PmfModel& mdl) { return mdl.climber_index().labels(); })
      .def_property_readonly("problems", [](const PmfModel& mdl) { return mdl.problem_index().labels(); })
      .def("predict", py::overload_cast<std::string_view, std::string_view>(&PmfModel::predict, py::const_),
           py::arg("climber"), py::arg("problem"))
      .def("predict_index", py::overload_cast<std::size_t, std::size_t>(&PmfModel::predict, py::const_), py::arg("row"),
           py::arg("col"))
      .def("loss", [](const PmfModel& mdl, const Dataset& d) { return pmf_loss(mdl, d); }, py::arg("dataset"))
      .def("to_text", &to_text<PmfModel>)
      .def_static("from_text", &from_text<PmfModel>, py::arg("text"));

  m.def(
      "train_pmf",
      [](const Dataset& d, const PmfConfig& cfg) {
        std::vector<double> history;
        auto model = train_pmf(d, cfg, &history);
        return std::make_pair(std::move(model), std::move(history));
      },
      py::arg("dataset"), py::arg("config") = PmfConfig{}, py::call_guard<py::gil_scoped_release>(),
      "Returns (model, loss_history).");

  m.def(
      "evaluate",
      [](std::vector<int> labels, std::vector<double> probs, double threshold) {
        return report_dict(evaluate(PredictionSet(std::move(labels), std::move(probs), threshold)));
      },
      py::arg("labels"), py::arg("probabilities"), py::arg("threshold") = 0.5);
  m.def("roc_auc", [](std::vector<int> y, std::vector<double> p) { return roc_auc(PredictionSet(std::move(y), std::move(p))); },
        py::arg("labels"), py::arg("probabilities"));
  m.def("log_loss", [](std::vector<int> y, std::vector<double> p) { return log_loss(PredictionSet(std::move(y), std::move(p))); },
        py::arg("labels"), py::arg("probabilities"));
  m.def("brier", [](std::vector<int> y, std::vector<double> p) { return brier(PredictionSet(std::move(y), std::move(p))); },
        py::arg("labels"), py::arg("probabilities"));
  m.def("confidence_interval", [](const std::vector<double>& v) { return confidence_interval(v); }, py::arg("values"));

  py::class_<PcaResult>(m, "PcaResult")
      .def_readonly("components", &PcaResult::components)
      .def_readonly("explained_variance", &PcaResult::explained_variance)
      .def_readonly("explained_variance_ratio", &PcaResult::explained_variance_ratio)
      .def_readonly("scores", &PcaResult::scores)
      .def_readonly("center", &PcaResult::center)
      .def_readonly("degenerate", &PcaResult::degenerate);
  m.def("pca", [](const Eigen::MatrixXd& data) { return pca(data); }, py::arg("data"));
  m.def("pearson", [](const std::vector<std::optional<double>>& x, const std::vector<std::optional<double>>& y) {
    return pearson(x, y);
  }, py::arg("x"), py::arg("y"));

  m.def(
      "analyze_climbers",
      [](const PmfModel& model, const Dataset& raw, const LogRegModel* lr) {
        const auto a = analyze_climbers(model, raw, lr);
        py::dict corr;
        for (std::size_t i = 0; i < a.correlations.labels.size(); ++i) {
          py::dict row;
          for (std::size_t j = 0; j < a.correlations.labels.size(); ++j) {
            const auto& v = a.correlations.values[i][j];
            row[py::str(a.correlations.labels[j])] = v ? py::cast(*v) : py::none();
          }
          corr[py::str(a.correlations.labels[i])] = row;
        }
        py::dict out;
        out["groups"] = a.vars.groups;
        out["pca"] = a.pca;
        out["p_success"] = a.vars.p_success;
        out["n_climbs"] = a.vars.n_climbs;
        out["correlations"] = corr;
        return out;
      },
      py::arg("model"), py::arg("dataset"), py::arg("logreg") = nullptr);

  py::class_<SynthSpec>(m, "SynthSpec")
      .def(py::init([](std::size_t m_climbers, std::size_t n_problems, int d_true, double density, double u_scale,
                       double v_scale, double ability_loading, std::uint64_t seed) {
             SynthSpec s;
             s.m_climbers = m_climbers;
             s.n_problems = n_problems;
             s.d_true = d_true;
             s.density = density;
             s.u_scale = u_scale;
             s.v_scale = v_scale;
             s.ability_loading = ability_loading;
             s.seed = seed;
             s.validate();
             return s;
           }),
           py::arg("m_climbers") = 50, py::arg("n_problems") = 200, py::arg("d_true") = 2, py::arg("density") = 0.3,
           py::arg("u_scale") = 1.0, py::arg("v_scale") = 1.0, py::arg("ability_loading") = 0.0, py::arg("seed") = 0);

  py::class_<SynthTruth>(m, "SynthTruth")
      .def_readonly("U", &SynthTruth::U)
      .def_readonly("V", &SynthTruth::V)
      .def_readonly("climber_names", &SynthTruth::climber_names)
      .def_readonly("problem_labels", &SynthTruth::problem_labels)
      .def_readonly("cell_probabilities", &SynthTruth::cell_probabilities)
      .def_readonly("bayes_log_loss", &SynthTruth::bayes_log_loss)
      .def_readonly("dropped_climbers", &SynthTruth::dropped_climbers)
      .def_readonly("dropped_problems", &SynthTruth::dropped_problems);

  m.def(
      "generate",
      [](const SynthSpec& spec) {
        auto s = generate(spec);
        return std::make_pair(std::move(s.dataset), std::move(s.truth));
      },
      py::arg("spec"), "Returns (dataset, truth).");

  py::class_<CellResult>(m, "CellResult")
      .def_property_readonly("model", [](const CellResult& c) { return std::string(model_family_name(c.spec.family)); })
      .def_property_readonly("N", [](const CellResult& c) { return c.spec.replacement_level; })
      .def_property_readonly("d", [](const CellResult& c) { return c.spec.family == ModelFamily::Pmf ? py::cast(c.spec.d) : py::none(); })
      .def_property_readonly("split", [](const CellResult& c) { return std::string(split_name(c.split)); })
      .def_readonly("unresolved", &CellResult::unresolved)
      .def_property_readonly("per_fold", [](const CellResult& c) {
        py::list out;
        for (const auto& r : c.per_fold) out.append(report_dict(r));
        return out;
      })
      .def_property_readonly("summary", &summary_dict);

  m.def(
      "run_grid",
      [](const Dataset& d, std::vector<std::size_t> levels, std::vector<int> dims, bool include_logreg, int k,
         std::uint64_t seed, const PmfConfig& pmf, const LogRegConfig& logreg, std::size_t min_climbers, int jobs) {
        ExperimentGrid g;
        g.replacement_levels = std::move(levels);
        g.latent_dims = std::move(dims);
        g.include_logreg = include_logreg;
        g.k = k;
        g.seed = seed;
        g.config.pmf = pmf;
        g.config.logreg = logreg;
        g.config.min_climbers_per_problem = min_climbers;
        g.jobs = jobs;
        py::gil_scoped_release release;
        return run_grid(d, g);
      },
      py::arg("dataset"), py::arg("levels") = std::vector<std::size_t>{25, 50, 100, 250, 500, 1000},
      py::arg("dims") = std::vector<int>{1, 2, 3, 4, 5}, py::arg("include_logreg") = true, py::arg("k") = 5,
      py::arg("seed") = 0, py::arg("pmf") = PmfConfig{}, py::arg("logreg") = LogRegConfig{},
      py::arg("min_climbers") = kDefaultMinClimbersPerProblem, py::arg("jobs") = 1);

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs a boulderfit command; returns (exit_code, stdout, stderr).");
}
