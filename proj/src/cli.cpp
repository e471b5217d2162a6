#include "boulderfit/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "boulderfit/analysis.hpp"
#include "boulderfit/cv.hpp"
#include "boulderfit/data.hpp"
#include "boulderfit/error.hpp"
#include "boulderfit/logreg.hpp"
#include "boulderfit/manifest.hpp"
#include "boulderfit/metrics.hpp"
#include "boulderfit/pmf.hpp"
#include "boulderfit/synth.hpp"
#include "boulderfit/text.hpp"

namespace fs = std::filesystem;

namespace boulderfit::cli {

namespace {

// Thrown for invalid flag values discovered after CLI11 parsing.
struct UsageError : Error {
  using Error::Error;
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void make_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
}

std::string fmt(double v) { return text::format_double(v); }

const std::vector<std::size_t> kFigureLevels{25, 50, 100, 250, 500, 1000};

// ---------------------------------------------------------------------------
// ingest-check

struct IngestCheckArgs {
  std::string input;
  std::string heights;
  std::string out;
};

int ingest_check(const IngestCheckArgs& a, std::ostream& out) {
  const auto d = ingest_attempts(a.input);
  std::set<std::string> comps;
  for (const auto& r : d.attempts()) comps.insert(r.competition_id);

  std::ostringstream s;
  s << "attempts=" << d.size() << '\n';
  s << "climbers=" << d.num_climbers() << '\n';
  s << "problems=" << d.num_problems() << '\n';
  s << "competitions=" << comps.size() << '\n';
  s << "successes=" << d.successes() << '\n';
  for (auto n : kFigureLevels) {
    const auto grouped = apply_replacement_level(d, n);
    const bool merged = grouped.climber_index().contains(kReplacement);
    s << "climbers_at_or_above_N" << n << '=' << grouped.num_climbers() - (merged ? 1 : 0) << '\n';
  }
  const auto rare = apply_problem_grouping(d, kDefaultMinClimbersPerProblem);
  s << "problems_with_min_climbers=" << rare.num_problems() - (rare.problem_index().contains(kRareProblem) ? 1 : 0)
    << '\n';
  if (!a.heights.empty()) {
    const auto heights = ingest_heights(a.heights);
    std::size_t matched = 0;
    for (const auto& h : heights)
      if (h.height_cm && d.climber_groups().contains(h.climber)) ++matched;
    s << "heights_rows=" << heights.size() << '\n';
    s << "heights_matched=" << matched << '\n';
  }
  out << s.str();
  if (!a.out.empty()) {
    make_out_dir(a.out);
    write_file(fs::path(a.out) / "summary.txt", s.str());
    RunManifest m("ingest-check");
    m.add_input("attempts", a.input);
    if (!a.heights.empty()) m.add_input("heights", a.heights);
    m.write(a.out);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  std::string model;
  std::string input;
  std::string out;
  std::size_t replacement_level = 100;
  int d = 2;
  std::optional<int> epochs;
  std::optional<double> lr;
  std::uint64_t seed = 0;
  std::size_t batch_size = 0;
  std::size_t min_climbers = kDefaultMinClimbersPerProblem;
  double init_scale = 0.1;
};

LogRegConfig logreg_config(std::optional<int> epochs, std::optional<double> lr, std::uint64_t seed) {
  LogRegConfig cfg;
  if (epochs) cfg.epochs = *epochs;
  if (lr) cfg.learning_rate = *lr;
  cfg.seed = seed;
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

PmfConfig pmf_config(int d, std::optional<int> epochs, std::optional<double> lr, std::uint64_t seed,
                     std::size_t batch_size, double init_scale) {
  PmfConfig cfg;
  cfg.d = d;
  if (epochs) cfg.epochs = *epochs;
  if (lr) cfg.learning_rate = *lr;
  cfg.seed = seed;
  cfg.batch_size = batch_size;
  cfg.init_scale = init_scale;
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

void record_logreg(RunManifest& m, const LogRegConfig& c) {
  m.set("logreg.learning_rate", fmt(c.learning_rate));
  m.set("logreg.epochs", std::to_string(c.epochs));
  m.set("logreg.tolerance", fmt(c.tolerance));
}

void record_pmf(RunManifest& m, const PmfConfig& c, bool with_d) {
  if (with_d) m.set("pmf.d", std::to_string(c.d));
  m.set("pmf.epochs", std::to_string(c.epochs));
  m.set("pmf.learning_rate", fmt(c.learning_rate));
  m.set("pmf.adam_beta1", fmt(c.adam_beta1));
  m.set("pmf.adam_beta2", fmt(c.adam_beta2));
  m.set("pmf.adam_eps", fmt(c.adam_eps));
  m.set("pmf.init_scale", fmt(c.init_scale));
  m.set("pmf.batch_size", c.batch_size == 0 ? "full" : std::to_string(c.batch_size));
}

int train(const TrainArgs& a, std::ostream& out) {
  RunManifest manifest("train");
  manifest.set("model", a.model);
  manifest.set("N", std::to_string(a.replacement_level));
  manifest.set("seed", std::to_string(a.seed));

  std::optional<LogRegConfig> lcfg;
  std::optional<PmfConfig> pcfg;
  if (a.model == "logreg") {
    lcfg = logreg_config(a.epochs, a.lr, a.seed);
    record_logreg(manifest, *lcfg);
  } else {
    pcfg = pmf_config(a.d, a.epochs, a.lr, a.seed, a.batch_size, a.init_scale);
    manifest.set("min_climbers_per_problem", std::to_string(a.min_climbers));
    record_pmf(manifest, *pcfg, true);
  }

  const auto raw = ingest_attempts(a.input);
  if (raw.empty()) throw Error(a.input + ": no attempts to train on");
  make_out_dir(a.out);
  manifest.add_input("attempts", a.input);

  auto grouped = apply_replacement_level(raw, a.replacement_level);
  PredictionSet ps;
  std::ostringstream model_text;
  if (lcfg) {
    const auto model = train_logreg(grouped, *lcfg);
    model.write(model_text);
    for (std::size_t i = 0; i < grouped.size(); ++i) {
      const auto& r = grouped.attempt(i);
      ps.add(r.outcome, model.predict(r.round, r.hold_type, grouped.climber_index().label(grouped.row(i))));
    }
  } else {
    grouped = apply_problem_grouping(grouped, a.min_climbers);
    const auto model = train_pmf(grouped, *pcfg);
    model.write(model_text);
    for (std::size_t i = 0; i < grouped.size(); ++i) {
      ps.add(grouped.attempt(i).outcome, model.predict(static_cast<std::size_t>(grouped.row(i)),
                                                       static_cast<std::size_t>(grouped.col(i))));
    }
  }
  const auto report = evaluate(ps);
  write_file(fs::path(a.out) / "model.txt", model_text.str());
  write_file(fs::path(a.out) / "metrics.txt", report.to_text());
  manifest.set("climber_groups", std::to_string(grouped.num_climbers()));
  manifest.set("problem_groups", std::to_string(grouped.num_problems()));
  manifest.write(a.out);
  out << "trained " << a.model << " on " << grouped.size() << " attempts (" << grouped.num_climbers()
      << " climber groups, " << grouped.num_problems() << " problem groups)\n"
      << report.to_text();
  return kExitOk;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateArgs {
  std::string model_file;
  std::string input;
  std::string out;
  double threshold = 0.5;
};

int evaluate_cmd(const EvaluateArgs& a, std::ostream& out) {
  if (!(a.threshold > 0.0 && a.threshold < 1.0)) throw UsageError("--threshold must lie in (0, 1)");
  const auto model_text = read_file(a.model_file);
  const auto raw = ingest_attempts(a.input);
  if (raw.empty()) throw Error(a.input + ": no attempts to evaluate");

  PredictionSet ps(a.threshold);
  std::ostringstream preds;
  preds << "climber,problem,outcome,p\n";
  std::string kind;
  std::istringstream in(model_text);
  if (model_text.starts_with("pmf ")) {
    kind = "pmf";
    const auto model = PmfModel::read(in, a.model_file);
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const auto p = model.predict(raw.attempt(i).climber, raw.raw_problem_label(i));
      ps.add(raw.attempt(i).outcome, p);
      preds << raw.attempt(i).climber << ',' << raw.raw_problem_label(i) << ',' << raw.attempt(i).outcome << ','
            << fmt(p) << '\n';
    }
  } else {
    kind = "logreg";
    const auto model = LogRegModel::read(in, a.model_file);
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const auto& r = raw.attempt(i);
      const auto p = model.predict(r.round, r.hold_type, r.climber);
      ps.add(r.outcome, p);
      preds << r.climber << ',' << raw.raw_problem_label(i) << ',' << r.outcome << ',' << fmt(p) << '\n';
    }
  }
  const auto report = evaluate(ps);
  make_out_dir(a.out);
  write_file(fs::path(a.out) / "metrics.txt", report.to_text());
  write_file(fs::path(a.out) / "predictions.csv", preds.str());
  RunManifest m("evaluate");
  m.set("model_kind", kind);
  m.set("threshold", fmt(a.threshold));
  m.add_input("model", a.model_file);
  m.add_input("attempts", a.input);
  m.write(a.out);
  out << report.to_text();
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
  std::string input;
  std::string out;
  std::vector<std::size_t> levels = kFigureLevels;
  std::vector<int> dims{1, 2, 3, 4, 5};
  int k = 5;
  std::uint64_t seed = 0;
  std::optional<int> epochs;
  std::optional<double> lr;
  std::optional<int> logreg_epochs;
  std::optional<double> logreg_lr;
  std::size_t batch_size = 0;
  double init_scale = 0.1;
  std::size_t min_climbers = kDefaultMinClimbersPerProblem;
  bool no_logreg = false;
  int jobs = 1;
};

struct CellFile {
  std::vector<std::string> rows;
};

// Returns the cached rows if the file exists and was produced for `digest`.
std::optional<CellFile> load_cell(const fs::path& path, const std::string& digest) {
  if (!fs::exists(path)) return std::nullopt;
  std::ifstream in(path, std::ios::binary);
  std::string line;
  if (!std::getline(in, line) || line != "# digest=" + digest) return std::nullopt;
  CellFile cell;
  bool complete = false;
  while (std::getline(in, line)) {
    if (line.starts_with("# end")) {
      complete = true;
      break;
    }
    if (!line.starts_with("#")) cell.rows.push_back(line);
  }
  if (!complete) return std::nullopt;
  return cell;
}

int sweep(const SweepArgs& a, std::ostream& out) {
  ExperimentGrid grid;
  grid.replacement_levels = a.levels;
  grid.latent_dims = a.dims;
  grid.include_logreg = !a.no_logreg;
  grid.k = a.k;
  grid.seed = a.seed;
  grid.jobs = a.jobs;
  grid.config.logreg = logreg_config(a.logreg_epochs, a.logreg_lr, a.seed);
  grid.config.pmf = pmf_config(1, a.epochs, a.lr, a.seed, a.batch_size, a.init_scale);
  grid.config.min_climbers_per_problem = a.min_climbers;
  try {
    grid.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }

  RunManifest manifest("sweep");
  manifest.set("levels", [&] {
    std::vector<std::string> v;
    for (auto n : a.levels) v.push_back(std::to_string(n));
    return text::join(v, ";");
  }());
  manifest.set("dims", [&] {
    std::vector<std::string> v;
    for (auto d : a.dims) v.push_back(std::to_string(d));
    return text::join(v, ";");
  }());
  manifest.set("include_logreg", grid.include_logreg ? "true" : "false");
  manifest.set("k", std::to_string(a.k));
  manifest.set("seed", std::to_string(a.seed));
  manifest.set("fold_unit", "attempt");
  manifest.set("min_climbers_per_problem", std::to_string(a.min_climbers));
  record_logreg(manifest, grid.config.logreg);
  record_pmf(manifest, grid.config.pmf, false);

  const auto raw = ingest_attempts(a.input);
  const auto split = split_folds(raw, a.k, a.seed);
  make_out_dir(a.out);
  const fs::path cells_dir = fs::path(a.out) / "cells";
  make_out_dir(cells_dir);
  manifest.add_input("attempts", a.input);

  // A cell is reusable when its file carries the digest of the input and every
  // setting that affects it.
  const auto config_digest = sha256_hex(manifest.body());

  auto cells = grid.cells();
  std::sort(cells.begin(), cells.end(), [](const CellSpec& x, const CellSpec& y) {
    return std::tuple(x.replacement_level, static_cast<int>(x.family), x.d) <
           std::tuple(y.replacement_level, static_cast<int>(y.family), y.d);
  });
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());

  std::vector<std::optional<CellFile>> cached(cells.size());
  std::vector<CellSpec> todo;
  std::vector<std::size_t> todo_index;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto digest = sha256_hex(config_digest + "|" + cells[i].key());
    cached[i] = load_cell(cells_dir / (cells[i].key() + ".csv"), digest);
    if (!cached[i]) {
      todo.push_back(cells[i]);
      todo_index.push_back(i);
    }
  }
  out << "sweep: " << cells.size() << " cells, " << cells.size() - todo.size() << " reused\n";

  const auto fresh = run_cells(raw, todo, split, grid.config, a.jobs);
  for (std::size_t t = 0; t < todo.size(); ++t) {
    const auto i = todo_index[t];
    std::ostringstream rows;
    std::size_t unresolved = 0;
    for (const auto& c : fresh[t]) {
      write_result_rows(rows, c);
      unresolved += c.unresolved;
    }
    CellFile cell;
    std::istringstream lines(rows.str());
    std::string line;
    while (std::getline(lines, line)) cell.rows.push_back(line);
    const auto digest = sha256_hex(config_digest + "|" + cells[i].key());
    write_file(cells_dir / (cells[i].key() + ".csv"), "# digest=" + digest + "\n" + rows.str() +
                                                          "# unresolved_test=" + std::to_string(unresolved) +
                                                          "\n# end\n");
    cached[i] = std::move(cell);
  }

  std::ostringstream results;
  write_results_header(results, a.k);
  std::map<std::size_t, std::ostringstream> figures;
  for (const auto& cell : cached) {
    for (const auto& row : cell->rows) {
      results << row << '\n';
      // model,N,d,split,metric,mean,ci_halfwidth,...
      auto f = text::split(row, ',');
      long long n = 0;
      text::parse_int(f[1], n);
      auto& fig = figures[static_cast<std::size_t>(n)];
      if (fig.tellp() == 0) fig << "model,d,split,metric,mean,lower,upper\n";
      double mean = 0, half = 0;
      const bool has_mean = text::parse_double(f[5], mean);
      const bool has_half = text::parse_double(f[6], half);
      fig << f[0] << ',' << f[2] << ',' << f[3] << ',' << f[4] << ',' << f[5] << ','
          << (has_mean && has_half ? fmt(mean - half) : "") << ',' << (has_mean && has_half ? fmt(mean + half) : "")
          << '\n';
    }
  }
  write_file(fs::path(a.out) / "results.csv", results.str());
  for (auto& [n, fig] : figures) write_file(fs::path(a.out) / ("figure_N" + std::to_string(n) + ".csv"), fig.str());
  manifest.write(a.out);
  out << "wrote " << (fs::path(a.out) / "results.csv").string() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeArgs {
  std::string model_file;
  std::string input;
  std::string heights;
  std::string logreg_model;
  std::string out;
  bool svg = false;
};

int analyze(const AnalyzeArgs& a, std::ostream& out) {
  std::ifstream min(a.model_file, std::ios::binary);
  if (!min) throw Error("cannot open " + a.model_file);
  const auto model = PmfModel::read(min, a.model_file);
  const auto raw = ingest_attempts(a.input);
  std::optional<std::vector<ClimberMeta>> heights;
  if (!a.heights.empty()) heights = ingest_heights(a.heights);

  RunManifest manifest("analyze");
  manifest.note("climber PCA fit on all model rows except " + std::string(kReplacement));
  manifest.note("problem PCA fit on all model columns");

  // The coefficient table comes from a baseline fit on the same climber groups
  // unless a trained baseline is supplied.
  LogRegModel lr;
  if (!a.logreg_model.empty()) {
    std::ifstream lin(a.logreg_model, std::ios::binary);
    if (!lin) throw Error("cannot open " + a.logreg_model);
    lr = LogRegModel::read(lin, a.logreg_model);
    manifest.set("lr_coef_source", "file");
  } else {
    lr = train_logreg(align_to_model(model, raw));
    manifest.set("lr_coef_source", "fit on model climber groups");
    record_logreg(manifest, LogRegConfig{});
  }

  const auto climbers = analyze_climbers(model, raw, &lr, heights ? &*heights : nullptr);
  const auto problems = problem_projection(model, raw);

  make_out_dir(a.out);
  const fs::path dir(a.out);
  {
    std::ostringstream s;
    write_climber_pca(s, climbers);
    write_file(dir / "climber_pca.csv", s.str());
  }
  {
    std::ostringstream s;
    write_problem_pca(s, problems);
    write_file(dir / "problem_pca.csv", s.str());
  }
  {
    std::ostringstream s;
    write_correlations(s, climbers.correlations);
    write_file(dir / "correlations.csv", s.str());
  }
  {
    std::ostringstream s;
    s << "component,climber_explained_variance_ratio,problem_explained_variance_ratio\n";
    for (Eigen::Index k = 0; k < climbers.pca.explained_variance_ratio.size(); ++k) {
      s << "PC" << (k + 1) << ',' << fmt(climbers.pca.explained_variance_ratio(k)) << ','
        << fmt(problems.pca.explained_variance_ratio(k)) << '\n';
    }
    write_file(dir / "explained_variance.csv", s.str());
  }
  if (a.svg) {
    auto coord = [](const Eigen::MatrixXd& scores, Eigen::Index k) {
      std::vector<double> v(static_cast<std::size_t>(scores.rows()), 0.0);
      if (k < scores.cols())
        for (Eigen::Index i = 0; i < scores.rows(); ++i) v[static_cast<std::size_t>(i)] = scores(i, k);
      return v;
    };
    {
      std::ostringstream s;
      write_scatter_svg(s, "Climber embeddings by success rate", coord(climbers.pca.scores, 0),
                        coord(climbers.pca.scores, 1), climbers.vars.p_success);
      write_file(dir / "climber_pca.svg", s.str());
    }
    std::vector<double> by_type, by_success;
    for (const auto& r : problems.rows) {
      by_type.push_back(r.hold_type == "top" ? 1.0 : r.hold_type == "zone" ? 0.0 : 0.5);
      by_success.push_back(r.success_rate.value_or(std::nan("")));
    }
    {
      std::ostringstream s;
      write_scatter_svg(s, "Problem embeddings by type (red=top, blue=zone)", coord(problems.pca.scores, 0),
                        coord(problems.pca.scores, 1), by_type);
      write_file(dir / "problem_pca_type.svg", s.str());
    }
    {
      std::ostringstream s;
      write_scatter_svg(s, "Problem embeddings by success rate", coord(problems.pca.scores, 0),
                        coord(problems.pca.scores, 1), by_success);
      write_file(dir / "problem_pca_success.svg", s.str());
    }
  }

  manifest.set("svg", a.svg ? "true" : "false");
  manifest.add_input("model", a.model_file);
  manifest.add_input("attempts", a.input);
  if (!a.heights.empty()) manifest.add_input("heights", a.heights);
  if (!a.logreg_model.empty()) manifest.add_input("logreg_model", a.logreg_model);
  manifest.write(a.out);
  out << "analyzed " << climbers.vars.groups.size() << " climbers and " << problems.rows.size() << " problems\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
  SynthSpec spec;
  std::string out;
};

int synth(const SynthArgs& a, std::ostream& out) {
  try {
    a.spec.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const auto data = generate(a.spec);
  make_out_dir(a.out);
  const fs::path dir(a.out);
  {
    std::ostringstream s;
    write_attempts(s, data.dataset.attempts());
    write_file(dir / "attempts.csv", s.str());
  }
  {
    std::ostringstream s;
    write_truth(s, data.truth);
    write_file(dir / "truth.txt", s.str());
  }
  {
    std::ostringstream s;
    write_truth_cells(s, data.dataset, data.truth);
    write_file(dir / "truth_cells.csv", s.str());
  }
  RunManifest m("synth");
  m.set("m", std::to_string(a.spec.m_climbers));
  m.set("n", std::to_string(a.spec.n_problems));
  m.set("d_true", std::to_string(a.spec.d_true));
  m.set("density", fmt(a.spec.density));
  m.set("u_scale", fmt(a.spec.u_scale));
  m.set("v_scale", fmt(a.spec.v_scale));
  m.set("ability_loading", fmt(a.spec.ability_loading));
  m.set("problems_per_competition", std::to_string(a.spec.problems_per_competition));
  m.set("seed", std::to_string(a.spec.seed));
  m.write(a.out);
  out << "generated " << data.dataset.size() << " attempts (" << data.dataset.num_climbers() << " climbers, "
      << data.dataset.num_problems() << " problems); bayes_log_loss=" << fmt(data.truth.bayes_log_loss) << '\n';
  if (!data.truth.dropped_climbers.empty() || !data.truth.dropped_problems.empty()) {
    out << "notice: dropped " << data.truth.dropped_climbers.size() << " climbers and "
        << data.truth.dropped_problems.size() << " problems with no observed attempts\n";
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Skill models for sparse climber x problem outcome data", "boulderfit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  IngestCheckArgs ingest_args;
  auto* ingest = app.add_subcommand("ingest-check", "Validate an attempt file and print dataset statistics");
  ingest->add_option("--input", ingest_args.input, "Attempt CSV")->required();
  ingest->add_option("--heights", ingest_args.heights, "Heights CSV");
  ingest->add_option("--out", ingest_args.out, "Optional output directory for summary.txt");

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Fit a model on an attempt file");
  train_cmd->add_option("--model", train_args.model, "Model family")
      ->required()
      ->check(CLI::IsMember({"logreg", "pmf"}));
  train_cmd->add_option("--input", train_args.input, "Attempt CSV")->required();
  train_cmd->add_option("--out", train_args.out, "Output directory")->required();
  train_cmd->add_option("--N", train_args.replacement_level, "Replacement level")->capture_default_str();
  train_cmd->add_option("--d", train_args.d, "Latent dimension (pmf)")->capture_default_str();
  train_cmd->add_option("--epochs", train_args.epochs, "Epochs (default: 1000 pmf, 2000 logreg)");
  train_cmd->add_option("--lr", train_args.lr, "Learning rate (default: 0.001 pmf, 0.1 logreg)");
  train_cmd->add_option("--seed", train_args.seed, "Random seed")->capture_default_str();
  train_cmd->add_option("--batch-size", train_args.batch_size, "Mini-batch size, 0 for full batch (pmf)")
      ->capture_default_str();
  train_cmd->add_option("--min-climbers", train_args.min_climbers, "Problems with fewer climbers are merged (pmf)")
      ->capture_default_str();
  train_cmd->add_option("--init-scale", train_args.init_scale, "Embedding init std (pmf)")->capture_default_str();

  EvaluateArgs eval_args;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score a saved model on an attempt file");
  eval_cmd->add_option("--model-file", eval_args.model_file, "Saved model")->required();
  eval_cmd->add_option("--input", eval_args.input, "Attempt CSV")->required();
  eval_cmd->add_option("--out", eval_args.out, "Output directory")->required();
  eval_cmd->add_option("--threshold", eval_args.threshold, "Classification threshold")->capture_default_str();

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "Cross-validate the model grid");
  sweep_cmd->add_option("--input", sweep_args.input, "Attempt CSV")->required();
  sweep_cmd->add_option("--out", sweep_args.out, "Output directory")->required();
  sweep_cmd->add_option("--levels", sweep_args.levels, "Replacement levels")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--dims", sweep_args.dims, "PMF latent dimensions")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--k", sweep_args.k, "Folds")->capture_default_str();
  sweep_cmd->add_option("--seed", sweep_args.seed, "Random seed")->capture_default_str();
  sweep_cmd->add_option("--epochs", sweep_args.epochs, "PMF epochs (default 1000)");
  sweep_cmd->add_option("--lr", sweep_args.lr, "PMF learning rate (default 0.001)");
  sweep_cmd->add_option("--logreg-epochs", sweep_args.logreg_epochs, "Logreg epochs (default 2000)");
  sweep_cmd->add_option("--logreg-lr", sweep_args.logreg_lr, "Logreg learning rate (default 0.1)");
  sweep_cmd->add_option("--batch-size", sweep_args.batch_size, "PMF mini-batch size, 0 for full batch")
      ->capture_default_str();
  sweep_cmd->add_option("--init-scale", sweep_args.init_scale, "PMF embedding init std")->capture_default_str();
  sweep_cmd->add_option("--min-climbers", sweep_args.min_climbers, "Rare-problem threshold")->capture_default_str();
  sweep_cmd->add_flag("--no-logreg", sweep_args.no_logreg, "Skip the logistic regression baseline");
  sweep_cmd->add_option("--jobs", sweep_args.jobs, "Parallel cells")->capture_default_str();

  AnalyzeArgs analyze_args;
  auto* analyze_cmd = app.add_subcommand("analyze", "PCA and correlations of a trained PMF model");
  analyze_cmd->add_option("--model-file", analyze_args.model_file, "Trained PMF model")->required();
  analyze_cmd->add_option("--input", analyze_args.input, "Attempt CSV the model was trained on")->required();
  analyze_cmd->add_option("--heights", analyze_args.heights, "Heights CSV");
  analyze_cmd->add_option("--logreg-model", analyze_args.logreg_model, "Trained logreg model for lr_coef");
  analyze_cmd->add_option("--out", analyze_args.out, "Output directory")->required();
  analyze_cmd->add_flag("--svg", analyze_args.svg, "Also write scatter SVGs");

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "Generate synthetic attempts with known ground truth");
  synth_cmd->add_option("--m", synth_args.spec.m_climbers, "Climbers")->capture_default_str();
  synth_cmd->add_option("--n", synth_args.spec.n_problems, "Problem columns")->capture_default_str();
  synth_cmd->add_option("--d-true", synth_args.spec.d_true, "Latent dimension")->capture_default_str();
  synth_cmd->add_option("--density", synth_args.spec.density, "Observed fraction of cells")->capture_default_str();
  synth_cmd->add_option("--u-scale", synth_args.spec.u_scale, "Climber factor std")->capture_default_str();
  synth_cmd->add_option("--v-scale", synth_args.spec.v_scale, "Problem factor std")->capture_default_str();
  synth_cmd->add_option("--ability-loading", synth_args.spec.ability_loading, "Mean loading of factor 0")
      ->capture_default_str();
  synth_cmd->add_option("--problems-per-competition", synth_args.spec.problems_per_competition,
                        "Physical problems per competition")
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth_args.spec.seed, "Random seed")->capture_default_str();
  synth_cmd->add_option("--out", synth_args.out, "Output directory")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (ingest->parsed()) return ingest_check(ingest_args, out);
    if (train_cmd->parsed()) return train(train_args, out);
    if (eval_cmd->parsed()) return evaluate_cmd(eval_args, out);
    if (sweep_cmd->parsed()) return sweep(sweep_args, out);
    if (analyze_cmd->parsed()) return analyze(analyze_args, out);
    if (synth_cmd->parsed()) return synth(synth_args, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace boulderfit::cli
