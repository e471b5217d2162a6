#include "boulderfit/cv.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>
#include <tuple>

#include <boost/math/distributions/students_t.hpp>

#include "boulderfit/error.hpp"
#include "boulderfit/text.hpp"

namespace boulderfit {

std::string_view model_family_name(ModelFamily f) noexcept { return f == ModelFamily::LogReg ? "logreg" : "pmf"; }

std::string_view split_name(Split s) noexcept { return s == Split::Train ? "train" : "test"; }

std::string CellSpec::key() const {
  std::string out(model_family_name(family));
  out += "_N" + std::to_string(replacement_level);
  if (family == ModelFamily::Pmf) out += "_d" + std::to_string(d);
  return out;
}

std::pair<double, double> confidence_interval(std::span<const double> values) {
  if (values.size() < 2) throw Error("confidence interval needs at least two values");
  const double k = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / k;
  double ss = 0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (k - 1.0));
  boost::math::students_t dist(k - 1.0);
  const double t = boost::math::quantile(dist, 0.975);
  return {mean, t * sd / std::sqrt(k)};
}

std::uint64_t fold_seed(std::uint64_t seed, int fold) noexcept {
  return seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(fold) + 1;
}

Dataset fold_training_dataset(const Dataset& d, const FoldSplit& split, int fold, const CellSpec& spec,
                              const CvConfig& cfg) {
  auto train = apply_replacement_level(d.subset(split.train_indices(fold)), spec.replacement_level);
  if (spec.family == ModelFamily::Pmf) train = apply_problem_grouping(train, cfg.min_climbers_per_problem);
  return train;
}

namespace {

MetricSummary summarize(const std::vector<MetricsReport>& folds, Metric m) {
  MetricSummary s;
  std::vector<double> present;
  for (const auto& r : folds) {
    auto v = r.get(m);
    s.fold_values.push_back(v);
    if (v) present.push_back(*v);
  }
  if (present.size() >= 2) {
    auto [mean, half] = confidence_interval(present);
    s.mean = mean;
    s.ci_halfwidth = half;
  } else if (present.size() == 1) {
    s.mean = present.front();
  }
  return s;
}

void finalize(CellResult& cell) {
  for (std::size_t i = 0; i < kAllMetrics.size(); ++i) cell.summary[i] = summarize(cell.per_fold, kAllMetrics[i]);
}

}  // namespace

std::array<CellResult, 2> run_cell(const Dataset& d, const CellSpec& spec, const FoldSplit& split,
                                   const CvConfig& cfg) {
  if (split.assignments.size() != d.size()) throw Error("fold split does not match the dataset");
  if (spec.family == ModelFamily::Pmf && spec.d < 1) throw Error("pmf cell needs a latent dimension >= 1");

  std::array<CellResult, 2> out;
  out[0].spec = out[1].spec = spec;
  out[0].split = Split::Train;
  out[1].split = Split::Test;

  for (int fold = 0; fold < split.k; ++fold) {
    const auto train = fold_training_dataset(d, split, fold, spec, cfg);
    const auto test_idx = split.test_indices(fold);
    PredictionSet train_ps, test_ps;
    train_ps.reserve(train.size());
    test_ps.reserve(test_idx.size());

    if (spec.family == ModelFamily::LogReg) {
      const auto model = train_logreg(train, cfg.logreg);
      for (std::size_t a = 0; a < train.size(); ++a) {
        const auto& rec = train.attempt(a);
        train_ps.add(rec.outcome, model.predict(rec.round, rec.hold_type, train.climber_index().label(train.row(a))));
      }
      for (auto i : test_idx) {
        const auto& rec = d.attempt(i);
        if (!train.resolve_climber(rec.climber)) ++out[1].unresolved;
        test_ps.add(rec.outcome, model.predict(rec.round, rec.hold_type, rec.climber));
      }
    } else {
      PmfConfig pcfg = cfg.pmf;
      pcfg.d = spec.d;
      pcfg.seed = fold_seed(split.seed, fold);
      const auto model = train_pmf(train, pcfg);
      for (std::size_t a = 0; a < train.size(); ++a) {
        train_ps.add(train.attempt(a).outcome,
                     model.predict(static_cast<std::size_t>(train.row(a)), static_cast<std::size_t>(train.col(a))));
      }
      for (auto i : test_idx) {
        const auto& rec = d.attempt(i);
        const auto row = train.resolve_climber(rec.climber);
        const auto col = train.resolve_problem(d.raw_problem_label(i));
        if (row && col) {
          test_ps.add(rec.outcome, model.predict(static_cast<std::size_t>(*row), static_cast<std::size_t>(*col)));
        } else {
          ++out[1].unresolved;
          test_ps.add(rec.outcome, 0.5);
        }
      }
    }
    out[0].per_fold.push_back(evaluate(train_ps));
    out[1].per_fold.push_back(evaluate(test_ps));
  }
  finalize(out[0]);
  finalize(out[1]);
  return out;
}

void ExperimentGrid::validate() const {
  if (replacement_levels.empty()) throw Error("grid needs at least one replacement level");
  if (!include_logreg && latent_dims.empty()) throw Error("grid has no models: no latent dims and logreg disabled");
  for (int d : latent_dims)
    if (d < 1) throw Error("latent dimensions must be >= 1");
  if (k < 2) throw Error("grid needs k >= 2 folds");
  if (jobs < 1) throw Error("jobs must be >= 1");
}

std::vector<CellSpec> ExperimentGrid::cells() const {
  std::vector<CellSpec> out;
  for (auto n : replacement_levels) {
    if (include_logreg) out.push_back({ModelFamily::LogReg, n, 0});
    for (int d : latent_dims) out.push_back({ModelFamily::Pmf, n, d});
  }
  return out;
}

bool canonical_less(const CellResult& a, const CellResult& b) {
  auto key = [](const CellResult& c) {
    return std::tuple(c.spec.replacement_level, static_cast<int>(c.spec.family), c.spec.d, static_cast<int>(c.split));
  };
  return key(a) < key(b);
}

std::vector<std::array<CellResult, 2>> run_cells(const Dataset& d, const std::vector<CellSpec>& cells,
                                                 const FoldSplit& split, const CvConfig& cfg, int jobs) {
  std::vector<std::array<CellResult, 2>> results(cells.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      try {
        results[i] = run_cell(d, cells[i], split, cfg);
      } catch (const std::exception& e) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::make_exception_ptr(Error("cell " + cells[i].key() + ": " + e.what()));
      }
    }
  };
  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), cells.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < threads; ++j) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

std::vector<CellResult> run_grid(const Dataset& d, const ExperimentGrid& grid) {
  grid.validate();
  const auto cells = grid.cells();
  const auto split = split_folds(d, grid.k, grid.seed);
  auto results = run_cells(d, cells, split, grid.config, grid.jobs);

  std::vector<CellResult> out;
  out.reserve(2 * cells.size());
  for (auto& pair : results)
    for (auto& c : pair) out.push_back(std::move(c));
  std::stable_sort(out.begin(), out.end(), canonical_less);
  return out;
}

void write_results_header(std::ostream& out, int k) {
  out << "model,N,d,split,metric,mean,ci_halfwidth";
  for (int f = 0; f < k; ++f) out << ",fold_" << f;
  out << '\n';
}

void write_result_rows(std::ostream& out, const CellResult& cell) {
  auto opt = [](const std::optional<double>& v) { return v ? text::format_double(*v) : std::string(); };
  for (auto m : kAllMetrics) {
    const auto& s = cell.metric(m);
    out << model_family_name(cell.spec.family) << ',' << cell.spec.replacement_level << ',';
    if (cell.spec.family == ModelFamily::Pmf) out << cell.spec.d;
    out << ',' << split_name(cell.split) << ',' << metric_name(m) << ',' << opt(s.mean) << ',' << opt(s.ci_halfwidth);
    for (const auto& v : s.fold_values) out << ',' << opt(v);
    out << '\n';
  }
}

}  // namespace boulderfit
