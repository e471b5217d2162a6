#pragma once

// k-fold cross-validation over the (model family x replacement level x latent
// dimension) grid, with per-metric means and t-based 95% intervals.

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "boulderfit/data.hpp"
#include "boulderfit/logreg.hpp"
#include "boulderfit/metrics.hpp"
#include "boulderfit/pmf.hpp"

namespace boulderfit {

enum class ModelFamily { LogReg, Pmf };
enum class Split { Train, Test };

std::string_view model_family_name(ModelFamily f) noexcept;  // "logreg", "pmf"
std::string_view split_name(Split s) noexcept;               // "train", "test"

struct CellSpec {
  ModelFamily family = ModelFamily::LogReg;
  std::size_t replacement_level = 0;
  int d = 0;  // latent dimension, PMF only

  std::string key() const;  // e.g. "logreg_N100", "pmf_N100_d2"
  bool operator==(const CellSpec&) const = default;
};

struct CvConfig {
  LogRegConfig logreg;
  PmfConfig pmf;  // pmf.d and pmf.seed are overridden per cell and fold
  std::size_t min_climbers_per_problem = kDefaultMinClimbersPerProblem;
};

struct MetricSummary {
  std::vector<std::optional<double>> fold_values;
  std::optional<double> mean;          // over folds where the metric exists
  std::optional<double> ci_halfwidth;  // needs at least two fold values
};

struct CellResult {
  CellSpec spec;
  Split split = Split::Test;
  std::vector<MetricsReport> per_fold;
  std::array<MetricSummary, kAllMetrics.size()> summary;
  // Attempts whose climber or problem had neither a row nor a fallback in the
  // fitted model; those are scored at probability 0.5 (PMF) or with a zero
  // climber effect (logreg).
  std::size_t unresolved = 0;

  const MetricSummary& metric(Metric m) const { return summary[static_cast<std::size_t>(m)]; }
};

// Mean and half-width of the two-sided 95% t interval (k - 1 degrees of freedom).
std::pair<double, double> confidence_interval(std::span<const double> values);

// Training portion of one fold, regrouped from its own attempts only.
Dataset fold_training_dataset(const Dataset& d, const FoldSplit& split, int fold, const CellSpec& spec,
                              const CvConfig& cfg = {});

// Per-fold seed for model initialization; shared across cells so comparisons are paired.
std::uint64_t fold_seed(std::uint64_t seed, int fold) noexcept;

// Train/test results for one grid cell, in that order.
std::array<CellResult, 2> run_cell(const Dataset& d, const CellSpec& spec, const FoldSplit& split,
                                   const CvConfig& cfg = {});

struct ExperimentGrid {
  std::vector<std::size_t> replacement_levels{25, 50, 100, 250, 500, 1000};
  std::vector<int> latent_dims{1, 2, 3, 4, 5};
  bool include_logreg = true;
  int k = 5;
  std::uint64_t seed = 0;
  CvConfig config;
  int jobs = 1;

  void validate() const;
  std::vector<CellSpec> cells() const;
};

// Runs the given cells over a shared split on up to `jobs` threads. Output
// order matches `cells`; errors name the failing cell.
std::vector<std::array<CellResult, 2>> run_cells(const Dataset& d, const std::vector<CellSpec>& cells,
                                                 const FoldSplit& split, const CvConfig& cfg, int jobs = 1);

// Results in canonical order (N, logreg before pmf, d, train before test),
// independent of grid order and job count.
std::vector<CellResult> run_grid(const Dataset& d, const ExperimentGrid& grid);

// Sort key order used by run_grid and the results table.
bool canonical_less(const CellResult& a, const CellResult& b);

// Results table: model,N,d,split,metric,mean,ci_halfwidth,fold_0..fold_{k-1}.
void write_results_header(std::ostream& out, int k);
void write_result_rows(std::ostream& out, const CellResult& cell);

}  // namespace boulderfit
