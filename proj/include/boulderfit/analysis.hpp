#pragma once

// Interpretation of learned embeddings: PCA of climber and problem vectors,
// Pearson correlations of climber principal components against external
// variables, and plot-ready tables.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "boulderfit/data.hpp"
#include "boulderfit/logreg.hpp"
#include "boulderfit/pmf.hpp"

namespace boulderfit {

struct PcaResult {
  Eigen::MatrixXd components;  // d x d, column c is component c
  Eigen::VectorXd explained_variance;
  Eigen::VectorXd explained_variance_ratio;  // non-increasing, sums to 1
  Eigen::MatrixXd scores;                    // entities x d
  Eigen::VectorXd center;
  bool degenerate = false;  // zero total variance; ratios set uniform
};

// Rows of data are entities. Covariance uses divisor m - 1; each component
// is signed so its largest-magnitude entry is positive.
PcaResult pca(const Eigen::Ref<const Eigen::MatrixXd>& data);

struct ClimberVariables {
  std::vector<std::string> groups;
  std::vector<std::optional<double>> lr_coef;
  std::vector<double> n_climbs;
  std::vector<double> p_success;
  std::vector<std::optional<double>> height_cm;
  bool has_lr_coef = false;
  bool has_height = false;
};

// Per-group attempt counts and success rates over a grouped dataset, plus the
// optional logreg coefficients and heights (exact name match on the group label).
ClimberVariables climber_variables(const Dataset& grouped, const std::vector<std::string>& groups,
                                   const LogRegModel* lr = nullptr,
                                   const std::vector<ClimberMeta>* heights = nullptr);

struct CorrelationMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<std::optional<double>>> values;  // absent: fewer than 3 complete pairs or no variance
  std::vector<std::vector<std::size_t>> pair_counts;
};

// Pearson correlations over {PC1..PCd, lr_coef?, n_climbs, p_success, height?}
// using pairwise-complete observations. Rows of the scores match vars.groups.
CorrelationMatrix correlation_matrix(const PcaResult& scores, const ClimberVariables& vars);

// Pearson correlation over pairwise-complete entries; nullopt when fewer than
// three pairs remain or either side has no variance.
std::optional<double> pearson(const std::vector<std::optional<double>>& x, const std::vector<std::optional<double>>& y,
                              std::size_t* used = nullptr);

// Dataset with its climber and problem groups rewritten to the model's labels.
// Unknown names fall back to the replacement / rare-problem groups; throws
// naming the first label the model cannot place.
Dataset align_to_model(const PmfModel& model, const Dataset& raw);

struct ClimberAnalysis {
  PcaResult pca;
  ClimberVariables vars;
  CorrelationMatrix correlations;
};

// PCA over every model row except the replacement climber.
ClimberAnalysis analyze_climbers(const PmfModel& model, const Dataset& raw, const LogRegModel* lr = nullptr,
                                 const std::vector<ClimberMeta>* heights = nullptr);

struct ProblemRow {
  std::string group;
  std::vector<double> coords;
  std::string hold_type;  // "top", "zone" or "mixed"
  std::optional<double> success_rate;
  std::size_t attempts = 0;
};

struct ProblemProjection {
  PcaResult pca;
  std::vector<ProblemRow> rows;  // one per model column
};

ProblemProjection problem_projection(const PmfModel& model, const Dataset& raw);

void write_climber_pca(std::ostream& out, const ClimberAnalysis& a);
void write_problem_pca(std::ostream& out, const ProblemProjection& p);
void write_correlations(std::ostream& out, const CorrelationMatrix& c);

// Scatter of the first two coordinates; color values in [0, 1] map blue to red.
void write_scatter_svg(std::ostream& out, const std::string& title, const std::vector<double>& x,
                       const std::vector<double>& y, const std::vector<double>& color,
                       const std::string& x_label = "PC1", const std::string& y_label = "PC2");

}  // namespace boulderfit
