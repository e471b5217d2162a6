#pragma once

// Synthetic attempt data drawn from a known logistic low-rank model, used to
// check training and analysis against ground truth.

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "boulderfit/data.hpp"

namespace boulderfit {

struct SynthSpec {
  std::size_t m_climbers = 50;
  std::size_t n_problems = 200;
  int d_true = 2;
  double density = 0.3;  // fraction of (climber, problem) cells observed
  double u_scale = 1.0;
  double v_scale = 1.0;
  // Mean of the first latent row of V. A positive value makes factor 0 an
  // overall-ability axis: a higher U(i, 0) helps on most problems.
  double ability_loading = 0.0;
  std::uint64_t seed = 0;
  // Probability of Qualifier / SemiFinal / Final per physical problem.
  std::array<double, kNumRounds> round_probabilities{0.6, 0.3, 0.1};
  std::size_t problems_per_competition = 10;  // physical problems (top + zone pairs)

  void validate() const;
};

struct SynthTruth {
  Eigen::MatrixXd U;  // m x d_true, every generated climber
  Eigen::MatrixXd V;  // d_true x n, every generated problem column
  std::vector<std::string> climber_names;
  std::vector<std::string> problem_labels;
  std::vector<double> cell_probabilities;  // aligned with the dataset's attempts
  double bayes_log_loss = 0;               // mean cross-entropy of the true probabilities
  std::vector<std::string> dropped_climbers;
  std::vector<std::string> dropped_problems;
};

struct SynthData {
  Dataset dataset;
  SynthTruth truth;
};

SynthData generate(const SynthSpec& spec);

// Truth sidecar: header, Bayes loss, dropped entities, then U rows and V
// columns as "U|V <label><TAB>values".
void write_truth(std::ostream& out, const SynthTruth& truth);
// climber,problem,p_true,outcome per attempt.
void write_truth_cells(std::ostream& out, const Dataset& dataset, const SynthTruth& truth);

}  // namespace boulderfit
