#pragma once

// Logistic probabilistic matrix factorization. A climber's success
// probability on a problem is sigmoid(U_i . V_j); U (m x d) and V (d x n) are
// fit with Adam on the mean cross-entropy over observed cells only.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "boulderfit/adam.hpp"
#include "boulderfit/data.hpp"

namespace boulderfit {

struct PmfConfig {
  int d = 2;
  int epochs = 1000;
  double learning_rate = 0.001;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  double init_scale = 0.1;
  std::uint64_t seed = 0;
  std::size_t batch_size = 0;  // 0 means full batch

  void validate() const;
  AdamConfig adam() const { return {learning_rate, adam_beta1, adam_beta2, adam_eps}; }
};

class PmfModel {
 public:
  PmfModel() = default;
  PmfModel(Eigen::MatrixXd U, Eigen::MatrixXd V, std::vector<std::string> climber_labels,
           std::vector<std::string> problem_labels, std::uint64_t seed = 0);

  const Eigen::MatrixXd& U() const noexcept { return U_; }
  const Eigen::MatrixXd& V() const noexcept { return V_; }
  int d() const noexcept { return static_cast<int>(U_.cols()); }
  std::size_t num_climbers() const noexcept { return static_cast<std::size_t>(U_.rows()); }
  std::size_t num_problems() const noexcept { return static_cast<std::size_t>(V_.cols()); }
  std::uint64_t seed() const noexcept { return seed_; }
  const Vocabulary& climber_index() const noexcept { return climbers_; }
  const Vocabulary& problem_index() const noexcept { return problems_; }

  // Label lookups with the replacement / rare-problem fallbacks. Throw when
  // neither the label nor its fallback is present.
  int climber_row(std::string_view label) const;
  int problem_col(std::string_view label) const;

  double predict(std::size_t row, std::size_t col) const;
  double predict(std::string_view climber, std::string_view problem) const;

  // Header "pmf m n d seed", then one line per U row and per V column:
  // label, a tab, then the d values separated by spaces.
  void write(std::ostream& out) const;
  static PmfModel read(std::istream& in, const std::string& source = "<stream>");

 private:
  Eigen::MatrixXd U_;
  Eigen::MatrixXd V_;
  Vocabulary climbers_;
  Vocabulary problems_;
  std::uint64_t seed_ = 0;
};

// Observed cells of the outcome matrix in index form.
struct PmfObservations {
  std::vector<int> rows;
  std::vector<int> cols;
  std::vector<int> outcomes;

  static PmfObservations from_dataset(const Dataset& d);
  std::size_t size() const noexcept { return outcomes.size(); }
};

// Mean cross-entropy with probabilities clamped to [1e-12, 1 - 1e-12].
// Gradients (unclamped) are written when the output pointers are non-null.
double pmf_objective(const Eigen::Ref<const Eigen::MatrixXd>& U, const Eigen::Ref<const Eigen::MatrixXd>& V,
                     const PmfObservations& obs, Eigen::MatrixXd* grad_U = nullptr,
                     Eigen::MatrixXd* grad_V = nullptr);

// Loss of a model over a dataset indexed compatibly with it.
double pmf_loss(const PmfModel& model, const Dataset& d);

PmfModel train_pmf(const Dataset& d, const PmfConfig& cfg = {}, std::vector<double>* loss_history = nullptr);

}  // namespace boulderfit
