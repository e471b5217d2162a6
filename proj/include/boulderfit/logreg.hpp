#pragma once

// Baseline skill model: P(success) = sigmoid(beta0 + beta_round + beta_type + beta_climber),
// unregularized, fit by full-batch gradient descent. Qualifier and Top are
// the reference levels and stay at zero.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "boulderfit/data.hpp"

namespace boulderfit {

struct LogRegConfig {
  double learning_rate = 0.1;
  int epochs = 2000;
  std::uint64_t seed = 0;
  double tolerance = 1e-10;  // stop once the loss improves by less than this

  void validate() const;
};

class LogRegModel {
 public:
  LogRegModel() = default;
  LogRegModel(double beta0, std::array<double, kNumRounds> beta_round, std::array<double, kNumHoldTypes> beta_type,
              std::vector<std::string> climber_labels, std::vector<double> climber_coefs);

  double beta0() const noexcept { return beta0_; }
  double beta_round(Round r) const noexcept { return beta_round_[static_cast<std::size_t>(r)]; }
  double beta_type(HoldType t) const noexcept { return beta_type_[static_cast<std::size_t>(t)]; }

  // Coefficient used for a climber label. Unknown labels use the replacement
  // climber's coefficient, or 0 when the model has no replacement group.
  double climber_effect(std::string_view climber) const noexcept;
  std::optional<double> climber_coefficient(std::string_view label) const;

  // Table of per-climber-group coefficients in training index order.
  const std::vector<std::string>& climber_labels() const noexcept { return labels_; }
  const std::vector<double>& climber_coefs() const noexcept { return coefs_; }
  std::size_t num_climbers() const noexcept { return labels_.size(); }

  double logit(Round r, HoldType t, std::string_view climber) const noexcept;
  double predict(Round r, HoldType t, std::string_view climber) const noexcept;
  // String-coded variant; throws on a round or hold type outside the closed vocabularies.
  double predict(std::string_view round_code, std::string_view hold_type, std::string_view climber) const;

  // Lines of key=value: beta0, round.S, round.F, type.zone, climber.<label>.
  void write(std::ostream& out) const;
  static LogRegModel read(std::istream& in, const std::string& source = "<stream>");

  bool operator==(const LogRegModel& other) const;

 private:
  double beta0_ = 0;
  std::array<double, kNumRounds> beta_round_{};
  std::array<double, kNumHoldTypes> beta_type_{};
  std::vector<std::string> labels_;
  std::vector<double> coefs_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Flat encoding of a dataset for the baseline. Parameters are laid out as
// [beta0, round.S, round.F, type.zone, climber_0 .. climber_{m-1}].
struct LogRegDesign {
  std::vector<Round> rounds;
  std::vector<HoldType> types;
  std::vector<int> climbers;
  std::vector<int> outcomes;
  std::size_t num_climbers = 0;

  static LogRegDesign from_dataset(const Dataset& d);
  std::size_t size() const noexcept { return outcomes.size(); }
  std::size_t num_params() const noexcept { return 4 + num_climbers; }
};

inline constexpr std::size_t kLogRegClimberOffset = 4;

// Mean negative log likelihood; writes its gradient when grad is non-empty.
double logreg_loss(const LogRegDesign& design, std::span<const double> params, std::span<double> grad = {});

LogRegModel make_logreg_model(const Dataset& d, std::span<const double> params);

// loss_history, when given, receives the training loss before each update
// and after the final one.
LogRegModel train_logreg(const Dataset& d, const LogRegConfig& cfg = {}, std::vector<double>* loss_history = nullptr);

std::vector<std::pair<std::string, double>> climber_coefficients(const LogRegModel& model);

}  // namespace boulderfit
