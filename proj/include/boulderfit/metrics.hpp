#pragma once

// Classification and probabilistic scoring metrics over (label, probability)
// pairs: accuracy, F1, Brier score, log loss and ROC AUC.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace boulderfit {

// Probabilities are clamped to [eps, 1 - eps] before taking logs.
inline constexpr double kProbabilityEpsilon = 1e-12;

double clamp_probability(double p) noexcept;

// Negative log likelihood of one binary outcome, with clamping.
double binary_cross_entropy(int y, double p) noexcept;

class PredictionSet {
 public:
  PredictionSet() = default;
  explicit PredictionSet(double threshold);
  PredictionSet(std::vector<int> labels, std::vector<double> probabilities, double threshold = 0.5);

  void add(int label, double probability);
  void reserve(std::size_t n);

  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  const std::vector<int>& labels() const noexcept { return labels_; }
  const std::vector<double>& probabilities() const noexcept { return probs_; }
  double threshold() const noexcept { return threshold_; }

 private:
  std::vector<int> labels_;
  std::vector<double> probs_;
  double threshold_ = 0.5;
};

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + tn + fp + fn; }
  bool operator==(const ConfusionCounts&) const = default;
};

// A prediction is positive iff p >= threshold.
ConfusionCounts confusion_counts(const PredictionSet& ps);
double accuracy(const PredictionSet& ps);
// Defined as 0 when 2TP + FP + FN == 0.
double f1(const PredictionSet& ps);
double brier(const PredictionSet& ps);
double log_loss(const PredictionSet& ps);
// Mann-Whitney statistic with ties counted as one half. Throws when either
// class is missing.
double roc_auc(const PredictionSet& ps);

enum class Metric { Accuracy, F1, Brier, LogLoss, RocAuc };
inline constexpr std::array<Metric, 5> kAllMetrics = {Metric::Accuracy, Metric::F1, Metric::Brier,
                                                      Metric::LogLoss, Metric::RocAuc};
std::string_view metric_name(Metric m) noexcept;

struct MetricsReport {
  double accuracy = 0;
  double f1 = 0;
  double brier = 0;
  double log_loss = 0;
  std::optional<double> roc_auc;  // absent for single-class label sets
  ConfusionCounts counts;

  std::optional<double> get(Metric m) const noexcept;
  // key=value lines, one per metric and count.
  std::string to_text() const;
};

MetricsReport evaluate(const PredictionSet& ps);

}  // namespace boulderfit
