#include "boulderfit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "boulderfit/error.hpp"
#include "boulderfit/text.hpp"

namespace boulderfit {

double clamp_probability(double p) noexcept {
  return std::clamp(p, kProbabilityEpsilon, 1.0 - kProbabilityEpsilon);
}

double binary_cross_entropy(int y, double p) noexcept {
  const double q = clamp_probability(p);
  return y == 1 ? -std::log(q) : -std::log1p(-q);
}

PredictionSet::PredictionSet(double threshold) : threshold_(threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw Error("threshold must lie in (0, 1)");
}

PredictionSet::PredictionSet(std::vector<int> labels, std::vector<double> probabilities, double threshold)
    : PredictionSet(threshold) {
  if (labels.size() != probabilities.size()) throw Error("labels and probabilities differ in length");
  reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) add(labels[i], probabilities[i]);
}

void PredictionSet::add(int label, double probability) {
  if (label != 0 && label != 1) throw Error("label must be 0 or 1, got " + std::to_string(label));
  if (!(probability >= 0.0 && probability <= 1.0)) {
    throw Error("probability must lie in [0, 1], got " + text::format_double(probability));
  }
  labels_.push_back(label);
  probs_.push_back(probability);
}

void PredictionSet::reserve(std::size_t n) {
  labels_.reserve(n);
  probs_.reserve(n);
}

namespace {

void require_nonempty(const PredictionSet& ps, const char* what) {
  if (ps.empty()) throw Error(std::string(what) + " of an empty prediction set");
}

}  // namespace

ConfusionCounts confusion_counts(const PredictionSet& ps) {
  require_nonempty(ps, "confusion counts");
  ConfusionCounts c;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const bool predicted = ps.probabilities()[i] >= ps.threshold();
    const bool actual = ps.labels()[i] == 1;
    if (predicted && actual) ++c.tp;
    else if (predicted) ++c.fp;
    else if (actual) ++c.fn;
    else ++c.tn;
  }
  return c;
}

namespace {

double accuracy_of(const ConfusionCounts& c) {
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
}

double f1_of(const ConfusionCounts& c) {
  const auto denom = 2 * c.tp + c.fp + c.fn;
  return denom == 0 ? 0.0 : static_cast<double>(2 * c.tp) / static_cast<double>(denom);
}

}  // namespace

double accuracy(const PredictionSet& ps) { return accuracy_of(confusion_counts(ps)); }

double f1(const PredictionSet& ps) { return f1_of(confusion_counts(ps)); }

double brier(const PredictionSet& ps) {
  require_nonempty(ps, "brier score");
  double sum = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const double diff = ps.probabilities()[i] - ps.labels()[i];
    sum += diff * diff;
  }
  return sum / static_cast<double>(ps.size());
}

double log_loss(const PredictionSet& ps) {
  require_nonempty(ps, "log loss");
  double sum = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) sum += binary_cross_entropy(ps.labels()[i], ps.probabilities()[i]);
  return sum / static_cast<double>(ps.size());
}

double roc_auc(const PredictionSet& ps) {
  require_nonempty(ps, "roc auc");
  const auto& probs = ps.probabilities();
  const auto& labels = ps.labels();
  const std::size_t n = ps.size();
  const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  const std::size_t negatives = n - positives;
  if (positives == 0) throw Error("roc auc undefined: no positive labels (class 1 missing)");
  if (negatives == 0) throw Error("roc auc undefined: no negative labels (class 0 missing)");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return probs[a] < probs[b]; });

  // Sum of midranks of the positives, ranks starting at 1.
  double positive_rank_sum = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    std::size_t tied_positives = 0;
    while (j < n && probs[order[j]] == probs[order[i]]) {
      tied_positives += static_cast<std::size_t>(labels[order[j]]);
      ++j;
    }
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    positive_rank_sum += midrank * static_cast<double>(tied_positives);
    i = j;
  }
  const double np = static_cast<double>(positives);
  const double u = positive_rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * static_cast<double>(negatives));
}

std::string_view metric_name(Metric m) noexcept {
  switch (m) {
    case Metric::Accuracy: return "accuracy";
    case Metric::F1: return "f1";
    case Metric::Brier: return "brier";
    case Metric::LogLoss: return "log_loss";
    case Metric::RocAuc: return "roc_auc";
  }
  return "?";
}

std::optional<double> MetricsReport::get(Metric m) const noexcept {
  switch (m) {
    case Metric::Accuracy: return accuracy;
    case Metric::F1: return f1;
    case Metric::Brier: return brier;
    case Metric::LogLoss: return log_loss;
    case Metric::RocAuc: return roc_auc;
  }
  return std::nullopt;
}

std::string MetricsReport::to_text() const {
  std::string out;
  for (auto m : kAllMetrics) {
    auto v = get(m);
    out += metric_name(m);
    out += '=';
    out += v ? text::format_double(*v) : "NA";
    out += '\n';
  }
  out += "tp=" + std::to_string(counts.tp) + '\n';
  out += "tn=" + std::to_string(counts.tn) + '\n';
  out += "fp=" + std::to_string(counts.fp) + '\n';
  out += "fn=" + std::to_string(counts.fn) + '\n';
  return out;
}

MetricsReport evaluate(const PredictionSet& ps) {
  MetricsReport r;
  r.counts = confusion_counts(ps);
  r.accuracy = accuracy_of(r.counts);
  r.f1 = f1_of(r.counts);
  r.brier = brier(ps);
  r.log_loss = log_loss(ps);
  const auto positives = std::count(ps.labels().begin(), ps.labels().end(), 1);
  if (positives > 0 && static_cast<std::size_t>(positives) < ps.size()) r.roc_auc = roc_auc(ps);
  return r;
}

}  // namespace boulderfit
