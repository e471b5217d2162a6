#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "boulderfit/error.hpp"
#include "boulderfit/metrics.hpp"

using namespace boulderfit;

namespace {

double brute_force_auc(const PredictionSet& ps) {
  double wins = 0, pairs = 0;
  for (std::size_t a = 0; a < ps.size(); ++a) {
    if (ps.labels()[a] != 1) continue;
    for (std::size_t b = 0; b < ps.size(); ++b) {
      if (ps.labels()[b] != 0) continue;
      const double pa = ps.probabilities()[a], pb = ps.probabilities()[b];
      wins += pa > pb ? 1.0 : (pa == pb ? 0.5 : 0.0);
      pairs += 1;
    }
  }
  return wins / pairs;
}

PredictionSet random_set(std::mt19937_64& gen, bool coarse) {
  std::uniform_int_distribution<int> size(2, 60);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = size(gen);
  PredictionSet ps;
  for (int i = 0; i < n; ++i) {
    const double p = coarse ? std::round(u(gen) * 10) / 10 : u(gen);
    ps.add(i < 1 ? 1 : (i < 2 ? 0 : static_cast<int>(gen() & 1u)), p);
  }
  return ps;
}

}  // namespace

TEST(Confusion, Examples) {
  EXPECT_EQ(confusion_counts(PredictionSet({1, 0}, {0.9, 0.1})), (ConfusionCounts{1, 1, 0, 0}));
  EXPECT_EQ(confusion_counts(PredictionSet({1}, {0.5})).tp, 1u);
  EXPECT_EQ(confusion_counts(PredictionSet({0, 1}, {0.9, 0.1})), (ConfusionCounts{0, 0, 1, 1}));
  EXPECT_THROW(confusion_counts(PredictionSet()), Error);
}

TEST(AccuracyF1, Examples) {
  EXPECT_EQ(accuracy(PredictionSet({1, 0, 1}, {0.8, 0.2, 0.6})), 1.0);
  // TP=2, FP=1, FN=1, TN=1
  const PredictionSet ps({1, 1, 0, 1, 0}, {0.9, 0.7, 0.6, 0.2, 0.1});
  EXPECT_NEAR(f1(ps), 4.0 / 6.0, 1e-15);
  EXPECT_EQ(f1(PredictionSet({1, 1}, {0.1, 0.2})), 0.0);
  EXPECT_EQ(f1(PredictionSet({0, 0}, {0.1, 0.2})), 0.0);
  EXPECT_THROW(accuracy(PredictionSet()), Error);
  EXPECT_THROW(f1(PredictionSet()), Error);
}

TEST(Brier, Examples) {
  EXPECT_EQ(brier(PredictionSet({1, 0}, {1.0, 0.0})), 0.0);
  EXPECT_EQ(brier(PredictionSet({1, 0, 0}, {0.5, 0.5, 0.5})), 0.25);
  EXPECT_NEAR(brier(PredictionSet({1}, {0.2})), 0.64, 1e-15);
  EXPECT_THROW(brier(PredictionSet()), Error);
}

TEST(LogLoss, Examples) {
  EXPECT_LE(log_loss(PredictionSet({1}, {1.0})), 2e-12);
  EXPECT_NEAR(log_loss(PredictionSet({1}, {0.5})), std::log(2.0), 1e-15);
  const double clamped = log_loss(PredictionSet({1}, {0.0}));
  EXPECT_TRUE(std::isfinite(clamped));
  EXPECT_NEAR(clamped, -std::log(1e-12), 1e-9);
  EXPECT_NEAR(clamped, 27.631, 1e-3);
  EXPECT_THROW(log_loss(PredictionSet()), Error);
}

TEST(RocAuc, Examples) {
  EXPECT_EQ(roc_auc(PredictionSet({1, 1, 0, 0}, {0.9, 0.8, 0.2, 0.1})), 1.0);
  EXPECT_EQ(roc_auc(PredictionSet({1, 0, 1, 0}, {0.3, 0.3, 0.3, 0.3})), 0.5);
  EXPECT_EQ(roc_auc(PredictionSet({0, 0, 1, 1}, {0.1, 0.4, 0.35, 0.8})), 0.75);
}

TEST(RocAuc, SingleClassNamesMissingClass) {
  try {
    roc_auc(PredictionSet({1, 1}, {0.2, 0.3}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("negative"), std::string::npos);
  }
  try {
    roc_auc(PredictionSet({0, 0}, {0.2, 0.3}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("positive"), std::string::npos);
  }
}

TEST(RocAuc, MatchesBruteForce) {
  std::mt19937_64 gen(17);
  for (int k = 0; k < 200; ++k) {
    const PredictionSet ps = random_set(gen, k % 2 == 0);
    EXPECT_NEAR(roc_auc(ps), brute_force_auc(ps), 1e-12);
  }
}

TEST(RocAuc, InvariantUnderMonotoneTransform) {
  std::mt19937_64 gen(5);
  for (int k = 0; k < 50; ++k) {
    const PredictionSet ps = random_set(gen, k % 2 == 0);
    std::vector<double> cubed;
    for (double p : ps.probabilities()) cubed.push_back(p * p * p);
    EXPECT_NEAR(roc_auc(PredictionSet(ps.labels(), cubed)), roc_auc(ps), 1e-12);
  }
}

TEST(ScoringRules, MinimizedAtEmpiricalRate) {
  const std::vector<int> labels{1, 1, 1, 0, 0, 1, 0, 1, 1, 1};  // rate 0.7
  double best_ll = 1e9, best_ll_c = 0, best_b = 1e9, best_b_c = 0;
  for (int i = 1; i < 1000; ++i) {
    const double c = i / 1000.0;
    const PredictionSet ps(labels, std::vector<double>(labels.size(), c));
    if (const double v = log_loss(ps); v < best_ll) best_ll = v, best_ll_c = c;
    if (const double v = brier(ps); v < best_b) best_b = v, best_b_c = c;
  }
  EXPECT_NEAR(best_ll_c, 0.7, 1e-9);
  EXPECT_NEAR(best_b_c, 0.7, 1e-9);
}

TEST(ScoringRules, RangesAndSingletons) {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(0, 1);
  for (int k = 0; k < 200; ++k) {
    const int y = static_cast<int>(gen() & 1u);
    const double p = u(gen);
    const PredictionSet ps({y}, {p});
    const double b = brier(ps), ll = log_loss(ps);
    EXPECT_GE(b, 0.0);
    EXPECT_LE(b, 1.0);
    EXPECT_GE(ll, 0.0);
    EXPECT_NEAR(b, (y - p) * (y - p), 1e-15);
    EXPECT_NEAR(ll, y ? -std::log(p) : -std::log(1 - p), 1e-12);
    EXPECT_EQ(accuracy(ps), (p >= 0.5) == (y == 1) ? 1.0 : 0.0);
  }
}

TEST(Evaluate, PerfectPredictor) {
  const MetricsReport r = evaluate(PredictionSet({1, 0, 1, 0}, {1.0, 0.0, 1.0, 0.0}));
  EXPECT_EQ(r.accuracy, 1.0);
  EXPECT_EQ(r.f1, 1.0);
  EXPECT_EQ(r.brier, 0.0);
  EXPECT_LE(r.log_loss, 2e-12);
  EXPECT_EQ(r.roc_auc, 1.0);
}

TEST(Evaluate, ConstantHalfOnBalancedLabels) {
  const MetricsReport r = evaluate(PredictionSet({1, 0, 1, 0}, {0.5, 0.5, 0.5, 0.5}));
  EXPECT_EQ(r.accuracy, 0.5);
  EXPECT_EQ(r.brier, 0.25);
  EXPECT_NEAR(r.log_loss, std::log(2.0), 1e-15);
  EXPECT_EQ(r.roc_auc, 0.5);
}

TEST(Evaluate, MatchesStandaloneCalls) {
  std::mt19937_64 gen(23);
  for (int k = 0; k < 100; ++k) {
    const PredictionSet ps = random_set(gen, false);
    const MetricsReport r = evaluate(ps);
    EXPECT_EQ(r.accuracy, accuracy(ps));
    EXPECT_EQ(r.f1, f1(ps));
    EXPECT_EQ(r.brier, brier(ps));
    EXPECT_EQ(r.log_loss, log_loss(ps));
    EXPECT_EQ(r.roc_auc, roc_auc(ps));
    EXPECT_EQ(r.counts, confusion_counts(ps));
    EXPECT_EQ(r.counts.total(), ps.size());
    EXPECT_EQ(r.accuracy, static_cast<double>(r.counts.tp + r.counts.tn) / ps.size());
  }
}

TEST(Evaluate, SingleClassLeavesAucAbsent) {
  const MetricsReport r = evaluate(PredictionSet({1, 1}, {0.7, 0.4}));
  EXPECT_FALSE(r.roc_auc.has_value());
  EXPECT_NE(r.to_text().find("roc_auc=NA"), std::string::npos);
}

TEST(PredictionSet, Validation) {
  EXPECT_THROW(PredictionSet(0.0), Error);
  EXPECT_THROW(PredictionSet(1.0), Error);
  PredictionSet ps;
  EXPECT_THROW(ps.add(2, 0.5), Error);
  EXPECT_THROW(ps.add(1, 1.5), Error);
  EXPECT_THROW(ps.add(1, std::nan("")), Error);
  EXPECT_THROW(PredictionSet({1, 0}, {0.5}), Error);
}

TEST(PredictionSet, ThresholdMovesBoundary) {
  const PredictionSet ps({1, 0}, {0.6, 0.4}, 0.7);
  EXPECT_EQ(confusion_counts(ps), (ConfusionCounts{0, 1, 0, 1}));
}
