#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "boulderfit/cv.hpp"
#include "boulderfit/error.hpp"
#include "boulderfit/metrics.hpp"
#include "boulderfit/sigmoid.hpp"
#include "boulderfit/synth.hpp"

using namespace boulderfit;

TEST(Synth, FullDensityObservesEveryCell) {
  SynthSpec spec;
  spec.m_climbers = 3;
  spec.n_problems = 4;
  spec.density = 1.0;
  const SynthData s = generate(spec);
  EXPECT_EQ(s.dataset.size(), 12u);
  EXPECT_EQ(s.dataset.num_climbers(), 3u);
  EXPECT_EQ(s.dataset.num_problems(), 4u);
}

TEST(Synth, ZeroScaleIsCoinFlip) {
  SynthSpec spec;
  spec.m_climbers = 100;
  spec.n_problems = 100;
  spec.density = 1.0;
  spec.u_scale = spec.v_scale = 0.0;
  const SynthData s = generate(spec);
  ASSERT_EQ(s.dataset.size(), 10000u);
  for (double p : s.truth.cell_probabilities) ASSERT_EQ(p, 0.5);
  EXPECT_NEAR(static_cast<double>(s.dataset.successes()) / 10000.0, 0.5, 0.02);
}

TEST(Synth, BayesLossMatchesRecomputation) {
  SynthSpec spec;
  spec.seed = 4;
  const SynthData s = generate(spec);
  ASSERT_EQ(s.truth.cell_probabilities.size(), s.dataset.size());
  double total = 0;
  for (std::size_t i = 0; i < s.dataset.size(); ++i)
    total += binary_cross_entropy(s.dataset.attempt(i).outcome, s.truth.cell_probabilities[i]);
  EXPECT_NEAR(total / s.dataset.size(), s.truth.bayes_log_loss, 1e-12);
  EXPECT_GE(s.truth.bayes_log_loss, 0.0);
}

TEST(Synth, CellProbabilitiesComeFromTrueEmbeddings) {
  SynthSpec spec;
  spec.m_climbers = 10;
  spec.n_problems = 12;
  spec.seed = 2;
  const SynthData s = generate(spec);
  for (std::size_t a = 0; a < s.dataset.size(); ++a) {
    const auto& rec = s.dataset.attempt(a);
    const auto i = std::find(s.truth.climber_names.begin(), s.truth.climber_names.end(), rec.climber) -
                   s.truth.climber_names.begin();
    const auto j = std::find(s.truth.problem_labels.begin(), s.truth.problem_labels.end(), s.dataset.raw_problem_label(a)) -
                   s.truth.problem_labels.begin();
    ASSERT_LT(static_cast<std::size_t>(i), s.truth.climber_names.size());
    ASSERT_LT(static_cast<std::size_t>(j), s.truth.problem_labels.size());
    EXPECT_DOUBLE_EQ(s.truth.cell_probabilities[a], sigmoid(s.truth.U.row(i).dot(s.truth.V.col(j))));
    EXPECT_GT(s.truth.cell_probabilities[a], 0.0);
    EXPECT_LT(s.truth.cell_probabilities[a], 1.0);
  }
}

TEST(Synth, SameSeedIsBitwiseIdentical) {
  SynthSpec spec;
  spec.seed = 8;
  const SynthData a = generate(spec), b = generate(spec);
  ASSERT_EQ(a.dataset.size(), b.dataset.size());
  std::ostringstream oa, ob;
  write_attempts(oa, a.dataset.attempts());
  write_attempts(ob, b.dataset.attempts());
  EXPECT_EQ(oa.str(), ob.str());
  EXPECT_EQ(a.truth.U, b.truth.U);
  EXPECT_EQ(a.truth.cell_probabilities, b.truth.cell_probabilities);
  spec.seed = 9;
  std::ostringstream oc;
  write_attempts(oc, generate(spec).dataset.attempts());
  EXPECT_NE(oa.str(), oc.str());
}

TEST(Synth, AddingClimbersKeepsEarlierDraws) {
  SynthSpec spec;
  spec.seed = 3;
  spec.m_climbers = 20;
  const SynthData small = generate(spec);
  spec.m_climbers = 30;
  const SynthData big = generate(spec);
  EXPECT_EQ(small.truth.U, big.truth.U.topRows(20));
  EXPECT_EQ(small.truth.V, big.truth.V);
}

TEST(Synth, SparseDrawsDropEmptyEntities) {
  SynthSpec spec;
  spec.m_climbers = 40;
  spec.n_problems = 40;
  spec.density = 0.02;
  spec.seed = 1;
  const SynthData s = generate(spec);
  EXPECT_FALSE(s.truth.dropped_climbers.empty());
  EXPECT_FALSE(s.truth.dropped_problems.empty());
  EXPECT_EQ(s.dataset.num_climbers() + s.truth.dropped_climbers.size(), 40u);
  EXPECT_EQ(s.dataset.num_problems() + s.truth.dropped_problems.size(), 40u);
  std::set<std::string> present(s.dataset.climber_index().labels().begin(), s.dataset.climber_index().labels().end());
  for (const auto& c : s.truth.dropped_climbers) EXPECT_EQ(present.count(c), 0u);
}

TEST(Synth, TopAndZoneColumnsShareAPhysicalProblem) {
  SynthSpec spec;
  spec.m_climbers = 5;
  spec.n_problems = 6;
  spec.density = 1.0;
  const SynthData s = generate(spec);
  std::set<std::string> tops, zones;
  for (const auto& a : s.dataset.attempts()) (a.hold_type == HoldType::Top ? tops : zones).insert(a.competition_id + a.problem_key);
  EXPECT_EQ(tops, zones);
  EXPECT_EQ(tops.size(), 3u);
}

TEST(Synth, InvalidSpecs) {
  SynthSpec spec;
  spec.density = 0.0;
  EXPECT_THROW(generate(spec), Error);
  spec.density = 1.5;
  EXPECT_THROW(generate(spec), Error);
  spec = {};
  spec.d_true = 0;
  EXPECT_THROW(generate(spec), Error);
  spec = {};
  spec.u_scale = -1;
  EXPECT_THROW(generate(spec), Error);
}

// Strong orthogonal factors, every cell observed: a matched PMF should land
// near the Bayes loss while a one-factor model cannot.
TEST(Synth, MatchedPmfApproachesBayesLoss) {
  SynthSpec spec;
  spec.m_climbers = 200;
  spec.n_problems = 200;
  spec.d_true = 2;
  spec.density = 1.0;
  spec.u_scale = spec.v_scale = 1.5;
  spec.seed = 1;
  const SynthData s = generate(spec);
  const FoldSplit split = split_folds(s.dataset, 5, 1);
  CvConfig cfg;
  cfg.pmf.epochs = 3000;
  auto test_loss = [&](int d) {
    const auto result = run_cell(s.dataset, {ModelFamily::Pmf, 0, d}, split, cfg)[1];
    return *result.metric(Metric::LogLoss).mean;
  };
  const double d2 = test_loss(2), d1 = test_loss(1);
  EXPECT_LE(d2 - s.truth.bayes_log_loss, 0.05) << "d2=" << d2 << " bayes=" << s.truth.bayes_log_loss;
  EXPECT_GE(d1 - d2, 0.02) << "d1=" << d1 << " d2=" << d2;
}
