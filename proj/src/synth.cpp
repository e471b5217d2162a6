#include "boulderfit/synth.hpp"

#include <cmath>
#include <ostream>

#include "boulderfit/error.hpp"
#include "boulderfit/metrics.hpp"
#include "boulderfit/random.hpp"
#include "boulderfit/sigmoid.hpp"
#include "boulderfit/text.hpp"

namespace boulderfit {

void SynthSpec::validate() const {
  if (m_climbers < 1) throw Error("synth: need at least one climber");
  if (n_problems < 1) throw Error("synth: need at least one problem");
  if (d_true < 1) throw Error("synth: d_true must be at least 1");
  if (!(density > 0.0 && density <= 1.0)) throw Error("synth: density must lie in (0, 1]");
  if (!(u_scale >= 0.0) || !(v_scale >= 0.0)) throw Error("synth: scales must be nonnegative");
  if (!std::isfinite(ability_loading)) throw Error("synth: ability loading must be finite");
  if (problems_per_competition < 1) throw Error("synth: problems per competition must be at least 1");
  double total = 0;
  for (double p : round_probabilities) {
    if (!(p >= 0.0)) throw Error("synth: round probabilities must be nonnegative");
    total += p;
  }
  if (!(total > 0.0)) throw Error("synth: round probabilities must not all be zero");
}

namespace {

constexpr std::uint64_t kStreamU = 1;
constexpr std::uint64_t kStreamV = 2;
constexpr std::uint64_t kStreamObserved = 3;
constexpr std::uint64_t kStreamOutcome = 4;
constexpr std::uint64_t kStreamRound = 5;

Round draw_round(const SynthSpec& spec, const CounterRng& rng, std::size_t physical) {
  double total = 0;
  for (double p : spec.round_probabilities) total += p;
  double u = rng.uniform(physical) * total;
  for (std::size_t r = 0; r < kNumRounds; ++r) {
    if (u < spec.round_probabilities[r]) return static_cast<Round>(r);
    u -= spec.round_probabilities[r];
  }
  return Round::Final;
}

}  // namespace

SynthData generate(const SynthSpec& spec) {
  spec.validate();
  const auto m = static_cast<Eigen::Index>(spec.m_climbers);
  const auto n = static_cast<Eigen::Index>(spec.n_problems);
  const Eigen::Index d = spec.d_true;

  SynthTruth truth;
  truth.U.resize(m, d);
  truth.V.resize(d, n);
  const CounterRng rng_u(spec.seed, kStreamU), rng_v(spec.seed, kStreamV);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index f = 0; f < d; ++f) truth.U(i, f) = spec.u_scale * rng_u.normal(i, f);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index f = 0; f < d; ++f)
      truth.V(f, j) = (f == 0 ? spec.ability_loading : 0.0) + spec.v_scale * rng_v.normal(j, f);

  truth.climber_names.reserve(spec.m_climbers);
  for (Eigen::Index i = 0; i < m; ++i) truth.climber_names.push_back("C" + std::to_string(i));

  // Column j is the top (even j) or zone (odd j) of physical problem j / 2.
  const CounterRng rng_round(spec.seed, kStreamRound);
  std::vector<AttemptRecord> templates;
  templates.reserve(spec.n_problems);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto physical = static_cast<std::size_t>(j / 2);
    const auto comp = physical / spec.problems_per_competition;
    AttemptRecord a;
    a.competition_id = "SYN" + std::to_string(comp);
    a.year = 2000 + static_cast<int>(comp % 1000);
    a.round = draw_round(spec, rng_round, physical);
    a.problem_key = "P" + std::to_string(physical);
    a.hold_type = (j % 2 == 0) ? HoldType::Top : HoldType::Zone;
    truth.problem_labels.push_back(problem_label(a));
    templates.push_back(std::move(a));
  }

  const CounterRng rng_obs(spec.seed, kStreamObserved), rng_y(spec.seed, kStreamOutcome);
  std::vector<AttemptRecord> attempts;
  std::vector<char> climber_seen(spec.m_climbers, 0);
  double nll = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    bool problem_seen = false;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (spec.density < 1.0 && rng_obs.uniform(i, j) >= spec.density) continue;
      const double p = sigmoid(truth.U.row(i).dot(truth.V.col(j)));
      AttemptRecord a = templates[j];
      a.climber = truth.climber_names[i];
      a.outcome = rng_y.uniform(i, j) < p ? 1 : 0;
      nll += binary_cross_entropy(a.outcome, p);
      truth.cell_probabilities.push_back(p);
      attempts.push_back(std::move(a));
      climber_seen[i] = 1;
      problem_seen = true;
    }
    if (!problem_seen) truth.dropped_problems.push_back(truth.problem_labels[j]);
  }
  for (std::size_t i = 0; i < spec.m_climbers; ++i)
    if (!climber_seen[i]) truth.dropped_climbers.push_back(truth.climber_names[i]);

  truth.bayes_log_loss = attempts.empty() ? 0.0 : nll / static_cast<double>(attempts.size());
  return {Dataset::from_attempts(std::move(attempts)), std::move(truth)};
}

void write_truth(std::ostream& out, const SynthTruth& truth) {
  out << "synth-truth " << truth.U.rows() << ' ' << truth.V.cols() << ' ' << truth.U.cols() << '\n';
  out << "bayes_log_loss=" << text::format_double(truth.bayes_log_loss) << '\n';
  out << "dropped_climbers=" << text::join(truth.dropped_climbers, ";") << '\n';
  out << "dropped_problems=" << text::join(truth.dropped_problems, ";") << '\n';
  auto write_vec = [&](char tag, const std::string& label, auto&& vec) {
    out << tag << ' ' << label << '\t';
    for (Eigen::Index k = 0; k < vec.size(); ++k) {
      if (k) out << ' ';
      out << text::format_double(vec(k));
    }
    out << '\n';
  };
  for (Eigen::Index i = 0; i < truth.U.rows(); ++i) write_vec('U', truth.climber_names[i], truth.U.row(i));
  for (Eigen::Index j = 0; j < truth.V.cols(); ++j) write_vec('V', truth.problem_labels[j], truth.V.col(j));
}

void write_truth_cells(std::ostream& out, const Dataset& dataset, const SynthTruth& truth) {
  out << "climber,problem,p_true,outcome\n";
  for (std::size_t a = 0; a < dataset.size(); ++a) {
    out << dataset.attempt(a).climber << ',' << dataset.raw_problem_label(a) << ','
        << text::format_double(truth.cell_probabilities[a]) << ',' << dataset.attempt(a).outcome << '\n';
  }
}

}  // namespace boulderfit
