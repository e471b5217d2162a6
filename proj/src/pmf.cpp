#include "boulderfit/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>

#include "boulderfit/error.hpp"
#include "boulderfit/metrics.hpp"
#include "boulderfit/random.hpp"
#include "boulderfit/sigmoid.hpp"
#include "boulderfit/text.hpp"

namespace boulderfit {

void PmfConfig::validate() const {
  if (d < 1) throw Error("pmf latent dimension must be at least 1, got " + std::to_string(d));
  if (epochs < 1) throw Error("pmf epochs must be at least 1");
  if (!(init_scale > 0.0)) throw Error("pmf init scale must be positive");
  adam().validate();
}

PmfModel::PmfModel(Eigen::MatrixXd U, Eigen::MatrixXd V, std::vector<std::string> climber_labels,
                   std::vector<std::string> problem_labels, std::uint64_t seed)
    : U_(std::move(U)), V_(std::move(V)), seed_(seed) {
  if (U_.cols() != V_.rows()) throw Error("pmf: U and V disagree on the latent dimension");
  if (static_cast<std::size_t>(U_.rows()) != climber_labels.size()) throw Error("pmf: U rows do not match climber labels");
  if (static_cast<std::size_t>(V_.cols()) != problem_labels.size()) throw Error("pmf: V columns do not match problem labels");
  if (!U_.allFinite() || !V_.allFinite()) throw Error("pmf: embeddings must be finite");
  for (const auto& l : climber_labels) {
    if (climbers_.add(l) != static_cast<int>(climbers_.size()) - 1) throw Error("pmf: duplicate climber label '" + l + "'");
  }
  for (const auto& l : problem_labels) {
    if (problems_.add(l) != static_cast<int>(problems_.size()) - 1) throw Error("pmf: duplicate problem label '" + l + "'");
  }
}

int PmfModel::climber_row(std::string_view label) const {
  if (auto r = climbers_.find(label)) return *r;
  if (auto r = climbers_.find(kReplacement)) return *r;
  throw Error("climber '" + std::string(label) + "' is not in the model and it has no replacement row");
}

int PmfModel::problem_col(std::string_view label) const {
  if (auto c = problems_.find(label)) return *c;
  if (auto c = problems_.find(kRareProblem)) return *c;
  throw Error("problem '" + std::string(label) + "' is not in the model and it has no rare-problem column");
}

double PmfModel::predict(std::size_t row, std::size_t col) const {
  if (row >= num_climbers() || col >= num_problems()) throw Error("pmf: index out of range");
  return sigmoid(U_.row(static_cast<Eigen::Index>(row)).dot(V_.col(static_cast<Eigen::Index>(col))));
}

double PmfModel::predict(std::string_view climber, std::string_view problem) const {
  return predict(static_cast<std::size_t>(climber_row(climber)), static_cast<std::size_t>(problem_col(problem)));
}

void PmfModel::write(std::ostream& out) const {
  out << "pmf " << num_climbers() << ' ' << num_problems() << ' ' << d() << ' ' << seed_ << '\n';
  auto write_vec = [&](const std::string& label, auto&& vec) {
    out << label << '\t';
    for (Eigen::Index k = 0; k < vec.size(); ++k) {
      if (k) out << ' ';
      out << text::format_double(vec(k));
    }
    out << '\n';
  };
  for (std::size_t i = 0; i < num_climbers(); ++i) write_vec(climbers_.label(i), U_.row(static_cast<Eigen::Index>(i)));
  for (std::size_t j = 0; j < num_problems(); ++j) write_vec(problems_.label(j), V_.col(static_cast<Eigen::Index>(j)));
}

PmfModel PmfModel::read(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw ParseError(source, 1, "header", "empty model file");
  auto header = text::split(text::trim(text::chomp(line)), ' ');
  long long m = 0, n = 0, d = 0, seed = 0;
  if (header.size() != 5 || header[0] != "pmf" || !text::parse_int(header[1], m) || !text::parse_int(header[2], n) ||
      !text::parse_int(header[3], d) || !text::parse_int(header[4], seed) || m < 0 || n < 0 || d < 1) {
    throw ParseError(source, 1, "header", "expected 'pmf m n d seed'");
  }

  Eigen::MatrixXd U(m, d), V(d, n);
  std::vector<std::string> climbers, problems;
  auto read_vec = [&](std::vector<std::string>& labels, auto&& assign) {
    ++lineno;
    if (!std::getline(in, line)) throw ParseError(source, lineno, "*", "unexpected end of model file");
    auto row = text::chomp(line);
    auto tab = row.find('\t');
    if (tab == std::string_view::npos) throw ParseError(source, lineno, "*", "expected label<TAB>values");
    labels.emplace_back(row.substr(0, tab));
    auto values = text::split(row.substr(tab + 1), ' ');
    if (values.size() != static_cast<std::size_t>(d)) {
      throw ParseError(source, lineno, "*", "expected " + std::to_string(d) + " values");
    }
    for (long long k = 0; k < d; ++k) {
      double v = 0;
      if (!text::parse_double(values[k], v)) throw ParseError(source, lineno, std::to_string(k), "not a number");
      assign(k, v);
    }
  };
  for (long long i = 0; i < m; ++i) read_vec(climbers, [&](long long k, double v) { U(i, k) = v; });
  for (long long j = 0; j < n; ++j) read_vec(problems, [&](long long k, double v) { V(k, j) = v; });
  return PmfModel(std::move(U), std::move(V), std::move(climbers), std::move(problems),
                  static_cast<std::uint64_t>(seed));
}

// ---------------------------------------------------------------------------

PmfObservations PmfObservations::from_dataset(const Dataset& d) {
  PmfObservations obs;
  obs.rows.reserve(d.size());
  obs.cols.reserve(d.size());
  obs.outcomes.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    obs.rows.push_back(d.row(i));
    obs.cols.push_back(d.col(i));
    obs.outcomes.push_back(d.attempt(i).outcome);
  }
  return obs;
}

double pmf_objective(const Eigen::Ref<const Eigen::MatrixXd>& U, const Eigen::Ref<const Eigen::MatrixXd>& V,
                     const PmfObservations& obs, Eigen::MatrixXd* grad_U, Eigen::MatrixXd* grad_V) {
  if (obs.size() == 0) throw Error("pmf loss over no observations");
  if (U.cols() != V.rows()) throw Error("pmf: U and V disagree on the latent dimension");
  if (grad_U) grad_U->setZero(U.rows(), U.cols());
  if (grad_V) grad_V->setZero(V.rows(), V.cols());

  const double inv_n = 1.0 / static_cast<double>(obs.size());
  double loss = 0;
  for (std::size_t a = 0; a < obs.size(); ++a) {
    const int i = obs.rows[a];
    const int j = obs.cols[a];
    if (i < 0 || i >= U.rows() || j < 0 || j >= V.cols()) throw Error("pmf: observation index out of range");
    const double z = U.row(i).dot(V.col(j));
    const double p = sigmoid(z);
    loss += binary_cross_entropy(obs.outcomes[a], p);
    const double r = (p - obs.outcomes[a]) * inv_n;
    if (grad_U) grad_U->row(i) += r * V.col(j).transpose();
    if (grad_V) grad_V->col(j) += r * U.row(i).transpose();
  }
  return loss * inv_n;
}

double pmf_loss(const PmfModel& model, const Dataset& d) {
  return pmf_objective(model.U(), model.V(), PmfObservations::from_dataset(d));
}

namespace {

constexpr std::uint64_t kStreamU = 0x55;
constexpr std::uint64_t kStreamV = 0x56;
constexpr std::uint64_t kStreamBatch = 0xba7c;

}  // namespace

PmfModel train_pmf(const Dataset& d, const PmfConfig& cfg, std::vector<double>* loss_history) {
  cfg.validate();
  if (d.empty()) throw Error("cannot train pmf on an empty dataset");
  const auto m = static_cast<Eigen::Index>(d.num_climbers());
  const auto n = static_cast<Eigen::Index>(d.num_problems());
  const Eigen::Index k = cfg.d;
  const auto obs = PmfObservations::from_dataset(d);

  // U and V live in one flat buffer so a single Adam state covers both.
  std::vector<double> params(static_cast<std::size_t>(m * k + k * n));
  Eigen::Map<Eigen::MatrixXd> U(params.data(), m, k);
  Eigen::Map<Eigen::MatrixXd> V(params.data() + m * k, k, n);
  const CounterRng rng_u(cfg.seed, kStreamU), rng_v(cfg.seed, kStreamV);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index f = 0; f < k; ++f) U(i, f) = cfg.init_scale * rng_u.normal(i, f);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index f = 0; f < k; ++f) V(f, j) = cfg.init_scale * rng_v.normal(j, f);

  std::vector<double> grads(params.size());
  Eigen::Map<Eigen::MatrixXd> gU_view(grads.data(), m, k);
  Eigen::Map<Eigen::MatrixXd> gV_view(grads.data() + m * k, k, n);
  Eigen::MatrixXd gU, gV;
  AdamState state(params.size());
  const auto adam = cfg.adam();

  const bool full_batch = cfg.batch_size == 0 || cfg.batch_size >= obs.size();
  if (loss_history) loss_history->assign(1, pmf_objective(U, V, obs));

  std::vector<std::size_t> order(obs.size());
  PmfObservations batch;
  const CounterRng rng_batch(cfg.seed, kStreamBatch);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (full_batch) {
      pmf_objective(U, V, obs, &gU, &gV);
      gU_view = gU;
      gV_view = gV;
      adam_step(params, grads, state, adam);
    } else {
      std::iota(order.begin(), order.end(), std::size_t{0});
      for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[rng_batch.bits(static_cast<std::uint64_t>(epoch), i) % i]);
      }
      for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
        const std::size_t end = std::min(order.size(), start + cfg.batch_size);
        batch.rows.clear();
        batch.cols.clear();
        batch.outcomes.clear();
        for (std::size_t b = start; b < end; ++b) {
          batch.rows.push_back(obs.rows[order[b]]);
          batch.cols.push_back(obs.cols[order[b]]);
          batch.outcomes.push_back(obs.outcomes[order[b]]);
        }
        pmf_objective(U, V, batch, &gU, &gV);
        gU_view = gU;
        gV_view = gV;
        adam_step(params, grads, state, adam);
      }
    }
    if (loss_history) loss_history->push_back(pmf_objective(U, V, obs));
  }

  return PmfModel(U, V, d.climber_index().labels(), d.problem_index().labels(), cfg.seed);
}

}  // namespace boulderfit
