#include "boulderfit/logreg.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "boulderfit/error.hpp"
#include "boulderfit/sigmoid.hpp"
#include "boulderfit/text.hpp"

namespace boulderfit {

void LogRegConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw Error("logreg learning rate must be positive");
  if (epochs < 1) throw Error("logreg epochs must be at least 1");
  if (!(tolerance >= 0.0)) throw Error("logreg tolerance must be nonnegative");
}

LogRegModel::LogRegModel(double beta0, std::array<double, kNumRounds> beta_round,
                         std::array<double, kNumHoldTypes> beta_type, std::vector<std::string> climber_labels,
                         std::vector<double> climber_coefs)
    : beta0_(beta0),
      beta_round_(beta_round),
      beta_type_(beta_type),
      labels_(std::move(climber_labels)),
      coefs_(std::move(climber_coefs)) {
  if (labels_.size() != coefs_.size()) throw Error("climber labels and coefficients differ in length");
  beta_round_[static_cast<std::size_t>(Round::Qualifier)] = 0.0;
  beta_type_[static_cast<std::size_t>(HoldType::Top)] = 0.0;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], i).second) throw Error("duplicate climber label '" + labels_[i] + "'");
  }
}

std::optional<double> LogRegModel::climber_coefficient(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return coefs_[it->second];
}

double LogRegModel::climber_effect(std::string_view climber) const noexcept {
  if (auto c = climber_coefficient(climber)) return *c;
  if (auto r = climber_coefficient(kReplacement)) return *r;
  return 0.0;
}

double LogRegModel::logit(Round r, HoldType t, std::string_view climber) const noexcept {
  return beta0_ + beta_round(r) + beta_type(t) + climber_effect(climber);
}

double LogRegModel::predict(Round r, HoldType t, std::string_view climber) const noexcept {
  return sigmoid(logit(r, t, climber));
}

double LogRegModel::predict(std::string_view round_code, std::string_view hold_type, std::string_view climber) const {
  auto r = parse_round(round_code);
  if (!r) throw Error("unknown round '" + std::string(round_code) + "' (expected Q, S or F)");
  auto t = parse_hold_type(hold_type);
  if (!t) throw Error("unknown hold type '" + std::string(hold_type) + "' (expected top or zone)");
  return predict(*r, *t, climber);
}

void LogRegModel::write(std::ostream& out) const {
  out << "beta0=" << text::format_double(beta0_) << '\n';
  out << "round.S=" << text::format_double(beta_round(Round::SemiFinal)) << '\n';
  out << "round.F=" << text::format_double(beta_round(Round::Final)) << '\n';
  out << "type.zone=" << text::format_double(beta_type(HoldType::Zone)) << '\n';
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    out << "climber." << labels_[i] << '=' << text::format_double(coefs_[i]) << '\n';
  }
}

LogRegModel LogRegModel::read(std::istream& in, const std::string& source) {
  double beta0 = 0;
  std::array<double, kNumRounds> rounds{};
  std::array<double, kNumHoldTypes> types{};
  std::vector<std::string> labels;
  std::vector<double> coefs;
  bool saw_beta0 = false;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto row = text::chomp(line);
    if (text::trim(row).empty()) continue;
    auto eq = row.rfind('=');
    if (eq == std::string_view::npos) throw ParseError(source, lineno, "*", "expected key=value");
    auto key = row.substr(0, eq);
    double value = 0;
    if (!text::parse_double(row.substr(eq + 1), value)) {
      throw ParseError(source, lineno, std::string(key), "not a number");
    }
    if (key == "beta0") {
      beta0 = value;
      saw_beta0 = true;
    } else if (key == "round.S") {
      rounds[static_cast<std::size_t>(Round::SemiFinal)] = value;
    } else if (key == "round.F") {
      rounds[static_cast<std::size_t>(Round::Final)] = value;
    } else if (key == "type.zone") {
      types[static_cast<std::size_t>(HoldType::Zone)] = value;
    } else if (key.starts_with("climber.")) {
      labels.emplace_back(key.substr(8));
      coefs.push_back(value);
    } else {
      throw ParseError(source, lineno, std::string(key), "unknown key");
    }
  }
  if (!saw_beta0) throw ParseError(source, lineno, "beta0", "missing intercept; not a logreg model file");
  return LogRegModel(beta0, rounds, types, std::move(labels), std::move(coefs));
}

bool LogRegModel::operator==(const LogRegModel& other) const {
  return beta0_ == other.beta0_ && beta_round_ == other.beta_round_ && beta_type_ == other.beta_type_ &&
         labels_ == other.labels_ && coefs_ == other.coefs_;
}

// ---------------------------------------------------------------------------

LogRegDesign LogRegDesign::from_dataset(const Dataset& d) {
  LogRegDesign x;
  x.num_climbers = d.num_climbers();
  x.rounds.reserve(d.size());
  x.types.reserve(d.size());
  x.climbers.reserve(d.size());
  x.outcomes.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto& a = d.attempt(i);
    x.rounds.push_back(a.round);
    x.types.push_back(a.hold_type);
    x.climbers.push_back(d.row(i));
    x.outcomes.push_back(a.outcome);
  }
  return x;
}

namespace {

// Parameter slot of a round/type level, or -1 for the reference level.
int round_slot(Round r) noexcept {
  switch (r) {
    case Round::Qualifier: return -1;
    case Round::SemiFinal: return 1;
    case Round::Final: return 2;
  }
  return -1;
}

int type_slot(HoldType t) noexcept { return t == HoldType::Zone ? 3 : -1; }

double design_logit(const LogRegDesign& x, std::size_t i, std::span<const double> params) noexcept {
  double z = params[0];
  if (int s = round_slot(x.rounds[i]); s >= 0) z += params[s];
  if (int s = type_slot(x.types[i]); s >= 0) z += params[s];
  return z + params[kLogRegClimberOffset + x.climbers[i]];
}

}  // namespace

double logreg_loss(const LogRegDesign& x, std::span<const double> params, std::span<double> grad) {
  if (params.size() != x.num_params()) throw Error("logreg parameter vector has the wrong length");
  if (!grad.empty() && grad.size() != params.size()) throw Error("logreg gradient buffer has the wrong length");
  if (x.size() == 0) throw Error("logreg loss of an empty design");
  std::fill(grad.begin(), grad.end(), 0.0);

  double loss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double z = design_logit(x, i, params);
    loss += logistic_nll(x.outcomes[i], z);
    if (!grad.empty()) {
      const double r = sigmoid(z) - x.outcomes[i];
      grad[0] += r;
      if (int s = round_slot(x.rounds[i]); s >= 0) grad[s] += r;
      if (int s = type_slot(x.types[i]); s >= 0) grad[s] += r;
      grad[kLogRegClimberOffset + x.climbers[i]] += r;
    }
  }
  const double inv_n = 1.0 / static_cast<double>(x.size());
  for (auto& g : grad) g *= inv_n;
  return loss * inv_n;
}

LogRegModel make_logreg_model(const Dataset& d, std::span<const double> params) {
  if (params.size() != kLogRegClimberOffset + d.num_climbers()) throw Error("logreg parameter vector has the wrong length");
  std::array<double, kNumRounds> rounds{0.0, params[1], params[2]};
  std::array<double, kNumHoldTypes> types{0.0, params[3]};
  return LogRegModel(params[0], rounds, types, d.climber_index().labels(),
                     std::vector<double>(params.begin() + kLogRegClimberOffset, params.end()));
}

LogRegModel train_logreg(const Dataset& d, const LogRegConfig& cfg, std::vector<double>* loss_history) {
  cfg.validate();
  if (d.empty()) throw Error("cannot train logistic regression on an empty dataset");
  const auto x = LogRegDesign::from_dataset(d);
  const std::size_t p = x.num_params();

  // Each coordinate's step is scaled by the inverse of its feature's
  // frequency, so rarely seen climbers converge at the same rate as the
  // intercept. Loss descent holds for learning rates below 2 / (features per row).
  std::vector<double> freq(p, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    freq[0] += 1;
    if (int s = round_slot(x.rounds[i]); s >= 0) freq[s] += 1;
    if (int s = type_slot(x.types[i]); s >= 0) freq[s] += 1;
    freq[kLogRegClimberOffset + x.climbers[i]] += 1;
  }
  std::vector<double> step(p, 0.0);
  for (std::size_t k = 0; k < p; ++k) {
    step[k] = freq[k] > 0 ? cfg.learning_rate * static_cast<double>(x.size()) / freq[k] : 0.0;
  }

  std::vector<double> params(p, 0.0);
  std::vector<double> grad(p, 0.0);
  double loss = logreg_loss(x, params, grad);
  if (loss_history) loss_history->assign(1, loss);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t k = 0; k < p; ++k) params[k] -= step[k] * grad[k];
    const double next = logreg_loss(x, params, grad);
    if (loss_history) loss_history->push_back(next);
    const double delta = loss - next;
    loss = next;
    if (std::abs(delta) < cfg.tolerance) break;
  }
  return make_logreg_model(d, params);
}

std::vector<std::pair<std::string, double>> climber_coefficients(const LogRegModel& model) {
  std::vector<std::pair<std::string, double>> out;
  out.reserve(model.num_climbers());
  for (std::size_t i = 0; i < model.num_climbers(); ++i) out.emplace_back(model.climber_labels()[i], model.climber_coefs()[i]);
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

}  // namespace boulderfit
