#include "boulderfit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <unordered_map>

#include <Eigen/Eigenvalues>

#include "boulderfit/error.hpp"
#include "boulderfit/text.hpp"

namespace boulderfit {

PcaResult pca(const Eigen::Ref<const Eigen::MatrixXd>& data) {
  const auto m = data.rows();
  const auto d = data.cols();
  if (m < 2) throw Error("pca needs at least two rows, got " + std::to_string(m));
  if (d < 1) throw Error("pca needs at least one column");
  if (!data.allFinite()) throw Error("pca input must be finite");

  PcaResult r;
  r.center = data.colwise().mean().transpose();
  const Eigen::MatrixXd centered = data.rowwise() - r.center.transpose();
  const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(m - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw Error("pca eigendecomposition failed");
  // Eigen returns ascending eigenvalues.
  r.explained_variance = solver.eigenvalues().reverse().cwiseMax(0.0);
  r.components = solver.eigenvectors().rowwise().reverse();

  const double total = r.explained_variance.sum();
  if (!(total > 0.0)) {
    r.degenerate = true;
    r.components = Eigen::MatrixXd::Identity(d, d);
    r.explained_variance.setZero();
    r.explained_variance_ratio = Eigen::VectorXd::Constant(d, 1.0 / static_cast<double>(d));
  } else {
    r.explained_variance_ratio = r.explained_variance / total;
  }

  for (Eigen::Index c = 0; c < d; ++c) {
    Eigen::Index arg = 0;
    r.components.col(c).cwiseAbs().maxCoeff(&arg);
    if (r.components(arg, c) < 0) r.components.col(c) *= -1.0;
  }
  r.scores = centered * r.components;
  return r;
}

std::optional<double> pearson(const std::vector<std::optional<double>>& x, const std::vector<std::optional<double>>& y,
                              std::size_t* used) {
  if (x.size() != y.size()) throw Error("pearson: vectors differ in length");
  std::vector<double> a, b;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] && y[i] && std::isfinite(*x[i]) && std::isfinite(*y[i])) {
      a.push_back(*x[i]);
      b.push_back(*y[i]);
    }
  }
  if (used) *used = a.size();
  if (a.size() < 3) return std::nullopt;
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (!(saa > 0.0) || !(sbb > 0.0)) return std::nullopt;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

ClimberVariables climber_variables(const Dataset& grouped, const std::vector<std::string>& groups,
                                   const LogRegModel* lr, const std::vector<ClimberMeta>* heights) {
  std::vector<std::size_t> attempts(grouped.num_climbers(), 0), wins(grouped.num_climbers(), 0);
  for (std::size_t a = 0; a < grouped.size(); ++a) {
    ++attempts[grouped.row(a)];
    wins[grouped.row(a)] += static_cast<std::size_t>(grouped.attempt(a).outcome);
  }
  std::unordered_map<std::string, double> height_of;
  if (heights) {
    for (const auto& h : *heights)
      if (h.height_cm) height_of[h.climber] = *h.height_cm;
  }

  ClimberVariables v;
  v.groups = groups;
  v.has_lr_coef = lr != nullptr;
  v.has_height = heights != nullptr;
  for (const auto& g : groups) {
    const auto row = grouped.climber_index().find(g);
    const double n = row ? static_cast<double>(attempts[*row]) : 0.0;
    v.n_climbs.push_back(n);
    v.p_success.push_back(n > 0 ? static_cast<double>(wins[*row]) / n : std::nan(""));
    v.lr_coef.push_back(lr ? lr->climber_coefficient(g) : std::nullopt);
    auto h = height_of.find(g);
    v.height_cm.push_back(h == height_of.end() ? std::nullopt : std::optional<double>(h->second));
  }
  return v;
}

CorrelationMatrix correlation_matrix(const PcaResult& scores, const ClimberVariables& vars) {
  const auto m = static_cast<std::size_t>(scores.scores.rows());
  if (m != vars.groups.size()) throw Error("correlation: score rows do not match climber variables");

  std::vector<std::vector<std::optional<double>>> columns;
  CorrelationMatrix c;
  for (Eigen::Index k = 0; k < scores.scores.cols(); ++k) {
    c.labels.push_back("PC" + std::to_string(k + 1));
    std::vector<std::optional<double>> col;
    for (std::size_t i = 0; i < m; ++i) col.emplace_back(scores.scores(static_cast<Eigen::Index>(i), k));
    columns.push_back(std::move(col));
  }
  auto add = [&](const std::string& label, const auto& values) {
    c.labels.push_back(label);
    std::vector<std::optional<double>> col(values.begin(), values.end());
    columns.push_back(std::move(col));
  };
  if (vars.has_lr_coef) add("lr_coef", vars.lr_coef);
  add("n_climbs", vars.n_climbs);
  add("p_success", vars.p_success);
  if (vars.has_height) add("height", vars.height_cm);

  const auto k = columns.size();
  c.values.assign(k, std::vector<std::optional<double>>(k));
  c.pair_counts.assign(k, std::vector<std::size_t>(k, 0));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a; b < k; ++b) {
      std::size_t used = 0;
      auto r = pearson(columns[a], columns[b], &used);
      if (a == b && r) r = 1.0;
      c.values[a][b] = c.values[b][a] = r;
      c.pair_counts[a][b] = c.pair_counts[b][a] = used;
    }
  }
  return c;
}

Dataset align_to_model(const PmfModel& model, const Dataset& raw) {
  const bool has_replacement = model.climber_index().contains(kReplacement);
  const bool has_rare = model.problem_index().contains(kRareProblem);
  for (std::size_t a = 0; a < raw.size(); ++a) {
    const auto& name = raw.attempt(a).climber;
    if (!has_replacement && !model.climber_index().contains(name)) {
      throw Error("climber '" + name + "' (attempt " + std::to_string(a + 1) + ") does not match any model row");
    }
    const auto& label = raw.raw_problem_label(a);
    if (!has_rare && !model.problem_index().contains(label)) {
      throw Error("problem '" + label + "' (attempt " + std::to_string(a + 1) + ") does not match any model column");
    }
  }
  return raw.regroup(
      [&](const std::string& name, const std::string&) {
        return model.climber_index().contains(name) ? name : std::string(kReplacement);
      },
      [&](const std::string& label, const std::string&) {
        return model.problem_index().contains(label) ? label : std::string(kRareProblem);
      });
}

ClimberAnalysis analyze_climbers(const PmfModel& model, const Dataset& raw, const LogRegModel* lr,
                                 const std::vector<ClimberMeta>* heights) {
  const auto aligned = align_to_model(model, raw);
  std::vector<std::string> groups;
  std::vector<Eigen::Index> rows;
  for (std::size_t i = 0; i < model.num_climbers(); ++i) {
    const auto& label = model.climber_index().label(i);
    if (label == kReplacement) continue;
    groups.push_back(label);
    rows.push_back(static_cast<Eigen::Index>(i));
  }
  Eigen::MatrixXd emb(static_cast<Eigen::Index>(rows.size()), model.d());
  for (std::size_t r = 0; r < rows.size(); ++r) emb.row(static_cast<Eigen::Index>(r)) = model.U().row(rows[r]);

  ClimberAnalysis out;
  out.pca = pca(emb);
  out.vars = climber_variables(aligned, groups, lr, heights);
  out.correlations = correlation_matrix(out.pca, out.vars);
  return out;
}

ProblemProjection problem_projection(const PmfModel& model, const Dataset& raw) {
  const auto aligned = align_to_model(model, raw);
  const auto n = model.num_problems();
  std::vector<std::size_t> attempts(n, 0), wins(n, 0), tops(n, 0), zones(n, 0);
  for (std::size_t a = 0; a < aligned.size(); ++a) {
    const auto col = static_cast<std::size_t>(model.problem_col(aligned.problem_index().label(aligned.col(a))));
    ++attempts[col];
    wins[col] += static_cast<std::size_t>(aligned.attempt(a).outcome);
    (aligned.attempt(a).hold_type == HoldType::Top ? tops : zones)[col] += 1;
  }

  ProblemProjection out;
  out.pca = pca(model.V().transpose());
  for (std::size_t j = 0; j < n; ++j) {
    ProblemRow row;
    row.group = model.problem_index().label(j);
    for (Eigen::Index k = 0; k < out.pca.scores.cols(); ++k) row.coords.push_back(out.pca.scores(static_cast<Eigen::Index>(j), k));
    if (tops[j] && zones[j]) {
      row.hold_type = "mixed";
    } else if (tops[j]) {
      row.hold_type = "top";
    } else if (zones[j]) {
      row.hold_type = "zone";
    } else if (row.group.ends_with("|top")) {
      row.hold_type = "top";
    } else if (row.group.ends_with("|zone")) {
      row.hold_type = "zone";
    } else {
      row.hold_type = "mixed";
    }
    row.attempts = attempts[j];
    if (attempts[j]) row.success_rate = static_cast<double>(wins[j]) / static_cast<double>(attempts[j]);
    out.rows.push_back(std::move(row));
  }
  return out;
}

namespace {

std::string opt_text(const std::optional<double>& v) { return v ? text::format_double(*v) : std::string(); }

// Labels are written verbatim unless they contain a comma or quote.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

void write_climber_pca(std::ostream& out, const ClimberAnalysis& a) {
  out << "group";
  for (Eigen::Index k = 0; k < a.pca.scores.cols(); ++k) out << ",PC" << (k + 1);
  out << ",lr_coef,n_climbs,p_success,height\n";
  for (std::size_t i = 0; i < a.vars.groups.size(); ++i) {
    out << csv_field(a.vars.groups[i]);
    for (Eigen::Index k = 0; k < a.pca.scores.cols(); ++k)
      out << ',' << text::format_double(a.pca.scores(static_cast<Eigen::Index>(i), k));
    const double p = a.vars.p_success[i];
    out << ',' << opt_text(a.vars.lr_coef[i]) << ',' << text::format_double(a.vars.n_climbs[i]) << ','
        << (std::isfinite(p) ? text::format_double(p) : std::string()) << ',' << opt_text(a.vars.height_cm[i]) << '\n';
  }
}

void write_problem_pca(std::ostream& out, const ProblemProjection& p) {
  out << "group";
  for (Eigen::Index k = 0; k < p.pca.scores.cols(); ++k) out << ",PC" << (k + 1);
  out << ",hold_type,success_rate\n";
  for (const auto& row : p.rows) {
    out << csv_field(row.group);
    for (double c : row.coords) out << ',' << text::format_double(c);
    out << ',' << row.hold_type << ',' << opt_text(row.success_rate) << '\n';
  }
}

void write_correlations(std::ostream& out, const CorrelationMatrix& c) {
  out << "variable";
  for (const auto& l : c.labels) out << ',' << l;
  out << '\n';
  for (std::size_t a = 0; a < c.labels.size(); ++a) {
    out << c.labels[a];
    for (std::size_t b = 0; b < c.labels.size(); ++b) out << ',' << opt_text(c.values[a][b]);
    out << '\n';
  }
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_scatter_svg(std::ostream& out, const std::string& title, const std::vector<double>& x,
                       const std::vector<double>& y, const std::vector<double>& color, const std::string& x_label,
                       const std::string& y_label) {
  if (x.size() != y.size() || x.size() != color.size()) throw Error("scatter: coordinate and color lengths differ");
  constexpr double kW = 480, kH = 480, kPad = 48;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!x.empty()) {
    auto [xa, xb] = std::minmax_element(x.begin(), x.end());
    auto [ya, yb] = std::minmax_element(y.begin(), y.end());
    x0 = *xa, x1 = *xb, y0 = *ya, y1 = *yb;
  }
  if (x1 - x0 <= 0) x1 = x0 + 1;
  if (y1 - y0 <= 0) y1 = y0 + 1;
  auto px = [&](double v) { return kPad + (v - x0) / (x1 - x0) * (kW - 2 * kPad); };
  auto py = [&](double v) { return kH - kPad - (v - y0) / (y1 - y0) * (kH - 2 * kPad); };
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(title) << "</text>\n";
  out << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 10 << "\" text-anchor=\"middle\" font-size=\"12\">" << xml_escape(x_label)
      << "</text>\n";
  out << "<text x=\"14\" y=\"" << kH / 2 << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 14 "
      << kH / 2 << ")\">" << xml_escape(y_label) << "</text>\n";
  out << "<rect x=\"" << kPad << "\" y=\"" << kPad << "\" width=\"" << kW - 2 * kPad << "\" height=\"" << kH - 2 * kPad
      << "\" fill=\"none\" stroke=\"#888\"/>\n";
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = std::isfinite(color[i]) ? std::clamp(color[i], 0.0, 1.0) : 0.5;
    const int red = static_cast<int>(std::lround(255 * t));
    const int blue = 255 - red;
    out << "<circle cx=\"" << fmt(px(x[i])) << "\" cy=\"" << fmt(py(y[i])) << "\" r=\"3\" fill=\"rgb(" << red
        << ",40," << blue << ")\" fill-opacity=\"0.8\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace boulderfit
