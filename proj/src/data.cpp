#include "boulderfit/data.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "boulderfit/error.hpp"
#include "boulderfit/random.hpp"
#include "boulderfit/text.hpp"

namespace boulderfit {

char round_code(Round r) noexcept {
  switch (r) {
    case Round::Qualifier: return 'Q';
    case Round::SemiFinal: return 'S';
    case Round::Final: return 'F';
  }
  return '?';
}

std::optional<Round> parse_round(std::string_view code) noexcept {
  if (code == "Q") return Round::Qualifier;
  if (code == "S") return Round::SemiFinal;
  if (code == "F") return Round::Final;
  return std::nullopt;
}

std::string_view hold_type_name(HoldType t) noexcept { return t == HoldType::Top ? "top" : "zone"; }

std::optional<HoldType> parse_hold_type(std::string_view name) noexcept {
  if (name == "top") return HoldType::Top;
  if (name == "zone") return HoldType::Zone;
  return std::nullopt;
}

std::string problem_label(const AttemptRecord& a) {
  std::string out = a.competition_id;
  out += '|';
  out += round_code(a.round);
  out += '|';
  out += a.problem_key;
  out += '|';
  out += hold_type_name(a.hold_type);
  return out;
}

int Vocabulary::add(const std::string& label) {
  auto [it, inserted] = index_.emplace(label, static_cast<int>(labels_.size()));
  if (inserted) labels_.push_back(label);
  return it->second;
}

std::optional<int> Vocabulary::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------

Dataset::Dataset() : store_(std::make_shared<Store>()) {}

std::shared_ptr<const Dataset::Store> Dataset::make_store(std::vector<AttemptRecord> attempts) {
  auto store = std::make_shared<Store>();
  store->problem_labels.reserve(attempts.size());
  std::unordered_set<std::string> keys;
  keys.reserve(attempts.size());
  for (const auto& a : attempts) {
    if (a.outcome != 0 && a.outcome != 1) {
      throw Error("attempt outcome must be 0 or 1, got " + std::to_string(a.outcome));
    }
    auto label = problem_label(a);
    if (!keys.insert(label + '|' + a.climber).second) {
      throw Error("duplicate attempt (competition_id=" + a.competition_id + ", round=" +
                  round_code(a.round) + ", problem_key=" + a.problem_key +
                  ", hold_type=" + std::string(hold_type_name(a.hold_type)) + ", climber=" + a.climber + ")");
    }
    store->problem_labels.push_back(std::move(label));
  }
  store->records = std::move(attempts);
  return store;
}

Dataset Dataset::from_attempts(std::vector<AttemptRecord> attempts) {
  auto store = make_store(std::move(attempts));
  std::unordered_map<std::string, std::string> cg, pg;
  for (std::size_t i = 0; i < store->records.size(); ++i) {
    cg.emplace(store->records[i].climber, store->records[i].climber);
    pg.emplace(store->problem_labels[i], store->problem_labels[i]);
  }
  return Dataset(std::move(store), std::move(cg), std::move(pg));
}

Dataset::Dataset(std::shared_ptr<const Store> store,
                 std::unordered_map<std::string, std::string> climber_groups,
                 std::unordered_map<std::string, std::string> problem_groups)
    : store_(std::move(store)),
      climber_groups_(std::move(climber_groups)),
      problem_groups_(std::move(problem_groups)) {
  const auto n = store_->records.size();
  rows_.resize(n);
  cols_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    rows_[i] = climbers_.add(climber_groups_.at(store_->records[i].climber));
    cols_[i] = problems_.add(problem_groups_.at(store_->problem_labels[i]));
  }
}

std::optional<int> Dataset::resolve_climber(std::string_view raw_name) const {
  auto it = climber_groups_.find(std::string(raw_name));
  if (it != climber_groups_.end()) return climbers_.find(it->second);
  return climbers_.find(kReplacement);
}

std::optional<int> Dataset::resolve_problem(std::string_view raw_label) const {
  auto it = problem_groups_.find(std::string(raw_label));
  if (it != problem_groups_.end()) return problems_.find(it->second);
  return problems_.find(kRareProblem);
}

Dataset Dataset::subset(const std::vector<std::size_t>& indices) const {
  std::vector<AttemptRecord> picked;
  picked.reserve(indices.size());
  for (auto i : indices) picked.push_back(store_->records.at(i));
  return from_attempts(std::move(picked));
}

std::size_t Dataset::successes() const {
  std::size_t s = 0;
  for (const auto& a : attempts()) s += static_cast<std::size_t>(a.outcome);
  return s;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::string_view kAttemptHeader = "competition_id,year,round,climber,problem_key,hold_type,outcome";
constexpr std::string_view kHeightsHeader = "climber,height_cm";
constexpr const char* kAttemptColumns[] = {"competition_id", "year", "round", "climber",
                                           "problem_key", "hold_type", "outcome"};

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

}  // namespace

Dataset parse_attempts(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError(source, 1, "header", "missing header row");
  ++lineno;
  auto header = text::trim(text::chomp(line));
  if (header.size() >= 3 && header.substr(0, 3) == "\xEF\xBB\xBF") header.remove_prefix(3);
  if (header != kAttemptHeader) {
    throw ParseError(source, 1, "header", "expected '" + std::string(kAttemptHeader) + "'");
  }

  std::vector<AttemptRecord> records;
  std::unordered_set<std::string> keys;
  while (std::getline(in, line)) {
    ++lineno;
    auto row = text::chomp(line);
    if (text::trim(row).empty()) continue;
    auto fields = text::split(row, ',');
    if (fields.size() != 7) {
      throw ParseError(source, lineno, "*", "expected 7 fields, got " + std::to_string(fields.size()));
    }
    for (auto& f : fields) f = std::string(text::trim(f));

    AttemptRecord a;
    a.competition_id = fields[0];
    if (a.competition_id.empty()) throw ParseError(source, lineno, kAttemptColumns[0], "empty value");
    long long year = 0;
    if (!text::parse_int(fields[1], year)) {
      throw ParseError(source, lineno, kAttemptColumns[1], "not an integer: '" + fields[1] + "'");
    }
    a.year = static_cast<int>(year);
    auto round = parse_round(fields[2]);
    if (!round) throw ParseError(source, lineno, kAttemptColumns[2], "expected Q, S or F, got '" + fields[2] + "'");
    a.round = *round;
    a.climber = fields[3];
    if (a.climber.empty()) throw ParseError(source, lineno, kAttemptColumns[3], "empty value");
    a.problem_key = fields[4];
    if (a.problem_key.empty()) throw ParseError(source, lineno, kAttemptColumns[4], "empty value");
    auto type = parse_hold_type(fields[5]);
    if (!type) throw ParseError(source, lineno, kAttemptColumns[5], "expected top or zone, got '" + fields[5] + "'");
    a.hold_type = *type;
    if (fields[6] == "0") {
      a.outcome = 0;
    } else if (fields[6] == "1") {
      a.outcome = 1;
    } else {
      throw ParseError(source, lineno, kAttemptColumns[6], "expected 0 or 1, got '" + fields[6] + "'");
    }

    auto key = problem_label(a) + '|' + a.climber;
    if (!keys.insert(key).second) {
      throw ParseError(source, lineno, "*",
                       "duplicate attempt (competition_id=" + a.competition_id + ", round=" + fields[2] +
                           ", problem_key=" + a.problem_key + ", hold_type=" + fields[5] +
                           ", climber=" + a.climber + ")");
    }
    records.push_back(std::move(a));
  }
  return Dataset::from_attempts(std::move(records));
}

Dataset ingest_attempts(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_attempts(in, path.string());
}

void write_attempts(std::ostream& out, const std::vector<AttemptRecord>& attempts) {
  out << kAttemptHeader << '\n';
  for (const auto& a : attempts) {
    out << a.competition_id << ',' << a.year << ',' << round_code(a.round) << ',' << a.climber << ','
        << a.problem_key << ',' << hold_type_name(a.hold_type) << ',' << a.outcome << '\n';
  }
}

std::vector<ClimberMeta> parse_heights(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError(source, 1, "header", "missing header row");
  ++lineno;
  auto header = text::trim(text::chomp(line));
  if (header.size() >= 3 && header.substr(0, 3) == "\xEF\xBB\xBF") header.remove_prefix(3);
  if (header != kHeightsHeader) {
    throw ParseError(source, 1, "header", "expected '" + std::string(kHeightsHeader) + "'");
  }

  std::vector<ClimberMeta> out;
  while (std::getline(in, line)) {
    ++lineno;
    auto row = text::chomp(line);
    if (text::trim(row).empty()) continue;
    // Names never carry the height, so split on the last comma.
    auto comma = row.rfind(',');
    if (comma == std::string_view::npos) throw ParseError(source, lineno, "*", "expected 2 fields");
    ClimberMeta meta;
    meta.climber = std::string(text::trim(row.substr(0, comma)));
    if (meta.climber.empty()) throw ParseError(source, lineno, "climber", "empty value");
    auto height = text::trim(row.substr(comma + 1));
    if (!height.empty()) {
      double h = 0;
      if (!text::parse_double(height, h)) {
        throw ParseError(source, lineno, "height_cm", "not a number: '" + std::string(height) + "'");
      }
      if (!(h > 100.0 && h < 250.0)) {
        throw ParseError(source, lineno, "height_cm", "outside (100, 250) cm: " + std::string(height));
      }
      meta.height_cm = h;
    }
    out.push_back(std::move(meta));
  }
  return out;
}

std::vector<ClimberMeta> ingest_heights(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_heights(in, path.string());
}

Dataset apply_replacement_level(const Dataset& d, std::size_t min_attempts) {
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& a : d.attempts()) ++counts[a.climber];
  return d.regroup(
      [&](const std::string& raw, const std::string& group) {
        return counts[raw] < min_attempts ? std::string(kReplacement) : group;
      },
      [](const std::string&, const std::string& group) { return group; });
}

Dataset apply_problem_grouping(const Dataset& d, std::size_t min_climbers) {
  std::unordered_map<std::string, std::unordered_set<std::string>> climbers;
  for (std::size_t i = 0; i < d.size(); ++i) climbers[d.raw_problem_label(i)].insert(d.attempt(i).climber);
  return d.regroup([](const std::string&, const std::string& group) { return group; },
                   [&](const std::string& raw, const std::string& group) {
                     return climbers[raw].size() < min_climbers ? std::string(kRareProblem) : group;
                   });
}

std::vector<std::size_t> FoldSplit::test_indices(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i)
    if (assignments[i] == fold) out.push_back(i);
  return out;
}

std::vector<std::size_t> FoldSplit::train_indices(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i)
    if (assignments[i] != fold) out.push_back(i);
  return out;
}

FoldSplit split_folds(const Dataset& d, int k, std::uint64_t seed) {
  if (k < 2) throw Error("fold count must be at least 2, got " + std::to_string(k));
  if (static_cast<std::size_t>(k) > d.size()) {
    throw Error("fold count " + std::to_string(k) + " exceeds the number of attempts (" +
                std::to_string(d.size()) + ")");
  }
  const std::size_t n = d.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  CounterRng rng(seed, 0xf01d);
  for (std::size_t i = n; i > 1; --i) {
    auto j = static_cast<std::size_t>(rng.bits(i) % i);
    std::swap(order[i - 1], order[j]);
  }
  FoldSplit split;
  split.k = k;
  split.seed = seed;
  split.assignments.assign(n, 0);
  for (std::size_t pos = 0; pos < n; ++pos) split.assignments[order[pos]] = static_cast<int>(pos % k);
  return split;
}

}  // namespace boulderfit
