#pragma once

// Attempt records, the indexed Dataset built from them, and the grouping
// transforms (replacement-level climbers, rare problems) and fold splits.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace boulderfit {

enum class Round : std::uint8_t { Qualifier, SemiFinal, Final };
enum class HoldType : std::uint8_t { Top, Zone };

inline constexpr std::size_t kNumRounds = 3;
inline constexpr std::size_t kNumHoldTypes = 2;

// Reserved group labels. Angle brackets keep them out of the space of real names.
inline constexpr std::string_view kReplacement = "<REPLACEMENT>";
inline constexpr std::string_view kRareProblem = "<RARE_PROBLEM>";

char round_code(Round r) noexcept;  // 'Q', 'S', 'F'
std::optional<Round> parse_round(std::string_view code) noexcept;
std::string_view hold_type_name(HoldType t) noexcept;  // "top", "zone"
std::optional<HoldType> parse_hold_type(std::string_view name) noexcept;

struct AttemptRecord {
  std::string competition_id;
  int year = 0;
  Round round = Round::Qualifier;
  std::string climber;
  std::string problem_key;
  HoldType hold_type = HoldType::Top;
  int outcome = 0;
};

// Label of the column an attempt belongs to before any grouping. Top and zone
// of the same physical problem are different columns.
std::string problem_label(const AttemptRecord& a);

struct ClimberMeta {
  std::string climber;
  std::optional<double> height_cm;
};

// Dense bijection label <-> index, indices assigned in insertion order.
class Vocabulary {
 public:
  int add(const std::string& label);
  std::optional<int> find(std::string_view label) const;
  bool contains(std::string_view label) const { return find(label).has_value(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return labels_.size(); }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> index_;
};

// Immutable sparse representation of the outcome matrix. Only observed cells
// are stored; each attempt carries its row (climber group) and column
// (problem group). Copies share the attempt storage.
class Dataset {
 public:
  Dataset();

  // Identity grouping. Throws Error on a duplicate attempt key.
  static Dataset from_attempts(std::vector<AttemptRecord> attempts);

  const std::vector<AttemptRecord>& attempts() const noexcept { return store_->records; }
  const AttemptRecord& attempt(std::size_t i) const { return store_->records[i]; }
  std::size_t size() const noexcept { return store_->records.size(); }
  bool empty() const noexcept { return size() == 0; }

  std::size_t num_climbers() const noexcept { return climbers_.size(); }
  std::size_t num_problems() const noexcept { return problems_.size(); }
  const Vocabulary& climber_index() const noexcept { return climbers_; }
  const Vocabulary& problem_index() const noexcept { return problems_; }

  int row(std::size_t attempt) const { return rows_[attempt]; }
  int col(std::size_t attempt) const { return cols_[attempt]; }
  const std::string& raw_problem_label(std::size_t attempt) const { return store_->problem_labels[attempt]; }

  // Raw name -> group label, raw problem label -> group label.
  const std::unordered_map<std::string, std::string>& climber_groups() const noexcept { return climber_groups_; }
  const std::unordered_map<std::string, std::string>& problem_groups() const noexcept { return problem_groups_; }

  // Row for a raw climber name: its own group if known, else the
  // replacement row if one exists.
  std::optional<int> resolve_climber(std::string_view raw_name) const;
  // Column for a raw problem label, falling back to the rare-problem column.
  std::optional<int> resolve_problem(std::string_view raw_label) const;

  // Rebuilds the indices with new group assignments. The callbacks receive the
  // raw name/label and its current group label.
  template <class ClimberFn, class ProblemFn>
  Dataset regroup(ClimberFn&& climber_fn, ProblemFn&& problem_fn) const {
    std::unordered_map<std::string, std::string> cg, pg;
    for (const auto& [raw, group] : climber_groups_) cg.emplace(raw, climber_fn(raw, group));
    for (const auto& [raw, group] : problem_groups_) pg.emplace(raw, problem_fn(raw, group));
    return Dataset(store_, std::move(cg), std::move(pg));
  }

  // New dataset over the selected attempts (in the given order) with identity grouping.
  Dataset subset(const std::vector<std::size_t>& indices) const;

  std::size_t successes() const;

 private:
  struct Store {
    std::vector<AttemptRecord> records;
    std::vector<std::string> problem_labels;
  };

  Dataset(std::shared_ptr<const Store> store,
          std::unordered_map<std::string, std::string> climber_groups,
          std::unordered_map<std::string, std::string> problem_groups);

  static std::shared_ptr<const Store> make_store(std::vector<AttemptRecord> attempts);

  std::shared_ptr<const Store> store_;
  std::unordered_map<std::string, std::string> climber_groups_;
  std::unordered_map<std::string, std::string> problem_groups_;
  Vocabulary climbers_;
  Vocabulary problems_;
  std::vector<std::int32_t> rows_;
  std::vector<std::int32_t> cols_;
};

// Attempt file: header competition_id,year,round,climber,problem_key,hold_type,outcome
Dataset parse_attempts(std::istream& in, const std::string& source = "<stream>");
Dataset ingest_attempts(const std::filesystem::path& path);
void write_attempts(std::ostream& out, const std::vector<AttemptRecord>& attempts);

// Heights file: header climber,height_cm ; the height may be empty.
std::vector<ClimberMeta> parse_heights(std::istream& in, const std::string& source = "<stream>");
std::vector<ClimberMeta> ingest_heights(const std::filesystem::path& path);

// Climbers with strictly fewer than min_attempts attempts map to kReplacement.
Dataset apply_replacement_level(const Dataset& d, std::size_t min_attempts);

// Problems attempted by fewer than min_climbers distinct climbers map to kRareProblem.
Dataset apply_problem_grouping(const Dataset& d, std::size_t min_climbers);

inline constexpr std::size_t kDefaultMinClimbersPerProblem = 10;

struct FoldSplit {
  int k = 0;
  std::uint64_t seed = 0;
  std::vector<int> assignments;  // one fold label per attempt

  std::vector<std::size_t> test_indices(int fold) const;
  std::vector<std::size_t> train_indices(int fold) const;
};

// Uniform attempt-level k-fold split; fold sizes differ by at most one.
FoldSplit split_folds(const Dataset& d, int k, std::uint64_t seed);

}  // namespace boulderfit
