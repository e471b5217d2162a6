#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "boulderfit/data.hpp"
#include "boulderfit/error.hpp"
#include "test_support.hpp"

using namespace boulderfit;

namespace {

const char* kHeader = "competition_id,year,round,climber,problem_key,hold_type,outcome\n";

Dataset parse(const std::string& body) {
  std::istringstream in(std::string(kHeader) + body);
  return parse_attempts(in, "t.csv");
}

std::size_t parse_error_line(const std::string& body) {
  try {
    parse(body);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(ParseAttempts, HeaderOnlyIsEmpty) {
  const Dataset d = parse("");
  EXPECT_EQ(d.size(), 0u);
  EXPECT_EQ(d.num_climbers(), 0u);
  EXPECT_EQ(d.num_problems(), 0u);
}

TEST(ParseAttempts, TopAndZoneAreDistinctColumns) {
  const Dataset d = parse(
      "W1,2019,Q,A,B1,top,1\n"
      "W1,2019,Q,A,B1,zone,1\n"
      "W1,2019,Q,B,B1,top,0\n"
      "W1,2019,Q,B,B1,zone,1\n");
  EXPECT_EQ(d.size(), 4u);
  EXPECT_EQ(d.num_climbers(), 2u);
  EXPECT_EQ(d.num_problems(), 2u);
  EXPECT_NE(d.col(0), d.col(1));
  EXPECT_EQ(d.col(0), d.col(2));
}

TEST(ParseAttempts, BadOutcomeCitesLine) {
  std::string body;
  for (int i = 0; i < 5; ++i) body += "W1,2019,Q,A,B" + std::to_string(i) + ",top,1\n";
  body += "W1,2019,Q,A,B9,top,2\n";
  EXPECT_EQ(parse_error_line(body), 7u);
  try {
    parse(body);
  } catch (const ParseError& e) {
    EXPECT_EQ(e.column(), "outcome");
    EXPECT_NE(std::string(e.what()).find("t.csv:7"), std::string::npos);
  }
}

TEST(ParseAttempts, MalformedRowsNameLineAndColumn) {
  EXPECT_EQ(parse_error_line("W1,2019,Q,A,B1,top\n"), 2u);
  EXPECT_EQ(parse_error_line("W1,2019,Q,A,B1,top,1\nW1,x,Q,A,B2,top,1\n"), 3u);
  EXPECT_EQ(parse_error_line("W1,2019,X,A,B1,top,1\n"), 2u);
  EXPECT_EQ(parse_error_line("W1,2019,Q,A,B1,side,1\n"), 2u);
  EXPECT_EQ(parse_error_line("W1,2019,Q,,B1,top,1\n"), 2u);
  std::istringstream bad_header("a,b,c\n");
  EXPECT_THROW(parse_attempts(bad_header), ParseError);
}

TEST(ParseAttempts, DuplicateKeyIsNamed) {
  try {
    parse("W1,2019,Q,A,B1,top,1\nW1,2019,Q,A,B1,top,0\n");
    FAIL() << "expected a duplicate error";
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("duplicate"), std::string::npos);
    EXPECT_NE(msg.find("B1"), std::string::npos);
    EXPECT_NE(msg.find("A"), std::string::npos);
  }
}

TEST(ParseAttempts, CrlfAndBlankLines) {
  const Dataset d = parse("W1,2019,Q,A,B1,top,1\r\n\r\nW1,2019,S,A,B1,top,0\r\n");
  EXPECT_EQ(d.size(), 2u);
  EXPECT_EQ(d.attempt(1).round, Round::SemiFinal);
}

TEST(ParseAttempts, WriteRoundTrip) {
  const Dataset d = Dataset::from_attempts(bft::attempts_with_counts({{"A", 5}, {"B", 3}}));
  std::ostringstream out;
  write_attempts(out, d.attempts());
  std::istringstream in(out.str());
  const Dataset back = parse_attempts(in);
  ASSERT_EQ(back.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(back.attempt(i).climber, d.attempt(i).climber);
    EXPECT_EQ(back.attempt(i).outcome, d.attempt(i).outcome);
    EXPECT_EQ(back.raw_problem_label(i), d.raw_problem_label(i));
  }
}

TEST(ParseHeights, Examples) {
  std::istringstream in("climber,height_cm\nJan Hojer,188\nA Climber,\n");
  const auto h = parse_heights(in);
  ASSERT_EQ(h.size(), 2u);
  EXPECT_EQ(h[0].climber, "Jan Hojer");
  EXPECT_EQ(h[0].height_cm, 188.0);
  EXPECT_FALSE(h[1].height_cm.has_value());
}

TEST(ParseHeights, NonNumericHasLineNumber) {
  std::istringstream in("climber,height_cm\nY,170\nX,abc\n");
  try {
    parse_heights(in);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(ReplacementLevel, ZeroIsIdentity) {
  const Dataset d = Dataset::from_attempts(bft::attempts_with_counts({{"A", 3}, {"B", 1}}));
  const Dataset g = apply_replacement_level(d, 0);
  EXPECT_EQ(g.climber_groups(), d.climber_groups());
  EXPECT_EQ(g.num_climbers(), d.num_climbers());
}

TEST(ReplacementLevel, AboveMaxMergesAll) {
  const Dataset d = Dataset::from_attempts(bft::attempts_with_counts({{"A", 3}, {"B", 7}, {"C", 1}}));
  const Dataset g = apply_replacement_level(d, 8);
  EXPECT_EQ(g.num_climbers(), 1u);
  EXPECT_EQ(g.climber_index().label(0), kReplacement);
}

TEST(ReplacementLevel, HandCountedThreshold) {
  const Dataset d = Dataset::from_attempts(bft::attempts_with_counts({{"A", 30}, {"B", 120}, {"C", 5}}));
  const Dataset g = apply_replacement_level(d, 25);
  EXPECT_EQ(g.num_climbers(), 3u);
  EXPECT_EQ(g.climber_groups().at("A"), "A");
  EXPECT_EQ(g.climber_groups().at("B"), "B");
  EXPECT_EQ(g.climber_groups().at("C"), kReplacement);
}

TEST(ReplacementLevel, IdempotentAndMonotone) {
  const Dataset d = bft::random_dataset(40, 50, 0.4, 9);
  std::size_t prev = d.num_climbers() + 1;
  for (std::size_t n : {0, 5, 10, 15, 20, 25, 30, 60}) {
    const Dataset g = apply_replacement_level(d, n);
    const Dataset gg = apply_replacement_level(g, n);
    EXPECT_EQ(gg.climber_groups(), g.climber_groups()) << "N=" << n;
    EXPECT_LE(g.num_climbers(), prev);
    prev = g.num_climbers();
    for (std::size_t i = 0; i < g.size(); ++i)
      EXPECT_EQ(g.climber_index().label(g.row(i)), g.climber_groups().at(g.attempt(i).climber));
  }
}

TEST(ReplacementLevel, UnknownNameFallsBack) {
  const Dataset d = Dataset::from_attempts(bft::attempts_with_counts({{"A", 30}, {"C", 5}}));
  const Dataset g = apply_replacement_level(d, 25);
  EXPECT_EQ(g.resolve_climber("nobody"), g.climber_index().find(kReplacement));
  EXPECT_FALSE(d.resolve_climber("nobody").has_value());
}

TEST(ProblemGrouping, ZeroIsIdentity) {
  const Dataset d = bft::random_dataset(5, 5, 1.0, 2);
  EXPECT_EQ(apply_problem_grouping(d, 0).problem_groups(), d.problem_groups());
}

TEST(ProblemGrouping, AllSmallMergeToOne) {
  const Dataset d = bft::random_dataset(6, 8, 1.0, 2);
  const Dataset g = apply_problem_grouping(d, 10);
  EXPECT_EQ(g.num_problems(), 1u);
  EXPECT_EQ(g.problem_index().label(0), kRareProblem);
}

TEST(ProblemGrouping, HandCountedThreshold) {
  std::vector<AttemptRecord> a;
  const std::map<std::string, int> counts{{"p1", 12}, {"p2", 4}, {"p3", 3}};
  for (const auto& [p, c] : counts)
    for (int i = 0; i < c; ++i) a.push_back(bft::attempt("c" + std::to_string(i), p, i % 2));
  const Dataset g = apply_problem_grouping(Dataset::from_attempts(a), 10);
  EXPECT_EQ(g.num_problems(), 2u);
  EXPECT_TRUE(g.problem_index().contains(problem_label(bft::attempt("x", "p1", 0))));
  EXPECT_TRUE(g.problem_index().contains(kRareProblem));
}

TEST(ProblemGrouping, CountsDistinctClimbersNotAttempts) {
  std::vector<AttemptRecord> a;
  for (int r = 0; r < 3; ++r)
    for (int i = 0; i < 4; ++i)
      a.push_back(bft::attempt("c" + std::to_string(i), "p", 1, static_cast<Round>(r), HoldType::Top,
                               "comp" + std::to_string(r)));
  const Dataset d = Dataset::from_attempts(a);
  const Dataset g = apply_problem_grouping(d, 4);
  EXPECT_EQ(g.num_problems(), 3u);
  EXPECT_EQ(apply_problem_grouping(d, 5).num_problems(), 1u);
}

TEST(SplitFolds, ExactDivision) {
  const Dataset d = Dataset::from_attempts(bft::attempts_with_counts({{"A", 10}}));
  const FoldSplit s = split_folds(d, 5, 1);
  for (int f = 0; f < 5; ++f) EXPECT_EQ(s.test_indices(f).size(), 2u);
}

TEST(SplitFolds, Deterministic) {
  const Dataset d = Dataset::from_attempts(bft::attempts_with_counts({{"A", 10}}));
  EXPECT_EQ(split_folds(d, 5, 1).assignments, split_folds(d, 5, 1).assignments);
  EXPECT_NE(split_folds(d, 5, 1).assignments, split_folds(d, 5, 2).assignments);
}

TEST(SplitFolds, PigeonholeSizes) {
  const Dataset d = Dataset::from_attempts(bft::attempts_with_counts({{"A", 11}}));
  const FoldSplit s = split_folds(d, 5, 4);
  std::multiset<std::size_t> sizes;
  for (int f = 0; f < 5; ++f) sizes.insert(s.test_indices(f).size());
  EXPECT_EQ(sizes, (std::multiset<std::size_t>{2, 2, 2, 2, 3}));
}

TEST(SplitFolds, PartitionsAttempts) {
  const Dataset d = bft::random_dataset(20, 20, 0.5, 5);
  const FoldSplit s = split_folds(d, 5, 8);
  std::vector<int> seen(d.size(), 0);
  for (int f = 0; f < 5; ++f) {
    const auto test = s.test_indices(f);
    const auto train = s.train_indices(f);
    EXPECT_EQ(test.size() + train.size(), d.size());
    for (auto i : test) ++seen[i];
    std::vector<std::size_t> all(test);
    all.insert(all.end(), train.begin(), train.end());
    std::sort(all.begin(), all.end());
    EXPECT_EQ(std::adjacent_find(all.begin(), all.end()), all.end());
  }
  EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
}

TEST(SplitFolds, InvalidK) {
  const Dataset d = Dataset::from_attempts(bft::attempts_with_counts({{"A", 3}}));
  EXPECT_THROW(split_folds(d, 4, 0), Error);
  EXPECT_THROW(split_folds(d, 1, 0), Error);
}

TEST(Subset, IdentityGroupingOverSelection) {
  const Dataset d = Dataset::from_attempts(bft::attempts_with_counts({{"A", 4}, {"B", 2}}));
  const Dataset s = d.subset({4, 5});
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.num_climbers(), 1u);
  EXPECT_EQ(s.attempt(0).climber, "B");
}
