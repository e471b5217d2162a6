#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <unistd.h>
#include <sstream>
#include <string>
#include <vector>

#include "boulderfit/data.hpp"

namespace bft {

inline boulderfit::AttemptRecord attempt(const std::string& climber, const std::string& problem, int outcome,
                                         boulderfit::Round round = boulderfit::Round::Qualifier,
                                         boulderfit::HoldType type = boulderfit::HoldType::Top,
                                         const std::string& comp = "C1") {
  boulderfit::AttemptRecord a;
  a.competition_id = comp;
  a.year = 2020;
  a.round = round;
  a.climber = climber;
  a.problem_key = problem;
  a.hold_type = type;
  a.outcome = outcome;
  return a;
}

// One attempt per (climber, problem) for each climber's count, spread over
// distinct problems so no key repeats.
inline std::vector<boulderfit::AttemptRecord> attempts_with_counts(
    const std::vector<std::pair<std::string, int>>& counts, std::uint32_t seed = 1) {
  std::mt19937 gen(seed);
  std::vector<boulderfit::AttemptRecord> out;
  for (const auto& [name, count] : counts)
    for (int k = 0; k < count; ++k)
      out.push_back(attempt(name, "P" + std::to_string(k), static_cast<int>(gen() & 1u)));
  return out;
}

// Random dataset with every cell of an m x n grid observed with probability density.
inline boulderfit::Dataset random_dataset(int m, int n, double density, std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<boulderfit::AttemptRecord> out;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      if (u(gen) < density) out.push_back(attempt("c" + std::to_string(i), "p" + std::to_string(j), u(gen) < 0.5));
  if (out.empty()) out.push_back(attempt("c0", "p0", 1));
  return boulderfit::Dataset::from_attempts(std::move(out));
}

// Central difference of f along coordinate x[i].
inline double central_difference(const std::function<double()>& f, double& xi, double h = 1e-5) {
  const double saved = xi;
  xi = saved + h;
  const double fp = f();
  xi = saved - h;
  const double fm = f();
  xi = saved;
  return (fp - fm) / (2 * h);
}

inline bool gradients_agree(double analytic, double numeric, double rel_tol = 1e-4, double abs_floor = 1e-7) {
  return std::abs(analytic - numeric) <= rel_tol * std::max({std::abs(analytic), std::abs(numeric), abs_floor / rel_tol});
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("boulderfit_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

}  // namespace bft
