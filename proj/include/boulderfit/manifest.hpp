#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace boulderfit {

inline constexpr std::string_view kToolVersion = "0.1.0";

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

// Record of one CLI run, written as manifest.txt in the output directory.
// Everything but the final timestamp line is a function of the inputs.
class RunManifest {
 public:
  explicit RunManifest(std::string command) : command_(std::move(command)) {}

  void set(std::string key, std::string value);
  void add_input(const std::string& name, const std::filesystem::path& path);
  void note(std::string text) { notes_.push_back(std::move(text)); }

  const std::vector<std::pair<std::string, std::string>>& inputs() const noexcept { return inputs_; }
  std::string body() const;  // manifest without the timestamp
  void write(const std::filesystem::path& dir) const;

 private:
  std::string command_;
  std::vector<std::pair<std::string, std::string>> config_;
  std::vector<std::pair<std::string, std::string>> inputs_;  // name -> "path sha256"
  std::vector<std::string> notes_;
};

}  // namespace boulderfit
