#include "boulderfit/manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

#include <openssl/evp.h>

#include "boulderfit/error.hpp"

namespace boulderfit {

namespace {

struct MdCtxDeleter {
  void operator()(EVP_MD_CTX* ctx) const noexcept { EVP_MD_CTX_free(ctx); }
};
using MdCtx = std::unique_ptr<EVP_MD_CTX, MdCtxDeleter>;

MdCtx new_sha256() {
  MdCtx ctx(EVP_MD_CTX_new());
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("sha256 init failed");
  return ctx;
}

std::string finish(EVP_MD_CTX* ctx) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(ctx, md, &len) != 1) throw Error("sha256 final failed");
  std::ostringstream hex;
  hex << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < len; ++i) hex << std::setw(2) << static_cast<int>(md[i]);
  return hex.str();
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  auto ctx = new_sha256();
  EVP_DigestUpdate(ctx.get(), data.data(), data.size());
  return finish(ctx.get());
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  auto ctx = new_sha256();
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  return finish(ctx.get());
}

void RunManifest::set(std::string key, std::string value) { config_.emplace_back(std::move(key), std::move(value)); }

void RunManifest::add_input(const std::string& name, const std::filesystem::path& path) {
  inputs_.emplace_back(name, path.string() + " sha256=" + sha256_file(path));
}

std::string RunManifest::body() const {
  std::ostringstream out;
  out << "command=" << command_ << '\n';
  out << "tool_version=" << kToolVersion << '\n';
  for (const auto& [k, v] : config_) out << "config." << k << '=' << v << '\n';
  for (const auto& [k, v] : inputs_) out << "input." << k << '=' << v << '\n';
  for (const auto& n : notes_) out << "note=" << n << '\n';
  return out.str();
}

void RunManifest::write(const std::filesystem::path& dir) const {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
  std::ofstream out(dir / "manifest.txt", std::ios::binary);
  if (!out) throw Error("cannot write " + (dir / "manifest.txt").string());
  out << body() << "timestamp=" << stamp << '\n';
}

}  // namespace boulderfit
