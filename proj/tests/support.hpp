#pragma once

#include "ifsgraph/ifsgraph.hpp"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace testing_support {

inline std::string data_path(const std::string& rel) { return std::string(IFSGRAPH_DATA_DIR) + "/" + rel; }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ifsgraph::IfsSpec load_spec(const std::string& name) {
  return ifsgraph::spec_from_text(read_text(data_path("specs/" + name)));
}

inline ifsgraph::Rational q(long n, long d = 1) { return {ifsgraph::Integer(n), ifsgraph::Integer(d)}; }

/// The four-map example over Q(i): s = rotation by 90 degrees, g = 2 - s.
inline ifsgraph::IfsSpec fixture_spec() { return load_spec("fixture.json"); }

struct CommandResult {
  int exit_code = -1;
  std::string out;
};

/// Runs the CLI with `args` (already shell-quoted), capturing stdout.
inline CommandResult run_cli(const std::string& args) {
  const std::string cmd = std::string(IFSGRAPH_CLI_PATH) + " " + args + " 2>/dev/null";
  CommandResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("ifsgraph-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  [[nodiscard]] const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing_support
