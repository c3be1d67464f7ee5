#pragma once

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "rankload/message.hpp"
#include "rankload/stream_io.hpp"

namespace rankload::test {

namespace fs = std::filesystem;

// Scratch directory removed on destruction.
class TempDir {
public:
  TempDir() {
    static std::atomic<unsigned> counter{0};
    const unsigned id = counter.fetch_add(1);
    path_ = fs::temp_directory_path() /
            ("rankload_test_" + std::to_string(::getpid()) + "_" + std::to_string(id));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path file(const std::string& name) const { return path_ / name; }

private:
  fs::path path_;
};

struct CommandResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline std::string shell_quote(const std::string& arg) {
  std::string quoted = "'";
  for (const char c : arg) {
    if (c == '\'') {
      quoted += "'\\''";
    } else {
      quoted += c;
    }
  }
  quoted += "'";
  return quoted;
}

// Runs the installed CLI binary with the given arguments, capturing stdout,
// stderr and the exit code. `env_prefix` may hold e.g. "RANKLOAD_SEED=7".
inline CommandResult run_tool(const std::vector<std::string>& args,
                              const std::string& env_prefix = "") {
  const TempDir scratch;
  const fs::path out_file = scratch.file("stdout.txt");
  const fs::path err_file = scratch.file("stderr.txt");

  std::string command;
  if (!env_prefix.empty()) {
    command += env_prefix;
    command += ' ';
  }
  command += shell_quote(RANKLOAD_CLI_PATH);
  for (const auto& arg : args) {
    command += ' ';
    command += shell_quote(arg);
  }
  command += " > " + shell_quote(out_file.string()) + " 2> " + shell_quote(err_file.string());

  const int status = std::system(command.c_str());
  CommandResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = read_file(out_file);
  result.err = read_file(err_file);
  return result;
}

// Shorthand for building messages in tests.
inline Message msg(std::string id, Instant ts, double score, bool relevant) {
  return {std::move(id), ts, score, relevant, std::nullopt};
}

// Random stream built directly from messages; independent of the synthetic
// generator so generator tests do not check the generator against itself.
inline Stream random_stream(unsigned seed, Instant start, std::int64_t duration_minutes,
                            double per_minute = 1.5) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Message> messages;
  std::size_t next_id = 1;
  for (std::int64_t minute = 0; minute < duration_minutes; ++minute) {
    double expected = per_minute;
    while (expected > 0.0) {
      if (unit(rng) < expected) {
        messages.push_back(msg("r" + std::to_string(next_id++),
                               start + minute * 60 + static_cast<Instant>(unit(rng) * 60.0),
                               unit(rng), unit(rng) < 0.4));
      }
      expected -= 1.0;
    }
  }
  return Stream::create(std::move(messages));
}

}  // namespace rankload::test
