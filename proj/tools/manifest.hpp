#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace rankload::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Reproducibility record written alongside every output set. Fields are
// deterministic functions of the invocation, so identical inputs produce
// byte-identical manifests (and, by the determinism contract, outputs).
struct RunManifest {
  std::string command;
  nlohmann::ordered_json config;
  std::string input_digest;
  std::uint64_t seed = 0;
  std::string tool_version{kToolVersion};
  std::vector<std::string> outputs;  // basenames, sorted before writing

  nlohmann::ordered_json to_json() const;
  void write(const std::filesystem::path& path) const;
  static RunManifest read(const std::filesystem::path& path);
};

}  // namespace rankload::cli
