#include "manifest.hpp"

#include <algorithm>

#include "rankload/errors.hpp"
#include "rankload/stream_io.hpp"

namespace rankload::cli {

nlohmann::ordered_json RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["config"] = config;
  j["input_digest"] = input_digest;
  std::vector<std::string> sorted = outputs;
  std::sort(sorted.begin(), sorted.end());
  j["outputs"] = sorted;
  j["seed"] = seed;
  j["tool_version"] = tool_version;
  return j;
}

void RunManifest::write(const std::filesystem::path& path) const {
  write_file_atomic(path, to_json().dump(2) + "\n");
}

RunManifest RunManifest::read(const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("invalid manifest \"" + path.string() + "\": " + e.what());
  }
  RunManifest m;
  try {
    m.command = j.at("command").get<std::string>();
    m.config = j.at("config");
    m.input_digest = j.at("input_digest").get<std::string>();
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.tool_version = j.at("tool_version").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("malformed manifest \"" + path.string() + "\": " + e.what());
  }
  return m;
}

}  // namespace rankload::cli
