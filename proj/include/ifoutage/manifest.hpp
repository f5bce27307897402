#pragma once

// Run manifests: every CSV the CLI writes gets a sibling JSON file with the
// command, all resolved parameters, the seed, the library version and the
// wall time.  Re-running a manifest reproduces the CSV byte for byte.

#include <chrono>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ifoutage/version.hpp"

namespace ifoutage {

struct RunManifest {
  std::string command;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::string version = kVersion;
  double wall_time_seconds = 0.0;

  void save(const std::string& path) const {
    nlohmann::json j;
    j["command"] = command;
    j["params"] = params;
    j["seed"] = seed;
    j["version"] = version;
    j["wall_time_seconds"] = wall_time_seconds;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write manifest: " + path);
    out << j.dump(2) << '\n';
  }

  static RunManifest load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open manifest: " + path);
    nlohmann::json j;
    in >> j;
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.params = j.at("params");
    m.seed = j.at("seed").get<std::uint64_t>();
    m.version = j.value("version", std::string{});
    m.wall_time_seconds = j.value("wall_time_seconds", 0.0);
    return m;
  }
};

class WallClock {
 public:
  WallClock() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace ifoutage
