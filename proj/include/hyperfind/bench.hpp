#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperfind/driver.hpp"

namespace hyperfind::bench {

struct Instance {
  std::string name;
  std::string file;  // resolved against the manifest's directory
  std::size_t max_observations = 10;
  std::size_t repetitions = 10;
};

/// JSON list of {name, file, max_observations, repetitions}.
std::vector<Instance> load_manifest(const std::string &path);

struct Result {
  std::string name;
  std::string verdict;  // driver verdict name, or "error"
  std::optional<std::size_t> k;
  std::size_t combinations = 0;
  double median_ms = 0;
  std::string error;
};

/// Runs every instance; a failing instance becomes an error row.
std::vector<Result> run(const std::vector<Instance> &instances, const driver::SearchOptions &base);

std::string to_text(const std::vector<Result> &results);
nlohmann::json to_json(const std::vector<Result> &results);

}  // namespace hyperfind::bench
