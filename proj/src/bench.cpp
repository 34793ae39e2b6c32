#include "hyperfind/bench.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "hyperfind/frontend.hpp"

namespace hyperfind::bench {

std::vector<Instance> load_manifest(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest '" + path + "'");
  nlohmann::json j = nlohmann::json::parse(in);
  if (!j.is_array()) throw std::runtime_error("manifest must be a JSON list");
  auto dir = std::filesystem::path(path).parent_path();
  std::vector<Instance> out;
  for (const auto &e : j) {
    Instance i;
    i.name = e.at("name").get<std::string>();
    std::filesystem::path file = e.at("file").get<std::string>();
    i.file = (file.is_absolute() ? file : dir / file).string();
    i.max_observations = e.value("max_observations", std::size_t{10});
    i.repetitions = std::max<std::size_t>(1, e.value("repetitions", std::size_t{10}));
    out.push_back(std::move(i));
  }
  return out;
}

std::vector<Result> run(const std::vector<Instance> &instances, const driver::SearchOptions &base) {
  std::vector<Result> out;
  for (const Instance &inst : instances) {
    Result r;
    r.name = inst.name;
    try {
      frontend::Problem prob = frontend::load_file(inst.file);
      driver::SearchOptions o = base;
      o.max_observations = inst.max_observations;
      std::vector<double> times;
      for (std::size_t rep = 0; rep < inst.repetitions; ++rep) {
        driver::Verdict v = driver::run(prob.spec, driver::Algorithm::Lazy, o);
        times.push_back(v.stats.wall_ms);
        r.verdict = driver::to_string(v.kind);
        r.k = v.k;
        r.combinations = v.stats.combinations;
      }
      std::sort(times.begin(), times.end());
      std::size_t m = times.size();
      r.median_ms = m % 2 ? times[m / 2] : (times[m / 2 - 1] + times[m / 2]) / 2;
    } catch (const std::exception &e) {
      r.verdict = "error";
      r.k.reset();
      r.error = e.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string to_text(const std::vector<Result> &results) {
  std::ostringstream os;
  os << std::left << std::setw(28) << "instance" << std::setw(14) << "verdict" << std::setw(6) << "k" << std::setw(14)
     << "combinations" << "median_ms\n";
  for (const auto &r : results) {
    os << std::left << std::setw(28) << r.name << std::setw(14) << r.verdict << std::setw(6)
       << (r.k ? std::to_string(*r.k) : "-") << std::setw(14) << r.combinations << std::fixed << std::setprecision(1)
       << r.median_ms;
    if (!r.error.empty()) os << "  " << r.error;
    os << "\n";
  }
  return os.str();
}

nlohmann::json to_json(const std::vector<Result> &results) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto &r : results) {
    nlohmann::json j{{"name", r.name},
                     {"verdict", r.verdict},
                     {"k", r.k ? nlohmann::json(*r.k) : nlohmann::json(nullptr)},
                     {"combinations", r.combinations},
                     {"median_ms", r.median_ms}};
    if (!r.error.empty()) j["error"] = r.error;
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace hyperfind::bench
