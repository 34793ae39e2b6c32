// hyperfind FILE [options]
//
// Exit status: 0 no bug up to the bound, 1 bug found, 2 inconclusive,
// 3 usage or input error.

#include <CLI11.hpp>

#include <iostream>
#include <regex>

#include "hyperfind/concrete.hpp"
#include "hyperfind/driver.hpp"
#include "hyperfind/frontend.hpp"
#include "hyperfind/report.hpp"

using namespace hyperfind;

namespace {

constexpr int kNoBug = 0, kBug = 1, kInconclusive = 2, kUsage = 3;

std::pair<logic::Value, logic::Value> parse_domain(const std::string &s) {
  static const std::regex re(R"(\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*)");
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw CLI::ValidationError("--domain", "expected a..b, got '" + s + "'");
  logic::Value lo = std::stoll(m[1]), hi = std::stoll(m[2]);
  if (lo > hi) throw CLI::ValidationError("--domain", "empty range '" + s + "'");
  return {lo, hi};
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Bug finder for forall-exists safety hyperproperties"};
  std::string file;
  std::string algorithm = "lazy";
  std::size_t max_obs = 10;
  std::optional<std::size_t> step_budget;
  std::string solver_path;
  std::optional<long> timeout_ms;
  std::optional<std::string> emit_dir;
  bool oracle = false;
  std::optional<std::string> domain;
  std::string report_kind = "json";
  bool dump_graphs = false;

  app.add_option("file", file, "input file")->required();
  app.add_option("--algorithm", algorithm, "lazy or naive")->check(CLI::IsMember({"lazy", "naive"}));
  app.add_option("--max-observations", max_obs, "largest number of observations k")->check(CLI::PositiveNumber);
  app.add_option("--step-budget", step_budget, "transition cap per trace (default 10*k*|locations|)")
      ->check(CLI::PositiveNumber);
  app.add_option("--solver", solver_path, "SMT solver executable (default: yices-smt2, z3 or cvc5 on PATH)");
  app.add_option("--timeout-ms", timeout_ms, "timeout for every solver query")->check(CLI::PositiveNumber);
  app.add_option("--emit-smt", emit_dir, "write each query as an SMT-LIB script into DIR");
  app.add_flag("--oracle", oracle, "run the finite-domain concrete checker instead (needs --domain)");
  app.add_option("--domain", domain, "havoc domain a..b; required by --oracle, bounds fresh values in search queries otherwise");
  app.add_option("--report", report_kind, "json or text")->check(CLI::IsMember({"json", "text"}));
  app.add_flag("--dump-graphs", dump_graphs, "print the program graphs to stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  frontend::Problem prob;
  try {
    prob = frontend::load_file(file);
  } catch (const std::exception &e) {
    std::cerr << file << ":" << e.what() << "\n";
    return kUsage;
  }

  if (dump_graphs) {
    for (const auto &q : prob.spec.quantifiers) {
      std::cerr << "# " << q.trace << " in " << q.program << "\n";
      graph::dump(std::cerr, *q.graph, &q.observed);
    }
  }

  try {
    if (oracle) {
      if (!domain) {
        std::cerr << "--oracle requires --domain a..b\n";
        return kUsage;
      }
      auto [lo, hi] = parse_domain(*domain);
      auto v = concrete::oracle_check(prob.spec, max_obs, concrete::Domain::range(lo, hi), step_budget);
      if (report_kind == "json") std::cout << report::to_json(v, prob.spec).dump(2) << "\n";
      else std::cout << report::to_text(v, prob.spec);
      switch (v.outcome) {
        case concrete::OracleOutcome::Holds: return kNoBug;
        case concrete::OracleOutcome::Violated: return kBug;
        case concrete::OracleOutcome::Inconclusive: return kInconclusive;
      }
    }

    std::optional<solver::SolverConfig> cfg =
        solver_path.empty() ? solver::find_default_solver() : solver::config_for(solver_path);
    if (!cfg) {
      std::cerr << "no SMT solver found on PATH (tried yices-smt2, z3, cvc5); use --solver\n";
      return kUsage;
    }
    driver::SearchOptions opts = driver::SearchOptions::with_solver(*cfg);
    opts.max_observations = max_obs;
    opts.step_budget = step_budget;
    opts.emit_smt_dir = emit_dir;
    if (timeout_ms) {
      opts.feasibility.timeout = std::chrono::milliseconds(*timeout_ms);
      opts.query.timeout = std::chrono::milliseconds(*timeout_ms);
    }
    if (domain) opts.domain = parse_domain(*domain);

    HyperSpec gen = driver::generalize(prob.spec);
    if (dump_graphs && gen.quantifiers.size() != prob.spec.quantifiers.size()) {
      for (const auto &q : gen.quantifiers) {
        std::cerr << "# product " << q.trace << "\n";
        graph::dump(std::cerr, *q.graph, &q.observed);
      }
    }
    driver::Verdict v =
        algorithm == "lazy" ? driver::lazy_search(gen, opts) : driver::naive_search(gen, opts);
    if (report_kind == "json") std::cout << report::to_json(v, gen).dump(2) << "\n";
    else std::cout << report::to_text(v, gen);
    switch (v.kind) {
      case driver::VerdictKind::NoBugUpTo: return kNoBug;
      case driver::VerdictKind::BugFound: return kBug;
      case driver::VerdictKind::Inconclusive: return kInconclusive;
    }
  } catch (const CLI::ValidationError &e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInconclusive;
  }
  return kInconclusive;
}
