#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "hyperfind/concrete.hpp"
#include "hyperfind/encode.hpp"
#include "hyperfind/solver.hpp"
#include "hyperfind/spec.hpp"
#include "hyperfind/symexec.hpp"

namespace hyperfind::driver {

/// Folds the universal block and the existential block into one product
/// quantifier each. Body variables are already namespaced by trace, so the
/// body carries over unchanged.
HyperSpec generalize(const HyperSpec &spec);

enum class Algorithm { Lazy, Naive };

struct SearchOptions {
  std::size_t max_observations = 10;
  std::optional<std::size_t> step_budget;  // default: 10 * k * |locations| per graph
  solver::SolverConfig feasibility;        // per-edge checks during exploration
  solver::SolverConfig query;              // lazy / naive queries
  std::optional<std::string> emit_smt_dir;
  encode::DomainBounds domain;  // test-only finitization of fresh variables

  /// Both solver configs from `solver` with the default timeouts
  /// (5 s feasibility, 60 s queries).
  static SearchOptions with_solver(const solver::SolverConfig &solver);
};

enum class VerdictKind { BugFound, NoBugUpTo, Inconclusive };
enum class InconclusiveReason { None, Budget, SolverUnknown, NotEncodable };

std::string to_string(VerdictKind k);
std::string to_string(InconclusiveReason r);

struct Counterexample {
  symexec::ObservedSymTrace universal;
  logic::Assignment model;
  concrete::Trace observed;  // concretized projection, k states
  concrete::Trace full;      // concretized full trace
  logic::Formula explanation;
  concrete::ReplayResult replay;
};

struct SearchStats {
  /// Trace combinations encoded: for each lazy query, the number of
  /// existential traces it ranges over (1 for universal-only specs); for
  /// naive queries, the product of the trace-set sizes.
  std::size_t combinations = 0;
  std::size_t queries = 0;            // lazy or naive queries issued
  std::size_t sat_calls = 0;          // every solver check-sat, feasibility included
  std::size_t universal_traces = 0;   // universal traces yielded, all k
  std::size_t existential_traces = 0; // existential traces materialized, all k
  double wall_ms = 0;
};

struct Verdict {
  VerdictKind kind = VerdictKind::NoBugUpTo;
  std::size_t k = 0;  // BugFound: detection bound; otherwise the last bound searched
  InconclusiveReason reason = InconclusiveReason::None;
  std::string detail;
  std::optional<Counterexample> counterexample;  // lazy search only
  SearchStats stats;
};

/// Lazy search on a spec with one universal and at most one existential
/// quantifier (apply generalize() first).
Verdict lazy_search(const HyperSpec &spec, const SearchOptions &options);

/// Full-encoding search; reports the bound but no counterexample.
Verdict naive_search(const HyperSpec &spec, const SearchOptions &options);

/// generalize() followed by the selected search.
Verdict run(const HyperSpec &spec, Algorithm algorithm, const SearchOptions &options);

}  // namespace hyperfind::driver
