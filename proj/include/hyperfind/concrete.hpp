#pragma once

// Concrete semantics over a finite havoc domain: successor computation,
// bounded enumeration of observed traces, a brute-force checker for the
// bounded semantics of a specification, and trace replay.

#include <optional>
#include <string>
#include <vector>

#include "hyperfind/graph.hpp"
#include "hyperfind/logic.hpp"
#include "hyperfind/spec.hpp"

namespace hyperfind::concrete {

using Memory = logic::Assignment;

struct State {
  graph::Location loc;
  Memory mem;
  friend bool operator==(const State &a, const State &b) { return a.loc == b.loc && a.mem == b.mem; }
  friend bool operator<(const State &a, const State &b) {
    return a.loc != b.loc ? a.loc < b.loc : a.mem < b.mem;
  }
};

using Trace = std::vector<State>;

/// Values a havoc may pick, ascending and duplicate-free.
class Domain {
 public:
  explicit Domain(std::vector<logic::Value> values);
  static Domain range(logic::Value lo, logic::Value hi);
  const std::vector<logic::Value> &values() const { return values_; }
  bool contains(logic::Value v) const;

 private:
  std::vector<logic::Value> values_;
};

/// All variables of g mapped to 0.
Memory initial_memory(const graph::ProgramGraph &g);
State initial_state(const graph::ProgramGraph &g);

struct Successor {
  State state;
  std::size_t edge;  // index into g.edges()
};

/// Successors in edge declaration order, havoc values ascending.
std::vector<Successor> successors(const graph::ProgramGraph &g, const State &s, const Domain &domain);
std::vector<State> step(const graph::ProgramGraph &g, const State &s, const Domain &domain);

/// Keeps only the states at observed locations.
Trace project(const Trace &t, const graph::ObservationSet &obs);

/// Default cap on transitions per trace: 10 * k * |locations|.
std::size_t default_step_budget(const graph::ProgramGraph &g, std::size_t k);

struct ObservedTrace {
  Trace observed;  // exactly k states
  Trace full;      // a full trace ending at the k-th observation
};

struct Enumeration {
  std::vector<ObservedTrace> traces;  // discovery order, distinct projections
  bool complete = true;               // false when the budget cut off a live frontier
};

Enumeration enumerate_observed(const graph::ProgramGraph &g, const graph::ObservationSet &obs, std::size_t k,
                               const Domain &domain, std::size_t step_budget);

struct ReplayResult {
  bool valid = true;
  std::string reason;
  std::optional<std::size_t> step;  // index of the offending transition
};

/// Checks that `full` is a run of g from the initial state and that its
/// projection on obs is `observed`.
ReplayResult replay(const graph::ProgramGraph &g, const graph::ObservationSet &obs, const Trace &observed,
                    const Trace &full);

enum class OracleOutcome { Holds, Violated, Inconclusive };

struct OracleVerdict {
  OracleOutcome outcome = OracleOutcome::Holds;
  std::size_t k = 0;                 // earliest violating bound, or the bound reached
  std::vector<ObservedTrace> witness;  // one trace per universal quantifier
};

/// Exact-k bounded semantics. nullopt when an enumeration was incomplete.
std::optional<bool> holds_exactly(const HyperSpec &spec, std::size_t k, const Domain &domain,
                                  std::optional<std::size_t> step_budget = std::nullopt);

/// Upper-bounded semantics by quantifier expansion for every k' in 1..k.
/// k = 0 holds vacuously.
OracleVerdict oracle_check(const HyperSpec &spec, std::size_t k, const Domain &domain,
                           std::optional<std::size_t> step_budget = std::nullopt);

}  // namespace hyperfind::concrete
