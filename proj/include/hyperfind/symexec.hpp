#pragma once

// Symbolic execution of program graphs: breadth-first unwinding with
// per-edge feasibility checks, streaming the observed symbolic traces with
// a given number of observations.

#include <cstddef>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hyperfind/concrete.hpp"
#include "hyperfind/graph.hpp"
#include "hyperfind/logic.hpp"
#include "hyperfind/solver.hpp"

namespace hyperfind::symexec {

using SymMemory = std::map<std::string, logic::Term>;

struct SymState {
  graph::Location loc;
  logic::Formula path;
  SymMemory mem;
};

using SymTrace = std::vector<SymState>;

inline const logic::Formula &path(const SymTrace &t) { return t.back().path; }

/// Free variables of every path formula and memory term along t.
logic::VarSet free_vars(const SymTrace &t);

/// Produces v0, v1, ... skipping reserved names. Share one supply per run
/// so that traces of different quantifiers never share fresh variables.
class FreshSupply {
 public:
  explicit FreshSupply(logic::VarSet reserved = {}) : reserved_(std::move(reserved)) {}
  std::string next();
  std::size_t issued() const { return issued_; }

 private:
  logic::VarSet reserved_;
  std::size_t counter_ = 0;
  std::size_t issued_ = 0;
};

/// Decides whether a path formula is satisfiable. Unknown counts as
/// feasible for exploration purposes.
class PathChecker {
 public:
  virtual ~PathChecker() = default;
  virtual solver::SatStatus check(const logic::Formula &path) = 0;
  virtual std::size_t calls() const = 0;
  std::size_t unknowns() const { return unknowns_; }

 protected:
  std::size_t unknowns_ = 0;
};

/// push / assert / check / pop on one persistent solver session.
class SolverPathChecker : public PathChecker {
 public:
  explicit SolverPathChecker(const solver::SolverConfig &config) : session_(config) {}
  solver::SatStatus check(const logic::Formula &path) override;
  std::size_t calls() const override { return session_.checks(); }

 private:
  solver::Session session_;
};

/// Brute force over a finite domain; for tests that must not depend on a
/// solver. Path formulas must be quantifier-free.
class DomainPathChecker : public PathChecker {
 public:
  explicit DomainPathChecker(concrete::Domain domain) : domain_(std::move(domain)) {}
  solver::SatStatus check(const logic::Formula &path) override;
  std::size_t calls() const override { return calls_; }

 private:
  concrete::Domain domain_;
  std::size_t calls_ = 0;
};

SymState initial_state(const graph::ProgramGraph &g);

/// One symbolic step along every feasible out-edge of the last state, in
/// edge declaration order.
std::vector<SymTrace> extend(const graph::ProgramGraph &g, const SymTrace &t, FreshSupply &supply,
                             PathChecker &checker);

struct ObservedSymTrace {
  SymTrace observed;  // projection on the observation set, n states
  SymTrace full;      // full trace ending at the n-th observation
  const logic::Formula &path() const { return symexec::path(full); }
};

struct ExplorationStats {
  std::size_t traces_yielded = 0;
  std::size_t sat_calls = 0;
  std::size_t max_depth = 0;
};

/// Lazily yields the observed symbolic traces with exactly n observations,
/// breadth-first by transition depth. Traces longer than step_budget
/// transitions are not explored; if one of them could still be extended,
/// the stream is marked incomplete.
class ObservationStream {
 public:
  ObservationStream(graph::GraphPtr g, graph::ObservationSet obs, std::size_t n, FreshSupply &supply,
                    PathChecker &checker, std::size_t step_budget);
  ~ObservationStream();

  std::optional<ObservedSymTrace> next();
  /// Meaningful once next() has returned nullopt.
  bool incomplete() const { return incomplete_; }
  ExplorationStats stats() const;

 private:
  struct Node;
  void expand(const std::shared_ptr<const Node> &node);
  void admit(std::shared_ptr<const Node> node);
  ObservedSymTrace materialize(const std::shared_ptr<const Node> &node) const;

  graph::GraphPtr graph_;
  graph::ObservationSet obs_;
  std::size_t n_;
  FreshSupply &supply_;
  PathChecker &checker_;
  std::size_t budget_;
  std::size_t calls_at_start_;
  std::deque<std::shared_ptr<const Node>> todo_;
  std::deque<std::shared_ptr<const Node>> ready_;
  bool incomplete_ = false;
  ExplorationStats stats_;
};

struct SymEnumeration {
  std::vector<ObservedSymTrace> traces;
  bool complete = true;
  ExplorationStats stats;
};

/// Drains a fresh stream.
SymEnumeration observe_all(graph::GraphPtr g, const graph::ObservationSet &obs, std::size_t n, FreshSupply &supply,
                           PathChecker &checker, std::size_t step_budget);

/// Evaluates every symbolic memory under rho.
concrete::Trace concretize(const SymTrace &t, const logic::Assignment &rho);

}  // namespace hyperfind::symexec
