#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hyperfind/logic.hpp"

namespace hyperfind::graph {

/// Index of a location within its owning ProgramGraph.
struct Location {
  std::uint32_t id = 0;
  friend bool operator==(Location a, Location b) { return a.id == b.id; }
  friend bool operator!=(Location a, Location b) { return a.id != b.id; }
  friend bool operator<(Location a, Location b) { return a.id < b.id; }
};

struct Assign {
  std::string target;
  logic::Term expr;
};

struct Havoc {
  std::string target;
};

/// Effect-free transition. Used for the product's redirect edges and for
/// control flow that carries only a guard.
struct Skip {};

using Effect = std::variant<Skip, Assign, Havoc>;

struct Edge {
  Location src;
  Location dst;
  logic::Formula guard;
  Effect effect;
};

std::string to_string(const Effect &e);

/// Guarded control-flow graph. Edge order is declaration order and drives
/// every deterministic exploration over the graph.
///
/// The graph is not validated on construction so that malformed inputs can
/// be reported by validate(); every other consumer assumes a valid graph.
class ProgramGraph {
 public:
  ProgramGraph() = default;

  Location add_location(std::string name);
  void add_edge(Location src, Location dst, logic::Formula guard, Effect effect);
  void add_variable(const std::string &name);
  void set_initial(Location l) { initial_ = l; }

  std::size_t num_locations() const { return location_names_.size(); }
  const std::string &location_name(Location l) const { return location_names_.at(l.id); }
  std::optional<Location> find_location(const std::string &name) const;
  Location initial() const { return initial_; }
  const std::vector<Edge> &edges() const { return edges_; }
  /// Indices into edges(), in declaration order.
  const std::vector<std::size_t> &out_edges(Location l) const;
  /// Sorted, duplicate-free.
  const std::vector<std::string> &variables() const { return variables_; }
  bool has_variable(const std::string &name) const;

  /// Copy with every variable renamed to prefix + name.
  ProgramGraph with_prefixed_variables(const std::string &prefix) const;

 private:
  std::vector<std::string> location_names_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> out_edges_;
  std::vector<std::string> variables_;
  Location initial_{};
};

using GraphPtr = std::shared_ptr<const ProgramGraph>;

/// Sorted set of observed locations of one graph.
class ObservationSet {
 public:
  ObservationSet() = default;
  ObservationSet(std::initializer_list<Location> locs);
  explicit ObservationSet(std::vector<Location> locs);

  void insert(Location l);
  bool contains(Location l) const;
  bool empty() const { return locs_.empty(); }
  std::size_t size() const { return locs_.size(); }
  /// 0-based position of l in sorted order.
  std::optional<std::size_t> index_of(Location l) const;
  const std::vector<Location> &locations() const { return locs_; }
  auto begin() const { return locs_.begin(); }
  auto end() const { return locs_.end(); }

 private:
  std::vector<Location> locs_;
};

struct ValidationError {
  std::string message;
};

/// Returns every invariant violation found; empty means the graph is valid.
std::vector<ValidationError> validate(const ProgramGraph &g);
std::vector<ValidationError> validate(const ProgramGraph &g, const ObservationSet &obs);

/// One edge per line: `src -> dst [guard] effect`.
void dump(std::ostream &os, const ProgramGraph &g, const ObservationSet *obs = nullptr);

class ProductError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Where a product location came from.
struct ProductOrigin {
  int side = 1;          // 1 = first operand, 2 = second operand
  std::size_t copy = 0;  // G1(copy) or G2(copy)
  Location original;     // location in the operand graph
  bool reentry = false;  // true for the re-entry point of `original`
};

struct Reentry {
  ProgramGraph graph;
  std::vector<Location> reentry;  // reentry[i] belongs to obs.locations()[i]
};

/// First product step: every observed location hands its outgoing edges to
/// a fresh re-entry location and becomes a sink.
Reentry add_reentry_points(const ProgramGraph &g, const ObservationSet &obs);

struct AsyncProduct {
  ProgramGraph graph;
  ObservationSet observed;
  std::vector<ProductOrigin> origin;  // indexed by product location id
};

/// Asynchronous product of two graphs with disjoint variables. Executions
/// alternate between the operands at observation points; each observed
/// product state is the union of one observed state of each operand.
AsyncProduct async_product(const ProgramGraph &g1, const ObservationSet &o1,
                           const ProgramGraph &g2, const ObservationSet &o2);

}  // namespace hyperfind::graph
