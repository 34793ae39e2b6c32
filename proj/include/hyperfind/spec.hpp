#pragma once

#include <string>
#include <vector>

#include "hyperfind/graph.hpp"
#include "hyperfind/logic.hpp"

namespace hyperfind {

enum class QuantKind { Forall, Exists };

/// One trace quantifier bound to a program graph and its observation points.
///
/// Graph variables carry the trace-variable prefix (`pi1.x`), so the graphs
/// of distinct quantifiers never share variables. After product
/// generalization a quantifier may stand for several original trace
/// variables; `members` lists them in order.
struct Quantifier {
  QuantKind kind = QuantKind::Forall;
  std::string trace;
  std::vector<std::string> members;
  std::string program;
  graph::GraphPtr graph;
  graph::ObservationSet observed;
};

/// Quantifier prefix followed by an invariant `always (body)`. Body
/// variables are the prefixed program variables of the quantified graphs.
struct HyperSpec {
  std::vector<Quantifier> quantifiers;
  logic::Formula body;

  std::size_t num_universal() const;
  std::size_t num_existential() const;
};

inline std::size_t HyperSpec::num_universal() const {
  std::size_t n = 0;
  for (const auto &q : quantifiers) n += q.kind == QuantKind::Forall;
  return n;
}

inline std::size_t HyperSpec::num_existential() const { return quantifiers.size() - num_universal(); }

/// Name of the body variable that denotes program variable `var` on trace `trace`.
inline std::string trace_variable(const std::string &trace, const std::string &var) {
  return trace + "." + var;
}

}  // namespace hyperfind
