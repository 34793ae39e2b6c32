#include "hyperfind/concrete.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace hyperfind::concrete {

using graph::Location;
using graph::ObservationSet;
using graph::ProgramGraph;

Domain::Domain(std::vector<logic::Value> values) : values_(std::move(values)) {
  std::sort(values_.begin(), values_.end());
  values_.erase(std::unique(values_.begin(), values_.end()), values_.end());
  if (values_.empty()) throw std::invalid_argument("havoc domain must be nonempty");
}

Domain Domain::range(logic::Value lo, logic::Value hi) {
  if (lo > hi) throw std::invalid_argument("empty havoc domain range");
  std::vector<logic::Value> v;
  for (logic::Value x = lo; x <= hi; ++x) v.push_back(x);
  return Domain(std::move(v));
}

bool Domain::contains(logic::Value v) const { return std::binary_search(values_.begin(), values_.end(), v); }

Memory initial_memory(const ProgramGraph &g) {
  Memory m;
  for (const auto &v : g.variables()) m.emplace(v, 0);
  return m;
}

State initial_state(const ProgramGraph &g) { return State{g.initial(), initial_memory(g)}; }

std::vector<Successor> successors(const ProgramGraph &g, const State &s, const Domain &domain) {
  std::vector<Successor> out;
  for (std::size_t idx : g.out_edges(s.loc)) {
    const graph::Edge &e = g.edges()[idx];
    if (!logic::eval(e.guard, s.mem)) continue;
    std::visit(
        [&](const auto &eff) {
          using T = std::decay_t<decltype(eff)>;
          if constexpr (std::is_same_v<T, graph::Skip>) {
            out.push_back({State{e.dst, s.mem}, idx});
          } else if constexpr (std::is_same_v<T, graph::Assign>) {
            Memory m = s.mem;
            m[eff.target] = logic::eval(eff.expr, s.mem);
            out.push_back({State{e.dst, std::move(m)}, idx});
          } else {
            for (logic::Value v : domain.values()) {
              Memory m = s.mem;
              m[eff.target] = v;
              out.push_back({State{e.dst, std::move(m)}, idx});
            }
          }
        },
        e.effect);
  }
  return out;
}

std::vector<State> step(const ProgramGraph &g, const State &s, const Domain &domain) {
  std::vector<State> out;
  for (auto &succ : successors(g, s, domain)) out.push_back(std::move(succ.state));
  return out;
}

Trace project(const Trace &t, const ObservationSet &obs) {
  Trace out;
  for (const State &s : t)
    if (obs.contains(s.loc)) out.push_back(s);
  return out;
}

std::size_t default_step_budget(const ProgramGraph &g, std::size_t k) {
  return 10 * std::max<std::size_t>(k, 1) * std::max<std::size_t>(g.num_locations(), 1);
}

Enumeration enumerate_observed(const ProgramGraph &g, const ObservationSet &obs, std::size_t k, const Domain &domain,
                               std::size_t step_budget) {
  struct Node {
    State state;
    std::size_t parent;  // index into nodes, npos for the root
    std::size_t depth;
    std::size_t prefix;  // index into prefixes
  };
  constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Enumeration result;
  if (k == 0) return result;

  // Observed prefixes are interned so that visited keys stay small.
  std::vector<Trace> prefixes;
  std::map<Trace, std::size_t> prefix_ids;
  auto intern = [&](Trace t) {
    auto [it, inserted] = prefix_ids.emplace(t, prefixes.size());
    if (inserted) prefixes.push_back(std::move(t));
    return it->second;
  };

  std::vector<Node> nodes;
  std::set<std::tuple<Location, Memory, std::size_t>> visited;
  std::deque<std::size_t> todo;

  auto rebuild = [&](std::size_t idx) {
    Trace full;
    for (std::size_t i = idx; i != npos; i = nodes[i].parent) full.push_back(nodes[i].state);
    std::reverse(full.begin(), full.end());
    return full;
  };
  auto visit = [&](State s, std::size_t parent, std::size_t depth, const Trace &prev_prefix) {
    Trace prefix = prev_prefix;
    if (obs.contains(s.loc)) prefix.push_back(s);
    std::size_t pid = intern(std::move(prefix));
    if (!visited.emplace(s.loc, s.mem, pid).second) return;
    nodes.push_back(Node{std::move(s), parent, depth, pid});
    std::size_t idx = nodes.size() - 1;
    if (prefixes[pid].size() == k)
      result.traces.push_back(ObservedTrace{prefixes[pid], rebuild(idx)});
    else
      todo.push_back(idx);
  };

  visit(initial_state(g), npos, 0, {});
  while (!todo.empty()) {
    std::size_t idx = todo.front();
    todo.pop_front();
    auto succ = successors(g, nodes[idx].state, domain);
    if (succ.empty()) continue;
    if (nodes[idx].depth >= step_budget) {
      result.complete = false;
      continue;
    }
    Trace prefix = prefixes[nodes[idx].prefix];
    for (auto &s : succ) visit(std::move(s.state), idx, nodes[idx].depth + 1, prefix);
  }
  return result;
}

ReplayResult replay(const ProgramGraph &g, const ObservationSet &obs, const Trace &observed, const Trace &full) {
  if (full.empty()) return {false, "empty trace", std::nullopt};
  if (!(full.front() == initial_state(g))) return {false, "trace does not start in the initial state", std::nullopt};
  for (std::size_t i = 0; i + 1 < full.size(); ++i) {
    const State &a = full[i], &b = full[i + 1];
    bool ok = false;
    for (std::size_t idx : g.out_edges(a.loc)) {
      const graph::Edge &e = g.edges()[idx];
      if (e.dst != b.loc || !logic::eval(e.guard, a.mem)) continue;
      ok = std::visit(
          [&](const auto &eff) {
            using T = std::decay_t<decltype(eff)>;
            if constexpr (std::is_same_v<T, graph::Skip>) {
              return b.mem == a.mem;
            } else if constexpr (std::is_same_v<T, graph::Assign>) {
              Memory m = a.mem;
              m[eff.target] = logic::eval(eff.expr, a.mem);
              return b.mem == m;
            } else {
              Memory m = b.mem;
              if (!m.count(eff.target)) return false;
              m[eff.target] = a.mem.at(eff.target);
              return m == a.mem;
            }
          },
          e.effect);
      if (ok) break;
    }
    if (!ok)
      return {false,
              "no edge from " + g.location_name(a.loc) + " to " + g.location_name(b.loc) + " explains step " +
                  std::to_string(i),
              i};
  }
  if (!(project(full, obs) == observed)) return {false, "observed projection does not match", std::nullopt};
  return {};
}

// ---------------------------------------------------------------- oracle

namespace {

struct Expansion {
  const HyperSpec &spec;
  std::size_t k;
  std::vector<Enumeration> sets;
  std::vector<const ObservedTrace *> bound;
  std::vector<ObservedTrace> witness;

  bool body_holds() const {
    for (std::size_t i = 0; i < k; ++i) {
      logic::Assignment rho;
      for (std::size_t q = 0; q < bound.size(); ++q)
        for (const auto &[var, val] : bound[q]->observed[i].mem) rho[var] = val;
      if (!logic::eval(spec.body, rho)) return false;
    }
    return true;
  }

  bool holds(std::size_t q) {
    if (q == spec.quantifiers.size()) return body_holds();
    bool forall = spec.quantifiers[q].kind == QuantKind::Forall;
    for (const ObservedTrace &t : sets[q].traces) {
      bound.push_back(&t);
      bool inner = holds(q + 1);
      bound.pop_back();
      if (forall && !inner) {
        if (witness.empty()) {
          for (std::size_t u = 0; u < q; ++u) witness.push_back(*bound[u]);
          witness.push_back(t);
        }
        return false;
      }
      if (!forall && inner) return true;
    }
    return forall;
  }
};

std::optional<Expansion> expand(const HyperSpec &spec, std::size_t k, const Domain &domain,
                                std::optional<std::size_t> step_budget, bool &complete) {
  Expansion ex{spec, k, {}, {}, {}};
  complete = true;
  for (const Quantifier &q : spec.quantifiers) {
    std::size_t budget = step_budget.value_or(default_step_budget(*q.graph, k));
    ex.sets.push_back(enumerate_observed(*q.graph, q.observed, k, domain, budget));
    complete = complete && ex.sets.back().complete;
  }
  return ex;
}

}  // namespace

std::optional<bool> holds_exactly(const HyperSpec &spec, std::size_t k, const Domain &domain,
                                  std::optional<std::size_t> step_budget) {
  if (k == 0) return true;
  bool complete = true;
  auto ex = expand(spec, k, domain, step_budget, complete);
  if (!complete) return std::nullopt;
  return ex->holds(0);
}

OracleVerdict oracle_check(const HyperSpec &spec, std::size_t k, const Domain &domain,
                           std::optional<std::size_t> step_budget) {
  OracleVerdict v;
  for (std::size_t kk = 1; kk <= k; ++kk) {
    bool complete = true;
    auto ex = expand(spec, kk, domain, step_budget, complete);
    v.k = kk;
    bool holds = ex->holds(0);
    if (!complete) {
      // A violation only counts when every existential set is exhaustive.
      bool exist_complete = true;
      for (std::size_t q = 0; q < spec.quantifiers.size(); ++q)
        if (spec.quantifiers[q].kind == QuantKind::Exists) exist_complete = exist_complete && ex->sets[q].complete;
      if (!holds && exist_complete) {
        v.outcome = OracleOutcome::Violated;
        v.witness = std::move(ex->witness);
        return v;
      }
      v.outcome = OracleOutcome::Inconclusive;
      return v;
    }
    if (!holds) {
      v.outcome = OracleOutcome::Violated;
      v.witness = std::move(ex->witness);
      return v;
    }
  }
  v.outcome = OracleOutcome::Holds;
  return v;
}

}  // namespace hyperfind::concrete
