#include "hyperfind/symexec.hpp"

#include <algorithm>

namespace hyperfind::symexec {

using graph::Location;
using logic::Formula;

logic::VarSet free_vars(const SymTrace &t) {
  logic::VarSet out;
  for (const SymState &s : t) {
    logic::collect_free_vars(s.path, out);
    for (const auto &[var, term] : s.mem) logic::collect_free_vars(term, out);
  }
  return out;
}

std::string FreshSupply::next() {
  for (;;) {
    std::string name = "v" + std::to_string(counter_++);
    if (reserved_.count(name)) continue;
    ++issued_;
    return name;
  }
}

solver::SatStatus SolverPathChecker::check(const Formula &path) {
  for (const auto &v : logic::free_vars(path)) session_.declare(v);
  session_.push();
  session_.assert_formula(path);
  auto r = session_.check();
  session_.pop();
  if (r.unknown()) ++unknowns_;
  return r.status;
}

solver::SatStatus DomainPathChecker::check(const Formula &path) {
  ++calls_;
  auto vars = logic::free_vars(path);
  std::vector<std::string> names(vars.begin(), vars.end());
  std::vector<std::size_t> idx(names.size(), 0);
  const auto &vals = domain_.values();
  for (;;) {
    logic::Assignment rho;
    for (std::size_t i = 0; i < names.size(); ++i) rho[names[i]] = vals[idx[i]];
    if (logic::eval(path, rho)) return solver::SatStatus::Sat;
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == vals.size()) idx[i++] = 0;
    if (i == idx.size()) return solver::SatStatus::Unsat;
  }
}

SymState initial_state(const graph::ProgramGraph &g) {
  SymState s{g.initial(), logic::mk_true(), {}};
  for (const auto &v : g.variables()) s.mem.emplace(v, logic::mk_int(0));
  return s;
}

namespace {

logic::Substitution as_substitution(const SymMemory &m) { return logic::Substitution(m.begin(), m.end()); }

std::optional<SymState> step_edge(const graph::Edge &e, const SymState &s, FreshSupply &supply,
                                  PathChecker &checker) {
  Formula guard = logic::substitute(e.guard, as_substitution(s.mem));
  if (guard.is_false()) return std::nullopt;
  Formula path = logic::mk_and(s.path, guard);
  if (path.is_false()) return std::nullopt;
  // A guard that folds to true cannot make a feasible path infeasible.
  if (!guard.is_true() && !path.is_true() && checker.check(path) == solver::SatStatus::Unsat) return std::nullopt;

  SymState out{e.dst, path, s.mem};
  std::visit(
      [&](const auto &eff) {
        using T = std::decay_t<decltype(eff)>;
        if constexpr (std::is_same_v<T, graph::Assign>) {
          out.mem[eff.target] = logic::substitute(eff.expr, as_substitution(s.mem));
        } else if constexpr (std::is_same_v<T, graph::Havoc>) {
          out.mem[eff.target] = logic::mk_var(supply.next());
        }
      },
      e.effect);
  return out;
}

}  // namespace

std::vector<SymTrace> extend(const graph::ProgramGraph &g, const SymTrace &t, FreshSupply &supply,
                             PathChecker &checker) {
  std::vector<SymTrace> out;
  for (std::size_t idx : g.out_edges(t.back().loc)) {
    if (auto s = step_edge(g.edges()[idx], t.back(), supply, checker)) {
      SymTrace ext = t;
      ext.push_back(std::move(*s));
      out.push_back(std::move(ext));
    }
  }
  return out;
}

// ---------------------------------------------------------------- stream

struct ObservationStream::Node {
  SymState state;
  std::shared_ptr<const Node> parent;
  std::size_t depth = 0;
  std::size_t observed = 0;
};

ObservationStream::ObservationStream(graph::GraphPtr g, graph::ObservationSet obs, std::size_t n,
                                     FreshSupply &supply, PathChecker &checker, std::size_t step_budget)
    : graph_(std::move(g)),
      obs_(std::move(obs)),
      n_(n),
      supply_(supply),
      checker_(checker),
      budget_(step_budget),
      calls_at_start_(checker.calls()) {
  if (n_ == 0) return;
  auto root = std::make_shared<Node>();
  root->state = initial_state(*graph_);
  root->observed = obs_.contains(root->state.loc) ? 1 : 0;
  admit(std::move(root));
}

ObservationStream::~ObservationStream() = default;

void ObservationStream::admit(std::shared_ptr<const Node> node) {
  stats_.max_depth = std::max(stats_.max_depth, node->depth);
  if (node->observed == n_) ready_.push_back(std::move(node));
  else todo_.push_back(std::move(node));
}

void ObservationStream::expand(const std::shared_ptr<const Node> &node) {
  std::vector<SymState> succ;
  for (std::size_t idx : graph_->out_edges(node->state.loc)) {
    if (auto s = step_edge(graph_->edges()[idx], node->state, supply_, checker_)) {
      succ.push_back(std::move(*s));
      if (node->depth >= budget_) break;  // one witness suffices to flag the cut
    }
  }
  if (succ.empty()) return;
  if (node->depth >= budget_) {
    incomplete_ = true;
    return;
  }
  for (auto &s : succ) {
    auto child = std::make_shared<Node>();
    child->observed = node->observed + (obs_.contains(s.loc) ? 1 : 0);
    child->state = std::move(s);
    child->parent = node;
    child->depth = node->depth + 1;
    admit(std::move(child));
  }
}

std::optional<ObservedSymTrace> ObservationStream::next() {
  while (ready_.empty() && !todo_.empty()) {
    auto node = std::move(todo_.front());
    todo_.pop_front();
    expand(node);
  }
  if (ready_.empty()) return std::nullopt;
  auto node = std::move(ready_.front());
  ready_.pop_front();
  ++stats_.traces_yielded;
  return materialize(node);
}

ObservedSymTrace ObservationStream::materialize(const std::shared_ptr<const Node> &node) const {
  ObservedSymTrace out;
  for (const Node *p = node.get(); p; p = p->parent.get()) out.full.push_back(p->state);
  std::reverse(out.full.begin(), out.full.end());
  for (const SymState &s : out.full)
    if (obs_.contains(s.loc)) out.observed.push_back(s);
  return out;
}

ExplorationStats ObservationStream::stats() const {
  ExplorationStats s = stats_;
  s.sat_calls = checker_.calls() - calls_at_start_;
  return s;
}

SymEnumeration observe_all(graph::GraphPtr g, const graph::ObservationSet &obs, std::size_t n, FreshSupply &supply,
                           PathChecker &checker, std::size_t step_budget) {
  ObservationStream stream(std::move(g), obs, n, supply, checker, step_budget);
  SymEnumeration out;
  while (auto t = stream.next()) out.traces.push_back(std::move(*t));
  out.complete = !stream.incomplete();
  out.stats = stream.stats();
  return out;
}

concrete::Trace concretize(const SymTrace &t, const logic::Assignment &rho) {
  concrete::Trace out;
  out.reserve(t.size());
  for (const SymState &s : t) {
    concrete::State c{s.loc, {}};
    for (const auto &[var, term] : s.mem) c.mem[var] = logic::eval(term, rho);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace hyperfind::symexec
