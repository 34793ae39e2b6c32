#include "hyperfind/driver.hpp"

#include <filesystem>
#include <fstream>

#include "hyperfind/smtlib.hpp"

namespace hyperfind::driver {

using logic::Formula;

std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::BugFound: return "bug_found";
    case VerdictKind::NoBugUpTo: return "no_bug_up_to";
    case VerdictKind::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::string to_string(InconclusiveReason r) {
  switch (r) {
    case InconclusiveReason::None: return "";
    case InconclusiveReason::Budget: return "budget";
    case InconclusiveReason::SolverUnknown: return "solver-unknown";
    case InconclusiveReason::NotEncodable: return "not-encodable";
  }
  return "?";
}

SearchOptions SearchOptions::with_solver(const solver::SolverConfig &s) {
  SearchOptions o;
  o.feasibility = s;
  o.feasibility.timeout = std::chrono::milliseconds(5000);
  o.query = s;
  o.query.timeout = std::chrono::milliseconds(60000);
  return o;
}

// ---------------------------------------------------------------- generalize

namespace {

Quantifier fold(const std::vector<const Quantifier *> &block) {
  Quantifier acc = *block.front();
  for (std::size_t i = 1; i < block.size(); ++i) {
    const Quantifier &q = *block[i];
    graph::AsyncProduct p = graph::async_product(*acc.graph, acc.observed, *q.graph, q.observed);
    acc.graph = std::make_shared<const graph::ProgramGraph>(std::move(p.graph));
    acc.observed = std::move(p.observed);
    acc.trace += "*" + q.trace;
    acc.program += "*" + q.program;
    acc.members.insert(acc.members.end(), q.members.begin(), q.members.end());
  }
  return acc;
}

}  // namespace

HyperSpec generalize(const HyperSpec &spec) {
  std::vector<const Quantifier *> all, ex;
  for (const auto &q : spec.quantifiers) (q.kind == QuantKind::Forall ? all : ex).push_back(&q);
  if (all.empty()) throw std::invalid_argument("specification has no universal quantifier");
  HyperSpec out;
  out.body = spec.body;
  out.quantifiers.push_back(fold(all));
  if (!ex.empty()) out.quantifiers.push_back(fold(ex));
  return out;
}

// ---------------------------------------------------------------- search

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

logic::VarSet reserved_names(const HyperSpec &spec) {
  logic::VarSet r;
  for (const auto &q : spec.quantifiers)
    for (const auto &v : q.graph->variables()) r.insert(v);
  return r;
}

std::size_t budget_for(const SearchOptions &o, const Quantifier &q, std::size_t k) {
  return o.step_budget.value_or(concrete::default_step_budget(*q.graph, k));
}

void emit(const SearchOptions &o, const std::string &name, const solver::SolverConfig &cfg, const logic::VarSet &free,
          const Formula &f) {
  if (!o.emit_smt_dir) return;
  std::filesystem::create_directories(*o.emit_smt_dir);
  std::ofstream out(std::filesystem::path(*o.emit_smt_dir) / (name + ".smt2"));
  out << smtlib::script(cfg.logic, free, f);
}

void check_shape(const HyperSpec &spec) {
  if (spec.quantifiers.empty() || spec.quantifiers.size() > 2 || spec.quantifiers[0].kind != QuantKind::Forall ||
      (spec.quantifiers.size() == 2 && spec.quantifiers[1].kind != QuantKind::Exists))
    throw std::invalid_argument("search expects one universal and at most one existential quantifier");
}

Verdict finish(Verdict v, bool unknown, bool budget, std::size_t n, Clock::time_point start) {
  v.k = n;
  if (unknown) {
    v.kind = VerdictKind::Inconclusive;
    v.reason = InconclusiveReason::SolverUnknown;
    v.detail = "a solver query returned unknown";
  } else if (budget) {
    v.kind = VerdictKind::Inconclusive;
    v.reason = InconclusiveReason::Budget;
    v.detail = "symbolic exploration hit the step budget";
  } else {
    v.kind = VerdictKind::NoBugUpTo;
  }
  v.stats.wall_ms = elapsed_ms(start);
  return v;
}

}  // namespace

Verdict lazy_search(const HyperSpec &spec, const SearchOptions &o) {
  check_shape(spec);
  auto start = Clock::now();
  const Quantifier &uq = spec.quantifiers[0];
  const Quantifier *eq = spec.quantifiers.size() > 1 ? &spec.quantifiers[1] : nullptr;

  Verdict v;
  symexec::FreshSupply supply(reserved_names(spec));
  symexec::SolverPathChecker checker_u(o.feasibility);
  std::optional<symexec::SolverPathChecker> checker_e;
  if (eq) checker_e.emplace(o.feasibility);
  auto sat_calls = [&] { return checker_u.calls() + (checker_e ? checker_e->calls() : 0); };
  std::size_t query_calls = 0;
  bool any_unknown = false, any_budget = false;

  for (std::size_t k = 1; k <= o.max_observations; ++k) {
    symexec::SymEnumeration existential;
    if (eq) {
      existential = symexec::observe_all(eq->graph, eq->observed, k, supply, *checker_e, budget_for(o, *eq, k));
      v.stats.existential_traces += existential.traces.size();
      if (!existential.complete) {
        v.kind = VerdictKind::Inconclusive;
        v.reason = InconclusiveReason::Budget;
        v.k = k;
        v.detail = "existential trace set is incomplete at k=" + std::to_string(k);
        v.stats.sat_calls = sat_calls() + query_calls;
        v.stats.wall_ms = elapsed_ms(start);
        return v;
      }
    }
    symexec::ObservationStream stream(uq.graph, uq.observed, k, supply, checker_u, budget_for(o, uq, k));
    std::size_t index = 0;
    while (auto t1 = stream.next()) {
      ++v.stats.universal_traces;
      encode::EncodedQuery q = encode::lazy_query(*t1, eq ? &existential : nullptr, spec.body, k, o.domain);
      ++v.stats.queries;
      v.stats.combinations += eq ? existential.traces.size() : 1;
      emit(o, "k" + std::to_string(k) + "_q" + std::to_string(index++), o.query, q.free, q.formula);
      ++query_calls;
      solver::SatResult r = solver::check_sat(o.query, q.formula, q.free);
      if (r.unknown()) {
        any_unknown = true;
        continue;
      }
      if (!r.sat()) continue;

      Counterexample cex;
      cex.universal = std::move(*t1);
      cex.model = std::move(r.model);
      cex.full = symexec::concretize(cex.universal.full, cex.model);
      cex.observed = concrete::project(cex.full, uq.observed);
      cex.explanation = q.explanation;
      cex.replay = concrete::replay(*uq.graph, uq.observed, cex.observed, cex.full);
      v.kind = VerdictKind::BugFound;
      v.k = k;
      v.counterexample = std::move(cex);
      v.stats.sat_calls = sat_calls() + query_calls;
      v.stats.wall_ms = elapsed_ms(start);
      return v;
    }
    if (stream.incomplete()) any_budget = true;
  }
  v.stats.sat_calls = sat_calls() + query_calls;
  return finish(std::move(v), any_unknown, any_budget, o.max_observations, start);
}

Verdict naive_search(const HyperSpec &spec, const SearchOptions &o) {
  auto start = Clock::now();
  Verdict v;
  symexec::FreshSupply supply(reserved_names(spec));
  std::vector<std::unique_ptr<symexec::SolverPathChecker>> checkers;
  for (std::size_t i = 0; i < spec.quantifiers.size(); ++i)
    checkers.push_back(std::make_unique<symexec::SolverPathChecker>(o.feasibility));
  auto sat_calls = [&] {
    std::size_t n = 0;
    for (const auto &c : checkers) n += c->calls();
    return n;
  };
  std::size_t query_calls = 0;
  bool any_unknown = false;

  for (std::size_t k = 1; k <= o.max_observations; ++k) {
    std::vector<symexec::SymEnumeration> sets;
    for (std::size_t i = 0; i < spec.quantifiers.size(); ++i) {
      const Quantifier &q = spec.quantifiers[i];
      sets.push_back(symexec::observe_all(q.graph, q.observed, k, supply, *checkers[i], budget_for(o, q, k)));
      (q.kind == QuantKind::Forall ? v.stats.universal_traces : v.stats.existential_traces) +=
          sets.back().traces.size();
      if (!sets.back().complete) {
        v.kind = VerdictKind::Inconclusive;
        v.reason = InconclusiveReason::Budget;
        v.k = k;
        v.detail = "trace set of '" + q.trace + "' is incomplete at k=" + std::to_string(k);
        v.stats.sat_calls = sat_calls() + query_calls;
        v.stats.wall_ms = elapsed_ms(start);
        return v;
      }
    }
    Formula negated = logic::mk_not(encode::encode(spec, k, sets, o.domain));
    emit(o, "k" + std::to_string(k) + "_naive", o.query, {}, negated);
    std::size_t product = 1;
    for (const auto &set : sets) product *= set.traces.size();
    v.stats.combinations += product;
    ++v.stats.queries;
    ++query_calls;
    solver::SatResult r = solver::check_sat(o.query, negated, {});
    if (r.unknown()) {
      any_unknown = true;
      continue;
    }
    if (r.sat()) {
      v.kind = VerdictKind::BugFound;
      v.k = k;
      v.stats.sat_calls = sat_calls() + query_calls;
      v.stats.wall_ms = elapsed_ms(start);
      return v;
    }
  }
  v.stats.sat_calls = sat_calls() + query_calls;
  return finish(std::move(v), any_unknown, false, o.max_observations, start);
}

Verdict run(const HyperSpec &spec, Algorithm algorithm, const SearchOptions &options) {
  HyperSpec g = generalize(spec);
  return algorithm == Algorithm::Lazy ? lazy_search(g, options) : naive_search(g, options);
}

}  // namespace hyperfind::driver
