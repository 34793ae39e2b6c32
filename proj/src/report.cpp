#include "hyperfind/report.hpp"

#include <sstream>

#include "hyperfind/smtlib.hpp"

namespace hyperfind::report {

using nlohmann::json;

json trace_json(const graph::ProgramGraph &g, const concrete::Trace &t) {
  json out = json::array();
  for (const auto &s : t) {
    json mem = json::object();
    for (const auto &[var, val] : s.mem) mem[var] = val;
    out.push_back({{"location", g.location_name(s.loc)}, {"memory", mem}});
  }
  return out;
}

namespace {

json stats_json(const driver::SearchStats &s) {
  return {{"combinations", s.combinations}, {"queries", s.queries},
          {"sat_calls", s.sat_calls},       {"universal_traces", s.universal_traces},
          {"existential_traces", s.existential_traces}, {"wall_ms", s.wall_ms}};
}

void print_trace(std::ostream &os, const graph::ProgramGraph &g, const concrete::Trace &t) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    os << "  [" << i << "] " << g.location_name(t[i].loc) << " {";
    bool first = true;
    for (const auto &[var, val] : t[i].mem) {
      os << (first ? "" : ", ") << var << "=" << val;
      first = false;
    }
    os << "}\n";
  }
}

}  // namespace

json to_json(const driver::Verdict &v, const HyperSpec &spec) {
  json out{{"verdict", driver::to_string(v.kind)}, {"k", v.k}, {"counterexample", nullptr}, {"stats", stats_json(v.stats)}};
  if (v.kind == driver::VerdictKind::Inconclusive) out["reason"] = driver::to_string(v.reason);
  if (!v.detail.empty()) out["detail"] = v.detail;
  if (v.counterexample) {
    const auto &c = *v.counterexample;
    const auto &g = *spec.quantifiers.front().graph;
    json model = json::object();
    for (const auto &[var, val] : c.model) model[var] = val;
    out["counterexample"] = {{"observed_trace", trace_json(g, c.observed)},
                             {"full_trace", trace_json(g, c.full)},
                             {"model", model},
                             {"explanation_smt", smtlib::to_smt(c.explanation)},
                             {"replay_valid", c.replay.valid}};
    if (!c.replay.valid) out["counterexample"]["replay_error"] = c.replay.reason;
  }
  return out;
}

std::string to_text(const driver::Verdict &v, const HyperSpec &spec) {
  std::ostringstream os;
  switch (v.kind) {
    case driver::VerdictKind::BugFound: os << "bug found at k=" << v.k << "\n"; break;
    case driver::VerdictKind::NoBugUpTo: os << "no bug up to k=" << v.k << "\n"; break;
    case driver::VerdictKind::Inconclusive:
      os << "inconclusive (" << driver::to_string(v.reason) << ") at k=" << v.k << "\n";
      break;
  }
  if (!v.detail.empty()) os << "  " << v.detail << "\n";
  if (v.counterexample) {
    const auto &g = *spec.quantifiers.front().graph;
    os << "observed trace of " << spec.quantifiers.front().trace << ":\n";
    print_trace(os, g, v.counterexample->observed);
    os << "replay: " << (v.counterexample->replay.valid ? "valid" : "INVALID: " + v.counterexample->replay.reason)
       << "\n";
  }
  os << "combinations=" << v.stats.combinations << " queries=" << v.stats.queries << " sat_calls=" << v.stats.sat_calls << " wall_ms=" << v.stats.wall_ms
     << "\n";
  return os.str();
}

namespace {

const char *outcome_name(concrete::OracleOutcome o) {
  switch (o) {
    case concrete::OracleOutcome::Holds: return "holds";
    case concrete::OracleOutcome::Violated: return "violated";
    case concrete::OracleOutcome::Inconclusive: return "inconclusive";
  }
  return "?";
}

}  // namespace

json to_json(const concrete::OracleVerdict &v, const HyperSpec &spec) {
  json witness = json::array();
  for (std::size_t i = 0; i < v.witness.size(); ++i)
    witness.push_back({{"trace", spec.quantifiers[i].trace},
                       {"observed_trace", trace_json(*spec.quantifiers[i].graph, v.witness[i].observed)}});
  return {{"verdict", outcome_name(v.outcome)}, {"k", v.k}, {"witness", witness}};
}

std::string to_text(const concrete::OracleVerdict &v, const HyperSpec &spec) {
  std::ostringstream os;
  os << "oracle: " << outcome_name(v.outcome) << " at k=" << v.k << "\n";
  for (std::size_t i = 0; i < v.witness.size(); ++i) {
    os << "witness " << spec.quantifiers[i].trace << ":\n";
    print_trace(os, *spec.quantifiers[i].graph, v.witness[i].observed);
  }
  return os.str();
}

}  // namespace hyperfind::report
