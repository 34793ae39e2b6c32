#pragma once

#include <string>

#include <json.hpp>

#include "hyperfind/concrete.hpp"
#include "hyperfind/driver.hpp"
#include "hyperfind/spec.hpp"

namespace hyperfind::report {

/// `[{location, memory}]` with location names taken from g.
nlohmann::json trace_json(const graph::ProgramGraph &g, const concrete::Trace &t);

/// Report for a verdict on a generalized spec (the universal quantifier's
/// graph names the counterexample locations).
nlohmann::json to_json(const driver::Verdict &v, const HyperSpec &generalized);
std::string to_text(const driver::Verdict &v, const HyperSpec &generalized);

nlohmann::json to_json(const concrete::OracleVerdict &v, const HyperSpec &spec);
std::string to_text(const concrete::OracleVerdict &v, const HyperSpec &spec);

}  // namespace hyperfind::report
