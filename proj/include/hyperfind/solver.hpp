#pragma once

// External SMT solver driven over stdin/stdout in SMT-LIB v2.

#include <chrono>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperfind/logic.hpp"

namespace hyperfind::solver {

/// Process or protocol failure (crash, malformed output, solver error).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SatStatus { Sat, Unsat, Unknown };

struct SatResult {
  SatStatus status = SatStatus::Unknown;
  logic::Assignment model;  // Sat only; total on the requested variables
  std::string reason;       // Unknown only

  bool sat() const { return status == SatStatus::Sat; }
  bool unsat() const { return status == SatStatus::Unsat; }
  bool unknown() const { return status == SatStatus::Unknown; }
};

struct SolverConfig {
  std::string path;               // executable, looked up on PATH when not absolute
  std::vector<std::string> args;  // arguments that make it read SMT-LIB from stdin
  std::string logic = "LIA";
  std::chrono::milliseconds timeout{5000};
};

/// Launch arguments for a known solver executable (yices-smt2, z3, cvc5),
/// or no arguments for anything else.
std::vector<std::string> default_args(const std::string &path);

/// Config for `path`, with the matching default arguments.
SolverConfig config_for(const std::string &path);

/// First of yices-smt2, z3, cvc5 found on PATH; nullopt if none is.
std::optional<SolverConfig> find_default_solver();

/// An incremental solver process. Single owner; not thread-safe.
///
/// The session keeps the text of every live scope so that it can restart
/// the process transparently after a timeout killed it.
class Session {
 public:
  explicit Session(SolverConfig config);
  ~Session();
  Session(const Session &) = delete;
  Session &operator=(const Session &) = delete;

  /// Idempotent within the current scope.
  void declare(const std::string &var);
  bool declared(const std::string &var) const;
  /// Throws std::logic_error if a free variable of f is not declared.
  void assert_formula(const logic::Formula &f);
  void push();
  /// Throws std::logic_error at depth 0.
  void pop();
  std::size_t depth() const { return scopes_.size() - 1; }

  /// check-sat; on Sat, values for `wanted` (undeclared ones complete to 0).
  SatResult check(const logic::VarSet &wanted = {});
  void set_timeout(std::chrono::milliseconds t) { config_.timeout = t; }

  const SolverConfig &config() const { return config_; }
  std::size_t checks() const { return checks_; }

 private:
  struct Process;
  struct Scope {
    std::vector<std::string> commands;
    logic::VarSet declared;
  };

  void ensure_running();
  void kill();
  void send(const std::string &command);
  std::optional<std::string> read_sexpr(std::chrono::steady_clock::time_point deadline);

  SolverConfig config_;
  std::unique_ptr<Process> proc_;
  std::vector<Scope> scopes_;
  std::size_t checks_ = 0;
};

/// One-shot satisfiability check in a fresh process.
SatResult check_sat(const SolverConfig &config, const logic::Formula &f, const logic::VarSet &wanted);

}  // namespace hyperfind::solver
