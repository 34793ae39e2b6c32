#include "hyperfind/solver.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <sstream>

#include "hyperfind/smtlib.hpp"

namespace hyperfind::solver {

namespace {

std::optional<std::string> which(const std::string &name) {
  namespace fs = std::filesystem;
  auto executable = [](const fs::path &p) { return ::access(p.c_str(), X_OK) == 0 && !fs::is_directory(p); };
  if (name.find('/') != std::string::npos) {
    if (executable(name)) return name;
    return std::nullopt;
  }
  const char *env = std::getenv("PATH");
  std::stringstream ss(env ? env : "/usr/local/bin:/usr/bin:/bin");
  std::string dir;
  while (std::getline(ss, dir, ':')) {
    if (dir.empty()) continue;
    fs::path p = fs::path(dir) / name;
    if (executable(p)) return p.string();
  }
  return std::nullopt;
}

}  // namespace

std::vector<std::string> default_args(const std::string &path) {
  std::string base = std::filesystem::path(path).filename().string();
  if (base == "z3") return {"-in", "-smt2"};
  if (base == "yices-smt2") return {"--incremental"};
  if (base == "cvc5") return {"--lang", "smt2", "--incremental"};
  return {};
}

SolverConfig config_for(const std::string &path) {
  SolverConfig c;
  c.path = path;
  c.args = default_args(path);
  return c;
}

std::optional<SolverConfig> find_default_solver() {
  for (const char *name : {"yices-smt2", "z3", "cvc5"})
    if (auto p = which(name)) return config_for(*p);
  return std::nullopt;
}

// ---------------------------------------------------------------- process

struct Session::Process {
  pid_t pid = -1;
  int fd = -1;
  std::string buffer;

  ~Process() {
    if (fd >= 0) ::close(fd);
    if (pid > 0) {
      ::kill(pid, SIGKILL);
      ::waitpid(pid, nullptr, 0);
    }
  }
};

Session::Session(SolverConfig config) : config_(std::move(config)) {
  scopes_.emplace_back();
  ensure_running();
}

Session::~Session() = default;

void Session::kill() { proc_.reset(); }

void Session::ensure_running() {
  if (proc_) return;
  auto path = which(config_.path);
  if (!path) throw SolverError("solver executable '" + config_.path + "' not found");

  int sv[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, sv) != 0)
    throw SolverError(std::string("socketpair: ") + std::strerror(errno));

  std::vector<std::string> argv_s{*path};
  argv_s.insert(argv_s.end(), config_.args.begin(), config_.args.end());
  std::vector<char *> argv;
  for (auto &a : argv_s) argv.push_back(a.data());
  argv.push_back(nullptr);

  pid_t pid = ::fork();
  if (pid < 0) {
    ::close(sv[0]);
    ::close(sv[1]);
    throw SolverError(std::string("fork: ") + std::strerror(errno));
  }
  if (pid == 0) {
    ::dup2(sv[1], 0);
    ::dup2(sv[1], 1);
    int devnull = ::open("/dev/null", O_WRONLY);
    if (devnull >= 0) ::dup2(devnull, 2);
    ::execv(argv[0], argv.data());
    ::_exit(127);
  }
  ::close(sv[1]);
  proc_ = std::make_unique<Process>();
  proc_->pid = pid;
  proc_->fd = sv[0];

  send("(set-option :print-success false)");
  send("(set-logic " + config_.logic + ")");
  for (std::size_t i = 0; i < scopes_.size(); ++i) {
    if (i > 0) send("(push 1)");
    for (const auto &c : scopes_[i].commands) send(c);
  }
}

void Session::send(const std::string &command) {
  std::string line = command + "\n";
  std::size_t off = 0;
  while (off < line.size()) {
    ssize_t n = ::send(proc_->fd, line.data() + off, line.size() - off, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      kill();
      throw SolverError(std::string("solver connection lost: ") + std::strerror(errno));
    }
    off += static_cast<std::size_t>(n);
  }
}

namespace {

// Length of the first complete s-expression in buf (after leading
// whitespace), or 0 if more input is needed.
std::size_t complete_sexpr(const std::string &buf) {
  std::size_t i = 0;
  while (i < buf.size() && std::isspace(static_cast<unsigned char>(buf[i]))) ++i;
  if (i == buf.size()) return 0;
  if (buf[i] != '(') {
    std::size_t j = i;
    while (j < buf.size() && !std::isspace(static_cast<unsigned char>(buf[j]))) ++j;
    return j < buf.size() ? j : 0;
  }
  int depth = 0;
  for (std::size_t j = i; j < buf.size(); ++j) {
    char c = buf[j];
    if (c == '|') {
      j = buf.find('|', j + 1);
      if (j == std::string::npos) return 0;
    } else if (c == '"') {
      for (++j; j < buf.size(); ++j) {
        if (buf[j] == '"') {
          if (j + 1 < buf.size() && buf[j + 1] == '"') ++j;
          else break;
        }
      }
      if (j >= buf.size()) return 0;
    } else if (c == '(') {
      ++depth;
    } else if (c == ')') {
      if (--depth == 0) return j + 1;
    }
  }
  return 0;
}

}  // namespace

std::optional<std::string> Session::read_sexpr(std::chrono::steady_clock::time_point deadline) {
  for (;;) {
    if (std::size_t n = complete_sexpr(proc_->buffer)) {
      std::string out = proc_->buffer.substr(0, n);
      proc_->buffer.erase(0, n);
      return out;
    }
    auto now = std::chrono::steady_clock::now();
    if (now >= deadline) return std::nullopt;
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
    pollfd pfd{proc_->fd, POLLIN, 0};
    int r = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(ms + 1, 1 << 30)));
    if (r < 0) {
      if (errno == EINTR) continue;
      throw SolverError(std::string("poll: ") + std::strerror(errno));
    }
    if (r == 0) continue;
    char chunk[4096];
    ssize_t got = ::read(proc_->fd, chunk, sizeof chunk);
    if (got < 0 && errno == EINTR) continue;
    if (got <= 0) {
      std::string pending = proc_->buffer;
      kill();
      throw SolverError("solver exited unexpectedly" + (pending.empty() ? "" : ": " + pending));
    }
    proc_->buffer.append(chunk, static_cast<std::size_t>(got));
  }
}

// ---------------------------------------------------------------- commands

bool Session::declared(const std::string &var) const {
  for (const auto &s : scopes_)
    if (s.declared.count(var)) return true;
  return false;
}

void Session::declare(const std::string &var) {
  if (declared(var)) return;
  std::string cmd = smtlib::declare(var);
  ensure_running();
  send(cmd);
  scopes_.back().commands.push_back(cmd);
  scopes_.back().declared.insert(var);
}

void Session::assert_formula(const logic::Formula &f) {
  for (const auto &v : logic::free_vars(f))
    if (!declared(v)) throw std::logic_error("assertion uses undeclared variable '" + v + "'");
  std::string cmd = "(assert " + smtlib::to_smt(f) + ")";
  ensure_running();
  send(cmd);
  scopes_.back().commands.push_back(cmd);
}

void Session::push() {
  ensure_running();
  send("(push 1)");
  scopes_.emplace_back();
}

void Session::pop() {
  if (depth() == 0) throw std::logic_error("pop at assertion-stack depth 0");
  scopes_.pop_back();
  if (proc_) send("(pop 1)");
}

SatResult Session::check(const logic::VarSet &wanted) {
  ensure_running();
  ++checks_;
  auto deadline = std::chrono::steady_clock::now() + config_.timeout;
  send("(check-sat)");
  auto reply = read_sexpr(deadline);
  if (!reply) {
    kill();
    return SatResult{SatStatus::Unknown, {}, "timeout"};
  }
  smtlib::SExpr e;
  try {
    e = smtlib::parse_sexpr(*reply);
  } catch (const std::exception &ex) {
    throw SolverError("malformed solver reply '" + *reply + "': " + ex.what());
  }
  if (e.is_list && !e.items.empty() && e.items[0].atom == "error") throw SolverError("solver error: " + *reply);
  if (e.is_list) throw SolverError("unexpected solver reply '" + *reply + "'");
  if (e.atom == "unsat") return SatResult{SatStatus::Unsat, {}, {}};
  if (e.atom == "unknown") return SatResult{SatStatus::Unknown, {}, "solver returned unknown"};
  if (e.atom != "sat") throw SolverError("unexpected solver reply '" + *reply + "'");

  SatResult res{SatStatus::Sat, {}, {}};
  std::vector<std::string> ask;
  for (const auto &v : wanted) {
    if (declared(v)) ask.push_back(v);
    else res.model[v] = 0;
  }
  if (ask.empty()) return res;
  std::string cmd = "(get-value (";
  for (std::size_t i = 0; i < ask.size(); ++i) cmd += (i ? " " : "") + smtlib::symbol(ask[i]);
  cmd += "))";
  send(cmd);
  auto values = read_sexpr(deadline + config_.timeout);
  if (!values) {
    kill();
    return SatResult{SatStatus::Unknown, {}, "timeout while reading model"};
  }
  try {
    smtlib::SExpr v = smtlib::parse_sexpr(*values);
    if (!v.is_list || (!v.items.empty() && !v.items[0].is_list)) throw std::runtime_error("not a value list");
    for (const auto &pair : v.items) {
      if (!pair.is_list || pair.items.size() != 2 || pair.items[0].is_list)
        throw std::runtime_error("bad binding");
      res.model[pair.items[0].atom] = smtlib::parse_value(pair.items[1]);
    }
  } catch (const std::exception &ex) {
    throw SolverError("malformed model '" + *values + "': " + ex.what());
  }
  for (const auto &v : ask)
    if (!res.model.count(v)) res.model[v] = 0;
  return res;
}

SatResult check_sat(const SolverConfig &config, const logic::Formula &f, const logic::VarSet &wanted) {
  Session s(config);
  for (const auto &v : logic::free_vars(f)) s.declare(v);
  for (const auto &v : wanted) s.declare(v);
  s.assert_formula(f);
  return s.check(wanted);
}

}  // namespace hyperfind::solver
