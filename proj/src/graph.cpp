#include "hyperfind/graph.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace hyperfind::graph {

using logic::Formula;
using logic::Term;

std::string to_string(const Effect &e) {
  return std::visit(
      [](const auto &eff) -> std::string {
        using T = std::decay_t<decltype(eff)>;
        if constexpr (std::is_same_v<T, Skip>) {
          return "skip";
        } else if constexpr (std::is_same_v<T, Assign>) {
          return eff.target + " := " + logic::to_string(eff.expr);
        } else {
          return "havoc " + eff.target;
        }
      },
      e);
}

// ---------------------------------------------------------------- ProgramGraph

Location ProgramGraph::add_location(std::string name) {
  Location l{static_cast<std::uint32_t>(location_names_.size())};
  location_names_.push_back(std::move(name));
  out_edges_.emplace_back();
  return l;
}

void ProgramGraph::add_edge(Location src, Location dst, Formula guard, Effect effect) {
  std::size_t index = edges_.size();
  edges_.push_back(Edge{src, dst, std::move(guard), std::move(effect)});
  if (src.id < out_edges_.size()) out_edges_[src.id].push_back(index);
}

void ProgramGraph::add_variable(const std::string &name) {
  auto it = std::lower_bound(variables_.begin(), variables_.end(), name);
  if (it == variables_.end() || *it != name) variables_.insert(it, name);
}

std::optional<Location> ProgramGraph::find_location(const std::string &name) const {
  for (std::size_t i = 0; i < location_names_.size(); ++i)
    if (location_names_[i] == name) return Location{static_cast<std::uint32_t>(i)};
  return std::nullopt;
}

const std::vector<std::size_t> &ProgramGraph::out_edges(Location l) const {
  static const std::vector<std::size_t> none;
  return l.id < out_edges_.size() ? out_edges_[l.id] : none;
}

bool ProgramGraph::has_variable(const std::string &name) const {
  return std::binary_search(variables_.begin(), variables_.end(), name);
}

ProgramGraph ProgramGraph::with_prefixed_variables(const std::string &prefix) const {
  logic::Substitution rename;
  for (const auto &v : variables_) rename.emplace(v, logic::mk_var(prefix + v));

  ProgramGraph out;
  out.location_names_ = location_names_;
  out.out_edges_ = out_edges_;
  out.initial_ = initial_;
  for (const auto &v : variables_) out.variables_.push_back(prefix + v);
  std::sort(out.variables_.begin(), out.variables_.end());
  out.edges_.reserve(edges_.size());
  for (const auto &e : edges_) {
    Effect effect = std::visit(
        [&](const auto &eff) -> Effect {
          using T = std::decay_t<decltype(eff)>;
          if constexpr (std::is_same_v<T, Skip>) {
            return Skip{};
          } else if constexpr (std::is_same_v<T, Assign>) {
            return Assign{prefix + eff.target, logic::substitute(eff.expr, rename)};
          } else {
            return Havoc{prefix + eff.target};
          }
        },
        e.effect);
    out.edges_.push_back(Edge{e.src, e.dst, logic::substitute(e.guard, rename), std::move(effect)});
  }
  return out;
}

// ---------------------------------------------------------------- ObservationSet

ObservationSet::ObservationSet(std::initializer_list<Location> locs)
    : ObservationSet(std::vector<Location>(locs)) {}

ObservationSet::ObservationSet(std::vector<Location> locs) : locs_(std::move(locs)) {
  std::sort(locs_.begin(), locs_.end());
  locs_.erase(std::unique(locs_.begin(), locs_.end()), locs_.end());
}

void ObservationSet::insert(Location l) {
  auto it = std::lower_bound(locs_.begin(), locs_.end(), l);
  if (it == locs_.end() || *it != l) locs_.insert(it, l);
}

bool ObservationSet::contains(Location l) const {
  return std::binary_search(locs_.begin(), locs_.end(), l);
}

std::optional<std::size_t> ObservationSet::index_of(Location l) const {
  auto it = std::lower_bound(locs_.begin(), locs_.end(), l);
  if (it == locs_.end() || *it != l) return std::nullopt;
  return static_cast<std::size_t>(it - locs_.begin());
}

// ---------------------------------------------------------------- validation

namespace {

void check_vars(const logic::VarSet &used, const ProgramGraph &g, const std::string &where,
                std::vector<ValidationError> &errors) {
  for (const auto &v : used)
    if (!g.has_variable(v)) errors.push_back({where + ": unknown variable '" + v + "'"});
}

std::string edge_label(const ProgramGraph &g, std::size_t i) {
  const Edge &e = g.edges()[i];
  auto name = [&](Location l) {
    return l.id < g.num_locations() ? g.location_name(l) : "#" + std::to_string(l.id);
  };
  return "edge " + std::to_string(i) + " (" + name(e.src) + " -> " + name(e.dst) + ")";
}

}  // namespace

std::vector<ValidationError> validate(const ProgramGraph &g) {
  std::vector<ValidationError> errors;
  if (g.num_locations() == 0) errors.push_back({"graph has no locations"});
  if (g.initial().id >= g.num_locations())
    errors.push_back({"initial location #" + std::to_string(g.initial().id) + " is not declared"});

  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    const Edge &e = g.edges()[i];
    const std::string where = edge_label(g, i);
    if (e.src.id >= g.num_locations())
      errors.push_back({where + ": dangling edge, source #" + std::to_string(e.src.id) + " is not declared"});
    if (e.dst.id >= g.num_locations())
      errors.push_back({where + ": dangling edge, target #" + std::to_string(e.dst.id) + " is not declared"});
    if (!e.guard.quantifier_free()) errors.push_back({where + ": guard is not quantifier-free"});
    check_vars(logic::free_vars(e.guard), g, where + " guard", errors);
    std::visit(
        [&](const auto &eff) {
          using T = std::decay_t<decltype(eff)>;
          if constexpr (std::is_same_v<T, Assign>) {
            if (!g.has_variable(eff.target))
              errors.push_back({where + ": assignment to unknown variable '" + eff.target + "'"});
            check_vars(logic::free_vars(eff.expr), g, where + " assignment", errors);
          } else if constexpr (std::is_same_v<T, Havoc>) {
            if (!g.has_variable(eff.target))
              errors.push_back({where + ": havoc of unknown variable '" + eff.target + "'"});
          }
        },
        e.effect);
  }
  return errors;
}

std::vector<ValidationError> validate(const ProgramGraph &g, const ObservationSet &obs) {
  auto errors = validate(g);
  for (Location l : obs)
    if (l.id >= g.num_locations())
      errors.push_back({"observed location #" + std::to_string(l.id) + " is not declared"});
  return errors;
}

void dump(std::ostream &os, const ProgramGraph &g, const ObservationSet *obs) {
  os << "initial " << g.location_name(g.initial()) << "\n";
  if (obs) {
    os << "observe";
    for (Location l : *obs) os << " " << g.location_name(l);
    os << "\n";
  }
  for (const Edge &e : g.edges()) {
    os << g.location_name(e.src) << " -> " << g.location_name(e.dst) << " [" << logic::to_string(e.guard)
       << "] " << to_string(e.effect) << "\n";
  }
}

// ---------------------------------------------------------------- async product

Reentry add_reentry_points(const ProgramGraph &g, const ObservationSet &obs) {
  Reentry out;
  for (std::size_t i = 0; i < g.num_locations(); ++i)
    out.graph.add_location(g.location_name(Location{static_cast<std::uint32_t>(i)}));
  for (Location o : obs) out.reentry.push_back(out.graph.add_location(g.location_name(o) + "'"));
  for (const auto &v : g.variables()) out.graph.add_variable(v);
  out.graph.set_initial(g.initial());
  for (const Edge &e : g.edges()) {
    Location src = e.src;
    if (auto idx = obs.index_of(src)) src = out.reentry[*idx];
    out.graph.add_edge(src, e.dst, e.guard, e.effect);
  }
  return out;
}

AsyncProduct async_product(const ProgramGraph &g1, const ObservationSet &o1, const ProgramGraph &g2,
                           const ObservationSet &o2) {
  if (o1.empty() || o2.empty())
    throw ProductError("asynchronous product requires nonempty observation sets");
  for (const auto &v : g1.variables())
    if (g2.has_variable(v)) throw ProductError("product operands share variable '" + v + "'");

  const Reentry r1 = add_reentry_points(g1, o1);
  const Reentry r2 = add_reentry_points(g2, o2);

  AsyncProduct p;
  for (const auto &v : g1.variables()) p.graph.add_variable(v);
  for (const auto &v : g2.variables()) p.graph.add_variable(v);

  // Copies G1(0..|O2|) followed by G2(1..|O1|).
  std::vector<std::uint32_t> base1(o2.size() + 1), base2(o1.size() + 1);
  auto add_copy = [&](const Reentry &r, int side, std::size_t copy, std::size_t n_orig) {
    std::uint32_t base = static_cast<std::uint32_t>(p.graph.num_locations());
    for (std::size_t l = 0; l < r.graph.num_locations(); ++l) {
      Location loc{static_cast<std::uint32_t>(l)};
      std::string prefix = (side == 1 ? "a" : "b") + std::to_string(copy) + ":";
      p.graph.add_location(prefix + r.graph.location_name(loc));
      ProductOrigin origin{side, copy, loc, false};
      if (l >= n_orig) {
        const ObservationSet &obs = side == 1 ? o1 : o2;
        origin.original = obs.locations()[l - n_orig];
        origin.reentry = true;
      }
      p.origin.push_back(origin);
    }
    return base;
  };
  for (std::size_t j = 0; j <= o2.size(); ++j) base1[j] = add_copy(r1, 1, j, g1.num_locations());
  for (std::size_t i = 1; i <= o1.size(); ++i) base2[i] = add_copy(r2, 2, i, g2.num_locations());

  auto at = [](std::uint32_t base, Location l) { return Location{base + l.id}; };

  for (std::size_t j = 0; j <= o2.size(); ++j) {
    for (const Edge &e : r1.graph.edges())
      p.graph.add_edge(at(base1[j], e.src), at(base1[j], e.dst), e.guard, e.effect);
    for (std::size_t i = 1; i <= o1.size(); ++i) {
      Location obs = at(base1[j], o1.locations()[i - 1]);
      Location target = j == 0 ? at(base2[i], r2.graph.initial()) : at(base2[i], r2.reentry[j - 1]);
      p.graph.add_edge(obs, target, logic::mk_true(), Skip{});
    }
  }
  for (std::size_t j = 1; j <= o1.size(); ++j) {
    for (const Edge &e : r2.graph.edges())
      p.graph.add_edge(at(base2[j], e.src), at(base2[j], e.dst), e.guard, e.effect);
    for (std::size_t i = 1; i <= o2.size(); ++i) {
      Location obs = at(base2[j], o2.locations()[i - 1]);
      p.graph.add_edge(obs, at(base1[i], r1.reentry[j - 1]), logic::mk_true(), Skip{});
      p.observed.insert(obs);
    }
  }
  p.graph.set_initial(at(base1[0], r1.graph.initial()));
  return p;
}

}  // namespace hyperfind::graph
