#include "hyperfind/encode.hpp"

namespace hyperfind::encode {

using logic::Formula;

Formula domain_constraint(const logic::VarSet &vars, const DomainBounds &bounds) {
  if (!bounds) return logic::mk_true();
  std::vector<Formula> parts;
  for (const auto &v : vars) {
    parts.push_back(logic::mk_cmp(logic::CmpOp::Ge, logic::mk_var(v), logic::mk_int(bounds->first)));
    parts.push_back(logic::mk_cmp(logic::CmpOp::Le, logic::mk_var(v), logic::mk_int(bounds->second)));
  }
  return logic::mk_and(std::move(parts));
}

Formula encode_invariant(const Formula &body, std::size_t k, const std::vector<const symexec::SymTrace *> &observed) {
  for (const auto *t : observed)
    if (t->size() < k) throw EncodeError("bound trace has fewer than " + std::to_string(k) + " observations");
  const logic::VarSet vars = logic::free_vars(body);
  std::vector<Formula> conj;
  for (std::size_t i = 0; i < k; ++i) {
    logic::Substitution sigma;
    for (const auto *t : observed)
      for (const auto &[var, term] : (*t)[i].mem)
        if (vars.count(var)) sigma.emplace(var, term);
    for (const auto &v : vars)
      if (!sigma.count(v)) throw EncodeError("body variable '" + v + "' is not bound by any trace");
    conj.push_back(logic::substitute(body, sigma));
  }
  return logic::mk_and(std::move(conj));
}

namespace {

std::vector<std::string> binders(const symexec::SymTrace &t) {
  auto fv = symexec::free_vars(t);
  return {fv.begin(), fv.end()};
}

Formula encode_from(const HyperSpec &spec, std::size_t k, const std::vector<symexec::SymEnumeration> &sets,
                    const DomainBounds &bounds, std::size_t q, std::vector<const symexec::SymTrace *> &bound) {
  if (q == spec.quantifiers.size()) return encode_invariant(spec.body, k, bound);
  bool forall = spec.quantifiers[q].kind == QuantKind::Forall;
  std::vector<Formula> parts;
  for (const auto &t : sets[q].traces) {
    bound.push_back(&t.observed);
    Formula inner = encode_from(spec, k, sets, bounds, q + 1, bound);
    bound.pop_back();
    auto vars = binders(t.full);
    Formula dom = domain_constraint({vars.begin(), vars.end()}, bounds);
    if (forall)
      parts.push_back(logic::mk_forall(vars, logic::mk_implies(logic::mk_and(dom, t.path()), inner)));
    else
      parts.push_back(logic::mk_exists(vars, logic::mk_and({dom, t.path(), inner})));
  }
  return forall ? logic::mk_and(std::move(parts)) : logic::mk_or(std::move(parts));
}

}  // namespace

Formula encode(const HyperSpec &spec, std::size_t k, const std::vector<symexec::SymEnumeration> &sets,
               const DomainBounds &bounds) {
  if (sets.size() != spec.quantifiers.size()) throw EncodeError("one trace set per quantifier is required");
  for (std::size_t i = 0; i < sets.size(); ++i)
    if (!sets[i].complete)
      throw EncodeError("trace set of '" + spec.quantifiers[i].trace + "' is incomplete (step budget)");
  std::vector<const symexec::SymTrace *> bound;
  return encode_from(spec, k, sets, bounds, 0, bound);
}

EncodedQuery lazy_query(const symexec::ObservedSymTrace &t1, const symexec::SymEnumeration *existential,
                        const Formula &body, std::size_t k, const DomainBounds &bounds) {
  EncodedQuery q;
  if (!existential) {
    q.explanation = logic::mk_not(encode_invariant(body, k, {&t1.observed}));
  } else {
    if (!existential->complete) throw EncodeError("existential trace set is incomplete (step budget)");
    std::vector<Formula> none;
    for (const auto &t2 : existential->traces) {
      Formula match = logic::mk_and(t2.path(), encode_invariant(body, k, {&t1.observed, &t2.observed}));
      auto vars = binders(t2.full);
      Formula dom = domain_constraint({vars.begin(), vars.end()}, bounds);
      none.push_back(logic::mk_forall(vars, logic::mk_not(logic::mk_and(dom, match))));
    }
    q.explanation = logic::mk_and(std::move(none));
  }
  q.free = symexec::free_vars(t1.full);
  q.formula = logic::mk_and({t1.path(), domain_constraint(q.free, bounds), q.explanation});
  return q;
}

}  // namespace hyperfind::encode
