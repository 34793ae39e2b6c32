#pragma once

// First-order encodings of bounded hyperproperty satisfaction over
// symbolic traces.

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hyperfind/logic.hpp"
#include "hyperfind/spec.hpp"
#include "hyperfind/symexec.hpp"

namespace hyperfind::encode {

/// Inclusive value range for fresh variables. Only used to cross-check
/// against the finite-domain oracle; it restricts quantified trace
/// variables and is never folded into path formulas.
using DomainBounds = std::optional<std::pair<logic::Value, logic::Value>>;

/// lo <= v <= hi for every v in vars (true without bounds).
logic::Formula domain_constraint(const logic::VarSet &vars, const DomainBounds &bounds);

class EncodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The invariant at every index below k, with each program variable
/// replaced by its term in the i-th observed memory of whichever bound
/// trace defines it. Throws EncodeError when a body variable is not
/// defined by any bound trace or a trace is shorter than k.
logic::Formula encode_invariant(const logic::Formula &body, std::size_t k,
                                const std::vector<const symexec::SymTrace *> &observed);

/// Closed formula that is valid iff the spec holds at exactly k
/// observations. sets[i] are the traces of spec.quantifiers[i]; an
/// incomplete set raises EncodeError.
logic::Formula encode(const HyperSpec &spec, std::size_t k, const std::vector<symexec::SymEnumeration> &sets,
                      const DomainBounds &bounds = std::nullopt);

struct EncodedQuery {
  logic::Formula formula;      // path(t1) and explanation
  logic::Formula explanation;  // "no existential trace matches t1"
  logic::VarSet free;          // FV(t1)
};

/// Per-trace query for a universal trace t1 against a fully materialized
/// existential set. With no existential quantifier (`existential` null)
/// the explanation is the negated invariant.
EncodedQuery lazy_query(const symexec::ObservedSymTrace &t1, const symexec::SymEnumeration *existential,
                        const logic::Formula &body, std::size_t k, const DomainBounds &bounds = std::nullopt);

}  // namespace hyperfind::encode
