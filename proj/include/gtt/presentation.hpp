#pragma once

// Sequential contexts, well-founded premise families, rule-boundaries and
// their realisation, well-presented theories and the well-founded check on
// raw theories.

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gtt/metatheory.hpp"

namespace gtt {

// ---- sequential contexts

// entries[i] is a type in scope i
struct SequentialContext {
  std::vector<Expr> entries;
  std::size_t size() const { return entries.size(); }
  bool operator==(const SequentialContext&) const = default;
};

// Flat position of sequential entry i in scope n.
Position sequential_position(ScopeSystem sys, Scope n, std::size_t i);

RawContext flatten_sequential_context(ScopeSystem sys, const SequentialContext& G);

// Some(unweakened entries) iff every variable in the type of entry i refers
// to an entry j < i.
std::optional<SequentialContext> is_sequential_flat_context(ScopeSystem sys, const RawContext& G);

// e in scope n, read back into scope m <= n along the inclusion of the first
// m entries; nullopt when e mentions a later entry.
std::optional<Expr> strengthen_expr(ScopeSystem sys, Scope m, Scope n, const Expr& e);

// Gamma_{<i}, flattened
RawContext initial_segment(ScopeSystem sys, const SequentialContext& G, std::size_t i);

// A source of type derivations: G |- A type, or nothing.
using TypeDeriver = std::function<std::optional<Derivation>(const RawContext&, const Expr&)>;

// Proof-relevant well-formedness data: entry i holds a derivation of
// Gamma_{<i} |- Gamma_i type.
using ContextWitnesses = std::vector<Derivation>;

// The three definitions of a well-formed sequential context. Each returns the
// witnesses when the context is well-formed, every derivation re-checked
// against T (over T + alpha from hyps when given).
struct ContextCheckEnv {
  const RawTypeTheory& T;
  Family<Judgement> hyps;
  Arity alpha;
};
// I: a raw sequential context, each entry derivable over its initial segment
std::optional<ContextWitnesses> wf_context_sequential(const ContextCheckEnv& env, const SequentialContext& G,
                                                      const TypeDeriver& derive);
// II: a flat context satisfying the variable-occurrence condition
std::optional<ContextWitnesses> wf_context_by_occurrence(const ContextCheckEnv& env, const RawContext& G,
                                                         const TypeDeriver& derive);
// III: the inductive predicate generated by the empty context and extension
std::optional<ContextWitnesses> wf_context_by_rules(const ContextCheckEnv& env, const RawContext& G,
                                                    const TypeDeriver& derive);

// Gamma sequential and w[i] derives Gamma_{<i} |- Gamma_i type for every i.
bool check_wf_context(const ContextCheckEnv& env, const RawContext& G, const ContextWitnesses& w);

// ---- premise families and rule-boundaries

// One premise boundary. Expressions live over Sigma + arity(P) with
// metavariables numbered in the full arity; `below` lists the earlier
// premises this one may use, so only their metavariables may occur.
struct PremiseBoundary {
  std::string name;  // metavariable name, object premises only
  SequentialContext cxt;
  JudgementForm form = JudgementForm::IsTy;
  std::vector<Expr> slots;  // boundary slots, scope |cxt|
  std::vector<std::size_t> below;
};

struct PremiseFamily {
  std::vector<PremiseBoundary> premises;
};

// all earlier premises, for a totally ordered family
std::vector<std::size_t> all_below(std::size_t i);

Arity premise_family_arity(const PremiseFamily& P);
// premise -> its metavariable, for object premises
std::vector<std::optional<std::size_t>> premise_metas(const PremiseFamily& P);

Boundary premise_boundary(ScopeSystem sys, const PremiseBoundary& p);
Family<Judgement> flatten_premise_family(ScopeSystem sys, const PremiseFamily& P);

// Shape checks: `below` strictly earlier, forms and scopes consistent, each
// premise mentions only metavariables of premises it is above. Syntax is
// validated against sig + arity(P). Throws NotSequential / ScopeMismatch ...
void validate_premise_family(const Signature& sig, ScopeSystem sys, const PremiseFamily& P);

// Witness keys, besides premise_presup_key and conclusion_presup_key:
// "premise_i/cxt_k" derives the k-th context entry of premise i over its
// initial segment. Premise witnesses use as hypotheses the flattened
// premises listed in `below`, in that order; conclusion witnesses use all.
std::string premise_context_key(std::size_t i, std::size_t k);

struct RuleBoundarySpec {
  std::string name;
  PremiseFamily premises;
  JudgementForm form = JudgementForm::IsTy;
  std::vector<Expr> conclusion;  // boundary slots in the empty context
  PresupWitnesses witnesses;
};

Boundary conclusion_boundary(const RuleBoundarySpec& RB);

// premise family and conclusion slots well-formed over sig + arity(P)
void validate_rule_boundary(const Signature& sig, ScopeSystem sys, const RuleBoundarySpec& RB);

// Checks every witness of RB over T + arity (T's signature must be sig's
// base). Returns the first failure.
CheckResult check_rule_boundary(const RawTypeTheory& T, const RuleBoundarySpec& RB);

// Object conclusion: needs a symbol of arity(P) and the conclusion's class.
// Equality conclusion: no symbol. Throws SymbolRequired, SymbolForbidden,
// SymbolArityMismatch.
RawRule realise_rule_boundary(const Signature& sig, ScopeSystem sys, const RuleBoundarySpec& RB,
                              std::optional<std::size_t> symbol);

// The provisional sequential-rule condition over a flattened rule: R tight
// and each metavariable only used by premises after the one introducing it.
CheckResult check_sequential_rule(const RawRule& R);

// Presuppositivity witnesses of the realised rule, rebuilt from the
// rule-boundary witnesses (hypothesis numbers moved to the full premise list).
PresupWitnesses realised_witnesses(const RuleBoundarySpec& RB);

// ---- well-founded raw theories

struct WellFoundedReport {
  bool well_founded = false;
  bool rules_well_founded = true;
  bool order_ok = true;  // the supplied order, if any, is acyclic and contains every edge
  // dependency edges (a, b): rule a must come before rule b
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  // strongly connected components carrying a cycle, as rule names
  std::vector<std::vector<std::string>> cycles;
  std::vector<std::string> diagnostics;
};

// T must have a symbol-rule bijection (NotAcceptable otherwise). Edges:
// beta(S) -> i for symbols in the premises or conclusion boundary of rule i
// (the whole conclusion for equality rules), j -> i for rules cited by i's
// witnesses, beta(S) -> i for symbols occurring in them. With an order, the
// order must be acyclic and contain every edge; without one, the edge graph
// must be acyclic.
WellFoundedReport check_well_founded_theory(const RawTypeTheory& T, const TheoryWitnesses& W,
                                            const std::optional<std::vector<std::pair<std::size_t, std::size_t>>>& order = {});

// ---- well-presented theories

struct WellPresentedRule {
  RuleBoundarySpec boundary;
  std::string symbol;  // object rules: the symbol it introduces
  // object rules: presupposition witnesses of the congruence rule; generated
  // by simple_congruence_witnesses when absent
  std::optional<PresupWitnesses> congruence_witnesses;
};

// Expressions are over the total signature: one symbol per object rule, in
// rule order (see well_presented_signature).
struct WellPresentedTheorySpec {
  std::string name;
  ScopeSystem sys = ScopeSystem::DeBruijnIndices;
  std::vector<WellPresentedRule> rules;
  std::vector<std::pair<std::size_t, std::size_t>> order;  // (below, above) on rule indices
};

Signature well_presented_signature(const WellPresentedTheorySpec& spec);

struct Elaboration {
  RawTypeTheory theory;
  TheoryWitnesses witnesses;
  std::vector<std::pair<std::size_t, std::size_t>> order;  // on raw rule indices
  std::vector<std::size_t> realised;                       // spec rule -> raw rule
  std::vector<std::optional<std::size_t>> congruence;      // spec rule -> raw congruence rule
  AcceptabilityReport acceptability;
  WellFoundedReport well_founded;
};

// Realised rules in spec order, then the congruence rules of the object
// rules in spec order. Throws CyclicOrder, StageViolation, WitnessFailure.
Elaboration elaborate_theory(const WellPresentedTheorySpec& spec);

// transitive closure of a relation on n points; (a, b) means a < b
std::vector<std::vector<bool>> transitive_closure(std::size_t n,
                                                  const std::vector<std::pair<std::size_t, std::size_t>>& rel);

}  // namespace gtt
