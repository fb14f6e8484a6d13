#pragma once

// Well-behavedness of rules and theories, and the metatheorems as derivation
// transformers.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gtt/theories.hpp"

namespace gtt {

// ---- tightness

struct TightnessResult {
  bool tight = false;
  std::vector<std::size_t> premise_of_arg;  // the bijection, argument -> premise
  std::string reason;
};

TightnessResult check_tight(const RawRule& R);

// R is a symbol rule for symbol k of sig
bool is_symbol_rule_for(const Signature& sig, std::size_t k, const RawRule& R);

// ---- presuppositivity

// Witnesses keyed "premise_i/presup_j" and "conclusion/presup_j". A witness
// is a derivation over T + arity(R) from R's premises (strong) or from the
// premises followed by their presuppositions (weak). Strong witnesses are
// valid weak witnesses, as the premises come first in both layouts.
using PresupWitnesses = std::map<std::string, Derivation>;
using TheoryWitnesses = std::map<std::string, PresupWitnesses>;  // by rule name

std::string premise_presup_key(std::size_t i, std::size_t j);
std::string conclusion_presup_key(std::size_t j);

// premises, then the presuppositions of each premise in turn
Family<Judgement> weak_hypotheses(const RawRule& R);
Family<Judgement> weak_hypotheses(const Family<Judgement>& hyps);

CheckResult check_presuppositive(const RawTypeTheory& T, const RawRule& R, const PresupWitnesses& w, bool weak);

// Strong witnesses for the eight structural raw rules.
const PresupWitnesses& equivalence_witnesses(EquivRule k);
const PresupWitnesses& conversion_witnesses(ConvRule k);

// Witnesses for the congruence rule of rule r, built from r's own witnesses.
// Only covers rules whose premises have empty contexts and whose left and
// right boundary copies coincide (no metavariables in premise types or in the
// conclusion type); nullopt otherwise.
std::optional<PresupWitnesses> simple_congruence_witnesses(const RawTypeTheory& T, const TheoryWitnesses& W,
                                                          std::size_t r);

// ---- theories

struct RuleReport {
  std::string name;
  bool object = false;
  bool tight = false;
  bool presuppositive = false;
  bool weakly_presuppositive = false;
  bool empty_conclusion_context = false;
  std::vector<std::string> diagnostics;
  bool acceptable() const { return tight && presuppositive && empty_conclusion_context; }
};

struct AcceptabilityReport {
  std::vector<RuleReport> rules;
  bool tight = false;
  bool presuppositive = false;
  bool substitutive = false;
  bool congruous = false;
  std::vector<std::optional<std::size_t>> symbol_rule;      // per symbol
  std::vector<std::optional<std::size_t>> congruence_rule;  // per object rule
  std::vector<std::string> diagnostics;
  bool acceptable() const { return tight && presuppositive && substitutive && congruous; }
};

AcceptabilityReport check_acceptable_theory(const RawTypeTheory& T, const TheoryWitnesses& W);

// The symbol -> symbol-rule map, with diagnostics when it is not a bijection
// onto the object rules.
struct SymbolRuleMap {
  std::vector<std::optional<std::size_t>> rule_of_symbol;
  std::vector<std::optional<std::size_t>> symbol_of_rule;
  std::vector<std::string> problems;
  bool bijective() const { return problems.empty(); }
};
SymbolRuleMap symbol_rules(const RawTypeTheory& T);

std::optional<std::size_t> find_congruence_rule(const RawTypeTheory& T, std::size_t r);
bool is_substitutive(const RawTypeTheory& T);

// ---- presuppositions theorem

// For each presupposition of the conclusion of d (over hyps), a derivation
// of it from hyps followed by the presuppositions of hyps.
Family<Derivation> derive_presuppositions(const RawTypeTheory& T, const TheoryWitnesses& W,
                                          const Family<Judgement>& hyps, const Derivation& d);

// ---- admissibility and elimination of substitution

// d : Gamma |- J substitution-free, r : Gamma -> target type-respecting.
Derivation rename_derivation(const RawTypeTheory& T, const Renaming& r, const RawContext& target, const Derivation& d);

// typings[i] derives delta |- f(i) : f*Gamma_i for every i outside K.
Derivation substitute_derivation(const RawTypeTheory& T, const RawContext& delta, const RawSubstitution& f,
                                 const TrivialSet& K, const std::vector<std::optional<Derivation>>& typings,
                                 const Derivation& d);

struct EqualityTriple {
  Derivation f, g, eq;  // delta |- f(i) : f*G_i,  delta |- g(i) : g*G_i,  delta |- f(i) == g(i) : f*G_i
};

struct EqualSubstitution {
  Derivation df, dg;
  std::optional<Derivation> deq;  // object judgements only
};

EqualSubstitution substitute_equal_derivation(const RawTypeTheory& T, const RawContext& delta,
                                              const RawSubstitution& f, const RawSubstitution& g, const TrivialSet& K,
                                              const std::vector<std::optional<EqualityTriple>>& triples,
                                              const Derivation& d);

Derivation eliminate_substitution(const RawTypeTheory& T, const Derivation& d);

// ---- uniqueness of typing, natural types, inversion

// dA : G |- A type, dB : G |- B type, d1 : G |- t : A, d2 : G |- t : B
Derivation unique_typing(const RawTypeTheory& T, const Derivation& dA, const Derivation& dB, const Derivation& d1,
                         const Derivation& d2);
// the type derivations are obtained from the presuppositions theorem
Derivation unique_typing(const RawTypeTheory& T, const TheoryWitnesses& W, const Derivation& d1, const Derivation& d2);

Expr natural_type(const RawTypeTheory& T, const RawContext& gamma, const Expr& t);

Derivation invert(const RawTypeTheory& T, const TheoryWitnesses& W, const Derivation& d);

// Term judgements: a single term conversion whose subject derivation ends in
// a variable or symbol rule at the natural type. Type judgements: ends in a
// symbol rule.
bool is_inversion_canonical(const RawTypeTheory& T, const Derivation& d);

}  // namespace gtt
