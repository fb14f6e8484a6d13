#pragma once

// Raw type theories, derivation trees over their closure systems, and the
// actions of signature maps and instantiations on derivations.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gtt/rules.hpp"

namespace gtt {

struct RawTypeTheory {
  ScopeSystem sys = ScopeSystem::DeBruijnIndices;
  Signature sig;  // no metavariables
  std::vector<RawRule> rules;

  std::optional<std::size_t> find_rule(const std::string& name) const;
  std::size_t rule_index(const std::string& name) const;  // throws UnknownName
  std::size_t symbol_index(const std::string& name) const;
};

void validate_theory(const RawTypeTheory& T);

// One node of a derivation. Which fields matter depends on the kind:
//   Hyp      index = hypothesis number
//   Var      ctx = Gamma, index = position
//   Equiv    index = EquivRule, inst, ctx
//   Conv     index = ConvRule, inst, ctx
//   Subst    ctx = Delta, f, trivial, judgement = J over Gamma
//   EqSubst  ctx = Delta, f, g, trivial, judgement
//   Rule     index = rule of the theory, inst, ctx
// Children follow the premise order of the closure rule the node stands for.
struct Derivation {
  enum class Kind { Hyp, Var, Equiv, Conv, Subst, EqSubst, Rule };
  Kind kind = Kind::Hyp;
  std::size_t index = 0;
  Instantiation inst;
  RawContext ctx;
  RawSubstitution f, g;
  TrivialSet trivial;
  Judgement judgement;
  std::vector<Derivation> children;

  static Derivation hyp(std::size_t k);
  static Derivation var(RawContext gamma, Position i, Derivation type_deriv);
  static Derivation equiv(EquivRule k, Instantiation I, RawContext gamma, std::vector<Derivation> ch);
  static Derivation conv(ConvRule k, Instantiation I, RawContext gamma, std::vector<Derivation> ch);
  static Derivation subst(RawContext delta, RawSubstitution f, TrivialSet K, Judgement J, std::vector<Derivation> ch);
  static Derivation eqsubst(RawContext delta, RawSubstitution f, RawSubstitution g, TrivialSet K, Judgement J,
                            std::vector<Derivation> ch);
  static Derivation rule(std::size_t r, Instantiation I, RawContext gamma, std::vector<Derivation> ch);

  bool operator==(const Derivation&) const = default;
};

const char* derivation_kind_name(Derivation::Kind k);

// The closure rule a non-hypothesis node stands for (validated against sig,
// the theory's signature possibly extended by metavariables).
ClosureRule<Judgement> node_rule(const RawTypeTheory& T, const Signature& sig, const Derivation& d);

// Checks d over T + alpha from the hypotheses; returns its conclusion.
Judgement check_derivation(const RawTypeTheory& T, const Family<Judgement>& hyps, const Derivation& d,
                           const Arity& alpha = {});

// Conclusion without re-checking children (d assumed valid).
Judgement conclusion_of(const RawTypeTheory& T, const Family<Judgement>& hyps, const Derivation& d);

struct CheckResult {
  bool ok = false;
  std::string message;
  explicit operator bool() const { return ok; }
};

CheckResult check_derivation_concludes(const RawTypeTheory& T, const Family<Judgement>& hyps, const Derivation& d,
                                       const Judgement& expected, const Arity& alpha = {});

// witness over T + arity(R) from R's premises
CheckResult check_derived_rule(const RawTypeTheory& T, const RawRule& R, const Derivation& witness);
// witness over T from the instantiated premises
CheckResult check_admissible_instance(const RawTypeTheory& T, const RawRule& R, const Instantiation& I,
                                      const RawContext& gamma, const Derivation& witness);

// ---- actions on derivations

// A simple map of theories: symbols go to symbols, rules to rules whose
// translation is the same rule.
struct SimpleTheoryMap {
  SignatureMap sig;
  std::vector<std::size_t> rules;
};

void validate_simple_map(const SimpleTheoryMap& F, const RawTypeTheory& src, const RawTypeTheory& dst);
Derivation translate_derivation(const SimpleTheoryMap& F, const Derivation& d);
SimpleTheoryMap compose_simple_maps(const SimpleTheoryMap& G, const SimpleTheoryMap& F);

// The theory T seen over Sigma + alpha: same rules, only the metavariable
// layer is new. A derivation over T with metavariables is a derivation over
// this theory; the map on signatures is the identity.
Derivation instantiate_derivation(ScopeSystem sys, const Instantiation& I, const RawContext& gamma, const Derivation& d);

// hypothesis leaves replaced by fillers
Derivation graft_derivation(const Derivation& outer, const std::vector<Derivation>& fillers);

// metavariable renumbering along a signature map (sym part should be identity)
Derivation translate_metas(const SignatureMap& F, const Derivation& d);

bool is_substitution_free(const Derivation& d);
bool is_hypothesis_free(const Derivation& d);
std::size_t derivation_size(const Derivation& d);
std::size_t derivation_depth(const Derivation& d);

// Which theory rules and symbols a derivation touches (instantiations,
// contexts and substitutions included).
struct Provenance {
  std::set<std::size_t> rules;
  std::set<std::size_t> symbols;
};
Provenance provenance(const Derivation& d);
void collect_symbols(const Expr& e, std::set<std::size_t>& out);
void collect_symbols(const Judgement& J, std::set<std::size_t>& out);

}  // namespace gtt
