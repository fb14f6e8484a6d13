#pragma once

// Raw syntax maps and raw theory maps, realisers of rule-boundaries, the
// replacement of a theory by a step-by-step extension of another, and the
// section built by reading every symbol rule back as a replacement step.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gtt/presentation.hpp"

namespace gtt {

// ---- syntax maps

// images[k] is a closed expression over dst + arity(src.sym(k)), of the class
// of symbol k. Both signatures carry no metavariables.
struct RawSyntaxMap {
  Signature src;
  Signature dst;
  std::vector<Expr> images;
};

void validate_syntax_map(const RawSyntaxMap& f);

// Variables stay, metavariables keep their index, symbols are replaced by
// their image instantiated with the mapped arguments.
Expr apply_syntax_map(ScopeSystem sys, const RawSyntaxMap& f, Scope scope, const Expr& e);
RawContext map_context(ScopeSystem sys, const RawSyntaxMap& f, const RawContext& G);
Judgement map_judgement(ScopeSystem sys, const RawSyntaxMap& f, const Judgement& J);
Boundary map_boundary(ScopeSystem sys, const RawSyntaxMap& f, const Boundary& B);
Instantiation map_instantiation(ScopeSystem sys, const RawSyntaxMap& f, const Instantiation& I);
RawSubstitution map_substitution(ScopeSystem sys, const RawSyntaxMap& f, const RawSubstitution& s);
RawRule map_rule(ScopeSystem sys, const RawSyntaxMap& f, const RawRule& R);

RawSyntaxMap identity_syntax_map(const Signature& sig);
// g . f
RawSyntaxMap compose_syntax_maps(ScopeSystem sys, const RawSyntaxMap& g, const RawSyntaxMap& f);
// same images (names of the signatures are not compared)
bool same_syntax_map(const RawSyntaxMap& a, const RawSyntaxMap& b);

// ---- theory maps

// rule_images[r] derives f(R_r) over dst + arity(R_r) from the mapped
// premises. An absent image makes the map partial.
struct RawTheoryMap {
  RawSyntaxMap map;
  std::vector<std::optional<Derivation>> rule_images;
};

// Every present image is re-checked; absent ones fail unless allow_partial.
CheckResult check_theory_map(const RawTypeTheory& src, const RawTypeTheory& dst, const RawTheoryMap& F,
                             bool allow_partial = false);

RawTheoryMap identity_theory_map(const RawTypeTheory& T);
RawTheoryMap compose_theory_maps(ScopeSystem sys, const RawTheoryMap& G, const RawTheoryMap& F);

// Derivation over src to one over dst of the mapped judgement. Throws
// MissingRuleImage on rules without an image.
Derivation apply_theory_map_derivation(ScopeSystem sys, const RawTheoryMap& F, const Derivation& d);

// ---- realisers

// e realises the object boundary RB in T when witness derives the completed
// conclusion over T + arity(P) from the flattened premises.
CheckResult check_realiser(const RawTypeTheory& T, const RuleBoundarySpec& RB, const Expr& e,
                           const Derivation& witness);

// Position p of gamma becomes the metavariable offset + p applied to nothing.
Expr promote(ScopeSystem sys, Scope gamma, const Expr& e, std::size_t offset = 0);
// Metavariable i of simple_arity(gamma) goes back to variable i.
Instantiation demote(ScopeSystem sys, Scope gamma);

// ---- replacement

struct ReplacementStep {
  RuleBoundarySpec boundary;  // over the theory built so far
  std::string symbol;         // object steps: name of the new symbol
  std::optional<Expr> realiser;  // object steps: over target + arity(P)
  Derivation witness;            // over target + arity(P), from the mapped premises
  std::optional<PresupWitnesses> congruence_witnesses;
};

// theory is built rule by rule, map sends it to target. order is a chain on
// the rules of theory.
struct ReplacementBuilder {
  RawTypeTheory target;
  RawTypeTheory theory;
  TheoryWitnesses witnesses;
  RawTheoryMap map;
  std::vector<std::pair<std::size_t, std::size_t>> order;
};

ReplacementBuilder start_replacement(const RawTypeTheory& target);
// Continue from an existing theory with a map into target.
ReplacementBuilder start_replacement(const RawTypeTheory& source, const TheoryWitnesses& W,
                                     const RawTypeTheory& target, const RawTheoryMap& f);

struct StepResult {
  std::size_t rule = 0;                     // realised rule
  std::optional<std::size_t> symbol;        // object steps
  std::optional<std::size_t> congruence;    // object steps
  bool congruence_image = false;            // whether the congruence rule has an image
};

// Checks the boundary over the current theory and the witness against the
// mapped boundary, then adds the symbol, its rule and its congruence rule.
// Throws WitnessFailure, ClassMismatch, UnknownName (duplicate names), and
// whatever realisation throws.
StepResult replacement_step(ReplacementBuilder& B, const ReplacementStep& s);

// ---- the section

struct Section {
  ReplacementBuilder builder;  // builder.map plays the retraction t
  RawSyntaxMap s;              // source symbols -> generic c-applications
  std::vector<std::size_t> c_symbol;  // source symbol -> its c-symbol
};

// For an acceptable theory T whose symbol rules are sequential with their
// context and boundary witnesses using earlier premises only. Throws
// NotSequential, NotAcceptable, MissingWitness.
Section section_s(const RawTypeTheory& T, const TheoryWitnesses& W);

// t . s is the identity on symbols
bool section_is_retraction(ScopeSystem sys, const Section& S);

}  // namespace gtt
