#pragma once

// Raw rules, their instantiation into closure rules, the structural rules and
// congruence rules.

#include <string>
#include <vector>

#include "gtt/foundations.hpp"
#include "gtt/judgements.hpp"

namespace gtt {

// Premises and conclusion live over Sigma + arity.
struct RawRule {
  std::string name;
  Arity arity;
  Family<Judgement> premises;
  Judgement conclusion;
};

// structural equality, ignoring names
bool same_rule(const RawRule& a, const RawRule& b);
bool is_object_rule(const RawRule& R);
void validate_rule(const Signature& sig, const RawRule& R);
RawRule translate_rule(const SignatureMap& F, const RawRule& R);

ClosureRule<Judgement> instantiate_rule(ScopeSystem sys, const Instantiation& I, const RawContext& gamma, const RawRule& R);

ClosureRule<Judgement> variable_rule(const RawContext& gamma, Position i);

enum class EquivRule { TyRefl, TySym, TyTrans, TmRefl, TmSym, TmTrans };
enum class ConvRule { Tm, Eq };

const char* equiv_rule_name(EquivRule k);
const char* conv_rule_name(ConvRule k);

// Fixed raw rules, written with metavariables only, so valid over any
// signature.
const std::vector<RawRule>& equivalence_rules();
const std::vector<RawRule>& conversion_rules();
const RawRule& equivalence_rule(EquivRule k);
const RawRule& conversion_rule(ConvRule k);

// Positions guaranteed to act trivially; one flag per position of Gamma.
using TrivialSet = std::vector<bool>;

TrivialSet all_positions(Scope n);
TrivialSet no_positions(Scope n);

// f : Delta -> Gamma, J over Gamma. Throws TrivialityViolated.
ClosureRule<Judgement> substitution_rule(ScopeSystem sys, const RawContext& delta, const RawSubstitution& f,
                                         const TrivialSet& K, const Judgement& J);
// J must be an object judgement; the conclusion is f*A == g*A or f*t == g*t : f*A.
ClosureRule<Judgement> equality_substitution_rule(ScopeSystem sys, const RawContext& delta, const RawSubstitution& f,
                                                  const RawSubstitution& g, const TrivialSet& K, const Judgement& J);

// The maps Sigma+alpha -> Sigma+(alpha+alpha) onto the left and right copies.
SignatureMap congruence_left(const Arity& alpha);
SignatureMap congruence_right(const Arity& alpha);

// Equation relating the two images of an object judgement.
Judgement assoc_equality_judgement(const SignatureMap& l, const SignatureMap& r, const Judgement& J);

// Premises: left copies, right copies, then one equation per object premise.
RawRule congruence_rule(const RawRule& R);

// indices of object premises in order
std::vector<std::size_t> object_premises(const RawRule& R);

}  // namespace gtt
