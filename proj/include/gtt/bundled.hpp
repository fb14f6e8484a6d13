#pragma once

// Ready-made theories with their presupposition witnesses. All use de Bruijn
// indices.

#include <string>
#include <utility>
#include <vector>

#include "gtt/maps.hpp"

namespace gtt::bundled {

struct Bundle {
  std::string name;
  RawTypeTheory theory;
  TheoryWitnesses witnesses;
  // optional user order on rule indices, pairs (below, above)
  std::vector<std::pair<std::size_t, std::size_t>> order;
};

// Pi, lam, app, beta and the three congruence rules.
Bundle mltt_pi();
// mltt_pi plus a base type o, a second name o_alt with o_alt == o, and a
// constant c : o, so that closed judgements exist.
Bundle mltt_pi_base();
// u : El(u), El(a) type for a : El(u), with congruence rules.
Bundle type_in_type();
// Q(A, t(x)) type for t(x) : A in context x : Q(A, t(x)), with its congruence rule.
Bundle cyclic_quantifier();
// U type, El(a) type for a : U, with congruence rules.
Bundle universe_el();
// Pi-form, its congruence rule, and variant k (1..6) of the application rule,
// named "app-k". Variant 3 ships a witness that does not check and variant 5
// none at all.
Bundle app_variant(int k);

// The Pi, lam, app, beta fragment as a well-presented theory: Pi below lam
// and app, both below beta. Congruence witnesses come from mltt_pi().
WellPresentedTheorySpec mltt_pi_spec();

// A sequential raw rule read back as a rule-boundary with a total premise
// order. Context witnesses are found among the earlier premises; throws
// NotSequential or MissingWitness.
WellPresentedRule well_presented_rule_of(ScopeSystem sys, const RawRule& R, const PresupWitnesses& w,
                                         std::string symbol);

// Replacement of type_in_type by a theory with U, El' and u' where U is
// realised by El(u), El'(a) by El(a), u' by u, then the equation
// U == El'(u') checked by reflexivity.
std::vector<ReplacementStep> type_in_type_replacement();

// The congruence rule of Pi-form written out by hand.
RawRule pi_congruence_expected();

// ---- building blocks shared with tests and tools

// Weakening of a closed derivation d of J into context delta, as a
// substitution node with no typings.
Derivation weaken_closed(const RawContext& delta, const Judgement& J, const Derivation& d);

// Bundle with congruence rules and their witnesses appended for every object
// rule that has none yet; uses simple_congruence_witnesses, so it throws
// MissingWitness where that does not apply.
void add_simple_congruences(Bundle& b);

}  // namespace gtt::bundled
