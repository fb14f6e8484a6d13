#include <doctest.h>

#include "gtt/builders.hpp"
#include "gtt/bundled.hpp"
#include "gtt/maps.hpp"
#include "support/expect.hpp"
#include "support/oracles.hpp"

using namespace gtt;
using gtt::testing::error_kind;

namespace {

constexpr auto Ix = ScopeSystem::DeBruijnIndices;
constexpr auto Lv = ScopeSystem::DeBruijnLevels;
using C = SyntacticClass;

Expr v(Position i) { return Expr::var(i); }
Expr M(std::size_t i, std::vector<Expr> a = {}) { return Expr::meta(i, std::move(a)); }
RawContext cx(std::vector<Expr> ts = {}) { return RawContext(std::move(ts)); }

// random map of the small signature into itself
RawSyntaxMap random_syntax_map(oracle::Rand& r, const Signature& sig) {
  RawSyntaxMap f{sig, sig, {}};
  for (const auto& S : sig.symbols)
    f.images.push_back(oracle::random_expr(r, mv_extend_signature(sig, S.arity), 0, S.cls, 3));
  return f;
}

// universe_el into type_in_type: U to El(u), El(a) to El(a)
struct UniverseIntoTypeInType {
  bundled::Bundle src = bundled::universe_el();
  bundled::Bundle dst = bundled::type_in_type();
  Expr u = make_sym(dst.theory.sig, dst.theory.symbol_index("u"));
  Expr El(Expr a) const { return make_sym(dst.theory.sig, dst.theory.symbol_index("El"), {std::move(a)}); }
  Derivation du(const RawContext& G = {}) const { return mk::rule(dst.theory, "u-intro", G, {}); }
  Derivation dElu(const RawContext& G = {}) const { return mk::rule(dst.theory, "El-form", G, {u}, {du(G)}); }

  RawTheoryMap map() const {
    const RawTypeTheory& T = dst.theory;
    RawTheoryMap F{RawSyntaxMap{src.theory.sig, T.sig, {El(u), El(M(0))}}, {}};
    const Arity a{ArityArg{C::Tm, 0, "a"}};
    for (const RawRule& R : src.theory.rules) {
      if (R.name == "U-form") {
        F.rule_images.push_back(dElu());
      } else if (R.name == "El-form") {
        F.rule_images.push_back(Derivation::rule(T.rule_index("El-form"), Instantiation{a, 0, {M(0)}}, cx(),
                                                 {Derivation::hyp(0)}));
      } else if (R.name == "U-form-cong") {
        F.rule_images.push_back(mk::ty_refl(cx(), El(u), dElu()));
      } else if (R.name == "El-form-cong") {
        const std::size_t r = T.rule_index("El-form-cong");
        F.rule_images.push_back(Derivation::rule(r, Instantiation{T.rules[r].arity, 0, {M(0), M(1)}}, cx(),
                                                 {Derivation::hyp(0), Derivation::hyp(1), Derivation::hyp(2)}));
      } else {
        F.rule_images.push_back(std::nullopt);
      }
    }
    return F;
  }
};

}  // namespace

TEST_CASE("syntax maps") {
  UniverseIntoTypeInType X;
  const RawTheoryMap F = X.map();
  REQUIRE_NOTHROW(validate_syntax_map(F.map));
  const Signature& S = X.src.theory.sig;
  const Expr U = make_sym(S, 0);
  auto El = [&](Expr a) { return make_sym(S, 1, {std::move(a)}); };
  CHECK(apply_syntax_map(Ix, F.map, 0, U) == X.El(X.u));
  CHECK(apply_syntax_map(Ix, F.map, 2, El(v(1))) == X.El(v(1)));
  CHECK(apply_syntax_map(Ix, F.map, 0, El(M(0))) == X.El(M(0)));
  CHECK(map_judgement(Ix, F.map, Judgement::is_tm(cx({U}), v(0), U)) == Judgement::is_tm(cx({X.El(X.u)}), v(0), X.El(X.u)));
  // the universe's El-form becomes type_in_type's
  CHECK(same_rule(map_rule(Ix, F.map, X.src.theory.rules[1]), X.dst.theory.rules[1]));

  RawSyntaxMap bad = F.map;
  bad.images[0] = X.u;
  CHECK(error_kind([&] { validate_syntax_map(bad); }) == ErrorKind::ClassMismatch);
}

TEST_CASE("identity and composition of syntax maps") {
  const Signature sig = oracle::small_signature();
  oracle::Rand r(17);
  const RawSyntaxMap id = identity_syntax_map(sig);
  for (auto sys : {Ix, Lv}) {
    for (int trial = 0; trial < 40; ++trial) {
      const RawSyntaxMap f = random_syntax_map(r, sig), g = random_syntax_map(r, sig);
      REQUIRE_NOTHROW(validate_syntax_map(f));
      const RawSyntaxMap gf = compose_syntax_maps(sys, g, f);
      CHECK(same_syntax_map(compose_syntax_maps(sys, f, id), f));
      CHECK(same_syntax_map(compose_syntax_maps(sys, id, f), f));
      for (int k = 0; k < 10; ++k) {
        const Scope n = r.below(3);
        const Expr e = oracle::random_expr(r, sig, n, r.coin() ? C::Ty : C::Tm, 4);
        CHECK(apply_syntax_map(sys, id, n, e) == e);
        CHECK(apply_syntax_map(sys, gf, n, e) == apply_syntax_map(sys, g, n, apply_syntax_map(sys, f, n, e)));
      }
    }
  }
}

TEST_CASE("promotion and demotion") {
  const Signature sig = oracle::small_signature();
  oracle::Rand r(5);
  CHECK(promote(Ix, 2, v(0)) == M(0));
  CHECK(promote(Ix, 2, v(1), 3) == M(4));
  for (auto sys : {Ix, Lv}) {
    for (int trial = 0; trial < 300; ++trial) {
      const Scope n = r.below(4);
      const Expr e = oracle::random_expr(r, sig, n, r.coin() ? C::Ty : C::Tm, 4);
      const Expr p = promote(sys, n, e);
      CHECK(occurring_vars(sys, 0, p).empty());
      CHECK(instantiate_expr(sys, demote(sys, n), 0, p) == e);
    }
  }
}

TEST_CASE("theory maps") {
  UniverseIntoTypeInType X;
  const RawTheoryMap F = X.map();
  const CheckResult ok = check_theory_map(X.src.theory, X.dst.theory, F);
  CHECK_MESSAGE(ok.ok, ok.message);
  CHECK(check_theory_map(X.src.theory, X.src.theory, identity_theory_map(X.src.theory)).ok);

  // [x : U] |- El(x) type
  const RawTypeTheory& T = X.src.theory;
  const RawContext G({make_sym(T.sig, 0)});
  const Derivation d = mk::rule(T, "El-form", G, {v(0)}, {Derivation::var(G, 0, mk::rule(T, "U-form", G, {}))});
  const Judgement J = check_derivation(T, {}, d);
  const Derivation md = apply_theory_map_derivation(Ix, F, d);
  CHECK(check_derivation(X.dst.theory, {}, md) == map_judgement(Ix, F.map, J));

  // composing with the identity changes nothing observable
  const RawTheoryMap FI = compose_theory_maps(Ix, F, identity_theory_map(T));
  CHECK(same_syntax_map(FI.map, F.map));
  CHECK(check_derivation(X.dst.theory, {}, apply_theory_map_derivation(Ix, FI, d)) == map_judgement(Ix, F.map, J));

  RawTheoryMap partial = F;
  partial.rule_images[0] = std::nullopt;
  CHECK_FALSE(check_theory_map(T, X.dst.theory, partial).ok);
  CHECK(check_theory_map(T, X.dst.theory, partial, true).ok);
  CHECK(error_kind([&] { apply_theory_map_derivation(Ix, partial, d); }) == ErrorKind::MissingRuleImage);

  RawTheoryMap wrong = F;
  wrong.rule_images[0] = X.du();
  CHECK_FALSE(check_theory_map(T, X.dst.theory, wrong).ok);
}

TEST_CASE("realisers") {
  UniverseIntoTypeInType X;
  const RuleBoundarySpec U_form{"U-form", {}, JudgementForm::IsTy, {}, {}};
  CHECK(check_realiser(X.dst.theory, U_form, X.El(X.u), X.dElu()).ok);
  CHECK_FALSE(check_realiser(X.dst.theory, U_form, X.El(X.u), X.du()).ok);
}

TEST_CASE("replacing type-in-type") {
  const bundled::Bundle tt = bundled::type_in_type();
  ReplacementBuilder B = start_replacement(tt.theory);
  std::vector<StepResult> res;
  for (const auto& s : bundled::type_in_type_replacement()) res.push_back(replacement_step(B, s));
  REQUIRE(res.size() == 4);
  CHECK(B.theory.sig.symbols.size() == 3);
  CHECK_FALSE(res[3].symbol.has_value());
  const std::size_t U = B.theory.symbol_index("U"), Elp = B.theory.symbol_index("El'"), up = B.theory.symbol_index("u'");
  const Expr u = make_sym(tt.theory.sig, 0), El = make_sym(tt.theory.sig, 1, {M(0)});
  CHECK(B.map.map.images[U] == make_sym(tt.theory.sig, 1, {u}));
  CHECK(B.map.map.images[Elp] == El);
  CHECK(B.map.map.images[up] == u);
  // U == El'(u') is one of the rules
  const RawRule& eq = B.theory.rules[res[3].rule];
  CHECK(eq.conclusion == Judgement::ty_eq(cx(), make_sym(B.theory.sig, U),
                                          make_sym(B.theory.sig, Elp, {make_sym(B.theory.sig, up)})));
  const CheckResult m = check_theory_map(B.theory, tt.theory, B.map, true);
  CHECK_MESSAGE(m.ok, m.message);
  CHECK(check_acceptable_theory(B.theory, B.witnesses).acceptable());
  CHECK(check_well_founded_theory(B.theory, B.witnesses, B.order).well_founded);

  // the same symbol twice is refused
  ReplacementBuilder again = start_replacement(tt.theory);
  const auto steps = bundled::type_in_type_replacement();
  replacement_step(again, steps[0]);
  CHECK(error_kind([&] { replacement_step(again, steps[0]); }) == ErrorKind::UnknownName);
  // a witness for the wrong judgement is refused
  ReplacementStep broken = steps[0];
  broken.witness = mk::rule(tt.theory, "u-intro", cx(), {});
  ReplacementBuilder fresh = start_replacement(tt.theory);
  CHECK(error_kind([&] { replacement_step(fresh, broken); }) == ErrorKind::WitnessFailure);
}

TEST_CASE("the section") {
  for (const auto& b : {bundled::type_in_type(), bundled::universe_el(), bundled::mltt_pi(), bundled::mltt_pi_base()}) {
    CAPTURE(b.name);
    const Section S = section_s(b.theory, b.witnesses);
    CHECK(section_is_retraction(b.theory.sys, S));
    CHECK(S.c_symbol.size() == b.theory.sig.symbols.size());
    const CheckResult t = check_theory_map(S.builder.theory, b.theory, S.builder.map, true);
    CHECK_MESSAGE(t.ok, t.message);
  }
  const bundled::Bundle tt = bundled::type_in_type();
  const Section S = section_s(tt.theory, tt.witnesses);
  const std::size_t El = tt.theory.symbol_index("El");
  const Expr sEl = S.s.images[El];
  CHECK(sEl == Expr::sym(S.c_symbol[El], {M(0)}));
  CHECK(S.builder.theory.sig.sym(S.c_symbol[El]).name == "c_El");

  const bundled::Bundle q = bundled::cyclic_quantifier();
  CHECK(error_kind([&] { section_s(q.theory, q.witnesses); }) == ErrorKind::NotSequential);
}
