#include "gtt/bundled.hpp"

#include "gtt/builders.hpp"
#include "gtt/error.hpp"

#include <algorithm>

namespace gtt::bundled {

namespace {

constexpr SyntacticClass Ty = SyntacticClass::Ty;
constexpr SyntacticClass Tm = SyntacticClass::Tm;

Expr M(std::size_t i, std::vector<Expr> args = {}) { return Expr::meta(i, std::move(args)); }
Expr v(std::size_t i) { return Expr::var(i); }
Derivation H(std::size_t k) { return Derivation::hyp(k); }
RawContext cx(std::vector<Expr> ts = {}) { return RawContext(std::move(ts)); }

struct Builder {
  Bundle b;

  Builder(std::string name, std::vector<Symbol> syms) {
    b.name = std::move(name);
    b.theory.sys = ScopeSystem::DeBruijnIndices;
    b.theory.sig.symbols = std::move(syms);
  }

  Expr S(const std::string& name, std::vector<Expr> args = {}) const {
    return make_sym(b.theory.sig, b.theory.symbol_index(name), std::move(args));
  }

  void rule(std::string name, Arity a, Family<Judgement> prem, Judgement concl, PresupWitnesses w = {}) {
    b.theory.rules.push_back(RawRule{name, std::move(a), std::move(prem), std::move(concl)});
    b.witnesses[name] = std::move(w);
  }

  void congruence(const std::string& of, PresupWitnesses w) {
    RawRule C = congruence_rule(b.theory.rules.at(b.theory.rule_index(of)));
    b.witnesses[C.name] = std::move(w);
    b.theory.rules.push_back(std::move(C));
  }

  Derivation R(const std::string& name, const RawContext& G, std::vector<Expr> args, std::vector<Derivation> ch = {}) const {
    return mk::rule(b.theory, name, G, std::move(args), std::move(ch));
  }
};

ArityArg arg(SyntacticClass c, Scope b, std::string n) { return ArityArg{c, b, std::move(n)}; }

Judgement ty(RawContext G, Expr A) { return Judgement::is_ty(std::move(G), std::move(A)); }
Judgement tm(RawContext G, Expr t, Expr A) { return Judgement::is_tm(std::move(G), std::move(t), std::move(A)); }
Judgement tyeq(RawContext G, Expr A, Expr B) { return Judgement::ty_eq(std::move(G), std::move(A), std::move(B)); }
Judgement tmeq(RawContext G, Expr s, Expr t, Expr A) {
  return Judgement::tm_eq(std::move(G), std::move(s), std::move(t), std::move(A));
}

// single-term substitution out of a one-variable context into the empty one
RawSubstitution at(Expr t) { return RawSubstitution{0, 1, {std::move(t)}}; }

// d : [X''] |- J  moved to [X'] along X' == X'' (all closed derivations given)
Derivation recontext1(const Expr& X1, const Expr& X2, const Derivation& dX1, const Derivation& dX2,
                      const Derivation& dEq, const Judgement& J, const Derivation& d) {
  RawContext D = cx({X1});
  Derivation wX1 = weaken_closed(D, ty(cx(), X1), dX1);
  Derivation wX2 = weaken_closed(D, ty(cx(), X2), dX2);
  Derivation wEq = weaken_closed(D, tyeq(cx(), X1, X2), dEq);
  Derivation typing = mk::conv_tm(D, X1, X2, v(0), wX1, wX2, Derivation::var(D, 0, wX1), wEq);
  return Derivation::subst(D, RawSubstitution::identity(1), no_positions(1), J, {d, typing});
}

std::vector<Symbol> pi_symbols() {
  return {Symbol{"Pi", Ty, {arg(Ty, 0, "A"), arg(Ty, 1, "B")}},
          Symbol{"lam", Tm, {arg(Ty, 0, "A"), arg(Ty, 1, "B"), arg(Tm, 1, "t")}},
          Symbol{"app", Tm, {arg(Ty, 0, "A"), arg(Ty, 1, "B"), arg(Tm, 0, "s"), arg(Tm, 0, "t")}}};
}

void add_pi_form(Builder& B) {
  B.rule("Pi-form", {arg(Ty, 0, "A"), arg(Ty, 1, "B")}, {ty(cx(), M(0)), ty(cx({M(0)}), M(1, {v(0)}))},
         ty(cx(), B.S("Pi", {M(0), M(1, {v(0)})})));
}

// Pi-form-cong; metas A' B' A'' B''
PresupWitnesses pi_cong_witnesses(const Builder& B) {
  const Expr A1 = M(0), B1 = M(1, {v(0)}), A2 = M(2), B2 = M(3, {v(0)});
  PresupWitnesses w;
  w[premise_presup_key(4, 0)] = H(0);
  w[premise_presup_key(4, 1)] = H(2);
  w[premise_presup_key(5, 0)] = H(1);
  w[premise_presup_key(5, 1)] = recontext1(A1, A2, H(0), H(2), H(4), ty(cx({A2}), B2), H(3));
  w[conclusion_presup_key(0)] = B.R("Pi-form", cx(), {A1, B1}, {H(0), H(1)});
  w[conclusion_presup_key(1)] = B.R("Pi-form", cx(), {A2, B2}, {H(2), H(3)});
  return w;
}

Derivation app_conclusion_presup(std::size_t b_hyp, std::size_t t_hyp, const Expr& Bx, const Expr& A, const Expr& t) {
  return Derivation::subst(cx(), at(t), no_positions(1), ty(cx({A}), Bx), {H(b_hyp), H(t_hyp)});
}

void add_pi_rules(Builder& B) {
  const Expr A = M(0), Bx = M(1, {v(0)});
  add_pi_form(B);
  {
    PresupWitnesses w;
    w[premise_presup_key(2, 0)] = H(1);
    w[conclusion_presup_key(0)] = B.R("Pi-form", cx(), {A, Bx}, {H(0), H(1)});
    B.rule("lam-intro", {arg(Ty, 0, "A"), arg(Ty, 1, "B"), arg(Tm, 1, "t")},
           {ty(cx(), A), ty(cx({A}), Bx), tm(cx({A}), M(2, {v(0)}), Bx)},
           tm(cx(), B.S("lam", {A, Bx, M(2, {v(0)})}), B.S("Pi", {A, Bx})), w);
  }
  {
    PresupWitnesses w;
    w[premise_presup_key(2, 0)] = B.R("Pi-form", cx(), {A, Bx}, {H(0), H(1)});
    w[premise_presup_key(3, 0)] = H(0);
    w[conclusion_presup_key(0)] = app_conclusion_presup(1, 3, Bx, A, M(3));
    B.rule("app-elim", {arg(Ty, 0, "A"), arg(Ty, 1, "B"), arg(Tm, 0, "s"), arg(Tm, 0, "t")},
           {ty(cx(), A), ty(cx({A}), Bx), tm(cx(), M(2), B.S("Pi", {A, Bx})), tm(cx(), M(3), A)},
           tm(cx(), B.S("app", {A, Bx, M(2), M(3)}), M(1, {M(3)})), w);
  }
  {
    const Expr tx = M(2, {v(0)}), a = M(3);
    const Expr lam = B.S("lam", {A, Bx, tx});
    PresupWitnesses w;
    w[premise_presup_key(2, 0)] = H(1);
    w[premise_presup_key(3, 0)] = H(0);
    w[conclusion_presup_key(0)] = app_conclusion_presup(1, 3, Bx, A, a);
    w[conclusion_presup_key(1)] = B.R("app-elim", cx(), {A, Bx, lam, a},
                                      {H(0), H(1), B.R("lam-intro", cx(), {A, Bx, tx}, {H(0), H(1), H(2)}), H(3)});
    w[conclusion_presup_key(2)] =
        Derivation::subst(cx(), at(a), no_positions(1), tm(cx({A}), tx, Bx), {H(2), H(3)});
    B.rule("beta", {arg(Ty, 0, "A"), arg(Ty, 1, "B"), arg(Tm, 1, "t"), arg(Tm, 0, "a")},
           {ty(cx(), A), ty(cx({A}), Bx), tm(cx({A}), tx, Bx), tm(cx(), a, A)},
           tmeq(cx(), B.S("app", {A, Bx, lam, a}), M(2, {a}), M(1, {a})), w);
  }

  B.congruence("Pi-form", pi_cong_witnesses(B));

  {
    // lam-intro-cong; metas A' B' t' A'' B'' t''
    const Expr A1 = M(0), B1 = M(1, {v(0)}), t1 = M(2, {v(0)}), A2 = M(3), B2 = M(4, {v(0)}), t2 = M(5, {v(0)});
    PresupWitnesses w;
    w[premise_presup_key(2, 0)] = H(1);
    w[premise_presup_key(5, 0)] = H(4);
    w[premise_presup_key(6, 0)] = H(0);
    w[premise_presup_key(6, 1)] = H(3);
    Derivation B2_at1 = recontext1(A1, A2, H(0), H(3), H(6), ty(cx({A2}), B2), H(4));
    w[premise_presup_key(7, 0)] = H(1);
    w[premise_presup_key(7, 1)] = B2_at1;
    Derivation t2_at1 = recontext1(A1, A2, H(0), H(3), H(6), tm(cx({A2}), t2, B2), H(5));
    RawContext G1 = cx({A1});
    w[premise_presup_key(8, 0)] = H(1);
    w[premise_presup_key(8, 1)] = H(2);
    w[premise_presup_key(8, 2)] = mk::conv_tm(G1, B2, B1, t2, B2_at1, H(1), t2_at1, mk::ty_sym(G1, B1, B2, H(1), B2_at1, H(7)));
    const Expr P1 = B.S("Pi", {A1, B1}), P2 = B.S("Pi", {A2, B2});
    Derivation dP1 = B.R("Pi-form", cx(), {A1, B1}, {H(0), H(1)});
    Derivation dP2 = B.R("Pi-form", cx(), {A2, B2}, {H(3), H(4)});
    Derivation eqP = B.R("Pi-form-cong", cx(), {A1, B1, A2, B2}, {H(0), H(1), H(3), H(4), H(6), H(7)});
    w[conclusion_presup_key(0)] = dP1;
    w[conclusion_presup_key(1)] = B.R("lam-intro", cx(), {A1, B1, t1}, {H(0), H(1), H(2)});
    w[conclusion_presup_key(2)] =
        mk::conv_tm(cx(), P2, P1, B.S("lam", {A2, B2, t2}), dP2, dP1, B.R("lam-intro", cx(), {A2, B2, t2}, {H(3), H(4), H(5)}),
                    mk::ty_sym(cx(), P1, P2, dP1, dP2, eqP));
    B.congruence("lam-intro", w);
  }
  {
    // app-elim-cong; metas A' B' s' t' A'' B'' s'' t''
    const Expr A1 = M(0), B1 = M(1, {v(0)}), s1 = M(2), t1 = M(3), A2 = M(4), B2 = M(5, {v(0)}), s2 = M(6), t2 = M(7);
    const Expr P1 = B.S("Pi", {A1, B1}), P2 = B.S("Pi", {A2, B2});
    Derivation dP1 = B.R("Pi-form", cx(), {A1, B1}, {H(0), H(1)});
    Derivation dP2 = B.R("Pi-form", cx(), {A2, B2}, {H(4), H(5)});
    Derivation B2_at1 = recontext1(A1, A2, H(0), H(4), H(8), ty(cx({A2}), B2), H(5));
    Derivation eqP = B.R("Pi-form-cong", cx(), {A1, B1, A2, B2}, {H(0), H(1), H(4), H(5), H(8), H(9)});
    Derivation t2A1 = mk::conv_tm(cx(), A2, A1, t2, H(4), H(0), H(7), mk::ty_sym(cx(), A1, A2, H(0), H(4), H(8)));
    PresupWitnesses w;
    w[premise_presup_key(2, 0)] = dP1;
    w[premise_presup_key(3, 0)] = H(0);
    w[premise_presup_key(6, 0)] = dP2;
    w[premise_presup_key(7, 0)] = H(4);
    w[premise_presup_key(8, 0)] = H(0);
    w[premise_presup_key(8, 1)] = H(4);
    w[premise_presup_key(9, 0)] = H(1);
    w[premise_presup_key(9, 1)] = B2_at1;
    w[premise_presup_key(10, 0)] = dP1;
    w[premise_presup_key(10, 1)] = H(2);
    w[premise_presup_key(10, 2)] = mk::conv_tm(cx(), P2, P1, s2, dP2, dP1, H(6), mk::ty_sym(cx(), P1, P2, dP1, dP2, eqP));
    w[premise_presup_key(11, 0)] = H(0);
    w[premise_presup_key(11, 1)] = H(3);
    w[premise_presup_key(11, 2)] = t2A1;
    // B'(t') == B'(t'') == B''(t'')
    const Expr B1t1 = M(1, {t1}), B1t2 = M(1, {t2}), B2t2 = M(5, {t2});
    Derivation d11 = app_conclusion_presup(1, 3, B1, A1, t1);
    Derivation d12 = Derivation::subst(cx(), at(t2), no_positions(1), ty(cx({A1}), B1), {H(1), t2A1});
    Derivation d22 = app_conclusion_presup(5, 7, B2, A2, t2);
    Derivation e1 = Derivation::eqsubst(cx(), at(t1), at(t2), no_positions(1), ty(cx({A1}), B1), {H(1), H(3), t2A1, H(11)});
    Derivation e2 = Derivation::subst(cx(), at(t2), no_positions(1), tyeq(cx({A1}), B1, B2), {H(9), t2A1});
    Derivation e = mk::ty_trans(cx(), B1t1, B1t2, B2t2, d11, d12, d22, e1, e2);
    w[conclusion_presup_key(0)] = d11;
    w[conclusion_presup_key(1)] = B.R("app-elim", cx(), {A1, B1, s1, t1}, {H(0), H(1), H(2), H(3)});
    w[conclusion_presup_key(2)] =
        mk::conv_tm(cx(), B2t2, B1t1, B.S("app", {A2, B2, s2, t2}), d22, d11,
                    B.R("app-elim", cx(), {A2, B2, s2, t2}, {H(4), H(5), H(6), H(7)}), mk::ty_sym(cx(), B1t1, B2t2, d11, d22, e));
    B.congruence("app-elim", w);
  }
}

}  // namespace

Derivation weaken_closed(const RawContext& delta, const Judgement& J, const Derivation& d) {
  if (J.ctx.scope() != 0) fail(ErrorKind::ScopeMismatch, "weaken_closed expects a judgement in the empty context");
  return Derivation::subst(delta, RawSubstitution{delta.scope(), 0, {}}, TrivialSet{}, J, {d});
}

void add_simple_congruences(Bundle& b) {
  const std::size_t n = b.theory.rules.size();
  for (std::size_t r = 0; r < n; ++r) {
    const RawRule& R = b.theory.rules[r];
    if (!is_object_rule(R) || find_congruence_rule(b.theory, r)) continue;
    auto w = simple_congruence_witnesses(b.theory, b.witnesses, r);
    if (!w) fail(ErrorKind::MissingWitness, "congruence rule of " + R.name + " needs hand-written witnesses");
    RawRule C = congruence_rule(R);
    b.witnesses[C.name] = std::move(*w);
    b.theory.rules.push_back(std::move(C));
  }
}

Bundle mltt_pi() {
  Builder B("mltt_pi", pi_symbols());
  add_pi_rules(B);
  return B.b;
}

Bundle mltt_pi_base() {
  std::vector<Symbol> syms = pi_symbols();
  syms.push_back(Symbol{"o", Ty, {}});
  syms.push_back(Symbol{"o_alt", Ty, {}});
  syms.push_back(Symbol{"c", Tm, {}});
  Builder B("mltt_pi_base", syms);
  add_pi_rules(B);
  B.rule("o-form", {}, {}, ty(cx(), B.S("o")));
  B.rule("o_alt-form", {}, {}, ty(cx(), B.S("o_alt")));
  {
    PresupWitnesses w;
    w[conclusion_presup_key(0)] = B.R("o-form", cx(), {});
    B.rule("c-intro", {}, {}, tm(cx(), B.S("c"), B.S("o")), w);
  }
  {
    PresupWitnesses w;
    w[conclusion_presup_key(0)] = B.R("o_alt-form", cx(), {});
    w[conclusion_presup_key(1)] = B.R("o-form", cx(), {});
    B.rule("o_alt-def", {}, {}, tyeq(cx(), B.S("o_alt"), B.S("o")), w);
  }
  add_simple_congruences(B.b);
  return B.b;
}

Bundle type_in_type() {
  Builder B("type_in_type", {Symbol{"u", Tm, {}}, Symbol{"El", Ty, {arg(Tm, 0, "a")}}});
  const Expr u = B.S("u"), Elu = B.S("El", {u});
  // El(u) type needs both rules
  B.b.theory.rules.push_back(RawRule{"u-intro", {}, {}, tm(cx(), u, Elu)});
  B.b.theory.rules.push_back(RawRule{"El-form", {arg(Tm, 0, "a")}, {tm(cx(), M(0), Elu)}, ty(cx(), B.S("El", {M(0)}))});
  Derivation dElu = B.R("El-form", cx(), {u}, {B.R("u-intro", cx(), {})});
  B.b.witnesses["u-intro"][conclusion_presup_key(0)] = dElu;
  B.b.witnesses["El-form"][premise_presup_key(0, 0)] = dElu;
  add_simple_congruences(B.b);
  return B.b;
}

std::vector<ReplacementStep> type_in_type_replacement() {
  const Bundle tt = type_in_type();
  const RawTypeTheory& T = tt.theory;
  const Expr u = make_sym(T.sig, T.symbol_index("u")), Elu = make_sym(T.sig, T.symbol_index("El"), {u});
  const Derivation du = mk::rule(T, "u-intro", cx(), {});
  const Derivation dElu = mk::rule(T, "El-form", cx(), {u}, {du});
  // symbols and rules of the theory under construction, in step order
  const Expr U = Expr::sym(0), up = Expr::sym(2);
  const Expr Elp_up = Expr::sym(1, {up});
  const Derivation dU = Derivation::rule(0, Instantiation{}, cx(), {});
  const Derivation dup = Derivation::rule(4, Instantiation{}, cx(), {});
  const Derivation dElp_up =
      Derivation::rule(2, Instantiation{{arg(Tm, 0, "a")}, 0, {up}}, cx(), {dup});

  std::vector<ReplacementStep> steps;
  {
    ReplacementStep s;
    s.boundary = RuleBoundarySpec{"U-form", {}, JudgementForm::IsTy, {}, {}};
    s.symbol = "U";
    s.realiser = Elu;
    s.witness = dElu;
    steps.push_back(s);
  }
  {
    ReplacementStep s;
    PremiseFamily P{{PremiseBoundary{"a", {}, JudgementForm::IsTm, {U}, {}}}};
    s.boundary = RuleBoundarySpec{"El'-form", P, JudgementForm::IsTy, {}, {{premise_presup_key(0, 0), dU}}};
    s.symbol = "El'";
    s.realiser = make_sym(T.sig, T.symbol_index("El"), {M(0)});
    s.witness = Derivation::rule(T.rule_index("El-form"), Instantiation{{arg(Tm, 0, "a")}, 0, {M(0)}}, cx(), {H(0)});
    steps.push_back(s);
  }
  {
    ReplacementStep s;
    s.boundary = RuleBoundarySpec{"u'-intro", {}, JudgementForm::IsTm, {U}, {{conclusion_presup_key(0), dU}}};
    s.symbol = "u'";
    s.realiser = u;
    s.witness = du;
    steps.push_back(s);
  }
  {
    ReplacementStep s;
    s.boundary = RuleBoundarySpec{"U-El'-u'", {}, JudgementForm::TyEq, {U, Elp_up},
                                  {{conclusion_presup_key(0), dU}, {conclusion_presup_key(1), dElp_up}}};
    s.witness = mk::ty_refl(cx(), Elu, dElu);
    steps.push_back(s);
  }
  return steps;
}

Bundle cyclic_quantifier() {
  Builder B("cyclic_quantifier", {Symbol{"Q", Ty, {arg(Ty, 0, "A"), arg(Tm, 1, "t")}}});
  const Expr A = M(0), tx = M(1, {v(0)});
  const Expr Q = B.S("Q", {A, tx});
  {
    PresupWitnesses w;
    w[premise_presup_key(1, 0)] = weaken_closed(cx({Q}), ty(cx(), A), H(0));
    B.rule("Q-form", {arg(Ty, 0, "A"), arg(Tm, 1, "t")}, {ty(cx(), A), tm(cx({Q}), tx, A)}, ty(cx(), Q), w);
  }
  B.congruence("Q-form", {});
  {
    // Q-form-cong; metas A' t' A'' t''
    const Expr A1 = M(0), t1 = M(1, {v(0)}), A2 = M(2), t2 = M(3, {v(0)});
    const Expr Q1 = B.S("Q", {A1, t1}), Q2 = B.S("Q", {A2, t2});
    const RawContext G1 = cx({Q1});
    Derivation dQ1 = B.R("Q-form", cx(), {A1, t1}, {H(0), H(1)});
    Derivation dQ2 = B.R("Q-form", cx(), {A2, t2}, {H(2), H(3)});
    // uses the rule's own equation premise: presuppositive thanks to itself
    Derivation eqQ = B.R("Q-form-cong", cx(), {A1, t1, A2, t2}, {H(0), H(1), H(2), H(3), H(4), H(5)});
    Derivation t2_at1 = recontext1(Q1, Q2, dQ1, dQ2, eqQ, tm(cx({Q2}), t2, A2), H(3));
    PresupWitnesses w;
    w[premise_presup_key(1, 0)] = weaken_closed(G1, ty(cx(), A1), H(0));
    w[premise_presup_key(3, 0)] = weaken_closed(cx({Q2}), ty(cx(), A2), H(2));
    w[premise_presup_key(4, 0)] = H(0);
    w[premise_presup_key(4, 1)] = H(2);
    w[premise_presup_key(5, 0)] = weaken_closed(G1, ty(cx(), A1), H(0));
    w[premise_presup_key(5, 1)] = H(1);
    w[premise_presup_key(5, 2)] =
        mk::conv_tm(G1, A2, A1, t2, weaken_closed(G1, ty(cx(), A2), H(2)), weaken_closed(G1, ty(cx(), A1), H(0)), t2_at1,
                    weaken_closed(G1, tyeq(cx(), A2, A1), mk::ty_sym(cx(), A1, A2, H(0), H(2), H(4))));
    w[conclusion_presup_key(0)] = dQ1;
    w[conclusion_presup_key(1)] = dQ2;
    B.b.witnesses["Q-form-cong"] = w;
  }
  return B.b;
}

Bundle universe_el() {
  Builder B("universe_el", {Symbol{"U", Ty, {}}, Symbol{"El", Ty, {arg(Tm, 0, "a")}}});
  B.rule("U-form", {}, {}, ty(cx(), B.S("U")));
  PresupWitnesses w;
  w[premise_presup_key(0, 0)] = B.R("U-form", cx(), {});
  B.rule("El-form", {arg(Tm, 0, "a")}, {tm(cx(), M(0), B.S("U"))}, ty(cx(), B.S("El", {M(0)})), w);
  add_simple_congruences(B.b);
  return B.b;
}

Bundle app_variant(int k) {
  if (k < 1 || k > 6) fail(ErrorKind::IndexOutOfRange, "application variants are numbered 1 to 6");
  std::vector<Symbol> syms = pi_symbols();
  syms.erase(syms.begin() + 1);  // no lam
  Builder B("app_variant_" + std::to_string(k), syms);
  add_pi_form(B);
  B.congruence("Pi-form", pi_cong_witnesses(B));
  const Expr A = M(0), Bx = M(1, {v(0)}), f = M(2), a = M(3);
  const Expr Pi = B.S("Pi", {A, Bx});
  const Arity full{arg(Ty, 0, "A"), arg(Ty, 1, "B"), arg(Tm, 0, "f"), arg(Tm, 0, "a")};
  const Judgement concl = tm(cx(), B.S("app", {A, Bx, f, a}), M(1, {a}));
  const Judgement pA = ty(cx(), A), pB = ty(cx({A}), Bx);
  Derivation dPi = B.R("Pi-form", cx(), {A, Bx}, {H(0), H(1)});
  Derivation Ba = app_conclusion_presup(1, 3, Bx, A, a);
  const std::string name = "app-" + std::to_string(k);
  PresupWitnesses w;
  switch (k) {
    case 1:
      w[premise_presup_key(2, 0)] = dPi;
      w[premise_presup_key(3, 0)] = H(0);
      w[conclusion_presup_key(0)] = Ba;
      B.rule(name, full, {pA, pB, tm(cx(), f, Pi), tm(cx(), a, A)}, concl, w);
      break;
    case 2:
      w[premise_presup_key(2, 0)] = H(0);
      w[premise_presup_key(3, 0)] = H(0);
      w[conclusion_presup_key(0)] = Ba;
      B.rule(name, full, {pA, pB, tm(cx(), f, A), tm(cx(), a, A)}, concl, w);
      break;
    case 3:
      // B(a) with a : Pi(A, B): the substitution's typing premise cannot match
      w[premise_presup_key(2, 0)] = dPi;
      w[premise_presup_key(3, 0)] = dPi;
      w[conclusion_presup_key(0)] = Ba;
      B.rule(name, full, {pA, pB, tm(cx(), f, Pi), tm(cx(), a, Pi)}, concl, w);
      break;
    case 4:
      w[premise_presup_key(2, 0)] = dPi;
      w[premise_presup_key(3, 0)] = H(0);
      w[premise_presup_key(4, 0)] = dPi;
      w[conclusion_presup_key(0)] = Ba;
      B.rule(name, full, {pA, pB, tm(cx(), f, Pi), tm(cx(), a, A), tm(cx(), a, Pi)}, concl, w);
      break;
    case 5:
      // Pi(A, B) type is underivable from these premises alone
      B.rule(name, full, {tm(cx(), f, Pi), tm(cx(), a, A)}, concl, w);
      break;
    case 6: {
      // x : A, y : Pi(A, B(x)) |- app(A, B(x), y, x) : B(x); y is index 0
      const RawContext G = cx({Pi, A});
      w[conclusion_presup_key(0)] =
          Derivation::subst(G, RawSubstitution{2, 1, {v(1)}}, all_positions(1), pB, {H(1)});
      B.rule(name, {arg(Ty, 0, "A"), arg(Ty, 1, "B")}, {pA, pB},
             tm(G, B.S("app", {A, Bx, v(0), v(1)}), M(1, {v(1)})), w);
      break;
    }
  }
  return B.b;
}

WellPresentedRule well_presented_rule_of(ScopeSystem sys, const RawRule& R, const PresupWitnesses& w,
                                         std::string symbol) {
  WellPresentedRule out;
  out.symbol = std::move(symbol);
  RuleBoundarySpec& RB = out.boundary;
  RB.name = R.name;
  RB.witnesses = w;
  if (auto t = check_tight(R); !t.tight) fail(ErrorKind::NotTight, R.name + ": " + t.reason);
  auto metas = [&] {
    std::vector<std::optional<std::size_t>> m;
    std::size_t k = 0;
    for (const auto& P : R.premises) m.push_back(P.is_object() ? std::optional<std::size_t>(k++) : std::nullopt);
    return m;
  }();
  for (std::size_t i = 0; i < R.premises.size(); ++i) {
    const Judgement& P = R.premises[i];
    auto seq = is_sequential_flat_context(sys, P.ctx);
    if (!seq) fail(ErrorKind::NotSequential, R.name + ": premise " + std::to_string(i) + " has a non-sequential context");
    PremiseBoundary pb;
    if (metas[i]) pb.name = R.arity.at(*metas[i]).name;
    pb.cxt = *seq;
    pb.form = P.form;
    pb.slots = boundary_of(P).slots;
    pb.below = all_below(i);
    for (std::size_t k = 0; k < seq->size(); ++k) {
      const Judgement goal = ty(initial_segment(sys, *seq, k), seq->entries[k]);
      auto it = std::find(R.premises.begin(), R.premises.begin() + static_cast<std::ptrdiff_t>(i), goal);
      if (it == R.premises.begin() + static_cast<std::ptrdiff_t>(i))
        fail(ErrorKind::MissingWitness, R.name + ": no earlier premise derives context entry " + std::to_string(k) +
                                            " of premise " + std::to_string(i));
      RB.witnesses[premise_context_key(i, k)] = H(static_cast<std::size_t>(it - R.premises.begin()));
    }
    RB.premises.premises.push_back(std::move(pb));
  }
  RB.form = R.conclusion.form;
  RB.conclusion = boundary_of(R.conclusion).slots;
  return out;
}

WellPresentedTheorySpec mltt_pi_spec() {
  const Bundle b = mltt_pi();
  WellPresentedTheorySpec spec;
  spec.name = "mltt_pi_spec";
  spec.sys = b.theory.sys;
  const std::vector<std::pair<std::string, std::string>> rules{
      {"Pi-form", "Pi"}, {"lam-intro", "lam"}, {"app-elim", "app"}, {"beta", ""}};
  for (const auto& [name, sym] : rules) {
    const RawRule& R = b.theory.rules[b.theory.rule_index(name)];
    WellPresentedRule wr = well_presented_rule_of(spec.sys, R, b.witnesses.at(name), sym);
    if (!sym.empty()) wr.congruence_witnesses = b.witnesses.at(name + "-cong");
    spec.rules.push_back(std::move(wr));
  }
  spec.order = {{0, 1}, {0, 2}, {1, 3}, {2, 3}};
  return spec;
}

RawRule pi_congruence_expected() {
  Signature sig;
  sig.symbols = pi_symbols();
  auto Pi = [&](Expr a, Expr b) { return make_sym(sig, 0, {std::move(a), std::move(b)}); };
  const Expr A1 = M(0), B1 = M(1, {v(0)}), A2 = M(2), B2 = M(3, {v(0)});
  RawRule R;
  R.name = "Pi-form-cong";
  R.arity = {arg(Ty, 0, "A'"), arg(Ty, 1, "B'"), arg(Ty, 0, "A''"), arg(Ty, 1, "B''")};
  R.premises = {ty(cx(), A1),         ty(cx({A1}), B1),        ty(cx(), A2),
                ty(cx({A2}), B2),     tyeq(cx(), A1, A2),      tyeq(cx({A1}), B1, B2)};
  R.conclusion = tyeq(cx(), Pi(A1, B1), Pi(A2, B2));
  return R;
}

}  // namespace gtt::bundled
