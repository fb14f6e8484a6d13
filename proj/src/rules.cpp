#include "gtt/rules.hpp"

#include "gtt/error.hpp"

namespace gtt {

bool same_rule(const RawRule& a, const RawRule& b) {
  return a.arity == b.arity && a.premises == b.premises && a.conclusion == b.conclusion;
}

bool is_object_rule(const RawRule& R) { return R.conclusion.is_object(); }

void validate_rule(const Signature& sig, const RawRule& R) {
  Signature ext = mv_extend_signature(base_signature(sig), R.arity);
  try {
    for (const auto& P : R.premises) validate_judgement(ext, P);
    validate_judgement(ext, R.conclusion);
  } catch (const KernelError& e) {
    throw KernelError(e.kind(), "rule " + R.name + ": " + e.detail());
  }
}

RawRule translate_rule(const SignatureMap& F, const RawRule& R) {
  RawRule out{R.name, R.arity, {}, translate_judgement(F, R.conclusion)};
  for (const auto& P : R.premises) out.premises.push_back(translate_judgement(F, P));
  return out;
}

ClosureRule<Judgement> instantiate_rule(ScopeSystem sys, const Instantiation& I, const RawContext& gamma, const RawRule& R) {
  if (!(I.arity == R.arity))
    fail(ErrorKind::ArityMismatch, "instantiation arity does not match rule " + R.name);
  if (I.scope != gamma.scope()) fail(ErrorKind::ScopeMismatch, "instantiation scope differs from the ambient context");
  ClosureRule<Judgement> c{{}, instantiate_judgement(sys, I, gamma, R.conclusion)};
  c.premises.reserve(R.premises.size());
  for (const auto& P : R.premises) c.premises.push_back(instantiate_judgement(sys, I, gamma, P));
  return c;
}

ClosureRule<Judgement> variable_rule(const RawContext& gamma, Position i) {
  if (i >= gamma.scope()) fail(ErrorKind::IndexOutOfRange, "variable " + std::to_string(i) + " not in context");
  return {{Judgement::is_ty(gamma, gamma[i])}, Judgement::is_tm(gamma, Expr::var(i), gamma[i])};
}

const char* equiv_rule_name(EquivRule k) {
  switch (k) {
    case EquivRule::TyRefl: return "ty-refl";
    case EquivRule::TySym: return "ty-sym";
    case EquivRule::TyTrans: return "ty-trans";
    case EquivRule::TmRefl: return "tm-refl";
    case EquivRule::TmSym: return "tm-sym";
    case EquivRule::TmTrans: return "tm-trans";
  }
  return "?";
}

const char* conv_rule_name(ConvRule k) { return k == ConvRule::Tm ? "conv-tm" : "conv-eq"; }

namespace {

using C = SyntacticClass;

ArityArg arg(C c, const char* name) { return ArityArg{c, 0, name}; }
Expr M(std::size_t i) { return Expr::meta(i); }
const RawContext E{};

std::vector<RawRule> make_equivalence_rules() {
  std::vector<RawRule> rs;
  // ty-refl: A
  rs.push_back({"ty-refl", {arg(C::Ty, "A")}, {Judgement::is_ty(E, M(0))}, Judgement::ty_eq(E, M(0), M(0))});
  // ty-sym: A B
  rs.push_back({"ty-sym",
                {arg(C::Ty, "A"), arg(C::Ty, "B")},
                {Judgement::is_ty(E, M(0)), Judgement::is_ty(E, M(1)), Judgement::ty_eq(E, M(0), M(1))},
                Judgement::ty_eq(E, M(1), M(0))});
  // ty-trans: A B C
  rs.push_back({"ty-trans",
                {arg(C::Ty, "A"), arg(C::Ty, "B"), arg(C::Ty, "C")},
                {Judgement::is_ty(E, M(0)), Judgement::is_ty(E, M(1)), Judgement::is_ty(E, M(2)),
                 Judgement::ty_eq(E, M(0), M(1)), Judgement::ty_eq(E, M(1), M(2))},
                Judgement::ty_eq(E, M(0), M(2))});
  // tm-refl: A s
  rs.push_back({"tm-refl",
                {arg(C::Ty, "A"), arg(C::Tm, "s")},
                {Judgement::is_ty(E, M(0)), Judgement::is_tm(E, M(1), M(0))},
                Judgement::tm_eq(E, M(1), M(1), M(0))});
  // tm-sym: A s t
  rs.push_back({"tm-sym",
                {arg(C::Ty, "A"), arg(C::Tm, "s"), arg(C::Tm, "t")},
                {Judgement::is_ty(E, M(0)), Judgement::is_tm(E, M(1), M(0)), Judgement::is_tm(E, M(2), M(0)),
                 Judgement::tm_eq(E, M(1), M(2), M(0))},
                Judgement::tm_eq(E, M(2), M(1), M(0))});
  // tm-trans: A s t u
  rs.push_back({"tm-trans",
                {arg(C::Ty, "A"), arg(C::Tm, "s"), arg(C::Tm, "t"), arg(C::Tm, "u")},
                {Judgement::is_ty(E, M(0)), Judgement::is_tm(E, M(1), M(0)), Judgement::is_tm(E, M(2), M(0)),
                 Judgement::is_tm(E, M(3), M(0)), Judgement::tm_eq(E, M(1), M(2), M(0)),
                 Judgement::tm_eq(E, M(2), M(3), M(0))},
                Judgement::tm_eq(E, M(1), M(3), M(0))});
  return rs;
}

std::vector<RawRule> make_conversion_rules() {
  std::vector<RawRule> rs;
  // conv-tm: A B s
  rs.push_back({"conv-tm",
                {arg(C::Ty, "A"), arg(C::Ty, "B"), arg(C::Tm, "s")},
                {Judgement::is_ty(E, M(0)), Judgement::is_ty(E, M(1)), Judgement::is_tm(E, M(2), M(0)),
                 Judgement::ty_eq(E, M(0), M(1))},
                Judgement::is_tm(E, M(2), M(1))});
  // conv-eq: A B s t
  rs.push_back({"conv-eq",
                {arg(C::Ty, "A"), arg(C::Ty, "B"), arg(C::Tm, "s"), arg(C::Tm, "t")},
                {Judgement::is_ty(E, M(0)), Judgement::is_ty(E, M(1)), Judgement::is_tm(E, M(2), M(0)),
                 Judgement::is_tm(E, M(3), M(0)), Judgement::tm_eq(E, M(2), M(3), M(0)),
                 Judgement::ty_eq(E, M(0), M(1))},
                Judgement::tm_eq(E, M(2), M(3), M(1))});
  return rs;
}

}  // namespace

const std::vector<RawRule>& equivalence_rules() {
  static const std::vector<RawRule> rs = make_equivalence_rules();
  return rs;
}

const std::vector<RawRule>& conversion_rules() {
  static const std::vector<RawRule> rs = make_conversion_rules();
  return rs;
}

const RawRule& equivalence_rule(EquivRule k) { return equivalence_rules().at(static_cast<std::size_t>(k)); }
const RawRule& conversion_rule(ConvRule k) { return conversion_rules().at(static_cast<std::size_t>(k)); }

TrivialSet all_positions(Scope n) { return TrivialSet(n, true); }
TrivialSet no_positions(Scope n) { return TrivialSet(n, false); }

namespace {

void check_subst_shape(const RawContext& delta, const RawSubstitution& f, const Judgement& J, const TrivialSet& K) {
  if (f.src != delta.scope() || f.dst != J.ctx.scope())
    fail(ErrorKind::ScopeMismatch, "substitution does not map the target context to the judgement's context");
  if (f.table.size() != f.dst) fail(ErrorKind::ScopeMismatch, "substitution table size");
  if (K.size() != J.ctx.scope()) fail(ErrorKind::ScopeMismatch, "trivial-position set has the wrong size");
}

}  // namespace

ClosureRule<Judgement> substitution_rule(ScopeSystem sys, const RawContext& delta, const RawSubstitution& f,
                                         const TrivialSet& K, const Judgement& J) {
  check_subst_shape(delta, f, J, K);
  const RawContext& G = J.ctx;
  ClosureRule<Judgement> c{{J}, substitute_judgement(sys, f, delta, J)};
  for (Position i = 0; i < G.scope(); ++i) {
    Expr fG = substitute_expr(sys, f, G[i]);
    if (K[i]) {
      const Expr& fi = f.table[i];
      if (!fi.is_var() || fi.index() >= delta.scope() || !(delta[fi.index()] == fG))
        fail(ErrorKind::TrivialityViolated, "substitution does not act trivially at position " + std::to_string(i));
    } else {
      c.premises.push_back(Judgement::is_tm(delta, f.table[i], fG));
    }
  }
  return c;
}

ClosureRule<Judgement> equality_substitution_rule(ScopeSystem sys, const RawContext& delta, const RawSubstitution& f,
                                                  const RawSubstitution& g, const TrivialSet& K, const Judgement& J) {
  check_subst_shape(delta, f, J, K);
  check_subst_shape(delta, g, J, K);
  if (!J.is_object()) fail(ErrorKind::NotObjectJudgement, "equality substitution applies to object judgements");
  const RawContext& G = J.ctx;
  ClosureRule<Judgement> c;
  c.premises.push_back(J);
  if (J.form == JudgementForm::IsTy) {
    c.conclusion = Judgement::ty_eq(delta, substitute_expr(sys, f, J.head()), substitute_expr(sys, g, J.head()));
  } else {
    c.conclusion = Judgement::tm_eq(delta, substitute_expr(sys, f, J.head()), substitute_expr(sys, g, J.head()),
                                    substitute_expr(sys, f, J.type()));
  }
  for (Position i = 0; i < G.scope(); ++i) {
    Expr fG = substitute_expr(sys, f, G[i]);
    Expr gG = substitute_expr(sys, g, G[i]);
    if (K[i]) {
      const Expr& fi = f.table[i];
      if (!(fi == g.table[i]) || !fi.is_var() || fi.index() >= delta.scope() || !(delta[fi.index()] == fG) ||
          !(fG == gG))
        fail(ErrorKind::TrivialityViolated, "substitutions do not act jointly trivially at position " + std::to_string(i));
    } else {
      c.premises.push_back(Judgement::is_tm(delta, f.table[i], fG));
      c.premises.push_back(Judgement::is_tm(delta, g.table[i], gG));
      c.premises.push_back(Judgement::tm_eq(delta, f.table[i], g.table[i], fG));
    }
  }
  return c;
}

SignatureMap congruence_left(const Arity& alpha) {
  SignatureMap F;
  for (std::size_t i = 0; i < alpha.size(); ++i) F.meta.push_back(i);
  return F;
}

SignatureMap congruence_right(const Arity& alpha) {
  SignatureMap F;
  for (std::size_t i = 0; i < alpha.size(); ++i) F.meta.push_back(alpha.size() + i);
  return F;
}

Judgement assoc_equality_judgement(const SignatureMap& l, const SignatureMap& r, const Judgement& J) {
  RawContext G = translate_context(l, J.ctx);
  if (J.form == JudgementForm::IsTy)
    return Judgement::ty_eq(G, translate_expr(l, J.head()), translate_expr(r, J.head()));
  if (J.form == JudgementForm::IsTm)
    return Judgement::tm_eq(G, translate_expr(l, J.head()), translate_expr(r, J.head()), translate_expr(l, J.type()));
  fail(ErrorKind::NotObjectJudgement, "associated equation of an equality judgement");
}

std::vector<std::size_t> object_premises(const RawRule& R) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < R.premises.size(); ++i)
    if (R.premises[i].is_object()) out.push_back(i);
  return out;
}

RawRule congruence_rule(const RawRule& R) {
  if (!is_object_rule(R)) fail(ErrorKind::NotObjectRule, "rule " + R.name + " has an equality conclusion");
  SignatureMap l = congruence_left(R.arity), r = congruence_right(R.arity);
  RawRule C;
  C.name = R.name + "-cong";
  for (const auto& a : R.arity) C.arity.push_back(ArityArg{a.cls, a.binder, a.name + "'"});
  for (const auto& a : R.arity) C.arity.push_back(ArityArg{a.cls, a.binder, a.name + "''"});
  for (const auto& P : R.premises) C.premises.push_back(translate_judgement(l, P));
  for (const auto& P : R.premises) C.premises.push_back(translate_judgement(r, P));
  for (std::size_t i : object_premises(R)) C.premises.push_back(assoc_equality_judgement(l, r, R.premises[i]));
  C.conclusion = assoc_equality_judgement(l, r, R.conclusion);
  return C;
}

}  // namespace gtt
