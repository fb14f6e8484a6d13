#include "gtt/judgements.hpp"

#include "gtt/error.hpp"

namespace gtt {

const char* form_name(JudgementForm f) {
  switch (f) {
    case JudgementForm::IsTy: return "IsTy";
    case JudgementForm::IsTm: return "IsTm";
    case JudgementForm::TyEq: return "TyEq";
    case JudgementForm::TmEq: return "TmEq";
  }
  return "?";
}

JudgementForm parse_form(const std::string& s) {
  if (s == "IsTy") return JudgementForm::IsTy;
  if (s == "IsTm") return JudgementForm::IsTm;
  if (s == "TyEq") return JudgementForm::TyEq;
  if (s == "TmEq") return JudgementForm::TmEq;
  fail(ErrorKind::ParseError, "unknown judgement form '" + s + "'");
}

bool is_object_form(JudgementForm f) { return f == JudgementForm::IsTy || f == JudgementForm::IsTm; }

SyntacticClass head_class(JudgementForm f) {
  if (f == JudgementForm::IsTy) return SyntacticClass::Ty;
  if (f == JudgementForm::IsTm) return SyntacticClass::Tm;
  fail(ErrorKind::NotObjectJudgement, "equality forms have no head");
}

std::vector<SyntacticClass> boundary_classes(JudgementForm f) {
  using C = SyntacticClass;
  switch (f) {
    case JudgementForm::IsTy: return {};
    case JudgementForm::IsTm: return {C::Ty};
    case JudgementForm::TyEq: return {C::Ty, C::Ty};
    case JudgementForm::TmEq: return {C::Tm, C::Tm, C::Ty};
  }
  return {};
}

std::vector<const char*> slot_names(JudgementForm f, bool with_head) {
  std::vector<const char*> n;
  switch (f) {
    case JudgementForm::IsTy: break;
    case JudgementForm::IsTm: n = {"type"}; break;
    case JudgementForm::TyEq: n = {"lhs", "rhs"}; break;
    case JudgementForm::TmEq: n = {"lhs", "rhs", "type"}; break;
  }
  if (with_head && is_object_form(f)) n.push_back("head");
  return n;
}

Judgement Judgement::is_ty(RawContext ctx, Expr A) { return {std::move(ctx), JudgementForm::IsTy, {std::move(A)}}; }
Judgement Judgement::is_tm(RawContext ctx, Expr t, Expr A) {
  return {std::move(ctx), JudgementForm::IsTm, {std::move(A), std::move(t)}};
}
Judgement Judgement::ty_eq(RawContext ctx, Expr A, Expr B) {
  return {std::move(ctx), JudgementForm::TyEq, {std::move(A), std::move(B)}};
}
Judgement Judgement::tm_eq(RawContext ctx, Expr s, Expr t, Expr A) {
  return {std::move(ctx), JudgementForm::TmEq, {std::move(s), std::move(t), std::move(A)}};
}

const Expr& Judgement::head() const {
  if (!is_object()) fail(ErrorKind::NotObjectJudgement, "equality judgement has no head");
  return slots.back();
}

const Expr& Judgement::type() const {
  if (form == JudgementForm::IsTm) return slots.at(0);
  if (form == JudgementForm::TmEq) return slots.at(2);
  fail(ErrorKind::ClassMismatch, "judgement has no type slot");
}

const Expr& Judgement::lhs() const {
  if (is_object()) fail(ErrorKind::ClassMismatch, "object judgement has no lhs");
  return slots.at(0);
}

const Expr& Judgement::rhs() const {
  if (is_object()) fail(ErrorKind::ClassMismatch, "object judgement has no rhs");
  return slots.at(1);
}

Boundary boundary_of(const Judgement& J) {
  Boundary B{J.ctx, J.form, J.slots};
  if (J.is_object()) B.slots.pop_back();
  return B;
}

Judgement complete_boundary(const Boundary& B, std::optional<Expr> head) {
  Judgement J{B.ctx, B.form, B.slots};
  if (is_object_form(B.form)) {
    if (!head) fail(ErrorKind::HeadRequired, "object boundary completed without a head");
    J.slots.push_back(*head);
  } else if (head) {
    fail(ErrorKind::HeadForbidden, "equality boundary completed with a head");
  }
  return J;
}

void validate_context(const Signature& sig, const RawContext& ctx) {
  for (const auto& A : ctx.types) validate_expr(sig, ctx.scope(), A, SyntacticClass::Ty);
}

void validate_boundary(const Signature& sig, const Boundary& B) {
  validate_context(sig, B.ctx);
  auto cls = boundary_classes(B.form);
  if (B.slots.size() != cls.size()) fail(ErrorKind::ArityMismatch, "boundary has the wrong number of slots");
  for (std::size_t i = 0; i < cls.size(); ++i) validate_expr(sig, B.ctx.scope(), B.slots[i], cls[i]);
}

void validate_judgement(const Signature& sig, const Judgement& J) {
  validate_context(sig, J.ctx);
  auto cls = boundary_classes(J.form);
  if (J.is_object()) cls.push_back(head_class(J.form));
  if (J.slots.size() != cls.size()) fail(ErrorKind::ArityMismatch, "judgement has the wrong number of slots");
  for (std::size_t i = 0; i < cls.size(); ++i) validate_expr(sig, J.ctx.scope(), J.slots[i], cls[i]);
}

RawContext extend_context(ScopeSystem sys, const RawContext& gamma, const std::vector<Expr>& delta) {
  const Scope g = gamma.scope(), d = delta.size();
  if (d == 0) return gamma;
  RawContext out{std::vector<Expr>(g + d)};
  for (Position i = 0; i < g; ++i) out.types[inl(sys, g, d, i)] = weaken_expr(sys, g, d, gamma.types[i]);
  for (Position j = 0; j < d; ++j) out.types[inr(sys, g, d, j)] = delta[j];
  return out;
}

RawContext instantiate_context(ScopeSystem sys, const Instantiation& I, const RawContext& gamma, const RawContext& delta) {
  if (I.scope != gamma.scope()) fail(ErrorKind::ScopeMismatch, "instantiation scope differs from the context");
  std::vector<Expr> d;
  d.reserve(delta.scope());
  for (const auto& A : delta.types) d.push_back(instantiate_expr(sys, I, delta.scope(), A));
  return extend_context(sys, gamma, d);
}

Judgement instantiate_judgement(ScopeSystem sys, const Instantiation& I, const RawContext& gamma, const Judgement& J) {
  Judgement out{instantiate_context(sys, I, gamma, J.ctx), J.form, {}};
  out.slots.reserve(J.slots.size());
  for (const auto& e : J.slots) out.slots.push_back(instantiate_expr(sys, I, J.ctx.scope(), e));
  return out;
}

Boundary instantiate_boundary(ScopeSystem sys, const Instantiation& I, const RawContext& gamma, const Boundary& B) {
  Boundary out{instantiate_context(sys, I, gamma, B.ctx), B.form, {}};
  for (const auto& e : B.slots) out.slots.push_back(instantiate_expr(sys, I, B.ctx.scope(), e));
  return out;
}

RawContext translate_context(const SignatureMap& F, const RawContext& ctx) {
  RawContext out;
  for (const auto& A : ctx.types) out.types.push_back(translate_expr(F, A));
  return out;
}

Judgement translate_judgement(const SignatureMap& F, const Judgement& J) {
  Judgement out{translate_context(F, J.ctx), J.form, {}};
  for (const auto& e : J.slots) out.slots.push_back(translate_expr(F, e));
  return out;
}

Boundary translate_boundary(const SignatureMap& F, const Boundary& B) {
  Boundary out{translate_context(F, B.ctx), B.form, {}};
  for (const auto& e : B.slots) out.slots.push_back(translate_expr(F, e));
  return out;
}

Judgement substitute_judgement(ScopeSystem sys, const RawSubstitution& f, const RawContext& target, const Judgement& J) {
  if (f.dst != J.ctx.scope() || f.src != target.scope())
    fail(ErrorKind::ScopeMismatch, "substitution does not fit the judgement and target context");
  Judgement out{target, J.form, {}};
  for (const auto& e : J.slots) out.slots.push_back(substitute_expr(sys, f, e));
  return out;
}

Judgement rename_judgement(ScopeSystem sys, const Renaming& r, const RawContext& target, const Judgement& J) {
  if (r.src != J.ctx.scope() || r.dst != target.scope())
    fail(ErrorKind::ScopeMismatch, "renaming does not fit the judgement and target context");
  Judgement out{target, J.form, {}};
  for (const auto& e : J.slots) out.slots.push_back(rename_expr(sys, r, e));
  return out;
}

RawContext substitute_context(ScopeSystem sys, const RawSubstitution& f, const RawContext& ctx) {
  RawContext out;
  for (const auto& A : ctx.types) out.types.push_back(substitute_expr(sys, f, A));
  return out;
}

Family<Judgement> boundary_presuppositions(const Boundary& B) {
  const RawContext& G = B.ctx;
  switch (B.form) {
    case JudgementForm::IsTy: return {};
    case JudgementForm::IsTm: return {Judgement::is_ty(G, B.slots[0])};
    case JudgementForm::TyEq: return {Judgement::is_ty(G, B.slots[0]), Judgement::is_ty(G, B.slots[1])};
    case JudgementForm::TmEq:
      return {Judgement::is_ty(G, B.slots[2]), Judgement::is_tm(G, B.slots[0], B.slots[2]),
              Judgement::is_tm(G, B.slots[1], B.slots[2])};
  }
  return {};
}

Family<Judgement> presuppositions(const Judgement& J) { return boundary_presuppositions(boundary_of(J)); }

}  // namespace gtt
