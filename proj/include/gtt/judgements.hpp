#pragma once

// Flat raw contexts, the four judgement forms, boundaries, presuppositions.

#include <optional>
#include <vector>

#include "gtt/foundations.hpp"
#include "gtt/syntax.hpp"

namespace gtt {

// A flat context: position i carries a type in the scope of the whole context.
struct RawContext {
  std::vector<Expr> types;

  RawContext() = default;
  explicit RawContext(std::vector<Expr> t) : types(std::move(t)) {}
  Scope scope() const { return types.size(); }
  const Expr& operator[](Position i) const { return types.at(i); }
  bool operator==(const RawContext&) const = default;
};

enum class JudgementForm { IsTy, IsTm, TyEq, TmEq };

const char* form_name(JudgementForm f);
JudgementForm parse_form(const std::string& s);
bool is_object_form(JudgementForm f);
// class of the head slot of an object form
SyntacticClass head_class(JudgementForm f);
// classes of the boundary slots, in storage order
std::vector<SyntacticClass> boundary_classes(JudgementForm f);
// slot names in storage order ("type","head" / "lhs","rhs","type" ...)
std::vector<const char*> slot_names(JudgementForm f, bool with_head);

// Slots are stored boundary first, then the head for object forms:
//   IsTy [head]   IsTm [type, head]   TyEq [lhs, rhs]   TmEq [lhs, rhs, type]
struct Judgement {
  RawContext ctx;
  JudgementForm form = JudgementForm::IsTy;
  std::vector<Expr> slots;

  static Judgement is_ty(RawContext ctx, Expr A);
  static Judgement is_tm(RawContext ctx, Expr t, Expr A);
  static Judgement ty_eq(RawContext ctx, Expr A, Expr B);
  static Judgement tm_eq(RawContext ctx, Expr s, Expr t, Expr A);

  bool is_object() const { return is_object_form(form); }
  const Expr& head() const;
  const Expr& type() const;  // IsTm, TmEq
  const Expr& lhs() const;   // TyEq, TmEq
  const Expr& rhs() const;
  bool operator==(const Judgement&) const = default;
};

struct Boundary {
  RawContext ctx;
  JudgementForm form = JudgementForm::IsTy;
  std::vector<Expr> slots;
  bool operator==(const Boundary&) const = default;
};

Boundary boundary_of(const Judgement& J);
Judgement complete_boundary(const Boundary& B, std::optional<Expr> head);

void validate_context(const Signature& sig, const RawContext& ctx);
void validate_judgement(const Signature& sig, const Judgement& J);
void validate_boundary(const Signature& sig, const Boundary& B);

// Gamma + Delta, where Delta's types already live in the scope of the sum.
RawContext extend_context(ScopeSystem sys, const RawContext& gamma, const std::vector<Expr>& delta);
// Gamma + <I>Delta
RawContext instantiate_context(ScopeSystem sys, const Instantiation& I, const RawContext& gamma, const RawContext& delta);
Judgement instantiate_judgement(ScopeSystem sys, const Instantiation& I, const RawContext& gamma, const Judgement& J);
Boundary instantiate_boundary(ScopeSystem sys, const Instantiation& I, const RawContext& gamma, const Boundary& B);
RawContext translate_context(const SignatureMap& F, const RawContext& ctx);
Judgement translate_judgement(const SignatureMap& F, const Judgement& J);
Boundary translate_boundary(const SignatureMap& F, const Boundary& B);
// f* J, placed in the context `target` (whose scope is f.src)
Judgement substitute_judgement(ScopeSystem sys, const RawSubstitution& f, const RawContext& target, const Judgement& J);
// slots renamed along r, placed in `target` (scope r.dst)
Judgement rename_judgement(ScopeSystem sys, const Renaming& r, const RawContext& target, const Judgement& J);
RawContext substitute_context(ScopeSystem sys, const RawSubstitution& f, const RawContext& ctx);

// A type  -> []
// s : A   -> [A type]
// A == B  -> [A type, B type]
// s == t : A -> [A type, s : A, t : A]
Family<Judgement> presuppositions(const Judgement& J);
Family<Judgement> boundary_presuppositions(const Boundary& B);

}  // namespace gtt
