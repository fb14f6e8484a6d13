#pragma once

// Raw syntax: arities, signatures, expressions and the actions of renamings,
// signature maps, substitutions and instantiations on them.
//
// Metavariables of an extension Sigma+alpha are the trailing segment of the
// signature. Meta nodes index into that segment, Sym nodes into the base part.
// Instantiation replaces Meta nodes and leaves everything else alone, so an
// instantiation whose arguments themselves contain Meta nodes (of an outer
// extension) composes the expected way.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gtt/scopes.hpp"

namespace gtt {

enum class SyntacticClass { Ty, Tm };

const char* class_name(SyntacticClass c);

struct ArityArg {
  SyntacticClass cls = SyntacticClass::Tm;
  Scope binder = 0;
  std::string name;  // display only, ignored by ==

  bool operator==(const ArityArg& o) const { return cls == o.cls && binder == o.binder; }
};

using Arity = std::vector<ArityArg>;

Arity simple_arity(Scope gamma);

struct Symbol {
  std::string name;
  SyntacticClass cls = SyntacticClass::Ty;
  Arity arity;
};

struct Signature {
  std::vector<Symbol> symbols;
  std::size_t meta_count = 0;  // trailing entries that are metavariables

  std::size_t base_size() const { return symbols.size() - meta_count; }
  const Symbol& sym(std::size_t k) const;
  const Symbol& meta(std::size_t i) const;
  std::optional<std::size_t> find_symbol(const std::string& name) const;
  std::optional<std::size_t> find_meta(const std::string& name) const;
};

// Sigma + alpha. Extending an already extended signature turns the old
// metavariables into ordinary symbols.
Signature mv_extend_signature(const Signature& sig, const Arity& alpha);

// The base signature with the metavariable segment dropped.
Signature base_signature(const Signature& sig);

class Expr {
 public:
  enum class Kind : std::uint8_t { Var, Sym, Meta };

  Expr() = default;
  static Expr var(Position i);
  // binders[i] is the binder scope of argument i (empty vector: all zero)
  static Expr sym(std::size_t k, std::vector<Expr> args = {}, std::vector<Scope> binders = {});
  static Expr meta(std::size_t i, std::vector<Expr> args = {});

  bool valid() const { return static_cast<bool>(node_); }
  Kind kind() const { return node_->kind; }
  std::size_t index() const { return node_->index; }
  const std::vector<Expr>& args() const { return node_->args; }
  Scope binder(std::size_t i) const { return node_->binders.empty() ? 0 : node_->binders[i]; }
  const std::vector<Scope>& binders() const { return node_->binders; }
  std::size_t hash() const { return node_ ? node_->hash : 0; }
  bool is_var() const { return kind() == Kind::Var; }
  bool is_sym() const { return kind() == Kind::Sym; }
  bool is_meta() const { return kind() == Kind::Meta; }

  bool operator==(const Expr& o) const;
  bool operator!=(const Expr& o) const { return !(*this == o); }

 private:
  struct Node {
    Kind kind;
    std::size_t index;
    std::vector<Expr> args;
    std::vector<Scope> binders;
    std::size_t hash;
  };
  std::shared_ptr<const Node> node_;
};

std::size_t expr_size(const Expr& e);
std::size_t expr_depth(const Expr& e);
bool has_meta(const Expr& e);
// which positions of the ambient scope occur free in e
std::vector<bool> occurring_vars(ScopeSystem sys, Scope scope, const Expr& e);
// Sym node for symbol k of sig, binders taken from its arity
Expr make_sym(const Signature& sig, std::size_t k, std::vector<Expr> args = {});

// Class of e; Var is Tm.
SyntacticClass expr_class(const Signature& sig, const Expr& e);

// Throws ScopeMismatch / ClassMismatch / ArityMismatch / IndexOutOfRange.
void validate_expr(const Signature& sig, Scope scope, const Expr& e, std::optional<SyntacticClass> expected = {});

// S applied to its generic arguments M_i(x_0, ...), in the empty scope over
// sig + arity(S).
Expr generic_application(std::size_t sym, const Arity& arity);
// M_i applied to the variables of its binder
Expr generic_meta(std::size_t i, Scope binder);

// ---- renaming

Expr rename_expr(ScopeSystem sys, const Renaming& r, const Expr& e);
// weaken e from gamma into gamma + delta along inl
Expr weaken_expr(ScopeSystem sys, Scope gamma, Scope delta, const Expr& e);

// ---- signature maps

struct SignatureMap {
  std::vector<std::size_t> sym;   // base symbol k -> base symbol sym[k]; empty means identity
  std::vector<std::size_t> meta;  // metavariable i -> meta[i]; empty means identity

  static SignatureMap identity(const Signature& sig);
};

void validate_signature_map(const SignatureMap& F, const Signature& src, const Signature& dst);
Expr translate_expr(const SignatureMap& F, const Expr& e);
SignatureMap compose_signature_map(const SignatureMap& G, const SignatureMap& F);

// ---- substitutions

// f : gamma -> delta, a table over positions(delta) of Tm expressions in
// scope gamma. Acts contravariantly, Expr(delta) -> Expr(gamma).
struct RawSubstitution {
  Scope src = 0;  // gamma
  Scope dst = 0;  // delta
  std::vector<Expr> table;

  static RawSubstitution identity(Scope n);
  bool operator==(const RawSubstitution&) const = default;
};

// r : gamma -> delta induces the substitution delta -> gamma, i |-> var r(i)
RawSubstitution subst_of_renaming(const Renaming& r);

RawSubstitution extend_substitution(ScopeSystem sys, const RawSubstitution& f, Scope eta);
Expr substitute_expr(ScopeSystem sys, const RawSubstitution& f, const Expr& e);
// (g . f)(k) = f*(g(k)) for g : delta -> theta, f : gamma -> delta
RawSubstitution compose_subst(ScopeSystem sys, const RawSubstitution& g, const RawSubstitution& f);
RawSubstitution rename_subst(ScopeSystem sys, const Renaming& r, const RawSubstitution& f);
RawSubstitution translate_subst(const SignatureMap& F, const RawSubstitution& f);
void validate_subst(const Signature& sig, const RawSubstitution& f);

// ---- instantiations

// I in Inst(Sigma, gamma, alpha): args[i] has class alpha_i in scope
// gamma + binder(alpha_i).
struct Instantiation {
  Arity arity;
  Scope scope = 0;
  std::vector<Expr> args;

  bool operator==(const Instantiation& o) const {
    return scope == o.scope && arity == o.arity && args == o.args;
  }
};

void validate_inst(const Signature& sig, const Instantiation& I);

// <I> e for e over Sigma+alpha in scope delta; result in scope gamma + delta.
Expr instantiate_expr(ScopeSystem sys, const Instantiation& I, Scope delta, const Expr& e);
// <I> f for f : delta' -> delta over Sigma+alpha; gamma+delta' -> gamma+delta
RawSubstitution inst_act_subst(ScopeSystem sys, const Instantiation& I, const RawSubstitution& f);
// <I> J for J in Inst(Sigma+alpha, delta, beta); lands in Inst(Sigma, gamma+delta, beta)
Instantiation inst_act_inst(ScopeSystem sys, const Instantiation& I, const Instantiation& J);
// f* I for f : delta -> gamma; lands in Inst(Sigma, delta, alpha)
Instantiation subst_act_inst(ScopeSystem sys, const RawSubstitution& f, const Instantiation& I);
Instantiation translate_inst(const SignatureMap& F, const Instantiation& I);
// r acting on I along r + id_binder in each argument
Instantiation rename_inst(ScopeSystem sys, const Renaming& r, const Instantiation& I);

// The instantiation sending each metavariable to its own generic application,
// seen from the outer extension: <generic> e = e.
Instantiation generic_instantiation(ScopeSystem sys, const Arity& alpha, Scope gamma = 0);

// I followed by J, as an instantiation of alpha + beta
Instantiation concat_inst(const Instantiation& I, const Instantiation& J);

}  // namespace gtt
