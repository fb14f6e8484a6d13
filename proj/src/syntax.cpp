#include "gtt/syntax.hpp"

#include <algorithm>
#include <functional>

#include "gtt/error.hpp"

namespace gtt {

const char* class_name(SyntacticClass c) { return c == SyntacticClass::Ty ? "Ty" : "Tm"; }

Arity simple_arity(Scope gamma) { return Arity(gamma, ArityArg{SyntacticClass::Tm, 0, {}}); }

const Symbol& Signature::sym(std::size_t k) const {
  if (k >= base_size()) fail(ErrorKind::IndexOutOfRange, "symbol index " + std::to_string(k));
  return symbols[k];
}

const Symbol& Signature::meta(std::size_t i) const {
  if (i >= meta_count) fail(ErrorKind::IndexOutOfRange, "metavariable index " + std::to_string(i));
  return symbols[base_size() + i];
}

std::optional<std::size_t> Signature::find_symbol(const std::string& name) const {
  for (std::size_t k = 0; k < base_size(); ++k)
    if (symbols[k].name == name) return k;
  return std::nullopt;
}

std::optional<std::size_t> Signature::find_meta(const std::string& name) const {
  for (std::size_t i = 0; i < meta_count; ++i)
    if (symbols[base_size() + i].name == name) return i;
  return std::nullopt;
}

Signature mv_extend_signature(const Signature& sig, const Arity& alpha) {
  Signature out;
  out.symbols = sig.symbols;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    std::string name = alpha[i].name.empty() ? "M" + std::to_string(i) : alpha[i].name;
    out.symbols.push_back(Symbol{name, alpha[i].cls, simple_arity(alpha[i].binder)});
  }
  out.meta_count = alpha.size();
  return out;
}

Signature base_signature(const Signature& sig) {
  Signature out;
  out.symbols.assign(sig.symbols.begin(), sig.symbols.begin() + static_cast<std::ptrdiff_t>(sig.base_size()));
  return out;
}

// ---- Expr

namespace {

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

}  // namespace

Expr Expr::var(Position i) {
  Expr e;
  e.node_ = std::make_shared<const Node>(Node{Kind::Var, i, {}, {}, mix(1, i)});
  return e;
}

Expr Expr::sym(std::size_t k, std::vector<Expr> args, std::vector<Scope> binders) {
  if (!binders.empty() && binders.size() != args.size())
    fail(ErrorKind::ArityMismatch, "binder list does not match argument count");
  if (std::all_of(binders.begin(), binders.end(), [](Scope b) { return b == 0; })) binders.clear();
  std::size_t h = mix(2, k);
  for (const auto& a : args) h = mix(h, a.hash());
  for (Scope b : binders) h = mix(h, b);
  Expr e;
  e.node_ = std::make_shared<const Node>(Node{Kind::Sym, k, std::move(args), std::move(binders), h});
  return e;
}

Expr Expr::meta(std::size_t i, std::vector<Expr> args) {
  std::size_t h = mix(3, i);
  for (const auto& a : args) h = mix(h, a.hash());
  Expr e;
  e.node_ = std::make_shared<const Node>(Node{Kind::Meta, i, std::move(args), {}, h});
  return e;
}

bool Expr::operator==(const Expr& o) const {
  if (node_ == o.node_) return true;
  if (!node_ || !o.node_) return false;
  if (node_->hash != o.node_->hash || node_->kind != o.node_->kind || node_->index != o.node_->index) return false;
  return node_->binders == o.node_->binders && node_->args == o.node_->args;
}

std::size_t expr_size(const Expr& e) {
  std::size_t n = 1;
  if (!e.is_var())
    for (const auto& a : e.args()) n += expr_size(a);
  return n;
}

std::size_t expr_depth(const Expr& e) {
  std::size_t d = 0;
  if (!e.is_var())
    for (const auto& a : e.args()) d = std::max(d, expr_depth(a));
  return d + 1;
}

bool has_meta(const Expr& e) {
  if (e.is_var()) return false;
  if (e.is_meta()) return true;
  return std::any_of(e.args().begin(), e.args().end(), has_meta);
}

std::vector<bool> occurring_vars(ScopeSystem sys, Scope scope, const Expr& e) {
  std::vector<bool> out(scope, false);
  std::function<void(Scope, const Expr&)> go = [&](Scope k, const Expr& x) {
    if (x.is_var()) {
      SumSide s = split_sum(sys, scope, k, x.index());
      if (s.left) out[s.pos] = true;
      return;
    }
    for (std::size_t i = 0; i < x.args().size(); ++i) go(k + x.binder(i), x.args()[i]);
  };
  go(0, e);
  return out;
}

Expr make_sym(const Signature& sig, std::size_t k, std::vector<Expr> args) {
  const Symbol& s = sig.sym(k);
  std::vector<Scope> b;
  for (const auto& a : s.arity) b.push_back(a.binder);
  if (args.size() != b.size()) fail(ErrorKind::ArityMismatch, "symbol " + s.name + " applied to wrong number of arguments");
  return Expr::sym(k, std::move(args), std::move(b));
}

SyntacticClass expr_class(const Signature& sig, const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Var: return SyntacticClass::Tm;
    case Expr::Kind::Sym: return sig.sym(e.index()).cls;
    case Expr::Kind::Meta: return sig.meta(e.index()).cls;
  }
  return SyntacticClass::Tm;
}

void validate_expr(const Signature& sig, Scope scope, const Expr& e, std::optional<SyntacticClass> expected) {
  if (!e.valid()) fail(ErrorKind::ArityMismatch, "missing expression");
  SyntacticClass c{};
  switch (e.kind()) {
    case Expr::Kind::Var:
      if (e.index() >= scope)
        fail(ErrorKind::ScopeMismatch,
             "variable " + std::to_string(e.index()) + " outside scope " + std::to_string(scope));
      c = SyntacticClass::Tm;
      break;
    case Expr::Kind::Sym: {
      const Symbol& s = sig.sym(e.index());
      if (s.arity.size() != e.args().size())
        fail(ErrorKind::ArityMismatch, "symbol " + s.name + " expects " + std::to_string(s.arity.size()) +
                                           " arguments, got " + std::to_string(e.args().size()));
      for (std::size_t i = 0; i < s.arity.size(); ++i) {
        if (e.binder(i) != s.arity[i].binder)
          fail(ErrorKind::ArityMismatch, "symbol " + s.name + ": binder of argument " + std::to_string(i));
        validate_expr(sig, scope + s.arity[i].binder, e.args()[i], s.arity[i].cls);
      }
      c = s.cls;
      break;
    }
    case Expr::Kind::Meta: {
      const Symbol& m = sig.meta(e.index());
      if (m.arity.size() != e.args().size())
        fail(ErrorKind::ArityMismatch, "metavariable " + m.name + " expects " + std::to_string(m.arity.size()) +
                                           " arguments, got " + std::to_string(e.args().size()));
      for (const auto& a : e.args()) validate_expr(sig, scope, a, SyntacticClass::Tm);
      c = m.cls;
      break;
    }
  }
  if (expected && *expected != c)
    fail(ErrorKind::ClassMismatch, std::string("expected a ") + class_name(*expected) + " expression, found a " + class_name(c));
}

Expr generic_meta(std::size_t i, Scope binder) {
  std::vector<Expr> a;
  for (Position j = 0; j < binder; ++j) a.push_back(Expr::var(j));
  return Expr::meta(i, std::move(a));
}

Expr generic_application(std::size_t sym, const Arity& arity) {
  std::vector<Expr> a;
  std::vector<Scope> b;
  for (std::size_t i = 0; i < arity.size(); ++i) {
    a.push_back(generic_meta(i, arity[i].binder));
    b.push_back(arity[i].binder);
  }
  return Expr::sym(sym, std::move(a), std::move(b));
}

// ---- renaming

namespace {

// r + id_k acting on e in scope r.src + k
Expr rename_rec(ScopeSystem sys, const Renaming& r, Scope k, const Expr& e) {
  if (e.is_var()) {
    SumSide s = split_sum(sys, r.src, k, e.index());
    if (s.left) return Expr::var(inl(sys, r.dst, k, r(s.pos)));
    return Expr::var(inr(sys, r.dst, k, s.pos));
  }
  std::vector<Expr> a;
  a.reserve(e.args().size());
  for (std::size_t i = 0; i < e.args().size(); ++i) a.push_back(rename_rec(sys, r, k + e.binder(i), e.args()[i]));
  if (e.is_meta()) return Expr::meta(e.index(), std::move(a));
  return Expr::sym(e.index(), std::move(a), e.binders());
}

}  // namespace

Expr rename_expr(ScopeSystem sys, const Renaming& r, const Expr& e) { return rename_rec(sys, r, 0, e); }

Expr weaken_expr(ScopeSystem sys, Scope gamma, Scope delta, const Expr& e) {
  if (delta == 0) return e;
  // under levels inl fixes free variables, but bound ones sit past the
  // ambient scope and still move
  return rename_expr(sys, inl_renaming(sys, gamma, delta), e);
}

// ---- signature maps

SignatureMap SignatureMap::identity(const Signature& sig) {
  SignatureMap F;
  for (std::size_t k = 0; k < sig.base_size(); ++k) F.sym.push_back(k);
  return F;
}

void validate_signature_map(const SignatureMap& F, const Signature& src, const Signature& dst) {
  if (!F.sym.empty() && F.sym.size() != src.base_size())
    fail(ErrorKind::SignatureMismatch, "signature map does not cover the source");
  for (std::size_t k = 0; k < src.base_size(); ++k) {
    const Symbol& a = src.sym(k);
    const Symbol& b = dst.sym(F.sym.empty() ? k : F.sym[k]);
    if (a.cls != b.cls || a.arity != b.arity)
      fail(ErrorKind::SignatureMismatch, "symbol " + a.name + " sent to " + b.name + " of different class or arity");
  }
  if (!F.meta.empty()) {
    if (F.meta.size() != src.meta_count) fail(ErrorKind::SignatureMismatch, "metavariable table size");
    for (std::size_t i = 0; i < F.meta.size(); ++i) {
      const Symbol& a = src.meta(i);
      const Symbol& b = dst.meta(F.meta[i]);
      if (a.cls != b.cls || a.arity != b.arity)
        fail(ErrorKind::SignatureMismatch, "metavariable " + a.name + " sent to one of different class or arity");
    }
  }
}

Expr translate_expr(const SignatureMap& F, const Expr& e) {
  if (e.is_var()) return e;
  std::vector<Expr> a;
  a.reserve(e.args().size());
  for (const auto& x : e.args()) a.push_back(translate_expr(F, x));
  if (e.is_meta()) return Expr::meta(F.meta.empty() ? e.index() : F.meta.at(e.index()), std::move(a));
  return Expr::sym(F.sym.empty() ? e.index() : F.sym.at(e.index()), std::move(a), e.binders());
}

SignatureMap compose_signature_map(const SignatureMap& G, const SignatureMap& F) {
  SignatureMap H;
  if (F.sym.empty())
    H.sym = G.sym;
  else
    for (std::size_t k : F.sym) H.sym.push_back(G.sym.empty() ? k : G.sym.at(k));
  if (F.meta.empty()) {
    H.meta = G.meta;
  } else {
    for (std::size_t i : F.meta) H.meta.push_back(G.meta.empty() ? i : G.meta.at(i));
  }
  return H;
}

// ---- substitutions

RawSubstitution RawSubstitution::identity(Scope n) {
  RawSubstitution f{n, n, {}};
  for (Position i = 0; i < n; ++i) f.table.push_back(Expr::var(i));
  return f;
}

RawSubstitution subst_of_renaming(const Renaming& r) {
  RawSubstitution f{r.dst, r.src, {}};
  for (Position i : r.table) f.table.push_back(Expr::var(i));
  return f;
}

RawSubstitution extend_substitution(ScopeSystem sys, const RawSubstitution& f, Scope eta) {
  if (eta == 0) return f;
  RawSubstitution g{f.src + eta, f.dst + eta, std::vector<Expr>(f.dst + eta)};
  for (Position i = 0; i < f.dst; ++i)
    g.table[inl(sys, f.dst, eta, i)] = weaken_expr(sys, f.src, eta, f.table.at(i));
  for (Position j = 0; j < eta; ++j) g.table[inr(sys, f.dst, eta, j)] = Expr::var(inr(sys, f.src, eta, j));
  return g;
}

namespace {

// (f + k)* e for e in scope f.dst + k
Expr subst_rec(ScopeSystem sys, const RawSubstitution& f, Scope k, const Expr& e) {
  if (e.is_var()) {
    SumSide s = split_sum(sys, f.dst, k, e.index());
    if (s.left) return weaken_expr(sys, f.src, k, f.table.at(s.pos));
    return Expr::var(inr(sys, f.src, k, s.pos));
  }
  std::vector<Expr> a;
  a.reserve(e.args().size());
  for (std::size_t i = 0; i < e.args().size(); ++i) a.push_back(subst_rec(sys, f, k + e.binder(i), e.args()[i]));
  if (e.is_meta()) return Expr::meta(e.index(), std::move(a));
  return Expr::sym(e.index(), std::move(a), e.binders());
}

}  // namespace

Expr substitute_expr(ScopeSystem sys, const RawSubstitution& f, const Expr& e) {
  if (f.table.size() != f.dst) fail(ErrorKind::ScopeMismatch, "substitution table size differs from its target scope");
  return subst_rec(sys, f, 0, e);
}

RawSubstitution compose_subst(ScopeSystem sys, const RawSubstitution& g, const RawSubstitution& f) {
  if (g.src != f.dst) fail(ErrorKind::ScopeMismatch, "substitution composition: scopes do not chain");
  RawSubstitution h{f.src, g.dst, {}};
  h.table.reserve(g.dst);
  for (const auto& x : g.table) h.table.push_back(substitute_expr(sys, f, x));
  return h;
}

RawSubstitution rename_subst(ScopeSystem sys, const Renaming& r, const RawSubstitution& f) {
  if (r.src != f.src) fail(ErrorKind::ScopeMismatch, "renaming a substitution: scopes do not chain");
  RawSubstitution g{r.dst, f.dst, {}};
  for (const auto& x : f.table) g.table.push_back(rename_expr(sys, r, x));
  return g;
}

RawSubstitution translate_subst(const SignatureMap& F, const RawSubstitution& f) {
  RawSubstitution g{f.src, f.dst, {}};
  for (const auto& x : f.table) g.table.push_back(translate_expr(F, x));
  return g;
}

void validate_subst(const Signature& sig, const RawSubstitution& f) {
  if (f.table.size() != f.dst) fail(ErrorKind::ScopeMismatch, "substitution table size differs from its target scope");
  for (const auto& x : f.table) validate_expr(sig, f.src, x, SyntacticClass::Tm);
}

// ---- instantiations

void validate_inst(const Signature& sig, const Instantiation& I) {
  if (I.args.size() != I.arity.size())
    fail(ErrorKind::ArityMismatch, "instantiation has " + std::to_string(I.args.size()) + " arguments for an arity of " +
                                       std::to_string(I.arity.size()));
  for (std::size_t i = 0; i < I.args.size(); ++i) validate_expr(sig, I.scope + I.arity[i].binder, I.args[i], I.arity[i].cls);
}

namespace {

Expr inst_rec(ScopeSystem sys, const Instantiation& I, Scope delta, const Expr& e) {
  const Scope gamma = I.scope;
  switch (e.kind()) {
    case Expr::Kind::Var: return Expr::var(inr(sys, gamma, delta, e.index()));
    case Expr::Kind::Sym: {
      std::vector<Expr> a;
      a.reserve(e.args().size());
      for (std::size_t i = 0; i < e.args().size(); ++i) a.push_back(inst_rec(sys, I, delta + e.binder(i), e.args()[i]));
      return Expr::sym(e.index(), std::move(a), e.binders());
    }
    case Expr::Kind::Meta: {
      if (e.index() >= I.args.size()) fail(ErrorKind::IndexOutOfRange, "metavariable outside the instantiated arity");
      const Scope beta = I.arity[e.index()].binder;
      if (e.args().size() != beta) fail(ErrorKind::ArityMismatch, "metavariable applied to wrong number of arguments");
      // (gamma + e) : gamma + delta -> gamma + beta
      RawSubstitution s{gamma + delta, gamma + beta, std::vector<Expr>(gamma + beta)};
      for (Position k = 0; k < gamma; ++k) s.table[inl(sys, gamma, beta, k)] = Expr::var(inl(sys, gamma, delta, k));
      for (Position j = 0; j < beta; ++j) s.table[inr(sys, gamma, beta, j)] = inst_rec(sys, I, delta, e.args()[j]);
      return substitute_expr(sys, s, I.args[e.index()]);
    }
  }
  return e;
}

}  // namespace

Expr instantiate_expr(ScopeSystem sys, const Instantiation& I, Scope delta, const Expr& e) {
  return inst_rec(sys, I, delta, e);
}

RawSubstitution inst_act_subst(ScopeSystem sys, const Instantiation& I, const RawSubstitution& f) {
  const Scope gamma = I.scope;
  RawSubstitution g{gamma + f.src, gamma + f.dst, std::vector<Expr>(gamma + f.dst)};
  for (Position i = 0; i < gamma; ++i) g.table[inl(sys, gamma, f.dst, i)] = Expr::var(inl(sys, gamma, f.src, i));
  for (Position j = 0; j < f.dst; ++j) g.table[inr(sys, gamma, f.dst, j)] = instantiate_expr(sys, I, f.src, f.table.at(j));
  return g;
}

Instantiation inst_act_inst(ScopeSystem sys, const Instantiation& I, const Instantiation& J) {
  Instantiation K{J.arity, I.scope + J.scope, {}};
  for (std::size_t j = 0; j < J.args.size(); ++j)
    K.args.push_back(instantiate_expr(sys, I, J.scope + J.arity[j].binder, J.args[j]));
  return K;
}

Instantiation subst_act_inst(ScopeSystem sys, const RawSubstitution& f, const Instantiation& I) {
  if (f.dst != I.scope) fail(ErrorKind::ScopeMismatch, "substitution target differs from instantiation scope");
  Instantiation J{I.arity, f.src, {}};
  for (std::size_t i = 0; i < I.args.size(); ++i)
    J.args.push_back(substitute_expr(sys, extend_substitution(sys, f, I.arity[i].binder), I.args[i]));
  return J;
}

Instantiation translate_inst(const SignatureMap& F, const Instantiation& I) {
  Instantiation J{I.arity, I.scope, {}};
  for (const auto& x : I.args) J.args.push_back(translate_expr(F, x));
  return J;
}

Instantiation rename_inst(ScopeSystem sys, const Renaming& r, const Instantiation& I) {
  if (r.src != I.scope) fail(ErrorKind::ScopeMismatch, "renaming source differs from instantiation scope");
  Instantiation J{I.arity, r.dst, {}};
  for (std::size_t i = 0; i < I.args.size(); ++i)
    J.args.push_back(rename_expr(sys, extend_renaming(sys, r, I.arity[i].binder), I.args[i]));
  return J;
}

Instantiation generic_instantiation(ScopeSystem sys, const Arity& alpha, Scope gamma) {
  Instantiation I{alpha, gamma, {}};
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    std::vector<Expr> a;
    for (Position j = 0; j < alpha[i].binder; ++j) a.push_back(Expr::var(inr(sys, gamma, alpha[i].binder, j)));
    I.args.push_back(Expr::meta(i, std::move(a)));
  }
  return I;
}

Instantiation concat_inst(const Instantiation& I, const Instantiation& J) {
  if (I.scope != J.scope) fail(ErrorKind::ScopeMismatch, "concatenated instantiations live in different scopes");
  Instantiation K = I;
  K.arity.insert(K.arity.end(), J.arity.begin(), J.arity.end());
  K.args.insert(K.args.end(), J.args.begin(), J.args.end());
  return K;
}

}  // namespace gtt
