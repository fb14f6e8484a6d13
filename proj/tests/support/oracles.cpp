#include "support/oracles.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace gtt::oracle {

namespace {

using C = SyntacticClass;

ArityArg a(C c, Scope b) { return ArityArg{c, b, ""}; }

}  // namespace

Signature small_signature() {
  Signature s;
  s.symbols = {
      Symbol{"o", C::Ty, {}},
      Symbol{"c", C::Tm, {}},
      Symbol{"P", C::Ty, {a(C::Ty, 0), a(C::Ty, 1)}},
      Symbol{"l", C::Tm, {a(C::Ty, 0), a(C::Tm, 2)}},
      Symbol{"ap", C::Tm, {a(C::Tm, 0), a(C::Tm, 0)}},
  };
  return s;
}

Signature doubled_signature(const Signature& sig) {
  Signature out = base_signature(sig);
  const std::size_t n = out.symbols.size();
  for (std::size_t k = 0; k < n; ++k) {
    Symbol s = out.symbols[k];
    s.name += "'";
    out.symbols.push_back(s);
  }
  return out;
}

SignatureMap random_doubling_map(Rand& r, const Signature& sig) {
  SignatureMap F;
  const std::size_t n = sig.base_size();
  for (std::size_t k = 0; k < n; ++k) F.sym.push_back(r.coin() ? k + n : k);
  return F;
}

Arity random_arity(Rand& r, std::size_t max_len, Scope max_binder) {
  Arity al;
  const std::size_t len = r.below(max_len + 1);
  for (std::size_t i = 0; i < len; ++i)
    al.push_back(ArityArg{r.coin() ? C::Ty : C::Tm, r.below(max_binder + 1), "m" + std::to_string(i)});
  return al;
}

Expr random_expr(Rand& r, const Signature& sig, Scope n, SyntacticClass c, int depth) {
  // candidates: -1 for a variable, k for base symbol k, base + i for meta i
  std::vector<long> cand;
  if (c == C::Tm && n > 0) cand.push_back(-1);
  for (std::size_t k = 0; k < sig.symbols.size(); ++k) {
    const Symbol& s = sig.symbols[k];
    if (s.cls != c) continue;
    if (depth <= 1 && !s.arity.empty()) continue;
    if (depth <= 0) continue;
    cand.push_back(static_cast<long>(k));
  }
  if (cand.empty()) fail(ErrorKind::ClassMismatch, "random_expr: nothing of this class fits");
  const long pick = cand[r.below(cand.size())];
  if (pick < 0) return Expr::var(r.below(n));
  const std::size_t k = static_cast<std::size_t>(pick);
  const Symbol& s = sig.symbols[k];
  std::vector<Expr> args;
  for (const auto& x : s.arity) args.push_back(random_expr(r, sig, n + x.binder, x.cls, depth - 1));
  if (k >= sig.base_size()) return Expr::meta(k - sig.base_size(), std::move(args));
  return make_sym(sig, k, std::move(args));
}

Renaming random_renaming(Rand& r, Scope src, Scope dst) {
  if (src > 0 && dst == 0) fail(ErrorKind::ScopeMismatch, "no renaming from a nonempty scope into the empty one");
  Renaming out{src, dst, {}};
  for (Position i = 0; i < src; ++i) out.table.push_back(r.below(dst));
  return out;
}

RawSubstitution random_subst(Rand& r, const Signature& sig, Scope gamma, Scope delta, int depth) {
  RawSubstitution f{gamma, delta, {}};
  for (Position j = 0; j < delta; ++j) f.table.push_back(random_expr(r, sig, gamma, C::Tm, depth));
  return f;
}

Instantiation random_inst(Rand& r, const Signature& sig, const Arity& alpha, Scope gamma, int depth) {
  Instantiation I{alpha, gamma, {}};
  for (const auto& x : alpha) I.args.push_back(random_expr(r, sig, gamma + x.binder, x.cls, depth));
  return I;
}

// ---- named reference

namespace {

std::size_t fresh_counter = 0;

std::string fresh() { return "b" + std::to_string(fresh_counter++); }

// the environment under a binder of size b: outer names at inl, new at inr
std::vector<std::string> under(ScopeSystem sys, const std::vector<std::string>& env, const std::vector<std::string>& bound) {
  const Scope n = env.size(), b = bound.size();
  std::vector<std::string> out(n + b);
  for (Position i = 0; i < n; ++i) out[inl(sys, n, b, i)] = env[i];
  for (Position j = 0; j < b; ++j) out[inr(sys, n, b, j)] = bound[j];
  return out;
}

Named replace(const Named& n, const std::map<std::string, Named>& table) {
  if (n.kind == Named::Kind::Var) {
    auto it = table.find(n.name);
    return it == table.end() ? n : it->second;
  }
  Named out = n;
  for (auto& x : out.args) x = replace(x, table);
  return out;
}

std::vector<std::string> names(const std::string& prefix, Scope n) {
  std::vector<std::string> v;
  for (Position i = 0; i < n; ++i) v.push_back(prefix + std::to_string(i));
  return v;
}

}  // namespace

Named to_named(ScopeSystem sys, const std::vector<std::string>& env, const Expr& e) {
  Named out;
  if (e.is_var()) {
    out.kind = Named::Kind::Var;
    out.name = env.at(e.index());
    return out;
  }
  out.kind = e.is_sym() ? Named::Kind::Sym : Named::Kind::Meta;
  out.index = e.index();
  for (std::size_t i = 0; i < e.args().size(); ++i) {
    std::vector<std::string> bound;
    for (Scope j = 0; j < e.binder(i); ++j) bound.push_back(fresh());
    out.args.push_back(to_named(sys, under(sys, env, bound), e.args()[i]));
    out.bound.push_back(std::move(bound));
  }
  return out;
}

Expr from_named(ScopeSystem sys, const std::vector<std::string>& env, const Named& n) {
  if (n.kind == Named::Kind::Var) {
    auto it = std::find(env.begin(), env.end(), n.name);
    if (it == env.end()) fail(ErrorKind::ScopeMismatch, "named variable " + n.name + " not in scope");
    return Expr::var(static_cast<Position>(it - env.begin()));
  }
  std::vector<Expr> args;
  std::vector<Scope> binders;
  bool any_binder = false;
  for (std::size_t i = 0; i < n.args.size(); ++i) {
    args.push_back(from_named(sys, under(sys, env, n.bound[i]), n.args[i]));
    binders.push_back(n.bound[i].size());
    any_binder = any_binder || !n.bound[i].empty();
  }
  if (n.kind == Named::Kind::Meta) return Expr::meta(n.index, std::move(args));
  return Expr::sym(n.index, std::move(args), any_binder ? binders : std::vector<Scope>{});
}

Expr named_substitute(ScopeSystem sys, const RawSubstitution& f, const Expr& e) {
  const auto genv = names("g", f.src), denv = names("d", f.dst);
  std::map<std::string, Named> table;
  for (Position j = 0; j < f.dst; ++j) table[denv[j]] = to_named(sys, genv, f.table[j]);
  return from_named(sys, genv, replace(to_named(sys, denv, e), table));
}

Expr named_rename(ScopeSystem sys, const Renaming& r, const Expr& e) {
  const auto denv = names("d", r.src), genv = names("g", r.dst);
  std::map<std::string, Named> table;
  for (Position i = 0; i < r.src; ++i) {
    Named v;
    v.name = genv[r(i)];
    table[denv[i]] = v;
  }
  return from_named(sys, genv, replace(to_named(sys, denv, e), table));
}

// ---- law batteries

namespace {

struct Battery {
  std::vector<LawResult> results;
  std::map<std::string, std::size_t> index;

  void record(const std::string& law, bool ok, const std::function<std::string()>& describe) {
    auto [it, fresh_law] = index.try_emplace(law, results.size());
    if (fresh_law) results.push_back(LawResult{law, 0, 0, ""});
    LawResult& r = results[it->second];
    ++r.cases;
    if (!ok) {
      if (r.failures == 0) r.first_failure = describe();
      ++r.failures;
    }
  }
};

std::string show(const Expr& e) {
  std::ostringstream o;
  if (e.is_var()) {
    o << "#" << e.index();
    return o.str();
  }
  o << (e.is_meta() ? "M" : "S") << e.index() << "(";
  for (std::size_t i = 0; i < e.args().size(); ++i) {
    if (i) o << ", ";
    if (e.binder(i)) o << "\\" << e.binder(i) << ".";
    o << show(e.args()[i]);
  }
  o << ")";
  return o.str();
}

std::string scope_name(ScopeSystem sys) { return sys == ScopeSystem::DeBruijnIndices ? "indices" : "levels"; }

}  // namespace

std::vector<LawResult> substitution_laws(ScopeSystem sys, std::uint64_t seed, std::size_t cases, int depth) {
  Rand r(seed);
  const Signature sig = small_signature();
  Battery B;
  const std::string tag = " [" + scope_name(sys) + "]";
  for (std::size_t n = 0; n < cases; ++n) {
    // a renaming needs a nonempty target when its source is nonempty
    auto target = [&](Scope src) { return src == 0 ? r.below(4) : 1 + r.below(3); };
    const Scope delta = r.below(4), gamma = target(delta), eta = target(gamma), theta = r.below(4);
    const int d = 1 + static_cast<int>(r.below(static_cast<std::size_t>(depth)));
    const Expr e = random_expr(r, sig, delta, r.coin() ? C::Ty : C::Tm, d);
    auto bad = [&] { return "e = " + show(e); };

    // renaming as substitution
    const Renaming ren = random_renaming(r, delta, gamma);
    const Expr renamed = rename_expr(sys, ren, e);
    B.record("substitution generalises renaming" + tag, substitute_expr(sys, subst_of_renaming(ren), e) == renamed, bad);
    B.record("renaming agrees with named reference" + tag, named_rename(sys, ren, e) == renamed, bad);

    // identity
    B.record("identity substitution" + tag, substitute_expr(sys, RawSubstitution::identity(delta), e) == e, bad);

    // f : gamma -> delta
    const RawSubstitution f = random_subst(r, sig, gamma, delta, 2);
    const Expr fe = substitute_expr(sys, f, e);
    B.record("substitution agrees with named reference" + tag, named_substitute(sys, f, e) == fe, bad);

    // commutation: renaming after substitution
    const Renaming after = random_renaming(r, gamma, eta);
    B.record("renaming after substitution" + tag,
             rename_expr(sys, after, fe) == substitute_expr(sys, rename_subst(sys, after, f), e), bad);
    // commutation: substitution after renaming, e' in theta renamed into delta
    const Scope kappa = delta == 0 ? 0 : r.below(4);
    const Expr e2 = random_expr(r, sig, kappa, C::Tm, d);
    const Renaming before = random_renaming(r, kappa, delta);
    RawSubstitution fr{gamma, kappa, {}};
    for (Position i = 0; i < kappa; ++i) fr.table.push_back(f.table.at(before(i)));
    B.record("substitution after renaming" + tag,
             substitute_expr(sys, f, rename_expr(sys, before, e2)) == substitute_expr(sys, fr, e2),
             [&] { return "e = " + show(e2); });

    // composition: g : delta -> theta acts on e3 in theta, then f
    const Expr e3 = random_expr(r, sig, theta, C::Ty, d);
    const RawSubstitution g = random_subst(r, sig, delta, theta, 2);
    const RawSubstitution gf = compose_subst(sys, g, f);
    B.record("composition" + tag,
             substitute_expr(sys, f, substitute_expr(sys, g, e3)) == substitute_expr(sys, gf, e3),
             [&] { return "e = " + show(e3); });

    // unit and associativity, h : theta -> eta
    const RawSubstitution h = random_subst(r, sig, theta, eta, 2);
    B.record("unit" + tag,
             compose_subst(sys, RawSubstitution::identity(delta), f) == f &&
                 compose_subst(sys, f, RawSubstitution::identity(gamma)) == f,
             bad);
    B.record("associativity" + tag,
             compose_subst(sys, compose_subst(sys, h, g), f) == compose_subst(sys, h, compose_subst(sys, g, f)), bad);
  }
  return B.results;
}

std::vector<LawResult> instantiation_laws(ScopeSystem sys, std::uint64_t seed, std::size_t cases, int depth) {
  Rand r(seed);
  const Signature sig = small_signature();
  const Signature sig2 = doubled_signature(sig);
  Battery B;
  const std::string tag = " [" + scope_name(sys) + "]";
  for (std::size_t n = 0; n < cases; ++n) {
    const int d = 1 + static_cast<int>(r.below(static_cast<std::size_t>(depth)));
    const Arity alpha = random_arity(r, 3, 2), beta = random_arity(r, 3, 2);
    const Signature sa = mv_extend_signature(sig, alpha);
    const Scope gamma = r.below(3), delta = r.below(3), theta = r.below(3), dp = r.below(3);

    const Instantiation I = random_inst(r, sig, alpha, gamma, d);
    const Instantiation J = random_inst(r, sa, beta, delta, d);
    const Expr e = random_expr(r, sa, theta, r.coin() ? C::Ty : C::Tm, d);
    const SignatureMap F = random_doubling_map(r, sig);
    const SignatureMap G = random_doubling_map(r, sig2);
    auto bad = [&] { return "e = " + show(e); };

    // functoriality of translation
    B.record("translation of instantiations is functorial" + tag,
             translate_inst(compose_signature_map(G, F), I) == translate_inst(G, translate_inst(F, I)) &&
                 translate_inst(SignatureMap::identity(sig), I) == I,
             bad);

    // naturality in signature maps; F + alpha leaves metavariables alone
    B.record("translation natural: expressions" + tag,
             translate_expr(F, instantiate_expr(sys, I, theta, e)) ==
                 instantiate_expr(sys, translate_inst(F, I), theta, translate_expr(F, e)),
             bad);
    const RawSubstitution fa = random_subst(r, sa, dp, theta, d);  // over sig + alpha
    B.record("translation natural: substitutions" + tag,
             translate_subst(F, inst_act_subst(sys, I, fa)) ==
                 inst_act_subst(sys, translate_inst(F, I), translate_subst(F, fa)),
             bad);
    B.record("translation natural: instantiations" + tag,
             translate_inst(F, inst_act_inst(sys, I, J)) == inst_act_inst(sys, translate_inst(F, I), translate_inst(F, J)),
             bad);
    const RawSubstitution f = random_subst(r, sig, dp, gamma, d);  // dp -> gamma over sig
    B.record("translation natural: substitution action" + tag,
             translate_inst(F, subst_act_inst(sys, f, I)) ==
                 subst_act_inst(sys, translate_subst(F, f), translate_inst(F, I)),
             bad);

    // functoriality of the substitution action: g : th -> dp
    const Scope th = r.below(3);
    const RawSubstitution g = random_subst(r, sig, th, dp, d);
    B.record("substitution action functorial" + tag,
             subst_act_inst(sys, compose_subst(sys, f, g), I) == subst_act_inst(sys, g, subst_act_inst(sys, f, I)) &&
                 subst_act_inst(sys, RawSubstitution::identity(gamma), I) == I,
             bad);

    // naturality in substitutions
    B.record("instantiation natural: substituted instantiation" + tag,
             instantiate_expr(sys, subst_act_inst(sys, f, I), theta, e) ==
                 substitute_expr(sys, extend_substitution(sys, f, theta), instantiate_expr(sys, I, theta, e)),
             bad);
    const Expr e2 = random_expr(r, sa, theta, C::Tm, d);  // in scope fa.dst
    B.record("instantiation natural: substituted expression" + tag,
             instantiate_expr(sys, I, dp, substitute_expr(sys, fa, e2)) ==
                 substitute_expr(sys, inst_act_subst(sys, I, fa), instantiate_expr(sys, I, theta, e2)),
             [&] { return "e = " + show(e2); });

    // associativity: e3 over sig + beta; the inclusion into sig + alpha + beta
    // is the identity on representations
    const Expr e3 = random_expr(r, mv_extend_signature(sig, beta), theta, r.coin() ? C::Ty : C::Tm, d);
    B.record("instantiation associative" + tag,
             instantiate_expr(sys, inst_act_inst(sys, I, J), theta, e3) ==
                 instantiate_expr(sys, I, delta + theta, instantiate_expr(sys, J, theta, e3)),
             [&] { return "e = " + show(e3); });
  }
  return B.results;
}

}  // namespace gtt::oracle
