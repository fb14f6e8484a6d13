#include "corpus.hpp"

#include "gtt/builders.hpp"
#include "gtt/error.hpp"

namespace gtt::corpus {

bool SimpleType::operator==(const SimpleType& o) const {
  if (kind != o.kind) return false;
  if (kind != Kind::Arrow) return true;
  return *dom == *o.dom && *cod == *o.cod;
}

namespace {

SimpleType arrow(SimpleType a, SimpleType b) {
  SimpleType t;
  t.kind = SimpleType::Kind::Arrow;
  t.dom = std::make_shared<SimpleType>(std::move(a));
  t.cod = std::make_shared<SimpleType>(std::move(b));
  return t;
}

SimpleType base(SimpleType::Kind k) {
  SimpleType t;
  t.kind = k;
  return t;
}

std::vector<SimpleType> cons(const SimpleType& A, std::vector<SimpleType> g) {
  g.insert(g.begin(), A);
  return g;
}

}  // namespace

Generator::Generator(const bundled::Bundle& b, std::uint64_t seed) : b_(b), rng_(seed) {}

std::size_t Generator::pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

Expr Generator::sym(const std::string& name, std::vector<Expr> args) const {
  return make_sym(b_.theory.sig, b_.theory.symbol_index(name), std::move(args));
}

Derivation Generator::rule(const std::string& name, const RawContext& G, std::vector<Expr> args,
                           std::vector<Derivation> ch) const {
  return mk::rule(b_.theory, name, G, std::move(args), std::move(ch));
}

RawContext Generator::extend(const RawContext& G, const Expr& A) const { return extend_context(b_.theory.sys, G, {A}); }

Expr Generator::type_expr(const SimpleType& T) const {
  switch (T.kind) {
    case SimpleType::Kind::O: return sym("o");
    case SimpleType::Kind::OAlt: return sym("o_alt");
    case SimpleType::Kind::Arrow: return sym("Pi", {type_expr(*T.dom), type_expr(*T.cod)});
  }
  return {};
}

Derivation Generator::type_deriv(const RawContext& G, const SimpleType& T) const {
  switch (T.kind) {
    case SimpleType::Kind::O: return rule("o-form", G, {}, {});
    case SimpleType::Kind::OAlt: return rule("o_alt-form", G, {}, {});
    case SimpleType::Kind::Arrow: {
      Expr A = type_expr(*T.dom);
      return rule("Pi-form", G, {A, type_expr(*T.cod)}, {type_deriv(G, *T.dom), type_deriv(extend(G, A), *T.cod)});
    }
  }
  return {};
}

SimpleType Generator::random_type(int depth) {
  std::size_t k = pick(depth > 0 ? 4 : 2);
  if (k == 0) return base(SimpleType::Kind::O);
  if (k == 1) return base(SimpleType::Kind::OAlt);
  return arrow(random_type(depth - 1), random_type(depth - 1));
}

std::vector<SimpleType> Generator::random_context(std::size_t max_len) {
  std::vector<SimpleType> g;
  std::size_t n = pick(max_len + 1);
  for (std::size_t i = 0; i < n; ++i) g.push_back(random_type(1));
  return g;
}

RawContext Generator::context_of(const std::vector<SimpleType>& g) const {
  std::vector<Expr> ts;
  for (const auto& T : g) ts.push_back(type_expr(T));
  return RawContext(std::move(ts));
}

TypedTerm Generator::random_term(const std::vector<SimpleType>& g, const SimpleType& T, int depth) {
  const RawContext G = context_of(g);
  const Expr A = type_expr(T);
  TypedTerm out{G, {}, A, type_deriv(G, T), {}};

  std::vector<std::size_t> vars;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g[i] == T) vars.push_back(i);

  enum Choice { Var, Const, Lam, App };
  std::vector<Choice> opts;
  if (!vars.empty()) opts.push_back(Var);
  if (T.kind != SimpleType::Kind::Arrow) opts.push_back(Const);
  if (T.kind == SimpleType::Kind::Arrow) opts.push_back(Lam);
  if (depth > 0) opts.push_back(App);
  switch (opts[pick(opts.size())]) {
    case Var: {
      std::size_t i = vars[pick(vars.size())];
      out.term = Expr::var(i);
      out.deriv = Derivation::var(G, i, out.type_deriv);
      break;
    }
    case Const: {
      out.term = sym("c");
      Derivation dc = rule("c-intro", G, {}, {});
      if (T.kind == SimpleType::Kind::O) {
        out.deriv = dc;
      } else {
        Expr o = sym("o"), oa = sym("o_alt");
        Derivation doo = rule("o-form", G, {}, {}), doa = rule("o_alt-form", G, {}, {});
        out.deriv = mk::conv_tm(G, o, oa, out.term, doo, doa, dc, mk::ty_sym(G, oa, o, doa, doo, rule("o_alt-def", G, {}, {})));
      }
      break;
    }
    case Lam: {
      const SimpleType &D = *T.dom, &C = *T.cod;
      TypedTerm body = random_term(cons(D, g), C, depth > 0 ? depth - 1 : 0);
      Expr dA = type_expr(D), cB = type_expr(C);
      out.term = sym("lam", {dA, cB, body.term});
      out.deriv = rule("lam-intro", G, {dA, cB, body.term}, {type_deriv(G, D), body.type_deriv, body.deriv});
      break;
    }
    case App: {
      SimpleType D = random_type(1);
      TypedTerm f = random_term(g, arrow(D, T), depth - 1);
      TypedTerm a = random_term(g, D, depth - 1);
      Expr dA = type_expr(D);
      out.term = sym("app", {dA, A, f.term, a.term});
      out.deriv = rule("app-elim", G, {dA, A, f.term, a.term},
                       {type_deriv(G, D), type_deriv(extend(G, dA), T), f.deriv, a.deriv});
      break;
    }
  }
  return out;
}

Derivation Generator::wrap_conversion(const TypedTerm& t) {
  const RawContext& G = t.ctx;
  const Expr o = sym("o"), oa = sym("o_alt");
  if (t.type == o || t.type == oa) {
    Derivation doo = rule("o-form", G, {}, {}), doa = rule("o_alt-form", G, {}, {});
    Derivation def = rule("o_alt-def", G, {}, {});
    if (t.type == oa) return mk::conv_tm(G, oa, o, t.term, doa, doo, t.deriv, def);
    if (pick(2) == 0) return mk::conv_tm(G, o, oa, t.term, doo, doa, t.deriv, mk::ty_sym(G, oa, o, doa, doo, def));
  }
  return mk::conv_tm(G, t.type, t.type, t.term, t.type_deriv, t.type_deriv, t.deriv, mk::ty_refl(G, t.type, t.type_deriv));
}

Derivation Generator::beta_instance(const std::vector<SimpleType>& g, int depth) {
  const RawContext G = context_of(g);
  SimpleType D = random_type(1), C = random_type(1);
  Expr A = type_expr(D), B = type_expr(C);
  TypedTerm body = random_term(cons(D, g), C, depth);
  TypedTerm a = random_term(g, D, depth);
  return rule("beta", G, {A, B, body.term, a.term}, {type_deriv(G, D), body.type_deriv, body.deriv, a.deriv});
}

Derivation Generator::app_congruence_instance(const std::vector<SimpleType>& g, int depth) {
  const RawContext G = context_of(g);
  SimpleType D = random_type(1), C = random_type(1);
  Expr A = type_expr(D), B = type_expr(C);
  TypedTerm s = random_term(g, arrow(D, C), depth);
  TypedTerm t = random_term(g, D, depth);
  Derivation dA = type_deriv(G, D), dB = type_deriv(extend(G, A), C);
  std::vector<Derivation> L{dA, dB, s.deriv, t.deriv};
  std::vector<Derivation> ch = L;
  ch.insert(ch.end(), L.begin(), L.end());
  ch.push_back(mk::ty_refl(G, A, dA));
  ch.push_back(mk::ty_refl(extend(G, A), B, dB));
  ch.push_back(mk::tm_refl(G, s.type, s.term, s.type_deriv, s.deriv));
  ch.push_back(mk::tm_refl(G, A, t.term, dA, t.deriv));
  return rule("app-elim-cong", G, {A, B, s.term, t.term, A, B, s.term, t.term}, ch);
}

Derivation hypothetical_app(const Generator& gen, const SimpleType& A, const SimpleType& B) {
  const Expr a = gen.type_expr(A), bty = gen.type_expr(B);
  const Expr pi = gen.type_expr(SimpleType{SimpleType::Kind::Arrow, std::make_shared<SimpleType>(A), std::make_shared<SimpleType>(B)});
  const RawContext G({pi, a});  // y : Pi(A, B) at index 0, x : A at index 1
  const auto& T = gen.bundle().theory;
  SimpleType P{SimpleType::Kind::Arrow, std::make_shared<SimpleType>(A), std::make_shared<SimpleType>(B)};
  Derivation dPi = gen.type_deriv(G, P);
  Derivation dA = gen.type_deriv(G, A);
  return mk::rule(T, "app-elim", G, {a, bty, Expr::var(0), Expr::var(1)},
                  {dA, gen.type_deriv(extend_context(T.sys, G, {a}), B), Derivation::var(G, 0, dPi), Derivation::var(G, 1, dA)});
}

std::vector<Item> mltt_corpus(const bundled::Bundle& b, std::uint64_t seed, std::size_t n) {
  Generator gen(b, seed);
  std::vector<Item> out;
  for (std::size_t i = 0; out.size() < n; ++i) {
    auto g = gen.random_context(2);
    SimpleType T = gen.random_type(2);
    TypedTerm t = gen.random_term(g, T, 2);
    out.push_back({"typing " + std::to_string(i), t.deriv});
    out.push_back({"type " + std::to_string(i), t.type_deriv});
    if (i % 2 == 0) out.push_back({"conversion " + std::to_string(i), gen.wrap_conversion(t)});
    if (i % 3 == 0) out.push_back({"beta " + std::to_string(i), gen.beta_instance(g, 1)});
    if (i % 4 == 0) out.push_back({"app congruence " + std::to_string(i), gen.app_congruence_instance(g, 1)});
  }
  return out;
}

std::vector<TypingPair> typing_pairs(const bundled::Bundle& b, std::uint64_t seed, std::size_t n) {
  Generator gen(b, seed);
  std::vector<TypingPair> out;
  while (out.size() < n) {
    auto g = gen.random_context(2);
    TypedTerm t = gen.random_term(g, gen.random_type(2), 2);
    Derivation w = gen.wrap_conversion(t);
    if (out.size() % 2 == 0)
      out.push_back({t.deriv, w});
    else
      out.push_back({w, t.deriv});
  }
  return out;
}

std::vector<Item> substitution_corpus(const bundled::Bundle& b, std::uint64_t seed, std::size_t n) {
  Generator gen(b, seed);
  const auto& T = b.theory;
  const ScopeSystem sys = T.sys;
  std::vector<Item> out;
  const SimpleType O = base(SimpleType::Kind::O);
  const Expr o = gen.type_expr(O);
  for (std::size_t i = 0; out.size() < n; ++i) {
    // closing substitution
    {
      auto g = gen.random_context(2);
      if (g.empty()) g.push_back(gen.random_type(1));
      TypedTerm t = gen.random_term(g, gen.random_type(1), 2);
      RawSubstitution f{0, g.size(), {}};
      std::vector<Derivation> ch{t.deriv};
      for (const auto& A : g) {
        TypedTerm a = gen.random_term({}, A, 1);
        f.table.push_back(a.term);
        ch.push_back(a.deriv);
      }
      Judgement J = Judgement::is_tm(t.ctx, t.term, t.type);
      out.push_back({"closing substitution " + std::to_string(i), Derivation::subst(RawContext{}, f, no_positions(g.size()), J, ch)});
    }
    // weakening by one variable, all positions trivial
    {
      auto g = gen.random_context(1);
      TypedTerm t = gen.random_term(g, gen.random_type(1), 2);
      SimpleType X = gen.random_type(1);
      RawContext D = extend_context(sys, t.ctx, {gen.type_expr(X)});
      Renaming w = inl_renaming(sys, g.size(), 1);
      RawSubstitution f = subst_of_renaming(w);
      Judgement J = Judgement::is_tm(t.ctx, t.term, t.type);
      out.push_back({"weakening " + std::to_string(i), Derivation::subst(D, f, all_positions(g.size()), J, {t.deriv})});
    }
    // equality substitution c == app(o, o, lam(o, o, x), c)
    {
      const RawContext E{};
      const Expr cc = make_sym(T.sig, T.symbol_index("c"));
      const Expr id = make_sym(T.sig, T.symbol_index("lam"), {o, o, Expr::var(0)});
      const Expr ap = make_sym(T.sig, T.symbol_index("app"), {o, o, id, cc});
      Derivation dO = mk::rule(T, "o-form", E, {});
      Derivation dc = mk::rule(T, "c-intro", E, {});
      Derivation dOx = mk::rule(T, "o-form", RawContext({o}), {});
      Derivation did = mk::rule(T, "lam-intro", E, {o, o, Expr::var(0)}, {dO, dOx, Derivation::var(RawContext({o}), 0, dOx)});
      Derivation dap = mk::rule(T, "app-elim", E, {o, o, id, cc}, {dO, dOx, did, dc});
      Derivation beta = mk::rule(T, "beta", E, {o, o, Expr::var(0), cc}, {dO, dOx, Derivation::var(RawContext({o}), 0, dOx), dc});
      Derivation eq = mk::tm_sym(E, o, ap, cc, dO, dap, dc, beta);
      TypedTerm t = gen.random_term({O}, gen.random_type(1), 2);
      Judgement J = Judgement::is_tm(t.ctx, t.term, t.type);
      RawSubstitution f{0, 1, {cc}}, g{0, 1, {ap}};
      out.push_back({"equality substitution " + std::to_string(i),
                     Derivation::eqsubst(E, f, g, no_positions(1), J, {t.deriv, dc, dap, eq})});
      Judgement JT = Judgement::is_ty(t.ctx, t.type);
      out.push_back({"type equality substitution " + std::to_string(i),
                     Derivation::eqsubst(E, f, g, no_positions(1), JT, {t.type_deriv, dc, dap, eq})});
    }
    // hypothetical application closed by substitution, used under app-elim
    {
      SimpleType A = gen.random_type(1), B = gen.random_type(1);
      Derivation h = hypothetical_app(gen, A, B);
      SimpleType P{SimpleType::Kind::Arrow, std::make_shared<SimpleType>(A), std::make_shared<SimpleType>(B)};
      TypedTerm fn = gen.random_term({}, P, 1);
      TypedTerm a = gen.random_term({}, A, 1);
      Judgement J = conclusion_of(T, {}, h);
      Derivation closed = Derivation::subst(RawContext{}, RawSubstitution{0, 2, {fn.term, a.term}}, no_positions(2), J,
                                            {h, fn.deriv, a.deriv});
      out.push_back({"hypothetical application " + std::to_string(i), closed});
      out.push_back({"hypothetical application, open " + std::to_string(i), h});
    }
  }
  return out;
}

}  // namespace gtt::corpus
