#include "gtt/presentation.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "gtt/error.hpp"

namespace gtt {

// ---- sequential contexts

Position sequential_position(ScopeSystem sys, Scope n, std::size_t i) {
  if (i >= n) fail(ErrorKind::IndexOutOfRange, "sequential entry beyond the context");
  return inl(sys, i + 1, n - i - 1, inr(sys, i, 1, 0));
}

RawContext flatten_sequential_context(ScopeSystem sys, const SequentialContext& G) {
  const Scope n = G.size();
  std::vector<Expr> types(n);
  for (std::size_t i = 0; i < n; ++i)
    types[sequential_position(sys, n, i)] = rename_expr(sys, inl_renaming(sys, i, n - i), G.entries[i]);
  return RawContext(std::move(types));
}

std::optional<Expr> strengthen_expr(ScopeSystem sys, Scope m, Scope n, const Expr& e) {
  if (m > n) fail(ErrorKind::ScopeMismatch, "strengthening into a larger scope");
  const Renaming w = inl_renaming(sys, m, n - m);
  std::vector<bool> in_image(n, false);
  RawSubstitution back{m, n, std::vector<Expr>(n, Expr::var(0))};
  for (Position p = 0; p < m; ++p) {
    in_image[w(p)] = true;
    back.table[w(p)] = Expr::var(p);
  }
  auto occ = occurring_vars(sys, n, e);
  for (Position p = 0; p < n; ++p)
    if (occ[p] && !in_image[p]) return std::nullopt;
  return substitute_expr(sys, back, e);
}

std::optional<SequentialContext> is_sequential_flat_context(ScopeSystem sys, const RawContext& G) {
  const Scope n = G.scope();
  SequentialContext out;
  for (std::size_t i = 0; i < n; ++i) {
    auto e = strengthen_expr(sys, i, n, G[sequential_position(sys, n, i)]);
    if (!e) return std::nullopt;
    out.entries.push_back(*e);
  }
  return out;
}

RawContext initial_segment(ScopeSystem sys, const SequentialContext& G, std::size_t i) {
  SequentialContext pre;
  pre.entries.assign(G.entries.begin(), G.entries.begin() + static_cast<std::ptrdiff_t>(std::min(i, G.size())));
  return flatten_sequential_context(sys, pre);
}

namespace {

std::optional<Derivation> derive_checked(const ContextCheckEnv& env, const RawContext& G, const Expr& A,
                                         const TypeDeriver& derive) {
  auto d = derive(G, A);
  if (!d) return std::nullopt;
  if (!check_derivation_concludes(env.T, env.hyps, *d, Judgement::is_ty(G, A), env.alpha)) return std::nullopt;
  return d;
}

}  // namespace

std::optional<ContextWitnesses> wf_context_sequential(const ContextCheckEnv& env, const SequentialContext& G,
                                                      const TypeDeriver& derive) {
  ContextWitnesses w;
  for (std::size_t i = 0; i < G.size(); ++i) {
    auto d = derive_checked(env, initial_segment(env.T.sys, G, i), G.entries[i], derive);
    if (!d) return std::nullopt;
    w.push_back(std::move(*d));
  }
  return w;
}

std::optional<ContextWitnesses> wf_context_by_occurrence(const ContextCheckEnv& env, const RawContext& G,
                                                         const TypeDeriver& derive) {
  auto seq = is_sequential_flat_context(env.T.sys, G);
  if (!seq) return std::nullopt;
  return wf_context_sequential(env, *seq, derive);
}

std::optional<ContextWitnesses> wf_context_by_rules(const ContextCheckEnv& env, const RawContext& G,
                                                    const TypeDeriver& derive) {
  const ScopeSystem sys = env.T.sys;
  const Scope n = G.scope();
  if (n == 0) return ContextWitnesses{};
  // G = G'.A: the last entry sits at the right summand of n-1 + 1
  const Renaming w = inl_renaming(sys, n - 1, 1);
  const Position last = inr(sys, n - 1, 1, 0);
  std::vector<Expr> rest(n - 1);
  for (Position q = 0; q < n - 1; ++q) {
    auto e = strengthen_expr(sys, n - 1, n, G[w(q)]);
    if (!e) return std::nullopt;
    rest[q] = *e;
  }
  auto A = strengthen_expr(sys, n - 1, n, G[last]);
  if (!A) return std::nullopt;
  RawContext Gp(std::move(rest));
  auto ws = wf_context_by_rules(env, Gp, derive);
  if (!ws) return std::nullopt;
  auto d = derive_checked(env, Gp, *A, derive);
  if (!d) return std::nullopt;
  ws->push_back(std::move(*d));
  return ws;
}

bool check_wf_context(const ContextCheckEnv& env, const RawContext& G, const ContextWitnesses& w) {
  auto seq = is_sequential_flat_context(env.T.sys, G);
  if (!seq || seq->size() != w.size()) return false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Judgement goal = Judgement::is_ty(initial_segment(env.T.sys, *seq, i), seq->entries[i]);
    if (!check_derivation_concludes(env.T, env.hyps, w[i], goal, env.alpha)) return false;
  }
  return true;
}

// ---- premise families

std::vector<std::size_t> all_below(std::size_t i) {
  std::vector<std::size_t> v(i);
  for (std::size_t j = 0; j < i; ++j) v[j] = j;
  return v;
}

Arity premise_family_arity(const PremiseFamily& P) {
  Arity a;
  for (const auto& p : P.premises)
    if (is_object_form(p.form)) a.push_back(ArityArg{head_class(p.form), p.cxt.size(), p.name});
  return a;
}

std::vector<std::optional<std::size_t>> premise_metas(const PremiseFamily& P) {
  std::vector<std::optional<std::size_t>> out;
  std::size_t k = 0;
  for (const auto& p : P.premises) out.push_back(is_object_form(p.form) ? std::optional<std::size_t>(k++) : std::nullopt);
  return out;
}

Boundary premise_boundary(ScopeSystem sys, const PremiseBoundary& p) {
  return Boundary{flatten_sequential_context(sys, p.cxt), p.form, p.slots};
}

Family<Judgement> flatten_premise_family(ScopeSystem sys, const PremiseFamily& P) {
  Family<Judgement> out;
  auto metas = premise_metas(P);
  for (std::size_t i = 0; i < P.premises.size(); ++i) {
    const auto& p = P.premises[i];
    std::optional<Expr> head;
    if (metas[i]) head = generic_meta(*metas[i], p.cxt.size());
    out.push_back(complete_boundary(premise_boundary(sys, p), head));
  }
  return out;
}

namespace {

void collect_metas(const Expr& e, std::set<std::size_t>& out) {
  if (!e.valid()) return;
  if (e.is_meta()) out.insert(e.index());
  if (e.is_var()) return;
  for (const auto& a : e.args()) collect_metas(a, out);
}

void collect_metas(const RawContext& G, std::set<std::size_t>& out) {
  for (const auto& t : G.types) collect_metas(t, out);
}

void collect_metas(const Derivation& d, std::set<std::size_t>& out) {
  for (const auto& a : d.inst.args) collect_metas(a, out);
  collect_metas(d.ctx, out);
  for (const auto& t : d.f.table) collect_metas(t, out);
  for (const auto& t : d.g.table) collect_metas(t, out);
  collect_metas(d.judgement.ctx, out);
  for (const auto& s : d.judgement.slots) collect_metas(s, out);
  for (const auto& c : d.children) collect_metas(c, out);
}

std::set<std::size_t> allowed_metas(const PremiseFamily& P, std::size_t i) {
  auto metas = premise_metas(P);
  std::set<std::size_t> ok;
  for (std::size_t j : P.premises[i].below)
    if (metas[j]) ok.insert(*metas[j]);
  return ok;
}

void validate_slots(const Signature& sig, Scope scope, JudgementForm form, const std::vector<Expr>& slots,
                    const std::string& what) {
  auto cls = boundary_classes(form);
  if (slots.size() != cls.size())
    fail(ErrorKind::ArityMismatch, what + ": a " + std::string(form_name(form)) + " boundary has " +
                                       std::to_string(cls.size()) + " slots");
  for (std::size_t s = 0; s < slots.size(); ++s) validate_expr(sig, scope, slots[s], cls[s]);
}

// hypotheses of premise i's witnesses: the flattened premises it is above
Family<Judgement> premise_hyps(const Family<Judgement>& flat, const PremiseBoundary& p) {
  Family<Judgement> h;
  for (std::size_t j : p.below) h.push_back(flat[j]);
  return h;
}

}  // namespace

void validate_premise_family(const Signature& sig, ScopeSystem sys, const PremiseFamily& P) {
  (void)sys;
  const Signature ext = mv_extend_signature(sig, premise_family_arity(P));
  for (std::size_t i = 0; i < P.premises.size(); ++i) {
    const auto& p = P.premises[i];
    const std::string what = "premise " + std::to_string(i);
    std::set<std::size_t> seen;
    for (std::size_t j : p.below) {
      if (j >= i) fail(ErrorKind::NotSequential, what + " is declared above a later premise " + std::to_string(j));
      if (!seen.insert(j).second) fail(ErrorKind::NotSequential, what + " lists premise " + std::to_string(j) + " twice");
      for (std::size_t k : P.premises[j].below)
        if (!std::count(p.below.begin(), p.below.end(), k))
          fail(ErrorKind::NotSequential, what + ": the premise order is not transitive at " + std::to_string(j));
    }
    if (is_object_form(p.form) && p.name.empty()) fail(ErrorKind::UnknownName, what + " needs a metavariable name");
    for (std::size_t k = 0; k < p.cxt.size(); ++k) validate_expr(ext, k, p.cxt.entries[k], SyntacticClass::Ty);
    validate_slots(ext, p.cxt.size(), p.form, p.slots, what);
    std::set<std::size_t> used;
    for (const auto& e : p.cxt.entries) collect_metas(e, used);
    for (const auto& e : p.slots) collect_metas(e, used);
    const auto ok = allowed_metas(P, i);
    for (std::size_t m : used)
      if (!ok.count(m))
        fail(ErrorKind::NotSequential,
             what + " mentions metavariable " + ext.meta(m).name + " of a premise it is not above");
  }
}

std::string premise_context_key(std::size_t i, std::size_t k) {
  return "premise_" + std::to_string(i) + "/cxt_" + std::to_string(k);
}

Boundary conclusion_boundary(const RuleBoundarySpec& RB) { return Boundary{RawContext{}, RB.form, RB.conclusion}; }

void validate_rule_boundary(const Signature& sig, ScopeSystem sys, const RuleBoundarySpec& RB) {
  validate_premise_family(sig, sys, RB.premises);
  const Signature ext = mv_extend_signature(sig, premise_family_arity(RB.premises));
  validate_slots(ext, 0, RB.form, RB.conclusion, RB.name + " conclusion");
}

CheckResult check_rule_boundary(const RawTypeTheory& T, const RuleBoundarySpec& RB) {
  const ScopeSystem sys = T.sys;
  const Arity alpha = premise_family_arity(RB.premises);
  const Family<Judgement> flat = flatten_premise_family(sys, RB.premises);
  auto one = [&](const std::string& key, const Family<Judgement>& hyps, const Judgement& goal,
                 const std::set<std::size_t>* metas) -> CheckResult {
    auto it = RB.witnesses.find(key);
    if (it == RB.witnesses.end()) return {false, RB.name + ": no witness for " + key};
    CheckResult c = check_derivation_concludes(T, hyps, it->second, goal, alpha);
    if (!c) {
      c.message = RB.name + ": witness " + key + ": " + c.message;
      return c;
    }
    if (metas) {
      std::set<std::size_t> used;
      collect_metas(it->second, used);
      for (std::size_t m : used)
        if (!metas->count(m))
          return {false, RB.name + ": witness " + key + " mentions metavariable " + alpha.at(m).name +
                             " of a premise it is not above"};
    }
    return {true, {}};
  };
  for (std::size_t i = 0; i < RB.premises.premises.size(); ++i) {
    const auto& p = RB.premises.premises[i];
    const Family<Judgement> hyps = premise_hyps(flat, p);
    const auto metas = allowed_metas(RB.premises, i);
    for (std::size_t k = 0; k < p.cxt.size(); ++k) {
      Judgement goal = Judgement::is_ty(initial_segment(sys, p.cxt, k), p.cxt.entries[k]);
      if (auto c = one(premise_context_key(i, k), hyps, goal, &metas); !c) return c;
    }
    auto ps = boundary_presuppositions(premise_boundary(sys, p));
    for (std::size_t j = 0; j < ps.size(); ++j)
      if (auto c = one(premise_presup_key(i, j), hyps, ps[j], &metas); !c) return c;
  }
  auto ps = boundary_presuppositions(conclusion_boundary(RB));
  for (std::size_t j = 0; j < ps.size(); ++j)
    if (auto c = one(conclusion_presup_key(j), flat, ps[j], nullptr); !c) return c;
  return {true, {}};
}

RawRule realise_rule_boundary(const Signature& sig, ScopeSystem sys, const RuleBoundarySpec& RB,
                              std::optional<std::size_t> symbol) {
  const Arity alpha = premise_family_arity(RB.premises);
  RawRule R{RB.name, alpha, flatten_premise_family(sys, RB.premises), {}};
  if (is_object_form(RB.form)) {
    if (!symbol) fail(ErrorKind::SymbolRequired, RB.name + ": an object rule-boundary is realised with a symbol");
    const Symbol& S = sig.sym(*symbol);
    if (S.arity != alpha || S.cls != head_class(RB.form))
      fail(ErrorKind::SymbolArityMismatch, RB.name + ": symbol " + S.name + " does not match the rule-boundary");
    R.conclusion = complete_boundary(conclusion_boundary(RB), generic_application(*symbol, alpha));
  } else {
    if (symbol) fail(ErrorKind::SymbolForbidden, RB.name + ": an equality rule-boundary takes no symbol");
    R.conclusion = complete_boundary(conclusion_boundary(RB), std::nullopt);
  }
  return R;
}

namespace {

// metavariables in premise i other than its own head
std::set<std::size_t> premise_boundary_metas(const Judgement& J) {
  std::set<std::size_t> used;
  collect_metas(J.ctx, used);
  const std::size_t n = J.is_object() ? J.slots.size() - 1 : J.slots.size();
  for (std::size_t s = 0; s < n; ++s) collect_metas(J.slots[s], used);
  return used;
}

// Tarjan; components in reverse topological order
std::vector<std::vector<std::size_t>> strong_components(std::size_t n, const std::vector<std::vector<std::size_t>>& adj) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<long> idx(n, -1), low(n, 0);
  std::vector<bool> on(n, false);
  std::vector<std::size_t> stack;
  long counter = 0;
  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    idx[v] = low[v] = counter++;
    stack.push_back(v);
    on[v] = true;
    for (std::size_t w : adj[v]) {
      if (idx[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on[w]) {
        low[v] = std::min(low[v], idx[w]);
      }
    }
    if (low[v] == idx[v]) {
      std::vector<std::size_t> comp;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on[w] = false;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      out.push_back(std::move(comp));
    }
  };
  for (std::size_t v = 0; v < n; ++v)
    if (idx[v] < 0) visit(v);
  return out;
}

// Premise dependency graph of a tight rule: beta(m) -> i when metavariable m
// occurs in the boundary of premise i.
std::vector<std::vector<std::size_t>> premise_graph(const RawRule& R, const std::vector<std::size_t>& premise_of_arg) {
  std::vector<std::vector<std::size_t>> adj(R.premises.size());
  for (std::size_t i = 0; i < R.premises.size(); ++i)
    for (std::size_t m : premise_boundary_metas(R.premises[i])) adj[premise_of_arg.at(m)].push_back(i);
  return adj;
}

bool has_cycle(const std::vector<std::vector<std::size_t>>& adj) {
  for (std::size_t v = 0; v < adj.size(); ++v)
    if (std::count(adj[v].begin(), adj[v].end(), v)) return true;
  for (const auto& c : strong_components(adj.size(), adj))
    if (c.size() > 1) return true;
  return false;
}

}  // namespace

CheckResult check_sequential_rule(const RawRule& R) {
  TightnessResult t = check_tight(R);
  if (!t.tight) return {false, R.name + ": not tight: " + t.reason};
  auto adj = premise_graph(R, t.premise_of_arg);
  for (std::size_t a = 0; a < adj.size(); ++a)
    for (std::size_t b : adj[a])
      if (a >= b)
        return {false, R.name + ": premise " + std::to_string(b) + " uses the metavariable of premise " +
                           std::to_string(a)};
  return {true, {}};
}

PresupWitnesses realised_witnesses(const RuleBoundarySpec& RB) {
  PresupWitnesses out;
  const auto& ps = RB.premises.premises;
  for (const auto& [key, d] : RB.witnesses) {
    if (key.rfind("conclusion/", 0) == 0) {
      out[key] = d;
      continue;
    }
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const std::string prefix = "premise_" + std::to_string(i) + "/presup_";
      if (key.rfind(prefix, 0) != 0) continue;
      std::vector<Derivation> fill;
      for (std::size_t j : ps[i].below) fill.push_back(Derivation::hyp(j));
      out[key] = graft_derivation(d, fill);
    }
  }
  return out;
}

// ---- well-founded raw theories

std::vector<std::vector<bool>> transitive_closure(std::size_t n,
                                                  const std::vector<std::pair<std::size_t, std::size_t>>& rel) {
  std::vector<std::vector<bool>> c(n, std::vector<bool>(n, false));
  for (auto [a, b] : rel) {
    if (a >= n || b >= n) fail(ErrorKind::IndexOutOfRange, "order mentions rule " + std::to_string(std::max(a, b)));
    c[a][b] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (c[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (c[k][j]) c[i][j] = true;
  return c;
}

WellFoundedReport check_well_founded_theory(const RawTypeTheory& T, const TheoryWitnesses& W,
                                            const std::optional<std::vector<std::pair<std::size_t, std::size_t>>>& order) {
  WellFoundedReport rep;
  const std::size_t n = T.rules.size();
  SymbolRuleMap m = symbol_rules(T);
  if (!m.bijective()) fail(ErrorKind::NotAcceptable, "no symbol-rule bijection: " + m.problems.front());
  auto beta = [&](std::size_t s) { return *m.rule_of_symbol.at(s); };

  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    const RawRule& R = T.rules[i];
    std::set<std::size_t> syms;
    for (const auto& P : R.premises) collect_symbols(P, syms);
    if (R.conclusion.is_object()) {
      for (const auto& t : R.conclusion.ctx.types) collect_symbols(t, syms);
      for (std::size_t s = 0; s + 1 < R.conclusion.slots.size(); ++s) collect_symbols(R.conclusion.slots[s], syms);
    } else {
      collect_symbols(R.conclusion, syms);
    }
    for (std::size_t s : syms) edges.insert({beta(s), i});
    auto wit = W.find(R.name);
    if (wit != W.end()) {
      for (const auto& [key, d] : wit->second) {
        (void)key;
        Provenance p = provenance(d);
        for (std::size_t r : p.rules) edges.insert({r, i});
        for (std::size_t s : p.symbols) edges.insert({beta(s), i});
      }
    }
    TightnessResult t = check_tight(R);
    if (!t.tight) {
      rep.rules_well_founded = false;
      rep.diagnostics.push_back(R.name + ": not tight, premises have no well-founded order");
    } else if (has_cycle(premise_graph(R, t.premise_of_arg))) {
      rep.rules_well_founded = false;
      rep.diagnostics.push_back(R.name + ": premises refer to each other cyclically");
    }
  }
  rep.edges.assign(edges.begin(), edges.end());

  std::vector<std::vector<std::size_t>> adj(n);
  for (auto [a, b] : rep.edges) adj[a].push_back(b);
  for (const auto& comp : strong_components(n, adj)) {
    bool loop = comp.size() > 1 || edges.count({comp[0], comp[0]});
    if (!loop) continue;
    std::vector<std::string> names;
    for (std::size_t r : comp) names.push_back(T.rules[r].name);
    std::string msg = "cycle:";
    for (const auto& s : names) msg += " " + s;
    rep.diagnostics.push_back(msg);
    rep.cycles.push_back(std::move(names));
  }
  std::sort(rep.cycles.begin(), rep.cycles.end());

  if (order) {
    auto c = transitive_closure(n, *order);
    for (std::size_t i = 0; i < n; ++i)
      if (c[i][i]) {
        rep.order_ok = false;
        rep.diagnostics.push_back("order is cyclic at " + T.rules[i].name);
      }
    for (auto [a, b] : rep.edges)
      if (!c[a][b]) {
        rep.order_ok = false;
        rep.diagnostics.push_back("order does not put " + T.rules[a].name + " below " + T.rules[b].name);
      }
    rep.well_founded = rep.rules_well_founded && rep.order_ok;
  } else {
    rep.well_founded = rep.rules_well_founded && rep.cycles.empty();
  }
  return rep;
}

// ---- well-presented theories

Signature well_presented_signature(const WellPresentedTheorySpec& spec) {
  Signature sig;
  for (const auto& r : spec.rules) {
    const auto& RB = r.boundary;
    if (is_object_form(RB.form)) {
      if (r.symbol.empty()) fail(ErrorKind::SymbolRequired, RB.name + ": an object rule introduces a symbol");
      if (sig.find_symbol(r.symbol)) fail(ErrorKind::UnknownName, "symbol " + r.symbol + " introduced twice");
      sig.symbols.push_back(Symbol{r.symbol, head_class(RB.form), premise_family_arity(RB.premises)});
    } else if (!r.symbol.empty()) {
      fail(ErrorKind::SymbolForbidden, RB.name + ": an equality rule introduces no symbol");
    }
  }
  return sig;
}

namespace {

void stage_check(const std::string& what, const Provenance& p, const std::set<std::size_t>& rules,
                 const std::set<std::size_t>& syms, const RawTypeTheory& T) {
  for (std::size_t r : p.rules)
    if (!rules.count(r)) fail(ErrorKind::StageViolation, what + " cites rule " + T.rules[r].name + " of a later stage");
  for (std::size_t s : p.symbols)
    if (!syms.count(s)) fail(ErrorKind::StageViolation, what + " uses symbol " + T.sig.sym(s).name + " of a later stage");
}

}  // namespace

Elaboration elaborate_theory(const WellPresentedTheorySpec& spec) {
  const std::size_t n = spec.rules.size();
  const auto below = transitive_closure(n, spec.order);
  for (std::size_t i = 0; i < n; ++i)
    if (below[i][i]) fail(ErrorKind::CyclicOrder, "rule order is cyclic at " + spec.rules[i].boundary.name);

  Elaboration out;
  RawTypeTheory& T = out.theory;
  T.sys = spec.sys;
  T.sig = well_presented_signature(spec);

  std::vector<std::optional<std::size_t>> sym_of(n);
  for (std::size_t i = 0, k = 0; i < n; ++i)
    if (is_object_form(spec.rules[i].boundary.form)) sym_of[i] = k++;

  // syntax of rule i may only use symbols of rules below it
  auto earlier_syms = [&](std::size_t i) {
    std::set<std::size_t> s;
    for (std::size_t j = 0; j < n; ++j)
      if (below[j][i] && sym_of[j]) s.insert(*sym_of[j]);
    return s;
  };

  for (std::size_t i = 0; i < n; ++i) {
    const auto& RB = spec.rules[i].boundary;
    validate_rule_boundary(T.sig, T.sys, RB);
    std::set<std::size_t> used;
    for (const auto& p : RB.premises.premises) {
      for (const auto& e : p.cxt.entries) collect_symbols(e, used);
      for (const auto& e : p.slots) collect_symbols(e, used);
    }
    for (const auto& e : RB.conclusion) collect_symbols(e, used);
    const auto ok = earlier_syms(i);
    for (std::size_t s : used)
      if (!ok.count(s))
        fail(ErrorKind::StageViolation, RB.name + " uses symbol " + T.sig.sym(s).name + " of a later stage");
    T.rules.push_back(realise_rule_boundary(T.sig, T.sys, RB, sym_of[i]));
    out.realised.push_back(i);
  }
  out.congruence.assign(n, std::nullopt);
  for (std::size_t i = 0; i < n; ++i)
    if (sym_of[i]) {
      out.congruence[i] = T.rules.size();
      T.rules.push_back(congruence_rule(T.rules[i]));
    }

  auto earlier_rules = [&](std::size_t i) {
    std::set<std::size_t> s;
    for (std::size_t j = 0; j < n; ++j)
      if (below[j][i]) {
        s.insert(out.realised[j]);
        if (out.congruence[j]) s.insert(*out.congruence[j]);
      }
    return s;
  };

  for (std::size_t i = 0; i < n; ++i) {
    const WellPresentedRule& wr = spec.rules[i];
    const auto& RB = wr.boundary;
    if (CheckResult c = check_rule_boundary(T, RB); !c) fail(ErrorKind::WitnessFailure, c.message);
    const auto rules_ok = earlier_rules(i);
    const auto syms_ok = earlier_syms(i);
    for (const auto& [key, d] : RB.witnesses) stage_check(RB.name + " witness " + key, provenance(d), rules_ok, syms_ok, T);
    out.witnesses[RB.name] = realised_witnesses(RB);

    if (!out.congruence[i]) continue;
    const RawRule& C = T.rules[*out.congruence[i]];
    std::optional<PresupWitnesses> cw = wr.congruence_witnesses;
    if (!cw) cw = simple_congruence_witnesses(T, out.witnesses, out.realised[i]);
    if (!cw) fail(ErrorKind::WitnessFailure, C.name + ": no witnesses given and none can be generated");
    if (CheckResult c = check_presuppositive(T, C, *cw, false); !c) fail(ErrorKind::WitnessFailure, c.message);
    auto crules = rules_ok;
    crules.insert(out.realised[i]);
    auto csyms = syms_ok;
    csyms.insert(*sym_of[i]);
    for (const auto& [key, d] : *cw) stage_check(C.name + " witness " + key, provenance(d), crules, csyms, T);
    out.witnesses[C.name] = std::move(*cw);
  }

  // raw order: a rule and its congruence sit at the stage of the spec rule
  std::set<std::pair<std::size_t, std::size_t>> ord;
  for (std::size_t i = 0; i < n; ++i) {
    if (out.congruence[i]) ord.insert({out.realised[i], *out.congruence[i]});
    for (std::size_t j = 0; j < n; ++j) {
      if (!below[j][i]) continue;
      std::vector<std::size_t> lo{out.realised[j]}, hi{out.realised[i]};
      if (out.congruence[j]) lo.push_back(*out.congruence[j]);
      if (out.congruence[i]) hi.push_back(*out.congruence[i]);
      for (std::size_t a : lo)
        for (std::size_t b : hi) ord.insert({a, b});
    }
  }
  out.order.assign(ord.begin(), ord.end());

  validate_theory(T);
  out.acceptability = check_acceptable_theory(T, out.witnesses);
  out.well_founded = check_well_founded_theory(T, out.witnesses, out.order);
  return out;
}

}  // namespace gtt
