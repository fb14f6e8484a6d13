#include "gtt/metatheory.hpp"

#include <algorithm>
#include <set>

#include "gtt/builders.hpp"
#include "gtt/error.hpp"

namespace gtt {

// ---- tightness

TightnessResult check_tight(const RawRule& R) {
  TightnessResult out;
  const std::size_t n = R.arity.size();
  std::vector<std::size_t> obj = object_premises(R);
  if (obj.size() != n) {
    out.reason = std::to_string(obj.size()) + " object premises for " + std::to_string(n) + " arguments";
    return out;
  }
  std::vector<std::optional<std::size_t>> beta(n);
  for (std::size_t k : obj) {
    const Judgement& P = R.premises[k];
    const Expr& h = P.head();
    if (!h.is_meta() || h.index() >= n) {
      out.reason = "head of premise " + std::to_string(k) + " is not a metavariable of the rule";
      return out;
    }
    std::size_t i = h.index();
    if (beta[i]) {
      out.reason = "argument " + R.arity[i].name + " introduced by premises " + std::to_string(*beta[i]) + " and " +
                   std::to_string(k);
      return out;
    }
    const Scope b = R.arity[i].binder;
    if (P.ctx.scope() != b) {
      out.reason = "premise " + std::to_string(k) + " has context scope " + std::to_string(P.ctx.scope()) +
                   " but argument " + R.arity[i].name + " binds " + std::to_string(b);
      return out;
    }
    if (head_class(P.form) != R.arity[i].cls) {
      out.reason = "premise " + std::to_string(k) + " has the wrong form for argument " + R.arity[i].name;
      return out;
    }
    if (!(h == generic_meta(i, b))) {
      out.reason = "head of premise " + std::to_string(k) + " is not the generic application of " + R.arity[i].name;
      return out;
    }
    beta[i] = k;
  }
  out.tight = true;
  for (auto& b : beta) out.premise_of_arg.push_back(*b);
  return out;
}

bool is_symbol_rule_for(const Signature& sig, std::size_t k, const RawRule& R) {
  const Symbol& S = sig.sym(k);
  if (!(R.arity == S.arity)) return false;
  if (!R.conclusion.is_object() || head_class(R.conclusion.form) != S.cls) return false;
  return R.conclusion.head() == generic_application(k, S.arity);
}

// ---- presuppositivity

std::string premise_presup_key(std::size_t i, std::size_t j) {
  return "premise_" + std::to_string(i) + "/presup_" + std::to_string(j);
}

std::string conclusion_presup_key(std::size_t j) { return "conclusion/presup_" + std::to_string(j); }

Family<Judgement> weak_hypotheses(const Family<Judgement>& hyps) {
  Family<Judgement> out = hyps;
  for (const auto& P : hyps)
    for (auto& Q : presuppositions(P)) out.push_back(std::move(Q));
  return out;
}

Family<Judgement> weak_hypotheses(const RawRule& R) { return weak_hypotheses(R.premises); }

CheckResult check_presuppositive(const RawTypeTheory& T, const RawRule& R, const PresupWitnesses& w, bool weak) {
  Family<Judgement> hyps = weak ? weak_hypotheses(R) : R.premises;
  auto check_one = [&](const std::string& key, const Judgement& goal) -> CheckResult {
    auto it = w.find(key);
    if (it == w.end()) return {false, R.name + ": no witness for " + key};
    CheckResult c = check_derivation_concludes(T, hyps, it->second, goal, R.arity);
    if (!c) c.message = R.name + ": witness " + key + ": " + c.message;
    return c;
  };
  if (!weak) {
    for (std::size_t i = 0; i < R.premises.size(); ++i) {
      auto ps = presuppositions(R.premises[i]);
      for (std::size_t j = 0; j < ps.size(); ++j)
        if (auto c = check_one(premise_presup_key(i, j), ps[j]); !c) return c;
    }
  }
  auto ps = presuppositions(R.conclusion);
  for (std::size_t j = 0; j < ps.size(); ++j)
    if (auto c = check_one(conclusion_presup_key(j), ps[j]); !c) return c;
  return {true, {}};
}

namespace {

Expr M(std::size_t i) { return Expr::meta(i); }
Derivation H(std::size_t k) { return Derivation::hyp(k); }
const RawContext E0{};

// Premise presuppositions of every structural rule are themselves premises,
// so those witnesses are hypothesis leaves found by search.
PresupWitnesses structural_witnesses(const RawRule& R, std::vector<Derivation> conclusion) {
  PresupWitnesses w;
  for (std::size_t i = 0; i < R.premises.size(); ++i) {
    auto ps = presuppositions(R.premises[i]);
    for (std::size_t j = 0; j < ps.size(); ++j) {
      auto it = std::find(R.premises.begin(), R.premises.end(), ps[j]);
      w[premise_presup_key(i, j)] = H(static_cast<std::size_t>(it - R.premises.begin()));
    }
  }
  for (std::size_t j = 0; j < conclusion.size(); ++j) w[conclusion_presup_key(j)] = conclusion[j];
  return w;
}

std::vector<PresupWitnesses> make_equivalence_witnesses() {
  std::vector<PresupWitnesses> out;
  const auto& rs = equivalence_rules();
  out.push_back(structural_witnesses(rs[0], {H(0), H(0)}));
  out.push_back(structural_witnesses(rs[1], {H(1), H(0)}));
  out.push_back(structural_witnesses(rs[2], {H(0), H(2)}));
  out.push_back(structural_witnesses(rs[3], {H(0), H(1), H(1)}));
  out.push_back(structural_witnesses(rs[4], {H(0), H(2), H(1)}));
  out.push_back(structural_witnesses(rs[5], {H(0), H(1), H(3)}));
  return out;
}

std::vector<PresupWitnesses> make_conversion_witnesses() {
  std::vector<PresupWitnesses> out;
  const auto& rs = conversion_rules();
  out.push_back(structural_witnesses(rs[0], {H(1)}));
  // conv-eq: s : B and t : B by term conversion
  out.push_back(structural_witnesses(
      rs[1], {H(1), mk::conv_tm(E0, M(0), M(1), M(2), H(0), H(1), H(2), H(5)),
              mk::conv_tm(E0, M(0), M(1), M(3), H(0), H(1), H(3), H(5))}));
  return out;
}

}  // namespace

const PresupWitnesses& equivalence_witnesses(EquivRule k) {
  static const std::vector<PresupWitnesses> w = make_equivalence_witnesses();
  return w.at(static_cast<std::size_t>(k));
}

const PresupWitnesses& conversion_witnesses(ConvRule k) {
  static const std::vector<PresupWitnesses> w = make_conversion_witnesses();
  return w.at(static_cast<std::size_t>(k));
}

std::optional<PresupWitnesses> simple_congruence_witnesses(const RawTypeTheory& T, const TheoryWitnesses& W,
                                                          std::size_t r) {
  const RawRule& R = T.rules.at(r);
  if (!is_object_rule(R)) return std::nullopt;
  auto wit = W.find(R.name);
  if (wit == W.end()) return std::nullopt;
  const PresupWitnesses& wR = wit->second;
  for (const auto& P : R.premises)
    if (P.ctx.scope() != 0) return std::nullopt;
  if (R.conclusion.ctx.scope() != 0) return std::nullopt;
  const std::size_t np = R.premises.size();
  const RawRule C = congruence_rule(R);
  const SignatureMap l = congruence_left(R.arity), rt = congruence_right(R.arity);
  std::vector<Derivation> shift;
  for (std::size_t i = 0; i < np; ++i) shift.push_back(H(np + i));
  auto get = [&](const std::string& key) -> const Derivation* {
    auto it = wR.find(key);
    return it == wR.end() ? nullptr : &it->second;
  };
  PresupWitnesses w;
  for (std::size_t k = 0; k < np; ++k) {
    std::size_t m = presuppositions(R.premises[k]).size();
    for (std::size_t j = 0; j < m; ++j) {
      const Derivation* d = get(premise_presup_key(k, j));
      if (!d) return std::nullopt;
      w[premise_presup_key(k, j)] = translate_metas(l, *d);
      w[premise_presup_key(np + k, j)] = graft_derivation(translate_metas(rt, *d), shift);
    }
  }
  std::vector<std::size_t> obj = object_premises(R);
  for (std::size_t e = 0; e < obj.size(); ++e) {
    const std::size_t k = obj[e];
    if (!(boundary_of(C.premises[k]) == boundary_of(C.premises[np + k]))) return std::nullopt;
    const std::size_t idx = 2 * np + e;
    if (R.premises[k].form == JudgementForm::IsTy) {
      w[premise_presup_key(idx, 0)] = H(k);
      w[premise_presup_key(idx, 1)] = H(np + k);
    } else {
      const Derivation* d = get(premise_presup_key(k, 0));
      if (!d) return std::nullopt;
      w[premise_presup_key(idx, 0)] = translate_metas(l, *d);
      w[premise_presup_key(idx, 1)] = H(k);
      w[premise_presup_key(idx, 2)] = H(np + k);
    }
  }
  std::vector<Expr> la, ra;
  for (std::size_t i = 0; i < R.arity.size(); ++i) {
    Expr g = generic_meta(i, R.arity[i].binder);
    la.push_back(translate_expr(l, g));
    ra.push_back(translate_expr(rt, g));
  }
  std::vector<Derivation> lh, rh;
  for (std::size_t i = 0; i < np; ++i) {
    lh.push_back(H(i));
    rh.push_back(H(np + i));
  }
  Derivation dl = Derivation::rule(r, Instantiation{R.arity, 0, la}, RawContext{}, lh);
  Derivation dr = Derivation::rule(r, Instantiation{R.arity, 0, ra}, RawContext{}, rh);
  if (R.conclusion.form == JudgementForm::IsTy) {
    w[conclusion_presup_key(0)] = dl;
    w[conclusion_presup_key(1)] = dr;
  } else {
    const Expr& A = R.conclusion.type();
    if (!(translate_expr(l, A) == translate_expr(rt, A))) return std::nullopt;
    const Derivation* d = get(conclusion_presup_key(0));
    if (!d) return std::nullopt;
    w[conclusion_presup_key(0)] = translate_metas(l, *d);
    w[conclusion_presup_key(1)] = dl;
    w[conclusion_presup_key(2)] = dr;
  }
  return w;
}

// ---- theories

SymbolRuleMap symbol_rules(const RawTypeTheory& T) {
  SymbolRuleMap m;
  const std::size_t ns = T.sig.base_size();
  m.rule_of_symbol.assign(ns, std::nullopt);
  m.symbol_of_rule.assign(T.rules.size(), std::nullopt);
  for (std::size_t r = 0; r < T.rules.size(); ++r) {
    const RawRule& R = T.rules[r];
    if (!is_object_rule(R)) continue;
    for (std::size_t k = 0; k < ns; ++k) {
      if (!is_symbol_rule_for(T.sig, k, R)) continue;
      m.symbol_of_rule[r] = k;
      if (m.rule_of_symbol[k])
        m.problems.push_back("symbol " + T.sig.sym(k).name + " has two symbol rules: " +
                             T.rules[*m.rule_of_symbol[k]].name + " and " + R.name);
      else
        m.rule_of_symbol[k] = r;
    }
    if (!m.symbol_of_rule[r]) m.problems.push_back("object rule " + R.name + " is not a symbol rule");
  }
  for (std::size_t k = 0; k < ns; ++k)
    if (!m.rule_of_symbol[k]) m.problems.push_back("symbol " + T.sig.sym(k).name + " has no symbol rule");
  return m;
}

std::optional<std::size_t> find_congruence_rule(const RawTypeTheory& T, std::size_t r) {
  RawRule C = congruence_rule(T.rules.at(r));
  for (std::size_t j = 0; j < T.rules.size(); ++j)
    if (same_rule(T.rules[j], C)) return j;
  return std::nullopt;
}

bool is_substitutive(const RawTypeTheory& T) {
  return std::all_of(T.rules.begin(), T.rules.end(), [](const RawRule& R) { return R.conclusion.ctx.scope() == 0; });
}

AcceptabilityReport check_acceptable_theory(const RawTypeTheory& T, const TheoryWitnesses& W) {
  AcceptabilityReport rep;
  static const PresupWitnesses none;
  rep.tight = rep.presuppositive = rep.substitutive = rep.congruous = true;
  rep.congruence_rule.assign(T.rules.size(), std::nullopt);
  for (std::size_t r = 0; r < T.rules.size(); ++r) {
    const RawRule& R = T.rules[r];
    RuleReport rr;
    rr.name = R.name;
    rr.object = is_object_rule(R);
    TightnessResult t = check_tight(R);
    rr.tight = t.tight;
    if (!t.tight) rr.diagnostics.push_back("not tight: " + t.reason);
    auto wit = W.find(R.name);
    const PresupWitnesses& w = wit == W.end() ? none : wit->second;
    CheckResult strong = check_presuppositive(T, R, w, false);
    rr.presuppositive = strong.ok;
    if (strong.ok) {
      rr.weakly_presuppositive = true;
    } else {
      rr.diagnostics.push_back("not presuppositive: " + strong.message);
      rr.weakly_presuppositive = check_presuppositive(T, R, w, true).ok;
    }
    rr.empty_conclusion_context = R.conclusion.ctx.scope() == 0;
    if (!rr.empty_conclusion_context) rr.diagnostics.push_back("conclusion context is not empty");
    rep.tight &= rr.tight;
    rep.presuppositive &= rr.presuppositive;
    rep.substitutive &= rr.empty_conclusion_context;
    if (rr.object) {
      rep.congruence_rule[r] = find_congruence_rule(T, r);
      if (!rep.congruence_rule[r]) {
        rep.congruous = false;
        rep.diagnostics.push_back("no congruence rule for " + R.name);
      }
    }
    for (const auto& d : rr.diagnostics) rep.diagnostics.push_back(R.name + ": " + d);
    rep.rules.push_back(std::move(rr));
  }
  SymbolRuleMap m = symbol_rules(T);
  rep.symbol_rule = m.rule_of_symbol;
  if (!m.bijective()) {
    rep.tight = false;
    for (const auto& p : m.problems) rep.diagnostics.push_back(p);
  }
  return rep;
}

// ---- shared helpers

namespace {

const RawRule& rule_of(const RawTypeTheory& T, const Derivation& d) {
  switch (d.kind) {
    case Derivation::Kind::Equiv: return equivalence_rules().at(d.index);
    case Derivation::Kind::Conv: return conversion_rules().at(d.index);
    case Derivation::Kind::Rule: return T.rules.at(d.index);
    default: fail(ErrorKind::IndexOutOfRange, "node does not instantiate a raw rule");
  }
}

const PresupWitnesses& witnesses_of(const RawTypeTheory& T, const TheoryWitnesses& W, const Derivation& d) {
  switch (d.kind) {
    case Derivation::Kind::Equiv: return equivalence_witnesses(static_cast<EquivRule>(d.index));
    case Derivation::Kind::Conv: return conversion_witnesses(static_cast<ConvRule>(d.index));
    default: {
      const std::string& name = T.rules.at(d.index).name;
      auto it = W.find(name);
      if (it == W.end()) fail(ErrorKind::MissingWitness, "no presupposition witnesses for rule " + name);
      return it->second;
    }
  }
}

void hyp_indices(const Derivation& d, std::set<std::size_t>& out) {
  if (d.kind == Derivation::Kind::Hyp) out.insert(d.index);
  for (const auto& c : d.children) hyp_indices(c, out);
}

void require_substitutive(const RawTypeTheory& T) {
  for (const auto& R : T.rules)
    if (R.conclusion.ctx.scope() != 0)
      fail(ErrorKind::NotSubstitutive, "rule " + R.name + " has a non-empty conclusion context");
}

// the context a node's conclusion lives in (rule conclusions have empty context)
const RawContext& node_context(const Derivation& d) {
  switch (d.kind) {
    case Derivation::Kind::Subst:
    case Derivation::Kind::EqSubst:
    case Derivation::Kind::Var:
    case Derivation::Kind::Equiv:
    case Derivation::Kind::Conv:
    case Derivation::Kind::Rule: return d.ctx;
    case Derivation::Kind::Hyp: break;
  }
  fail(ErrorKind::NotHypothesisFree, "hypothesis leaf where a closed derivation was expected");
}

// positions of gamma outside K, in increasing order
std::vector<Position> nontrivial_positions(const TrivialSet& K) {
  std::vector<Position> out;
  for (Position i = 0; i < K.size(); ++i)
    if (!K[i]) out.push_back(i);
  return out;
}

// inl K + all of inr over gamma + m
TrivialSet extend_trivial(ScopeSystem sys, const TrivialSet& K, Scope m) {
  const Scope g = K.size();
  TrivialSet out(g + m, true);
  for (Position i = 0; i < g; ++i) out[inl(sys, g, m, i)] = K[i];
  return out;
}

}  // namespace

// ---- presuppositions theorem

namespace {

struct PresupCtx {
  const RawTypeTheory& T;
  const TheoryWitnesses& W;
  const Family<Judgement>& hyps;
  std::vector<std::size_t> offsets;  // start of hyp k's presuppositions in the weak layout
};

Family<Derivation> presup_rec(const PresupCtx& C, const Derivation& d) {
  using K = Derivation::Kind;
  const ScopeSystem sys = C.T.sys;
  switch (d.kind) {
    case K::Hyp: {
      if (d.index >= C.hyps.size()) fail(ErrorKind::IndexOutOfRange, "hypothesis out of range");
      std::size_t n = presuppositions(C.hyps[d.index]).size();
      Family<Derivation> out;
      for (std::size_t j = 0; j < n; ++j) out.push_back(Derivation::hyp(C.hyps.size() + C.offsets[d.index] + j));
      return out;
    }
    case K::Var: return {d.children.at(0)};
    case K::Subst: {
      Family<Derivation> inner = presup_rec(C, d.children.at(0));
      Family<Judgement> ps = presuppositions(d.judgement);
      Family<Derivation> out;
      for (std::size_t j = 0; j < ps.size(); ++j) {
        std::vector<Derivation> ch = d.children;
        ch[0] = inner[j];
        out.push_back(Derivation::subst(d.ctx, d.f, d.trivial, ps[j], std::move(ch)));
      }
      return out;
    }
    case K::EqSubst: {
      const Judgement& J = d.judgement;
      const RawContext& D = d.ctx;
      std::vector<Derivation> tf{Derivation()}, tg{Derivation()};
      for (std::size_t c = 1; c < d.children.size(); c += 3) {
        tf.push_back(d.children.at(c));
        tg.push_back(d.children.at(c + 1));
      }
      auto with_head = [](std::vector<Derivation> v, Derivation h) {
        v[0] = std::move(h);
        return v;
      };
      if (J.form == JudgementForm::IsTy) {
        return {Derivation::subst(D, d.f, d.trivial, J, with_head(tf, d.children[0])),
                Derivation::subst(D, d.g, d.trivial, J, with_head(tg, d.children[0]))};
      }
      Judgement JA = Judgement::is_ty(J.ctx, J.type());
      Derivation pA = presup_rec(C, d.children[0]).at(0);
      Expr fA = substitute_expr(sys, d.f, J.type()), gA = substitute_expr(sys, d.g, J.type());
      Expr gt = substitute_expr(sys, d.g, J.head());
      Derivation dfA = Derivation::subst(D, d.f, d.trivial, JA, with_head(tf, pA));
      Derivation dgA = Derivation::subst(D, d.g, d.trivial, JA, with_head(tg, pA));
      Derivation dft = Derivation::subst(D, d.f, d.trivial, J, with_head(tf, d.children[0]));
      Derivation dgt = Derivation::subst(D, d.g, d.trivial, J, with_head(tg, d.children[0]));
      std::vector<Derivation> eqch = d.children;
      eqch[0] = pA;
      Derivation eqA = Derivation::eqsubst(D, d.f, d.g, d.trivial, JA, std::move(eqch));
      Derivation gt_fA = mk::conv_tm(D, gA, fA, gt, dgA, dfA, dgt, mk::ty_sym(D, fA, gA, dfA, dgA, eqA));
      return {dfA, dft, gt_fA};
    }
    case K::Equiv:
    case K::Conv:
    case K::Rule: {
      const RawRule& R = rule_of(C.T, d);
      const PresupWitnesses& w = witnesses_of(C.T, C.W, d);
      const std::size_t np = R.premises.size();
      const std::size_t n = presuppositions(R.conclusion).size();
      std::vector<const Derivation*> wit;
      std::set<std::size_t> used;
      for (std::size_t j = 0; j < n; ++j) {
        auto it = w.find(conclusion_presup_key(j));
        if (it == w.end())
          fail(ErrorKind::MissingWitness, "rule " + R.name + ": no witness for " + conclusion_presup_key(j));
        wit.push_back(&it->second);
        hyp_indices(it->second, used);
      }
      // fillers in the weak layout; presuppositions of a premise only when used
      std::vector<Derivation> fillers(d.children.begin(), d.children.end());
      std::size_t pos = np;
      for (std::size_t k = 0; k < np; ++k) {
        std::size_t m = presuppositions(R.premises[k]).size();
        bool need = false;
        for (std::size_t j = 0; j < m; ++j) need |= used.count(pos + j) > 0;
        if (need) {
          Family<Derivation> pk = presup_rec(C, d.children.at(k));
          for (auto& x : pk) fillers.push_back(std::move(x));
        } else {
          for (std::size_t j = 0; j < m; ++j) fillers.push_back(Derivation::hyp(0));  // never grafted
        }
        pos += m;
      }
      Family<Derivation> out;
      for (const Derivation* x : wit)
        out.push_back(graft_derivation(instantiate_derivation(C.T.sys, d.inst, d.ctx, *x), fillers));
      return out;
    }
  }
  return {};
}

}  // namespace

Family<Derivation> derive_presuppositions(const RawTypeTheory& T, const TheoryWitnesses& W,
                                          const Family<Judgement>& hyps, const Derivation& d) {
  PresupCtx C{T, W, hyps, {}};
  std::size_t off = 0;
  for (const auto& h : hyps) {
    C.offsets.push_back(off);
    off += presuppositions(h).size();
  }
  return presup_rec(C, d);
}

// ---- renaming

namespace {

Derivation rename_rec(const RawTypeTheory& T, const Renaming& r, const RawContext& target, const Derivation& d) {
  using K = Derivation::Kind;
  switch (d.kind) {
    case K::Hyp: fail(ErrorKind::NotHypothesisFree, "cannot rename a hypothesis");
    case K::Subst:
    case K::EqSubst: fail(ErrorKind::NotSubstitutionFree, "renaming expects a substitution-free derivation");
    case K::Var: return Derivation::var(target, r(d.index), rename_rec(T, r, target, d.children.at(0)));
    case K::Equiv:
    case K::Conv:
    case K::Rule: {
      const RawRule& R = rule_of(T, d);
      Derivation out = d;
      out.ctx = target;
      out.inst = rename_inst(T.sys, r, d.inst);
      for (std::size_t k = 0; k < d.children.size(); ++k) {
        const RawContext& theta = R.premises.at(k).ctx;
        Renaming rk = extend_renaming(T.sys, r, theta.scope());
        RawContext tk = instantiate_context(T.sys, out.inst, target, theta);
        out.children[k] = rename_rec(T, rk, tk, d.children[k]);
      }
      return out;
    }
  }
  return d;
}

}  // namespace

Derivation rename_derivation(const RawTypeTheory& T, const Renaming& r, const RawContext& target, const Derivation& d) {
  require_substitutive(T);
  const RawContext& G = node_context(d);
  if (r.src != G.scope() || r.dst != target.scope())
    fail(ErrorKind::ScopeMismatch, "renaming does not fit the derivation's context and the target");
  for (Position i = 0; i < G.scope(); ++i)
    if (!(target[r(i)] == rename_expr(T.sys, r, G[i])))
      fail(ErrorKind::NotTypeRespecting, "renaming is not type-respecting at position " + std::to_string(i));
  return rename_rec(T, r, target, d);
}

// ---- substitution

namespace {

using Typings = std::vector<std::optional<Derivation>>;

Typings weaken_typings(const RawTypeTheory& T, const Typings& typ, const RawContext& delta, const RawContext& target,
                       Scope m) {
  const Scope g = typ.size();
  Typings out(g + m);
  Renaming w = inl_renaming(T.sys, delta.scope(), m);
  for (Position i = 0; i < g; ++i)
    if (typ[i]) out[inl(T.sys, g, m, i)] = rename_rec(T, w, target, *typ[i]);
  return out;
}

Derivation subst_rec(const RawTypeTheory& T, const RawContext& delta, const RawSubstitution& f, const TrivialSet& K,
                     const Typings& typ, const Derivation& d) {
  using Kd = Derivation::Kind;
  const ScopeSystem sys = T.sys;
  switch (d.kind) {
    case Kd::Hyp: fail(ErrorKind::NotHypothesisFree, "cannot substitute into a hypothesis");
    case Kd::Subst:
    case Kd::EqSubst: fail(ErrorKind::NotSubstitutionFree, "substitution expects a substitution-free derivation");
    case Kd::Var: {
      const Position i = d.index;
      if (K.at(i)) {
        const Expr& fi = f.table.at(i);
        if (!fi.is_var()) fail(ErrorKind::TrivialityViolated, "position " + std::to_string(i) + " is not sent to a variable");
        return Derivation::var(delta, fi.index(), subst_rec(T, delta, f, K, typ, d.children.at(0)));
      }
      if (!typ.at(i)) fail(ErrorKind::MissingWitness, "no typing derivation for position " + std::to_string(i));
      return *typ[i];
    }
    case Kd::Equiv:
    case Kd::Conv:
    case Kd::Rule: {
      const RawRule& R = rule_of(T, d);
      Derivation out = d;
      out.ctx = delta;
      out.inst = subst_act_inst(sys, f, d.inst);
      for (std::size_t k = 0; k < d.children.size(); ++k) {
        const RawContext& theta = R.premises.at(k).ctx;
        const Scope m = theta.scope();
        if (m == 0) {
          out.children[k] = subst_rec(T, delta, f, K, typ, d.children[k]);
          continue;
        }
        RawContext dk = instantiate_context(sys, out.inst, delta, theta);
        out.children[k] = subst_rec(T, dk, extend_substitution(sys, f, m), extend_trivial(sys, K, m),
                                    weaken_typings(T, typ, delta, dk, m), d.children[k]);
      }
      return out;
    }
  }
  return d;
}

}  // namespace

Derivation substitute_derivation(const RawTypeTheory& T, const RawContext& delta, const RawSubstitution& f,
                                 const TrivialSet& K, const std::vector<std::optional<Derivation>>& typings,
                                 const Derivation& d) {
  require_substitutive(T);
  const RawContext& G = node_context(d);
  if (f.src != delta.scope() || f.dst != G.scope() || K.size() != G.scope() || typings.size() != G.scope())
    fail(ErrorKind::ScopeMismatch, "substitution data does not fit the derivation");
  for (Position i = 0; i < G.scope(); ++i) {
    if (!K[i]) continue;
    const Expr& fi = f.table[i];
    if (!fi.is_var() || fi.index() >= delta.scope() || !(delta[fi.index()] == substitute_expr(T.sys, f, G[i])))
      fail(ErrorKind::TrivialityViolated, "substitution does not act trivially at position " + std::to_string(i));
  }
  return subst_rec(T, delta, f, K, typings, d);
}

// ---- equality substitution

namespace {

using Triples = std::vector<std::optional<EqualityTriple>>;

struct Want {
  bool f = false, g = false, eq = false;
};

struct EqOut {
  std::optional<Derivation> f, g, eq;
};

Triples weaken_triples(const RawTypeTheory& T, const Triples& tr, const RawContext& delta, const RawContext& target,
                       Scope m) {
  const Scope g = tr.size();
  Triples out(g + m);
  Renaming w = inl_renaming(T.sys, delta.scope(), m);
  for (Position i = 0; i < g; ++i)
    if (tr[i])
      out[inl(T.sys, g, m, i)] = EqualityTriple{rename_rec(T, w, target, tr[i]->f), rename_rec(T, w, target, tr[i]->g),
                                                rename_rec(T, w, target, tr[i]->eq)};
  return out;
}

EqOut eqsubst_rec(const RawTypeTheory& T, const RawContext& delta, const RawSubstitution& f, const RawSubstitution& g,
                  const TrivialSet& K, const Triples& tr, const Derivation& d, Want want) {
  using Kd = Derivation::Kind;
  const ScopeSystem sys = T.sys;
  EqOut out;
  switch (d.kind) {
    case Kd::Hyp: fail(ErrorKind::NotHypothesisFree, "cannot substitute into a hypothesis");
    case Kd::Subst:
    case Kd::EqSubst: fail(ErrorKind::NotSubstitutionFree, "equality substitution expects a substitution-free derivation");
    case Kd::Var: {
      const Position i = d.index;
      if (!K.at(i)) {
        if (!tr.at(i)) fail(ErrorKind::MissingWitness, "no derivations for position " + std::to_string(i));
        out.f = tr[i]->f;
        out.g = tr[i]->g;
        out.eq = tr[i]->eq;
        return out;
      }
      const Expr& fi = f.table.at(i);
      if (!fi.is_var() || !(g.table.at(i) == fi))
        fail(ErrorKind::TrivialityViolated, "position " + std::to_string(i) + " is not sent to one variable by both");
      const Position j = fi.index();
      const Expr& Gi = d.ctx[i];
      Expr fA = substitute_expr(sys, f, Gi), gA = substitute_expr(sys, g, Gi);
      Expr x = Expr::var(j);
      const bool f_side = delta[j] == fA;
      if (!f_side && !(delta[j] == gA))
        fail(ErrorKind::TrivialityViolated, "target type at position " + std::to_string(i) + " matches neither side");
      EqOut c = eqsubst_rec(T, delta, f, g, K, tr, d.children.at(0), Want{true, true, true});
      if (f_side) {
        Derivation vf = Derivation::var(delta, j, *c.f);
        out.g = mk::conv_tm(delta, fA, gA, x, *c.f, *c.g, vf, *c.eq);
        out.eq = mk::tm_refl(delta, fA, x, *c.f, vf);
        out.f = std::move(vf);
      } else {
        Derivation vg = Derivation::var(delta, j, *c.g);
        Derivation vf = mk::conv_tm(delta, gA, fA, x, *c.g, *c.f, vg, mk::ty_sym(delta, fA, gA, *c.f, *c.g, *c.eq));
        out.eq = mk::tm_refl(delta, fA, x, *c.f, vf);
        out.f = std::move(vf);
        out.g = std::move(vg);
      }
      return out;
    }
    case Kd::Equiv:
    case Kd::Conv:
    case Kd::Rule: break;
  }

  const RawRule& R = rule_of(T, d);
  const bool object = is_object_rule(R);
  const bool conv_tm = d.kind == Kd::Conv && d.index == static_cast<std::size_t>(ConvRule::Tm);
  want.eq = want.eq && object;
  Instantiation If = subst_act_inst(sys, f, d.inst), Ig = subst_act_inst(sys, g, d.inst);

  const std::size_t np = d.children.size();
  std::vector<EqOut> fs(np), gs(np);
  for (std::size_t k = 0; k < np; ++k) {
    const Judgement& P = R.premises.at(k);
    const Scope m = P.ctx.scope();
    Want wf, wg;
    wf.f = want.f || want.eq;
    wf.eq = want.eq && P.is_object() && (!conv_tm || k == 0 || k == 2);
    wg.g = want.g || want.eq;
    if (conv_tm && want.eq && k == 0) wf.g = true;
    if (conv_tm && want.eq && k == 2) wf.g = true;
    if (m == 0) {
      Want w{wf.f || wg.f, wf.g || wg.g, wf.eq || wg.eq};
      if (!w.f && !w.g && !w.eq) continue;
      fs[k] = eqsubst_rec(T, delta, f, g, K, tr, d.children[k], w);
      gs[k] = fs[k];
      continue;
    }
    RawSubstitution fk = extend_substitution(sys, f, m), gk = extend_substitution(sys, g, m);
    TrivialSet Kk = extend_trivial(sys, K, m);
    if (wf.f || wf.g || wf.eq) {
      RawContext dk = instantiate_context(sys, If, delta, P.ctx);
      fs[k] = eqsubst_rec(T, dk, fk, gk, Kk, weaken_triples(T, tr, delta, dk, m), d.children[k], wf);
    }
    if (wg.g) {
      RawContext dk = instantiate_context(sys, Ig, delta, P.ctx);
      gs[k] = eqsubst_rec(T, dk, fk, gk, Kk, weaken_triples(T, tr, delta, dk, m), d.children[k], wg);
    }
  }

  auto rebuild = [&](const Instantiation& I, bool left) {
    Derivation n = d;
    n.ctx = delta;
    n.inst = I;
    for (std::size_t k = 0; k < np; ++k) n.children[k] = left ? *fs[k].f : *gs[k].g;
    return n;
  };
  if (want.f || want.eq) out.f = rebuild(If, true);
  if (want.g || want.eq) out.g = rebuild(Ig, false);
  if (!want.eq) return out;

  if (conv_tm) {
    // s : A, A == B  |-  s : B has no congruence rule; go through conv-eq
    const Expr fA = If.args[0], fB = If.args[1], fs_ = If.args[2];
    const Expr gA = Ig.args[0], gs_ = Ig.args[2];
    const EqOut& cA = fs[0];
    const EqOut& cs = fs[2];
    Derivation gs_fA = mk::conv_tm(delta, gA, fA, gs_, *cA.g, *cA.f, *cs.g, mk::ty_sym(delta, fA, gA, *cA.f, *cA.g, *cA.eq));
    out.eq = mk::conv_eq(delta, fA, fB, fs_, gs_, *cA.f, *fs[1].f, *cs.f, gs_fA, *cs.eq, *fs[3].f);
    return out;
  }
  if (d.kind != Kd::Rule) fail(ErrorKind::NotObjectRule, "unexpected structural object rule");
  auto C = find_congruence_rule(T, d.index);
  if (!C) fail(ErrorKind::NotCongruous, "no congruence rule for " + R.name);
  std::vector<Derivation> ch;
  for (std::size_t k = 0; k < np; ++k) ch.push_back(*fs[k].f);
  for (std::size_t k = 0; k < np; ++k) ch.push_back(*gs[k].g);
  for (std::size_t k : object_premises(R)) ch.push_back(*fs[k].eq);
  out.eq = Derivation::rule(*C, concat_inst(If, Ig), delta, std::move(ch));
  return out;
}

}  // namespace

EqualSubstitution substitute_equal_derivation(const RawTypeTheory& T, const RawContext& delta,
                                              const RawSubstitution& f, const RawSubstitution& g, const TrivialSet& K,
                                              const std::vector<std::optional<EqualityTriple>>& triples,
                                              const Derivation& d) {
  require_substitutive(T);
  const RawContext& G = node_context(d);
  if (f.src != delta.scope() || g.src != delta.scope() || f.dst != G.scope() || g.dst != G.scope() ||
      K.size() != G.scope() || triples.size() != G.scope())
    fail(ErrorKind::ScopeMismatch, "equality substitution data does not fit the derivation");
  Judgement J = conclusion_of(T, {}, d);
  EqOut o = eqsubst_rec(T, delta, f, g, K, triples, d, Want{true, true, J.is_object()});
  return {*o.f, *o.g, o.eq};
}

// ---- elimination

namespace {

Derivation elim_rec(const RawTypeTheory& T, const Derivation& d) {
  using Kd = Derivation::Kind;
  Derivation e = d;
  for (auto& c : e.children) c = elim_rec(T, c);
  if (d.kind == Kd::Subst) {
    const Scope g = d.judgement.ctx.scope();
    Typings typ(g);
    std::size_t c = 1;
    for (Position i : nontrivial_positions(d.trivial)) typ[i] = e.children.at(c++);
    if (c != e.children.size()) fail(ErrorKind::ChildCountMismatch, "substitution node has the wrong number of premises");
    return subst_rec(T, d.ctx, d.f, d.trivial, typ, e.children[0]);
  }
  if (d.kind == Kd::EqSubst) {
    const Scope g = d.judgement.ctx.scope();
    Triples tr(g);
    std::size_t c = 1;
    for (Position i : nontrivial_positions(d.trivial)) {
      tr[i] = EqualityTriple{e.children.at(c), e.children.at(c + 1), e.children.at(c + 2)};
      c += 3;
    }
    if (c != e.children.size()) fail(ErrorKind::ChildCountMismatch, "equality substitution node has the wrong number of premises");
    EqOut o = eqsubst_rec(T, d.ctx, d.f, d.g, d.trivial, tr, e.children[0], Want{false, false, true});
    return *o.eq;
  }
  return e;
}

}  // namespace

Derivation eliminate_substitution(const RawTypeTheory& T, const Derivation& d) {
  require_substitutive(T);
  return elim_rec(T, d);
}

// ---- uniqueness of typing

namespace {

bool is_conv_tm(const Derivation& d) {
  return d.kind == Derivation::Kind::Conv && d.index == static_cast<std::size_t>(ConvRule::Tm);
}

Derivation unique_rec(const RawTypeTheory& T, const Derivation& dA, const Derivation& dB, const Derivation& d1,
                      const Derivation& d2) {
  Judgement J1 = conclusion_of(T, {}, d1), J2 = conclusion_of(T, {}, d2);
  const RawContext& G = J1.ctx;
  const Expr &A = J1.type(), &B = J2.type();
  if (is_conv_tm(d1)) {
    // d1 = conv(A', A, t)[A', A, t : A', A' == A]
    const Expr& Ap = d1.inst.args[0];
    const Derivation& dAp = d1.children[0];
    Derivation r = unique_rec(T, dAp, dB, d1.children[2], d2);
    return mk::ty_trans(G, A, Ap, B, dA, dAp, dB, mk::ty_sym(G, Ap, A, dAp, dA, d1.children[3]), r);
  }
  if (is_conv_tm(d2)) {
    const Expr& Bp = d2.inst.args[0];
    const Derivation& dBp = d2.children[0];
    Derivation r = unique_rec(T, dA, dBp, d1, d2.children[2]);
    return mk::ty_trans(G, A, Bp, B, dA, dBp, dB, r, d2.children[3]);
  }
  if (d1.kind == Derivation::Kind::Rule && d2.kind == Derivation::Kind::Rule) {
    if (d1.index != d2.index)
      fail(ErrorKind::NotTight, "one term typed by two different rules: " + T.rules[d1.index].name + " and " +
                                    T.rules[d2.index].name);
    if (!(d1.inst == d2.inst)) fail(ErrorKind::NotTight, "one symbol rule instantiated two ways for the same term");
  } else if (d1.kind != d2.kind) {
    fail(ErrorKind::NotTight, "term typed by a variable and by a rule");
  }
  if (!(A == B)) fail(ErrorKind::NotTight, "base typings disagree");
  return mk::ty_refl(G, A, dA);
}

}  // namespace

Derivation unique_typing(const RawTypeTheory& T, const Derivation& dA, const Derivation& dB, const Derivation& d1,
                         const Derivation& d2) {
  require_substitutive(T);
  SymbolRuleMap m = symbol_rules(T);
  if (!m.bijective()) fail(ErrorKind::NotTight, m.problems.front());
  for (const auto& R : T.rules)
    if (is_object_rule(R) && !check_tight(R).tight) fail(ErrorKind::NotTight, "rule " + R.name + " is not tight");
  Judgement J1 = conclusion_of(T, {}, d1), J2 = conclusion_of(T, {}, d2);
  if (J1.form != JudgementForm::IsTm || J2.form != JudgementForm::IsTm)
    fail(ErrorKind::NotObjectJudgement, "uniqueness of typing needs two term judgements");
  if (!(J1.ctx == J2.ctx) || !(J1.head() == J2.head()))
    fail(ErrorKind::PremiseMismatch, "the two typings are for different terms or contexts");
  Derivation e1 = is_substitution_free(d1) ? d1 : eliminate_substitution(T, d1);
  Derivation e2 = is_substitution_free(d2) ? d2 : eliminate_substitution(T, d2);
  return unique_rec(T, dA, dB, e1, e2);
}

Derivation unique_typing(const RawTypeTheory& T, const TheoryWitnesses& W, const Derivation& d1, const Derivation& d2) {
  if (conclusion_of(T, {}, d1).form != JudgementForm::IsTm || conclusion_of(T, {}, d2).form != JudgementForm::IsTm)
    fail(ErrorKind::NotObjectJudgement, "uniqueness of typing needs two term judgements");
  Derivation dA = derive_presuppositions(T, W, {}, d1).at(0);
  Derivation dB = derive_presuppositions(T, W, {}, d2).at(0);
  return unique_typing(T, dA, dB, d1, d2);
}

// ---- natural types and inversion

Expr natural_type(const RawTypeTheory& T, const RawContext& gamma, const Expr& t) {
  switch (t.kind()) {
    case Expr::Kind::Var:
      if (t.index() >= gamma.scope()) fail(ErrorKind::IndexOutOfRange, "variable outside the context");
      return gamma[t.index()];
    case Expr::Kind::Meta: fail(ErrorKind::MetaNode, "natural type of a metavariable application is undefined");
    case Expr::Kind::Sym: break;
  }
  SymbolRuleMap m = symbol_rules(T);
  if (t.index() >= m.rule_of_symbol.size()) fail(ErrorKind::IndexOutOfRange, "unknown symbol");
  auto r = m.rule_of_symbol[t.index()];
  if (!r) fail(ErrorKind::NotTight, "symbol " + T.sig.sym(t.index()).name + " has no symbol rule");
  const RawRule& R = T.rules[*r];
  if (R.conclusion.form != JudgementForm::IsTm)
    fail(ErrorKind::ClassMismatch, "natural types are for term expressions; " + T.sig.sym(t.index()).name + " is a type symbol");
  if (R.conclusion.ctx.scope() != 0) fail(ErrorKind::NotSubstitutive, "symbol rule with non-empty conclusion context");
  Instantiation I{R.arity, gamma.scope(), t.args()};
  return instantiate_expr(T.sys, I, 0, R.conclusion.type());
}

namespace {

struct Canon {
  Derivation core, dN, eq, dA;
  Expr N;
};

Canon canon(const RawTypeTheory& T, const TheoryWitnesses& W, const SymbolRuleMap& m, const Derivation& d) {
  Judgement J = conclusion_of(T, {}, d);
  const RawContext& G = J.ctx;
  switch (d.kind) {
    case Derivation::Kind::Var: {
      const Derivation& D = d.children.at(0);
      return {d, D, mk::ty_refl(G, J.type(), D), D, J.type()};
    }
    case Derivation::Kind::Rule: {
      if (!m.symbol_of_rule.at(d.index)) fail(ErrorKind::NotTight, "term derived by a rule that is not a symbol rule");
      Derivation dN = derive_presuppositions(T, W, {}, d).at(0);
      return {d, dN, mk::ty_refl(G, J.type(), dN), dN, J.type()};
    }
    case Derivation::Kind::Conv:
      if (is_conv_tm(d)) {
        Canon in = canon(T, W, m, d.children.at(2));
        const Expr& Ap = d.inst.args[0];
        const Expr& A = d.inst.args[1];
        Derivation eq = mk::ty_trans(G, in.N, Ap, A, in.dN, d.children[0], d.children[1], in.eq, d.children[3]);
        return {in.core, in.dN, std::move(eq), d.children[1], in.N};
      }
      break;
    default: break;
  }
  fail(ErrorKind::NotAcceptable, std::string("cannot invert a derivation ending in a ") + derivation_kind_name(d.kind) + " node");
}

}  // namespace

Derivation invert(const RawTypeTheory& T, const TheoryWitnesses& W, const Derivation& d) {
  require_substitutive(T);
  SymbolRuleMap m = symbol_rules(T);
  if (!m.bijective()) fail(ErrorKind::NotAcceptable, m.problems.front());
  Derivation e = is_substitution_free(d) ? d : eliminate_substitution(T, d);
  Judgement J = conclusion_of(T, {}, e);
  if (J.form == JudgementForm::IsTy) {
    if (e.kind != Derivation::Kind::Rule || !m.symbol_of_rule.at(e.index))
      fail(ErrorKind::NotAcceptable, "type judgement not derived by a symbol rule");
    return e;
  }
  if (J.form != JudgementForm::IsTm) fail(ErrorKind::NotObjectJudgement, "inversion applies to object judgements");
  Canon c = canon(T, W, m, e);
  return mk::conv_tm(J.ctx, c.N, J.type(), J.head(), c.dN, c.dA, c.core, c.eq);
}

bool is_inversion_canonical(const RawTypeTheory& T, const Derivation& d) {
  SymbolRuleMap m = symbol_rules(T);
  Judgement J = conclusion_of(T, {}, d);
  if (J.form == JudgementForm::IsTy)
    return d.kind == Derivation::Kind::Rule && d.index < m.symbol_of_rule.size() && m.symbol_of_rule[d.index].has_value();
  if (J.form != JudgementForm::IsTm || !is_conv_tm(d)) return false;
  const Derivation& core = d.children.at(2);
  if (core.kind == Derivation::Kind::Rule) {
    if (!m.symbol_of_rule.at(core.index)) return false;
  } else if (core.kind != Derivation::Kind::Var) {
    return false;
  }
  Judgement C = conclusion_of(T, {}, core);
  try {
    return C.type() == natural_type(T, C.ctx, C.head());
  } catch (const KernelError&) {
    return false;
  }
}

}  // namespace gtt
