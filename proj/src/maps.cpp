#include "gtt/maps.hpp"

#include <algorithm>
#include <set>

#include "gtt/builders.hpp"
#include "gtt/error.hpp"

namespace gtt {

// ---- syntax maps

void validate_syntax_map(const RawSyntaxMap& f) {
  if (f.src.meta_count || f.dst.meta_count) fail(ErrorKind::SignatureMismatch, "syntax maps act on plain signatures");
  if (f.images.size() != f.src.symbols.size())
    fail(ErrorKind::ArityMismatch, "syntax map has " + std::to_string(f.images.size()) + " images for " +
                                       std::to_string(f.src.symbols.size()) + " symbols");
  for (std::size_t k = 0; k < f.images.size(); ++k) {
    const Symbol& S = f.src.symbols[k];
    validate_expr(mv_extend_signature(f.dst, S.arity), 0, f.images[k], S.cls);
  }
}

Expr apply_syntax_map(ScopeSystem sys, const RawSyntaxMap& f, Scope scope, const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Var:
      return e;
    case Expr::Kind::Meta: {
      std::vector<Expr> a;
      for (const auto& x : e.args()) a.push_back(apply_syntax_map(sys, f, scope, x));
      return Expr::meta(e.index(), std::move(a));
    }
    case Expr::Kind::Sym:
      break;
  }
  const std::size_t k = e.index();
  if (k >= f.images.size()) fail(ErrorKind::IndexOutOfRange, "symbol " + std::to_string(k) + " has no image");
  Instantiation I{f.src.sym(k).arity, scope, {}};
  for (std::size_t j = 0; j < e.args().size(); ++j)
    I.args.push_back(apply_syntax_map(sys, f, scope + e.binder(j), e.args()[j]));
  return instantiate_expr(sys, I, 0, f.images[k]);
}

RawContext map_context(ScopeSystem sys, const RawSyntaxMap& f, const RawContext& G) {
  RawContext out;
  for (const auto& A : G.types) out.types.push_back(apply_syntax_map(sys, f, G.scope(), A));
  return out;
}

Judgement map_judgement(ScopeSystem sys, const RawSyntaxMap& f, const Judgement& J) {
  Judgement out{map_context(sys, f, J.ctx), J.form, {}};
  for (const auto& s : J.slots) out.slots.push_back(apply_syntax_map(sys, f, J.ctx.scope(), s));
  return out;
}

Boundary map_boundary(ScopeSystem sys, const RawSyntaxMap& f, const Boundary& B) {
  Boundary out{map_context(sys, f, B.ctx), B.form, {}};
  for (const auto& s : B.slots) out.slots.push_back(apply_syntax_map(sys, f, B.ctx.scope(), s));
  return out;
}

Instantiation map_instantiation(ScopeSystem sys, const RawSyntaxMap& f, const Instantiation& I) {
  Instantiation out{I.arity, I.scope, {}};
  for (std::size_t j = 0; j < I.args.size(); ++j)
    out.args.push_back(apply_syntax_map(sys, f, I.scope + I.arity.at(j).binder, I.args[j]));
  return out;
}

RawSubstitution map_substitution(ScopeSystem sys, const RawSyntaxMap& f, const RawSubstitution& s) {
  RawSubstitution out{s.src, s.dst, {}};
  for (const auto& e : s.table) out.table.push_back(apply_syntax_map(sys, f, s.src, e));
  return out;
}

RawRule map_rule(ScopeSystem sys, const RawSyntaxMap& f, const RawRule& R) {
  RawRule out{R.name, R.arity, {}, map_judgement(sys, f, R.conclusion)};
  for (const auto& P : R.premises) out.premises.push_back(map_judgement(sys, f, P));
  return out;
}

RawSyntaxMap identity_syntax_map(const Signature& sig) {
  RawSyntaxMap f{sig, sig, {}};
  for (std::size_t k = 0; k < sig.base_size(); ++k) f.images.push_back(generic_application(k, sig.sym(k).arity));
  return f;
}

RawSyntaxMap compose_syntax_maps(ScopeSystem sys, const RawSyntaxMap& g, const RawSyntaxMap& f) {
  RawSyntaxMap h{f.src, g.dst, {}};
  for (const auto& e : f.images) h.images.push_back(apply_syntax_map(sys, g, 0, e));
  return h;
}

bool same_syntax_map(const RawSyntaxMap& a, const RawSyntaxMap& b) { return a.images == b.images; }

// ---- theory maps

namespace {

std::vector<Derivation> hyps_upto(std::size_t n, std::size_t from = 0) {
  std::vector<Derivation> h;
  for (std::size_t j = from; j < from + n; ++j) h.push_back(Derivation::hyp(j));
  return h;
}

Family<Judgement> map_family(ScopeSystem sys, const RawSyntaxMap& f, const Family<Judgement>& F) {
  Family<Judgement> out;
  for (const auto& J : F) out.push_back(map_judgement(sys, f, J));
  return out;
}

}  // namespace

CheckResult check_theory_map(const RawTypeTheory& src, const RawTypeTheory& dst, const RawTheoryMap& F,
                             bool allow_partial) {
  try {
    validate_syntax_map(F.map);
  } catch (const KernelError& e) {
    return {false, e.what()};
  }
  if (F.map.src.symbols.size() != src.sig.symbols.size() || F.map.dst.symbols.size() != dst.sig.symbols.size())
    return {false, "syntax map signatures do not match the theories"};
  if (F.rule_images.size() != src.rules.size())
    return {false, "theory map has " + std::to_string(F.rule_images.size()) + " rule images for " +
                       std::to_string(src.rules.size()) + " rules"};
  for (std::size_t r = 0; r < src.rules.size(); ++r) {
    if (!F.rule_images[r]) {
      if (allow_partial) continue;
      return {false, "rule " + src.rules[r].name + " has no image"};
    }
    CheckResult c;
    try {
      c = check_derived_rule(dst, map_rule(src.sys, F.map, src.rules[r]), *F.rule_images[r]);
    } catch (const KernelError& e) {
      c = {false, e.what()};
    }
    if (!c) return {false, "image of " + src.rules[r].name + ": " + c.message};
  }
  return {true, {}};
}

RawTheoryMap identity_theory_map(const RawTypeTheory& T) {
  RawTheoryMap F{identity_syntax_map(T.sig), {}};
  for (std::size_t r = 0; r < T.rules.size(); ++r) {
    const RawRule& R = T.rules[r];
    F.rule_images.push_back(
        Derivation::rule(r, generic_instantiation(T.sys, R.arity, 0), RawContext{}, hyps_upto(R.premises.size())));
  }
  return F;
}

RawTheoryMap compose_theory_maps(ScopeSystem sys, const RawTheoryMap& G, const RawTheoryMap& F) {
  RawTheoryMap H{compose_syntax_maps(sys, G.map, F.map), {}};
  for (const auto& img : F.rule_images) {
    std::optional<Derivation> d;
    if (img) {
      try {
        d = apply_theory_map_derivation(sys, G, *img);
      } catch (const KernelError& e) {
        if (e.kind() != ErrorKind::MissingRuleImage) throw;
      }
    }
    H.rule_images.push_back(std::move(d));
  }
  return H;
}

Derivation apply_theory_map_derivation(ScopeSystem sys, const RawTheoryMap& F, const Derivation& d) {
  const RawSyntaxMap& f = F.map;
  std::vector<Derivation> ch;
  for (std::size_t c = 0; c < d.children.size(); ++c) {
    try {
      ch.push_back(apply_theory_map_derivation(sys, F, d.children[c]));
    } catch (const KernelError& e) {
      throw e.under(c);
    }
  }
  using K = Derivation::Kind;
  switch (d.kind) {
    case K::Hyp:
      return d;
    case K::Var:
      return Derivation::var(map_context(sys, f, d.ctx), d.index, std::move(ch.at(0)));
    case K::Equiv:
      return Derivation::equiv(static_cast<EquivRule>(d.index), map_instantiation(sys, f, d.inst),
                               map_context(sys, f, d.ctx), std::move(ch));
    case K::Conv:
      return Derivation::conv(static_cast<ConvRule>(d.index), map_instantiation(sys, f, d.inst),
                              map_context(sys, f, d.ctx), std::move(ch));
    case K::Subst:
      return Derivation::subst(map_context(sys, f, d.ctx), map_substitution(sys, f, d.f), d.trivial,
                               map_judgement(sys, f, d.judgement), std::move(ch));
    case K::EqSubst:
      return Derivation::eqsubst(map_context(sys, f, d.ctx), map_substitution(sys, f, d.f),
                                 map_substitution(sys, f, d.g), d.trivial, map_judgement(sys, f, d.judgement),
                                 std::move(ch));
    case K::Rule:
      break;
  }
  if (d.index >= F.rule_images.size() || !F.rule_images[d.index])
    fail(ErrorKind::MissingRuleImage, "rule " + std::to_string(d.index) + " has no image");
  const Derivation body = instantiate_derivation(sys, map_instantiation(sys, f, d.inst), map_context(sys, f, d.ctx),
                                                 *F.rule_images[d.index]);
  return graft_derivation(body, ch);
}

// ---- realisers

CheckResult check_realiser(const RawTypeTheory& T, const RuleBoundarySpec& RB, const Expr& e,
                           const Derivation& witness) {
  if (!is_object_form(RB.form)) fail(ErrorKind::NotObjectJudgement, RB.name + ": only object boundaries have realisers");
  const Arity alpha = premise_family_arity(RB.premises);
  validate_expr(mv_extend_signature(T.sig, alpha), 0, e, head_class(RB.form));
  return check_derivation_concludes(T, flatten_premise_family(T.sys, RB.premises), witness,
                                    complete_boundary(conclusion_boundary(RB), e), alpha);
}

Expr promote(ScopeSystem sys, Scope gamma, const Expr& e, std::size_t offset) {
  RawSubstitution f{0, gamma, {}};
  for (Position p = 0; p < gamma; ++p) f.table.push_back(Expr::meta(offset + p));
  return substitute_expr(sys, f, e);
}

Instantiation demote(ScopeSystem sys, Scope gamma) {
  (void)sys;
  Instantiation I{simple_arity(gamma), gamma, {}};
  for (Position p = 0; p < gamma; ++p) I.args.push_back(Expr::var(p));
  return I;
}

// ---- replacement

ReplacementBuilder start_replacement(const RawTypeTheory& target) {
  ReplacementBuilder B;
  B.target = target;
  B.theory.sys = target.sys;
  B.map.map = RawSyntaxMap{B.theory.sig, target.sig, {}};
  return B;
}

ReplacementBuilder start_replacement(const RawTypeTheory& source, const TheoryWitnesses& W,
                                     const RawTypeTheory& target, const RawTheoryMap& f) {
  if (source.sys != target.sys) fail(ErrorKind::ScopeMismatch, "theories use different scope systems");
  ReplacementBuilder B{target, source, W, f, {}};
  for (std::size_t r = 1; r < source.rules.size(); ++r) B.order.emplace_back(r - 1, r);
  return B;
}

namespace {

void push_rule(ReplacementBuilder& B, RawRule R, PresupWitnesses w, std::optional<Derivation> image) {
  if (B.theory.find_rule(R.name)) fail(ErrorKind::UnknownName, "rule name " + R.name + " is already taken");
  const std::size_t r = B.theory.rules.size();
  if (r > 0) B.order.emplace_back(r - 1, r);
  B.witnesses[R.name] = std::move(w);
  B.theory.rules.push_back(std::move(R));
  B.map.rule_images.push_back(std::move(image));
}

std::optional<std::size_t> target_symbol_rule(const RawTypeTheory& T, std::size_t k) {
  for (std::size_t r = 0; r < T.rules.size(); ++r)
    if (is_symbol_rule_for(T.sig, k, T.rules[r])) return r;
  return std::nullopt;
}

// An image for the congruence rule C of the new symbol rule, when e has one of
// the shapes with an evident congruence: closed, a generic application of a
// symbol of the target with a congruence rule, or a bare metavariable.
std::optional<Derivation> congruence_image(const ReplacementBuilder& B, const RawRule& C, const RuleBoundarySpec& RB,
                                           const Expr& e, const Derivation& witness) {
  const ScopeSystem sys = B.theory.sys;
  const Arity alpha = premise_family_arity(RB.premises);
  const std::size_t np = RB.premises.premises.size();
  std::optional<Derivation> cand;
  if (alpha.empty()) {
    if (RB.form == JudgementForm::IsTy) {
      cand = mk::ty_refl(RawContext{}, e, witness);
    } else {
      auto it = RB.witnesses.find(conclusion_presup_key(0));
      if (it != RB.witnesses.end()) {
        try {
          Derivation dA = apply_theory_map_derivation(sys, B.map, it->second);
          cand = mk::tm_refl(RawContext{}, apply_syntax_map(sys, B.map.map, 0, RB.conclusion.at(0)), e, dA, witness);
        } catch (const KernelError&) {
        }
      }
    }
  } else if (e.is_sym() && e == generic_application(e.index(), alpha)) {
    if (auto rs = target_symbol_rule(B.target, e.index()))
      if (auto rc = find_congruence_rule(B.target, *rs)) {
        Arity doubled = alpha;
        doubled.insert(doubled.end(), alpha.begin(), alpha.end());
        cand = Derivation::rule(*rc, generic_instantiation(sys, doubled, 0), RawContext{},
                                hyps_upto(B.target.rules[*rc].premises.size()));
      }
  } else if (e.is_meta() && e == generic_meta(e.index(), 0) && e.index() < alpha.size()) {
    cand = Derivation::hyp(2 * np + e.index());
  }
  if (!cand) return std::nullopt;
  try {
    if (check_derived_rule(B.target, map_rule(sys, B.map.map, C), *cand)) return cand;
  } catch (const KernelError&) {
  }
  return std::nullopt;
}

}  // namespace

StepResult replacement_step(ReplacementBuilder& B, const ReplacementStep& s) {
  const ScopeSystem sys = B.theory.sys;
  const RuleBoundarySpec& RB = s.boundary;
  if (B.theory.find_rule(RB.name)) fail(ErrorKind::UnknownName, "rule name " + RB.name + " is already taken");
  validate_rule_boundary(B.theory.sig, sys, RB);
  if (auto c = check_rule_boundary(B.theory, RB); !c) fail(ErrorKind::WitnessFailure, c.message);

  const Arity alpha = premise_family_arity(RB.premises);
  const Family<Judgement> hyps = map_family(sys, B.map.map, flatten_premise_family(sys, RB.premises));
  const Boundary bdry = map_boundary(sys, B.map.map, conclusion_boundary(RB));
  StepResult out;

  if (!is_object_form(RB.form)) {
    if (s.realiser) fail(ErrorKind::SymbolForbidden, RB.name + ": an equation step takes no realiser");
    if (auto c = check_derivation_concludes(B.target, hyps, s.witness, complete_boundary(bdry, std::nullopt), alpha); !c)
      fail(ErrorKind::WitnessFailure, RB.name + ": " + c.message);
    out.rule = B.theory.rules.size();
    push_rule(B, realise_rule_boundary(B.theory.sig, sys, RB, std::nullopt), realised_witnesses(RB), s.witness);
    return out;
  }

  if (!s.realiser) fail(ErrorKind::SymbolRequired, RB.name + ": an object step needs a realiser");
  const Expr& e = *s.realiser;
  validate_expr(mv_extend_signature(B.target.sig, alpha), 0, e, head_class(RB.form));
  if (auto c = check_derivation_concludes(B.target, hyps, s.witness, complete_boundary(bdry, e), alpha); !c)
    fail(ErrorKind::WitnessFailure, RB.name + ": " + c.message);
  if (s.symbol.empty() || B.theory.sig.find_symbol(s.symbol))
    fail(ErrorKind::UnknownName, "symbol name '" + s.symbol + "' is empty or already taken");

  const std::size_t k = B.theory.sig.symbols.size();
  B.theory.sig.symbols.push_back(Symbol{s.symbol, head_class(RB.form), alpha});
  B.map.map.src = B.theory.sig;
  B.map.map.images.push_back(e);
  out.symbol = k;
  out.rule = B.theory.rules.size();
  RawRule R = realise_rule_boundary(B.theory.sig, sys, RB, k);
  RawRule C = congruence_rule(R);
  push_rule(B, std::move(R), realised_witnesses(RB), s.witness);

  PresupWitnesses cw;
  if (s.congruence_witnesses) {
    cw = *s.congruence_witnesses;
  } else {
    auto gen = simple_congruence_witnesses(B.theory, B.witnesses, out.rule);
    if (gen) {
      try {
        if (check_presuppositive(B.theory, C, *gen, false)) cw = std::move(*gen);
      } catch (const KernelError&) {
      }
    }
  }
  auto img = congruence_image(B, C, RB, e, s.witness);
  out.congruence_image = img.has_value();
  out.congruence = B.theory.rules.size();
  push_rule(B, std::move(C), std::move(cw), std::move(img));
  return out;
}

// ---- the section

namespace {

bool same_premise(const PremiseBoundary& a, const PremiseBoundary& b) {
  return a.cxt == b.cxt && a.form == b.form && a.slots == b.slots && a.below == b.below;
}

bool same_boundary(const RuleBoundarySpec& a, const RuleBoundarySpec& b) {
  if (a.form != b.form || a.conclusion != b.conclusion) return false;
  if (a.premises.premises.size() != b.premises.premises.size()) return false;
  for (std::size_t i = 0; i < a.premises.premises.size(); ++i)
    if (!same_premise(a.premises.premises[i], b.premises.premises[i])) return false;
  return true;
}

void collect_hyps(const Derivation& d, std::set<std::size_t>& out) {
  if (d.kind == Derivation::Kind::Hyp) out.insert(d.index);
  for (const auto& c : d.children) collect_hyps(c, out);
}

class SectionMaker {
 public:
  SectionMaker(const RawTypeTheory& T, const TheoryWitnesses& W)
      : T_(T), W_(W), sys_(T.sys), B_(start_replacement(T)) {}

  Section run() {
    SymbolRuleMap sr = symbol_rules(T_);
    if (!sr.bijective()) fail(ErrorKind::NotAcceptable, T_.sig.symbols.empty() ? "no symbols" : sr.problems.front());
    std::set<std::size_t> congruences;
    for (std::size_t r = 0; r < T_.rules.size(); ++r)
      if (is_object_rule(T_.rules[r]))
        if (auto c = find_congruence_rule(T_, r)) congruences.insert(*c);

    Section S;
    S.c_symbol.resize(T_.sig.symbols.size());
    for (std::size_t k = 0; k < T_.sig.symbols.size(); ++k) S.c_symbol[k] = object_rule(*sr.rule_of_symbol[k], k);
    for (std::size_t r = 0; r < T_.rules.size(); ++r)
      if (!is_object_rule(T_.rules[r]) && !congruences.count(r)) equation_rule(r);

    S.builder = B_;
    S.s = RawSyntaxMap{T_.sig, B_.theory.sig, {}};
    for (std::size_t k = 0; k < T_.sig.symbols.size(); ++k)
      S.s.images.push_back(generic_application(S.c_symbol[k], T_.sig.symbols[k].arity));
    return S;
  }

 private:
  struct Memo {
    RuleBoundarySpec rb;
    Expr e;
    std::size_t sym, rule;
  };
  // d of a rule's premises, with their witnesses over the builder's theory
  struct Premises {
    PremiseFamily fam;
    PresupWitnesses w;
  };

  const RawTypeTheory& T_;
  const TheoryWitnesses& W_;
  ScopeSystem sys_;
  ReplacementBuilder B_;
  std::vector<Memo> memo_;
  std::size_t fresh_ = 0;

  std::string unused_name(std::string base) {
    std::string n = base;
    while (B_.theory.sig.find_symbol(n) || B_.theory.find_rule(n) || B_.theory.find_rule(n + "-cong")) n += "'";
    return n;
  }

  std::size_t rule_of(std::size_t c) const {
    for (const auto& m : memo_)
      if (m.sym == c) return m.rule;
    fail(ErrorKind::UnknownName, "no rule for a c-symbol");
  }

  // the c-symbol realised by e on RB, added on first use
  std::size_t c_symbol(const RuleBoundarySpec& RB, const Expr& e, const Derivation& witness, const std::string& hint) {
    for (const auto& m : memo_)
      if (m.e == e && same_boundary(m.rb, RB)) return m.sym;
    ReplacementStep step;
    step.boundary = RB;
    step.symbol = unused_name(hint.empty() ? "c" + std::to_string(fresh_++) : hint);
    step.boundary.name = step.symbol;
    step.realiser = e;
    step.witness = witness;
    StepResult res = replacement_step(B_, step);
    memo_.push_back(Memo{RB, e, *res.symbol, res.rule});
    return *res.symbol;
  }

  // symbol c applied over scope K: the first n_meta metavariables generic,
  // then variables for the `level` promoted ones
  Instantiation capp_inst(std::size_t c, std::size_t level, Scope K) const {
    const Arity& a = B_.theory.sig.sym(c).arity;
    const std::size_t n_meta = a.size() - level;
    Arity front(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(n_meta));
    Instantiation I = generic_instantiation(sys_, front, K);
    Instantiation J{simple_arity(level), K, {}};
    for (std::size_t w = 0; w < level; ++w) J.args.push_back(Expr::var(sequential_position(sys_, K, w)));
    return concat_inst(I, J);
  }

  Expr capp(std::size_t c, std::size_t level, Scope K) const {
    const Arity& a = B_.theory.sig.sym(c).arity;
    return instantiate_expr(sys_, capp_inst(c, level, K), 0, generic_application(c, a));
  }

  // Derivation of the c-application at `level` in the flat context G, whose
  // first entries are the demoted promoted premises. entries[w] is the
  // c-symbol of entry w; dP are the premises of c's rule before promotion.
  Derivation capp_deriv(std::size_t c, std::size_t level, const RawContext& G, const std::vector<std::size_t>& entries,
                        const Family<Judgement>& dP) const {
    const Scope K = G.scope();
    const Instantiation I = capp_inst(c, level, K);
    const Instantiation Ig = generic_instantiation(sys_, Arity(I.arity.begin(), I.arity.end() - static_cast<std::ptrdiff_t>(level)), K);
    std::vector<Derivation> ch;
    for (std::size_t j = 0; j < dP.size(); ++j) {
      const Judgement& Pj = dP[j];
      if (K == 0) {
        ch.push_back(Derivation::hyp(j));
        continue;
      }
      const Scope m = Pj.ctx.scope();
      RawSubstitution f{K + m, m, {}};
      for (Position p = 0; p < m; ++p) f.table.push_back(Expr::var(inr(sys_, K, m, p)));
      ch.push_back(Derivation::subst(instantiate_context(sys_, Ig, G, Pj.ctx), f, all_positions(m), Pj,
                                     {Derivation::hyp(j)}));
    }
    for (std::size_t w = 0; w < level; ++w)
      ch.push_back(Derivation::var(G, sequential_position(sys_, K, w), capp_deriv(entries[w], w, G, entries, dP)));
    return Derivation::rule(rule_of(c), I, G, std::move(ch));
  }

  // Rule over flattened Q: the c-symbol rule applied generically.
  Derivation generic_use(std::size_t c, std::size_t n_hyps) const {
    return Derivation::rule(rule_of(c), generic_instantiation(sys_, B_.theory.sig.sym(c).arity, 0), RawContext{},
                            hyps_upto(n_hyps));
  }

  // prefix of d(P) plus the promoted entries v < k
  RuleBoundarySpec stage(const Premises& pre, const std::vector<std::size_t>& entries, std::size_t k,
                         const std::string& name) const {
    RuleBoundarySpec RB{name, pre.fam, JudgementForm::IsTy, {}, pre.w};
    const std::size_t i = pre.fam.premises.size();
    for (std::size_t v = 0; v < k; ++v) {
      const Expr slot = generic_application(entries[v], B_.theory.sig.sym(entries[v]).arity);
      RB.premises.premises.push_back(PremiseBoundary{"x" + std::to_string(v), {}, JudgementForm::IsTm, {slot},
                                                     all_below(i + v)});
      RB.witnesses[premise_presup_key(i + v, 0)] = generic_use(entries[v], i + v);
    }
    return RB;
  }

  // The promotion of a source derivation of Gamma |- J (Gamma sequential of
  // length k) to |- promote(J) from the promoted premises i.. i+k-1.
  Derivation promoted(const Derivation& D, const SequentialContext& G, std::size_t k, const Judgement& J,
                      std::size_t i, std::size_t offset) const {
    if (k == 0) return D;
    RawSubstitution f{0, k, std::vector<Expr>(k)};
    std::vector<std::size_t> entry_at(k);
    for (std::size_t v = 0; v < k; ++v) {
      const Position p = sequential_position(sys_, k, v);
      f.table[p] = Expr::meta(offset + v);
      entry_at[p] = v;
    }
    (void)G;
    std::vector<Derivation> ch{D};
    for (Position p = 0; p < k; ++p) ch.push_back(Derivation::hyp(i + entry_at[p]));
    return Derivation::subst(RawContext{}, f, no_positions(k), J, std::move(ch));
  }

  Expr promote_entries(const Expr& e, std::size_t k, std::size_t offset) const {
    RawSubstitution f{0, k, std::vector<Expr>(k)};
    for (std::size_t v = 0; v < k; ++v) f.table[sequential_position(sys_, k, v)] = Expr::meta(offset + v);
    return substitute_expr(sys_, f, e);
  }

  const PresupWitnesses& source_witnesses(const RawRule& R) const {
    auto it = W_.find(R.name);
    if (it == W_.end()) fail(ErrorKind::MissingWitness, "no witnesses for rule " + R.name);
    return it->second;
  }

  const Derivation& source_witness(const RawRule& R, const std::string& key, std::size_t max_hyp) const {
    const auto& w = source_witnesses(R);
    auto it = w.find(key);
    if (it == w.end()) fail(ErrorKind::MissingWitness, R.name + ": no witness " + key);
    std::set<std::size_t> used;
    collect_hyps(it->second, used);
    if (!used.empty() && *used.rbegin() >= max_hyp)
      fail(ErrorKind::NotSequential, R.name + ": witness " + key + " uses a later premise");
    return it->second;
  }

  // d of the premises of R
  Premises premises_of(const RawRule& R) {
    if (auto c = check_sequential_rule(R); !c) fail(ErrorKind::NotSequential, c.message);
    TightnessResult t = check_tight(R);
    if (!std::is_sorted(t.premise_of_arg.begin(), t.premise_of_arg.end()))
      fail(ErrorKind::NotSequential, R.name + ": metavariables are not numbered in premise order");
    Premises out;
    std::size_t a = 0;  // object premises so far
    for (std::size_t i = 0; i < R.premises.size(); ++i) {
      const Judgement& P = R.premises[i];
      auto seq = is_sequential_flat_context(sys_, P.ctx);
      if (!seq) fail(ErrorKind::NotSequential, R.name + ": premise " + std::to_string(i) + " has a non-sequential context");
      const std::size_t m = seq->size();
      const Family<Judgement> flat_prefix = flatten_premise_family(sys_, out.fam);
      std::vector<std::size_t> entries;
      for (std::size_t k = 0; k < m; ++k) {
        const Judgement Jk = Judgement::is_ty(initial_segment(sys_, *seq, k), seq->entries[k]);
        std::optional<std::size_t> src;
        for (std::size_t j = 0; j < i && !src; ++j)
          if (R.premises[j] == Jk) src = j;
        if (!src) fail(ErrorKind::MissingWitness, R.name + ": context entry " + std::to_string(k) + " of premise " +
                                                      std::to_string(i) + " is not a premise");
        RuleBoundarySpec RB = stage(out, entries, k, "");
        const Expr e = promote_entries(seq->entries[k], k, a);
        entries.push_back(c_symbol(RB, e, promoted(Derivation::hyp(*src), *seq, k, Jk, i, a), ""));
      }

      SequentialContext dctx;
      for (std::size_t k = 0; k < m; ++k) dctx.entries.push_back(capp(entries[k], k, k));
      const RawContext G = flatten_sequential_context(sys_, dctx);

      // boundary slots: each presupposition of the premise's boundary gets a c-symbol
      const Boundary bd = boundary_of(P);
      const auto ps = boundary_presuppositions(bd);
      RuleBoundarySpec RBm = stage(out, entries, m, "");
      std::vector<std::size_t> pres_sym;
      for (std::size_t j = 0; j < ps.size(); ++j) {
        const Derivation& D = source_witness(R, premise_presup_key(i, j), i);
        const Derivation w = promoted(D, *seq, m, ps[j], i, a);
        if (ps[j].form == JudgementForm::IsTy) {
          pres_sym.push_back(c_symbol(RBm, promote_entries(ps[j].head(), m, a), w, ""));
        } else {
          // s : A with A the first presupposition
          RuleBoundarySpec RBt = RBm;
          RBt.form = JudgementForm::IsTm;
          RBt.conclusion = {generic_application(pres_sym.at(0), B_.theory.sig.sym(pres_sym.at(0)).arity)};
          RBt.witnesses[conclusion_presup_key(0)] = generic_use(pres_sym.at(0), i + m);
          pres_sym.push_back(c_symbol(RBt, promote_entries(ps[j].head(), m, a), w, ""));
        }
      }
      std::vector<Expr> slots;
      switch (P.form) {
        case JudgementForm::IsTy:
          break;
        case JudgementForm::IsTm:
          slots = {capp(pres_sym.at(0), m, m)};
          break;
        case JudgementForm::TyEq:
          slots = {capp(pres_sym.at(0), m, m), capp(pres_sym.at(1), m, m)};
          break;
        case JudgementForm::TmEq:
          slots = {capp(pres_sym.at(1), m, m), capp(pres_sym.at(2), m, m), capp(pres_sym.at(0), m, m)};
          break;
      }
      std::string name;
      if (P.is_object()) name = R.arity.at(a).name;
      // witnesses of the new premise, from the premises before it
      for (std::size_t k = 0; k < m; ++k)
        out.w[premise_context_key(i, k)] =
            capp_deriv(entries[k], k, initial_segment(sys_, dctx, k), entries, flat_prefix);
      for (std::size_t j = 0; j < pres_sym.size(); ++j)
        out.w[premise_presup_key(i, j)] = capp_deriv(pres_sym[j], m, G, entries, flat_prefix);
      out.fam.premises.push_back(PremiseBoundary{name, dctx, P.form, slots, all_below(i)});
      if (P.is_object()) ++a;
    }
    return out;
  }

  // c-symbols for the presuppositions of R's conclusion boundary, and the
  // conclusion slots of d(R)
  RuleBoundarySpec conclusion_of(const RawRule& R, std::size_t r, const Premises& dP) {
    const std::size_t n = R.premises.size();
    const auto ps = boundary_presuppositions(boundary_of(R.conclusion));
    RuleBoundarySpec base{"", dP.fam, JudgementForm::IsTy, {}, dP.w};
    std::vector<std::size_t> pres_sym;
    for (std::size_t j = 0; j < ps.size(); ++j) {
      const Derivation& D = source_witness(R, conclusion_presup_key(j), n);
      if (ps[j].form == JudgementForm::IsTy) {
        pres_sym.push_back(c_symbol(base, ps[j].head(), D, ""));
      } else {
        RuleBoundarySpec RBt = base;
        RBt.form = JudgementForm::IsTm;
        RBt.conclusion = {generic_application(pres_sym.at(0), B_.theory.sig.sym(pres_sym.at(0)).arity)};
        RBt.witnesses[conclusion_presup_key(0)] = generic_use(pres_sym.at(0), n);
        pres_sym.push_back(c_symbol(RBt, ps[j].head(), D, ""));
      }
    }
    auto g = [&](std::size_t j) {
      return generic_application(pres_sym.at(j), B_.theory.sig.sym(pres_sym.at(j)).arity);
    };
    RuleBoundarySpec RB = base;
    RB.name = T_.rules[r].name;
    RB.form = R.conclusion.form;
    switch (R.conclusion.form) {
      case JudgementForm::IsTy:
        break;
      case JudgementForm::IsTm:
        RB.conclusion = {g(0)};
        break;
      case JudgementForm::TyEq:
        RB.conclusion = {g(0), g(1)};
        break;
      case JudgementForm::TmEq:
        RB.conclusion = {g(1), g(2), g(0)};
        break;
    }
    for (std::size_t j = 0; j < pres_sym.size(); ++j) RB.witnesses[conclusion_presup_key(j)] = generic_use(pres_sym[j], n);
    return RB;
  }

  void check_closed_conclusion(const RawRule& R) const {
    if (R.conclusion.ctx.scope() != 0) fail(ErrorKind::NotAcceptable, R.name + ": conclusion context is not empty");
  }

  std::size_t object_rule(std::size_t r, std::size_t k) {
    const RawRule& R = T_.rules[r];
    check_closed_conclusion(R);
    Premises dP = premises_of(R);
    RuleBoundarySpec RB = conclusion_of(R, r, dP);
    const Derivation w = Derivation::rule(r, generic_instantiation(sys_, R.arity, 0), RawContext{},
                                          hyps_upto(R.premises.size()));
    return c_symbol(RB, generic_application(k, R.arity), w, "c_" + T_.sig.symbols[k].name);
  }

  void equation_rule(std::size_t r) {
    const RawRule& R = T_.rules[r];
    check_closed_conclusion(R);
    Premises dP = premises_of(R);
    ReplacementStep step;
    step.boundary = conclusion_of(R, r, dP);
    step.boundary.name = unused_name(R.name);
    step.witness = Derivation::rule(r, generic_instantiation(sys_, R.arity, 0), RawContext{},
                                    hyps_upto(R.premises.size()));
    replacement_step(B_, step);
  }
};

}  // namespace

Section section_s(const RawTypeTheory& T, const TheoryWitnesses& W) { return SectionMaker(T, W).run(); }

bool section_is_retraction(ScopeSystem sys, const Section& S) {
  const RawSyntaxMap ts = compose_syntax_maps(sys, S.builder.map.map, S.s);
  return same_syntax_map(ts, identity_syntax_map(S.s.src));
}

}  // namespace gtt
