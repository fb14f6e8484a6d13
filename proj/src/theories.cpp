#include "gtt/theories.hpp"

#include <algorithm>

#include "gtt/error.hpp"

namespace gtt {

std::optional<std::size_t> RawTypeTheory::find_rule(const std::string& name) const {
  for (std::size_t i = 0; i < rules.size(); ++i)
    if (rules[i].name == name) return i;
  return std::nullopt;
}

std::size_t RawTypeTheory::rule_index(const std::string& name) const {
  auto r = find_rule(name);
  if (!r) fail(ErrorKind::UnknownName, "no rule named '" + name + "'");
  return *r;
}

std::size_t RawTypeTheory::symbol_index(const std::string& name) const {
  auto k = sig.find_symbol(name);
  if (!k) fail(ErrorKind::UnknownName, "no symbol named '" + name + "'");
  return *k;
}

void validate_theory(const RawTypeTheory& T) {
  if (T.sig.meta_count != 0) fail(ErrorKind::SignatureMismatch, "theory signature carries metavariables");
  for (const auto& R : T.rules) validate_rule(T.sig, R);
}

// ---- nodes

Derivation Derivation::hyp(std::size_t k) {
  Derivation d;
  d.kind = Kind::Hyp;
  d.index = k;
  return d;
}

Derivation Derivation::var(RawContext gamma, Position i, Derivation type_deriv) {
  Derivation d;
  d.kind = Kind::Var;
  d.index = i;
  d.ctx = std::move(gamma);
  d.children.push_back(std::move(type_deriv));
  return d;
}

Derivation Derivation::equiv(EquivRule k, Instantiation I, RawContext gamma, std::vector<Derivation> ch) {
  Derivation d;
  d.kind = Kind::Equiv;
  d.index = static_cast<std::size_t>(k);
  d.inst = std::move(I);
  d.ctx = std::move(gamma);
  d.children = std::move(ch);
  return d;
}

Derivation Derivation::conv(ConvRule k, Instantiation I, RawContext gamma, std::vector<Derivation> ch) {
  Derivation d;
  d.kind = Kind::Conv;
  d.index = static_cast<std::size_t>(k);
  d.inst = std::move(I);
  d.ctx = std::move(gamma);
  d.children = std::move(ch);
  return d;
}

Derivation Derivation::subst(RawContext delta, RawSubstitution f, TrivialSet K, Judgement J, std::vector<Derivation> ch) {
  Derivation d;
  d.kind = Kind::Subst;
  d.ctx = std::move(delta);
  d.f = std::move(f);
  d.trivial = std::move(K);
  d.judgement = std::move(J);
  d.children = std::move(ch);
  return d;
}

Derivation Derivation::eqsubst(RawContext delta, RawSubstitution f, RawSubstitution g, TrivialSet K, Judgement J,
                               std::vector<Derivation> ch) {
  Derivation d;
  d.kind = Kind::EqSubst;
  d.ctx = std::move(delta);
  d.f = std::move(f);
  d.g = std::move(g);
  d.trivial = std::move(K);
  d.judgement = std::move(J);
  d.children = std::move(ch);
  return d;
}

Derivation Derivation::rule(std::size_t r, Instantiation I, RawContext gamma, std::vector<Derivation> ch) {
  Derivation d;
  d.kind = Kind::Rule;
  d.index = r;
  d.inst = std::move(I);
  d.ctx = std::move(gamma);
  d.children = std::move(ch);
  return d;
}

const char* derivation_kind_name(Derivation::Kind k) {
  switch (k) {
    case Derivation::Kind::Hyp: return "hyp";
    case Derivation::Kind::Var: return "var";
    case Derivation::Kind::Equiv: return "equiv";
    case Derivation::Kind::Conv: return "conv";
    case Derivation::Kind::Subst: return "subst";
    case Derivation::Kind::EqSubst: return "eqsubst";
    case Derivation::Kind::Rule: return "rule";
  }
  return "?";
}

namespace {

ClosureRule<Judgement> raw_node_rule(const RawTypeTheory& T, const Derivation& d) {
  using K = Derivation::Kind;
  switch (d.kind) {
    case K::Hyp: fail(ErrorKind::IndexOutOfRange, "hypothesis nodes have no rule");
    case K::Var: return variable_rule(d.ctx, d.index);
    case K::Equiv:
      if (d.index >= equivalence_rules().size()) fail(ErrorKind::IndexOutOfRange, "no such equivalence rule");
      return instantiate_rule(T.sys, d.inst, d.ctx, equivalence_rules()[d.index]);
    case K::Conv:
      if (d.index >= conversion_rules().size()) fail(ErrorKind::IndexOutOfRange, "no such conversion rule");
      return instantiate_rule(T.sys, d.inst, d.ctx, conversion_rules()[d.index]);
    case K::Subst: return substitution_rule(T.sys, d.ctx, d.f, d.trivial, d.judgement);
    case K::EqSubst: return equality_substitution_rule(T.sys, d.ctx, d.f, d.g, d.trivial, d.judgement);
    case K::Rule:
      if (d.index >= T.rules.size())
        fail(ErrorKind::IndexOutOfRange, "rule " + std::to_string(d.index) + " of " + std::to_string(T.rules.size()));
      return instantiate_rule(T.sys, d.inst, d.ctx, T.rules[d.index]);
  }
  fail(ErrorKind::IndexOutOfRange, "unknown node kind");
}

}  // namespace

ClosureRule<Judgement> node_rule(const RawTypeTheory& T, const Signature& sig, const Derivation& d) {
  using K = Derivation::Kind;
  switch (d.kind) {
    case K::Hyp: break;
    case K::Var: validate_context(sig, d.ctx); break;
    case K::Equiv:
    case K::Conv:
    case K::Rule:
      validate_context(sig, d.ctx);
      validate_inst(sig, d.inst);
      break;
    case K::Subst:
      validate_context(sig, d.ctx);
      validate_subst(sig, d.f);
      validate_judgement(sig, d.judgement);
      break;
    case K::EqSubst:
      validate_context(sig, d.ctx);
      validate_subst(sig, d.f);
      validate_subst(sig, d.g);
      validate_judgement(sig, d.judgement);
      break;
  }
  return raw_node_rule(T, d);
}

namespace {

Judgement check_rec(const RawTypeTheory& T, const Signature& sig, const Family<Judgement>& hyps, const Derivation& d) {
  if (d.kind == Derivation::Kind::Hyp) {
    if (d.index >= hyps.size())
      fail(ErrorKind::IndexOutOfRange, "hypothesis " + std::to_string(d.index) + " of " + std::to_string(hyps.size()));
    if (!d.children.empty()) fail(ErrorKind::ChildCountMismatch, "hypothesis leaf with children");
    return hyps[d.index];
  }
  ClosureRule<Judgement> r = node_rule(T, sig, d);
  if (r.premises.size() != d.children.size())
    fail(ErrorKind::ChildCountMismatch, std::string(derivation_kind_name(d.kind)) + " node expects " +
                                            std::to_string(r.premises.size()) + " premises, got " +
                                            std::to_string(d.children.size()));
  for (std::size_t i = 0; i < d.children.size(); ++i) {
    Judgement got;
    try {
      got = check_rec(T, sig, hyps, d.children[i]);
    } catch (const KernelError& e) {
      throw e.under(i);
    }
    if (!(got == r.premises[i]))
      throw KernelError(ErrorKind::PremiseMismatch,
                        std::string(derivation_kind_name(d.kind)) + " node: premise " + std::to_string(i) +
                            " does not match the conclusion of child " + std::to_string(i),
                        {i});
  }
  return r.conclusion;
}

}  // namespace

Judgement check_derivation(const RawTypeTheory& T, const Family<Judgement>& hyps, const Derivation& d,
                           const Arity& alpha) {
  Signature sig = mv_extend_signature(T.sig, alpha);
  for (std::size_t k = 0; k < hyps.size(); ++k) {
    try {
      validate_judgement(sig, hyps[k]);
    } catch (const KernelError& e) {
      throw KernelError(e.kind(), "hypothesis " + std::to_string(k) + ": " + e.detail());
    }
  }
  return check_rec(T, sig, hyps, d);
}

Judgement conclusion_of(const RawTypeTheory& T, const Family<Judgement>& hyps, const Derivation& d) {
  if (d.kind == Derivation::Kind::Hyp) {
    if (d.index >= hyps.size()) fail(ErrorKind::IndexOutOfRange, "hypothesis out of range");
    return hyps[d.index];
  }
  return raw_node_rule(T, d).conclusion;
}

CheckResult check_derivation_concludes(const RawTypeTheory& T, const Family<Judgement>& hyps, const Derivation& d,
                                       const Judgement& expected, const Arity& alpha) {
  try {
    Judgement c = check_derivation(T, hyps, d, alpha);
    if (!(c == expected)) return {false, "derivation concludes a different judgement"};
    return {true, {}};
  } catch (const KernelError& e) {
    return {false, e.what()};
  }
}

CheckResult check_derived_rule(const RawTypeTheory& T, const RawRule& R, const Derivation& witness) {
  return check_derivation_concludes(T, R.premises, witness, R.conclusion, R.arity);
}

CheckResult check_admissible_instance(const RawTypeTheory& T, const RawRule& R, const Instantiation& I,
                                      const RawContext& gamma, const Derivation& witness) {
  ClosureRule<Judgement> c;
  try {
    c = instantiate_rule(T.sys, I, gamma, R);
  } catch (const KernelError& e) {
    return {false, e.what()};
  }
  return check_derivation_concludes(T, c.premises, witness, c.conclusion);
}

// ---- maps

void validate_simple_map(const SimpleTheoryMap& F, const RawTypeTheory& src, const RawTypeTheory& dst) {
  validate_signature_map(F.sig, src.sig, dst.sig);
  if (F.rules.size() != src.rules.size()) fail(ErrorKind::MissingRuleImage, "theory map does not cover every rule");
  for (std::size_t r = 0; r < src.rules.size(); ++r) {
    if (F.rules[r] >= dst.rules.size()) fail(ErrorKind::IndexOutOfRange, "rule image out of range");
    if (!same_rule(translate_rule(F.sig, src.rules[r]), dst.rules[F.rules[r]]))
      fail(ErrorKind::SignatureMismatch, "rule " + src.rules[r].name + " is not sent to its translation");
  }
}

Derivation translate_derivation(const SimpleTheoryMap& F, const Derivation& d) {
  Derivation out = d;
  out.inst = translate_inst(F.sig, d.inst);
  out.ctx = translate_context(F.sig, d.ctx);
  out.f = translate_subst(F.sig, d.f);
  out.g = translate_subst(F.sig, d.g);
  out.judgement = translate_judgement(F.sig, d.judgement);
  if (d.kind == Derivation::Kind::Rule) {
    if (d.index >= F.rules.size()) fail(ErrorKind::MissingRuleImage, "rule without an image");
    out.index = F.rules[d.index];
  }
  for (auto& c : out.children) c = translate_derivation(F, c);
  return out;
}

SimpleTheoryMap compose_simple_maps(const SimpleTheoryMap& G, const SimpleTheoryMap& F) {
  SimpleTheoryMap H{compose_signature_map(G.sig, F.sig), {}};
  for (std::size_t r : F.rules) H.rules.push_back(G.rules.at(r));
  return H;
}

Derivation translate_metas(const SignatureMap& F, const Derivation& d) {
  Derivation out = d;
  out.inst = translate_inst(F, d.inst);
  out.ctx = translate_context(F, d.ctx);
  out.f = translate_subst(F, d.f);
  out.g = translate_subst(F, d.g);
  out.judgement = translate_judgement(F, d.judgement);
  for (auto& c : out.children) c = translate_metas(F, c);
  return out;
}

Derivation instantiate_derivation(ScopeSystem sys, const Instantiation& I, const RawContext& gamma, const Derivation& d) {
  using K = Derivation::Kind;
  const Scope G = gamma.scope();
  if (I.scope != G) fail(ErrorKind::ScopeMismatch, "instantiation scope differs from the context");
  Derivation out;
  out.kind = d.kind;
  out.index = d.index;
  switch (d.kind) {
    case K::Hyp: return d;
    case K::Var:
      out.ctx = instantiate_context(sys, I, gamma, d.ctx);
      out.index = inr(sys, G, d.ctx.scope(), d.index);
      break;
    case K::Equiv:
    case K::Conv:
    case K::Rule:
      out.ctx = instantiate_context(sys, I, gamma, d.ctx);
      out.inst = inst_act_inst(sys, I, d.inst);
      break;
    case K::Subst:
    case K::EqSubst: {
      out.ctx = instantiate_context(sys, I, gamma, d.ctx);
      out.f = inst_act_subst(sys, I, d.f);
      if (d.kind == K::EqSubst) out.g = inst_act_subst(sys, I, d.g);
      out.judgement = instantiate_judgement(sys, I, gamma, d.judgement);
      const Scope theta = d.judgement.ctx.scope();
      out.trivial.assign(G + theta, false);
      for (Position k = 0; k < G; ++k) out.trivial[inl(sys, G, theta, k)] = true;
      for (Position j = 0; j < theta; ++j) out.trivial[inr(sys, G, theta, j)] = d.trivial.at(j);
      break;
    }
  }
  out.children.reserve(d.children.size());
  for (const auto& c : d.children) out.children.push_back(instantiate_derivation(sys, I, gamma, c));
  return out;
}

Derivation graft_derivation(const Derivation& outer, const std::vector<Derivation>& fillers) {
  if (outer.kind == Derivation::Kind::Hyp) {
    if (outer.index >= fillers.size()) fail(ErrorKind::IndexOutOfRange, "graft: no filler for hypothesis " + std::to_string(outer.index));
    return fillers[outer.index];
  }
  Derivation out = outer;
  for (auto& c : out.children) c = graft_derivation(c, fillers);
  return out;
}

bool is_substitution_free(const Derivation& d) {
  if (d.kind == Derivation::Kind::Subst || d.kind == Derivation::Kind::EqSubst) return false;
  return std::all_of(d.children.begin(), d.children.end(), is_substitution_free);
}

bool is_hypothesis_free(const Derivation& d) {
  if (d.kind == Derivation::Kind::Hyp) return false;
  return std::all_of(d.children.begin(), d.children.end(), is_hypothesis_free);
}

std::size_t derivation_size(const Derivation& d) {
  std::size_t n = 1;
  for (const auto& c : d.children) n += derivation_size(c);
  return n;
}

std::size_t derivation_depth(const Derivation& d) {
  std::size_t n = 0;
  for (const auto& c : d.children) n = std::max(n, derivation_depth(c));
  return n + 1;
}

void collect_symbols(const Expr& e, std::set<std::size_t>& out) {
  if (e.is_var()) return;
  if (e.is_sym()) out.insert(e.index());
  for (const auto& a : e.args()) collect_symbols(a, out);
}

void collect_symbols(const Judgement& J, std::set<std::size_t>& out) {
  for (const auto& A : J.ctx.types) collect_symbols(A, out);
  for (const auto& e : J.slots) collect_symbols(e, out);
}

namespace {

void provenance_rec(const Derivation& d, Provenance& p) {
  if (d.kind == Derivation::Kind::Rule) p.rules.insert(d.index);
  for (const auto& A : d.ctx.types) collect_symbols(A, p.symbols);
  for (const auto& e : d.inst.args) collect_symbols(e, p.symbols);
  for (const auto& e : d.f.table) collect_symbols(e, p.symbols);
  for (const auto& e : d.g.table) collect_symbols(e, p.symbols);
  collect_symbols(d.judgement, p.symbols);
  for (const auto& c : d.children) provenance_rec(c, p);
}

}  // namespace

Provenance provenance(const Derivation& d) {
  Provenance p;
  provenance_rec(d, p);
  return p;
}

}  // namespace gtt
