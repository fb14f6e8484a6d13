#include "gtt/json_io.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "gtt/error.hpp"

namespace gtt::io {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& msg) { fail(ErrorKind::ParseError, where + ": " + msg); }

const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(where, std::string("missing key \"") + key + "\"");
  return *it;
}

const json* maybe(const json& j, const char* key) {
  if (!j.is_object()) return nullptr;
  auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

std::size_t nat(const json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    bad(where, "expected a natural number");
  return j.get<std::size_t>();
}

std::string str(const json& j, const std::string& where) {
  if (!j.is_string()) bad(where, "expected a string");
  return j.get<std::string>();
}

const json& arr(const json& j, const std::string& where) {
  if (!j.is_array()) bad(where, "expected an array");
  return j;
}

std::string at(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }
std::string dot(const std::string& where, const std::string& k) { return where + "." + k; }

SyntacticClass class_from(const json& j, const std::string& where) {
  const std::string s = str(j, where);
  if (s == "Ty") return SyntacticClass::Ty;
  if (s == "Tm") return SyntacticClass::Tm;
  bad(where, "unknown class '" + s + "'");
}

JudgementForm form_from(const json& j, const std::string& where) {
  try {
    return parse_form(str(j, where));
  } catch (const KernelError&) {
    bad(where, "unknown judgement form");
  }
}

json meta_ref(const Arity& metas, std::size_t i) {
  if (i < metas.size() && !metas[i].name.empty()) {
    std::size_t n = 0;
    for (const auto& a : metas) n += a.name == metas[i].name;
    if (n == 1) return metas[i].name;
  }
  return i;
}

std::size_t meta_index(const Arity& metas, const json& j, const std::string& where) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    std::optional<std::size_t> hit;
    for (std::size_t i = 0; i < metas.size(); ++i)
      if (metas[i].name == s) {
        if (hit) bad(where, "metavariable name '" + s + "' is ambiguous");
        hit = i;
      }
    if (!hit) fail(ErrorKind::UnknownName, where + ": unknown metavariable '" + s + "'");
    return *hit;
  }
  const std::size_t i = nat(j, where);
  if (i >= metas.size()) bad(where, "metavariable index out of range");
  return i;
}

std::string equiv_or_conv_name(const Derivation& d) {
  return d.kind == Derivation::Kind::Equiv ? equiv_rule_name(static_cast<EquivRule>(d.index))
                                           : conv_rule_name(static_cast<ConvRule>(d.index));
}

json exprs_to_json(const Signature& sig, const Arity& metas, Scope scope, const std::vector<Expr>& es) {
  json a = json::array();
  for (const auto& e : es) a.push_back(expr_to_json(sig, metas, e));
  (void)scope;
  return a;
}

std::vector<Expr> exprs_from_json(const Signature& sig, const Arity& metas, const json& j, const std::string& where) {
  std::vector<Expr> out;
  arr(j, where);
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(expr_from_json(sig, metas, j[i], at(where, i)));
  return out;
}

Instantiation inst_from_json(const Signature& sig, const Arity& metas, const Arity& arity, Scope scope, const json& j,
                             const std::string& where) {
  Instantiation I{arity, scope, exprs_from_json(sig, metas, j, where)};
  if (I.args.size() != arity.size())
    bad(where, "expected " + std::to_string(arity.size()) + " instantiation arguments, got " +
                   std::to_string(I.args.size()));
  return I;
}

// a rule name resolved against T
std::size_t rule_ref(const RawTypeTheory& T, const json& j, const std::string& where) {
  const std::string s = str(j, where);
  auto r = T.find_rule(s);
  if (!r) fail(ErrorKind::UnknownName, where + ": unknown rule '" + s + "'");
  return *r;
}

std::vector<std::pair<std::size_t, std::size_t>> order_from_json(const json& j, const std::string& where) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  arr(j, where);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& p = arr(j[i], at(where, i));
    if (p.size() != 2) bad(at(where, i), "expected a pair");
    out.emplace_back(nat(p[0], at(where, i)), nat(p[1], at(where, i)));
  }
  return out;
}

json order_to_json(const std::vector<std::pair<std::size_t, std::size_t>>& o) {
  json a = json::array();
  for (auto [x, y] : o) a.push_back(json::array({x, y}));
  return a;
}

json presup_witnesses_to_json(const RawTypeTheory& T, const Arity& metas, const PresupWitnesses& w) {
  json o = json::object();
  for (const auto& [k, d] : w) o[k] = derivation_to_json(T, metas, d);
  return o;
}

PresupWitnesses presup_witnesses_from_json(const RawTypeTheory& T, const Arity& metas, const json& j,
                                           const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object of witnesses");
  PresupWitnesses w;
  for (auto it = j.begin(); it != j.end(); ++it) w[it.key()] = derivation_from_json(T, metas, it.value(), dot(where, it.key()));
  return w;
}

Arity doubled(const Arity& a) {
  Arity out;
  for (const auto& x : a) out.push_back(ArityArg{x.cls, x.binder, x.name + "'"});
  for (const auto& x : a) out.push_back(ArityArg{x.cls, x.binder, x.name + "''"});
  return out;
}

// ---- rule-boundaries, shared by specs and replacement steps

// premise shapes only: the arity of the family
Arity family_arity_from_json(const json& j, const std::string& where) {
  Arity a;
  arr(j, where);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = at(where, i);
    const JudgementForm f = form_from(need(j[i], "form", w), dot(w, "form"));
    if (!is_object_form(f)) continue;
    const json* n = maybe(j[i], "name");
    a.push_back(ArityArg{head_class(f), arr(need(j[i], "cxt_seq", w), dot(w, "cxt_seq")).size(),
                         n ? str(*n, dot(w, "name")) : std::string()});
  }
  return a;
}

json premise_family_to_json(const Signature& sig, const PremiseFamily& P) {
  const Arity metas = premise_family_arity(P);
  json a = json::array();
  for (std::size_t i = 0; i < P.premises.size(); ++i) {
    const auto& p = P.premises[i];
    json o;
    if (is_object_form(p.form)) o["name"] = p.name;
    json cx = json::array();
    for (const auto& e : p.cxt.entries) cx.push_back(expr_to_json(sig, metas, e));
    o["cxt_seq"] = cx;
    o["form"] = form_name(p.form);
    o["boundary"] = slots_to_json(sig, metas, p.form, p.cxt.size(), p.slots);
    if (p.below != all_below(i)) o["below"] = p.below;
    a.push_back(o);
  }
  return a;
}

PremiseFamily premise_family_from_json(const Signature& sig, const json& j, const std::string& where) {
  const Arity metas = family_arity_from_json(j, where);
  PremiseFamily P;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = at(where, i);
    PremiseBoundary p;
    p.form = form_from(need(j[i], "form", w), dot(w, "form"));
    if (const json* n = maybe(j[i], "name")) p.name = str(*n, dot(w, "name"));
    const json& cx = need(j[i], "cxt_seq", w);
    for (std::size_t k = 0; k < cx.size(); ++k)
      p.cxt.entries.push_back(expr_from_json(sig, metas, cx[k], at(dot(w, "cxt_seq"), k)));
    p.slots = slots_from_json(sig, metas, p.form, need(j[i], "boundary", w), dot(w, "boundary"));
    if (const json* b = maybe(j[i], "below")) {
      arr(*b, dot(w, "below"));
      for (std::size_t k = 0; k < b->size(); ++k) p.below.push_back(nat((*b)[k], at(dot(w, "below"), k)));
    } else {
      p.below = all_below(i);
    }
    P.premises.push_back(std::move(p));
  }
  return P;
}

json boundary_spec_to_json(const RawTypeTheory& T, const RuleBoundarySpec& RB) {
  const Arity metas = premise_family_arity(RB.premises);
  json o;
  o["name"] = RB.name;
  o["premises"] = premise_family_to_json(T.sig, RB.premises);
  o["form"] = form_name(RB.form);
  o["conclusion_boundary"] = slots_to_json(T.sig, metas, RB.form, 0, RB.conclusion);
  o["witnesses"] = presup_witnesses_to_json(T, metas, RB.witnesses);
  return o;
}

RuleBoundarySpec boundary_spec_from_json(const RawTypeTheory& T, const json& j, const std::string& where) {
  RuleBoundarySpec RB;
  RB.name = str(need(j, "name", where), dot(where, "name"));
  RB.premises = premise_family_from_json(T.sig, need(j, "premises", where), dot(where, "premises"));
  const Arity metas = premise_family_arity(RB.premises);
  RB.form = form_from(need(j, "form", where), dot(where, "form"));
  RB.conclusion = slots_from_json(T.sig, metas, RB.form, need(j, "conclusion_boundary", where),
                                  dot(where, "conclusion_boundary"));
  if (const json* w = maybe(j, "witnesses")) RB.witnesses = presup_witnesses_from_json(T, metas, *w, dot(where, "witnesses"));
  return RB;
}

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

// ---- text

json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    auto [l, c] = line_col(text, e.byte);
    std::string msg = e.what();
    // drop the library's own prefix up to the description
    if (auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
    fail(ErrorKind::ParseError, origin + ":" + std::to_string(l) + ":" + std::to_string(c) + ": " + msg);
  }
}

json read_json_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(ErrorKind::ParseError, p.string() + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), p.string());
}

std::string dump_canonical(const json& j) { return j.dump(2) + "\n"; }

void write_text(const std::optional<std::filesystem::path>& out, const std::string& text) {
  if (!out) {
    std::cout << text;
    return;
  }
  std::ofstream f(*out, std::ios::binary);
  if (!f) fail(ErrorKind::ParseError, out->string() + ": cannot write file");
  f << text;
}

// ---- syntax

json arity_to_json(const Arity& a) {
  json out = json::array();
  for (const auto& x : a) {
    json e = json::array({class_name(x.cls), x.binder});
    if (!x.name.empty()) e.push_back(x.name);
    out.push_back(e);
  }
  return out;
}

Arity arity_from_json(const json& j, const std::string& where) {
  Arity a;
  arr(j, where);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = at(where, i);
    const json& e = arr(j[i], w);
    if (e.size() < 2 || e.size() > 3) bad(w, "expected [class, binder] or [class, binder, name]");
    ArityArg x{class_from(e[0], w), nat(e[1], w), e.size() == 3 ? str(e[2], w) : std::string()};
    a.push_back(x);
  }
  return a;
}

json signature_to_json(const Signature& sig) {
  json out = json::array();
  for (std::size_t k = 0; k < sig.base_size(); ++k) {
    const Symbol& S = sig.sym(k);
    out.push_back(json{{"name", S.name}, {"class", class_name(S.cls)}, {"arity", arity_to_json(S.arity)}});
  }
  return out;
}

Signature signature_from_json(const json& j, const std::string& where) {
  Signature sig;
  arr(j, where);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = at(where, i);
    Symbol S;
    S.name = str(need(j[i], "name", w), dot(w, "name"));
    S.cls = class_from(need(j[i], "class", w), dot(w, "class"));
    if (const json* a = maybe(j[i], "arity")) S.arity = arity_from_json(*a, dot(w, "arity"));
    if (sig.find_symbol(S.name)) bad(w, "duplicate symbol '" + S.name + "'");
    sig.symbols.push_back(std::move(S));
  }
  return sig;
}

json expr_to_json(const Signature& sig, const Arity& metas, const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Var:
      return json{{"var", e.index()}};
    case Expr::Kind::Meta: {
      json o{{"meta", meta_ref(metas, e.index())}};
      if (!e.args().empty()) o["args"] = exprs_to_json(sig, metas, 0, e.args());
      return o;
    }
    case Expr::Kind::Sym:
      break;
  }
  json o{{"sym", sig.sym(e.index()).name}};
  if (!e.args().empty()) o["args"] = exprs_to_json(sig, metas, 0, e.args());
  return o;
}

Expr expr_from_json(const Signature& sig, const Arity& metas, const json& j, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an expression object");
  std::vector<Expr> args;
  if (const json* a = maybe(j, "args")) args = exprs_from_json(sig, metas, *a, dot(where, "args"));
  if (const json* v = maybe(j, "var")) {
    if (!args.empty()) bad(where, "a variable takes no arguments");
    return Expr::var(nat(*v, dot(where, "var")));
  }
  if (const json* m = maybe(j, "meta")) {
    const std::size_t i = meta_index(metas, *m, dot(where, "meta"));
    if (args.size() != metas[i].binder)
      bad(where, "metavariable expects " + std::to_string(metas[i].binder) + " arguments");
    return Expr::meta(i, std::move(args));
  }
  if (const json* s = maybe(j, "sym")) {
    const std::string name = str(*s, dot(where, "sym"));
    auto k = sig.find_symbol(name);
    if (!k || *k >= sig.base_size()) fail(ErrorKind::UnknownName, where + ": unknown symbol '" + name + "'");
    if (args.size() != sig.sym(*k).arity.size())
      bad(where, "symbol " + name + " expects " + std::to_string(sig.sym(*k).arity.size()) + " arguments");
    return make_sym(sig, *k, std::move(args));
  }
  bad(where, "expected one of var, sym, meta");
}

json context_to_json(const Signature& sig, const Arity& metas, const RawContext& G) {
  return exprs_to_json(sig, metas, G.scope(), G.types);
}

RawContext context_from_json(const Signature& sig, const Arity& metas, const json& j, const std::string& where) {
  return RawContext(exprs_from_json(sig, metas, j, where));
}

json slots_to_json(const Signature& sig, const Arity& metas, JudgementForm form, Scope scope,
                   const std::vector<Expr>& slots) {
  (void)scope;
  auto names = slot_names(form, false);
  json o = json::object();
  for (std::size_t s = 0; s < names.size() && s < slots.size(); ++s) o[names[s]] = expr_to_json(sig, metas, slots[s]);
  return o;
}

std::vector<Expr> slots_from_json(const Signature& sig, const Arity& metas, JudgementForm form, const json& j,
                                  const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object of slots");
  auto names = slot_names(form, false);
  if (j.size() != names.size()) bad(where, std::string("a ") + form_name(form) + " boundary has " +
                                               std::to_string(names.size()) + " slots");
  std::vector<Expr> out;
  for (const char* n : names) out.push_back(expr_from_json(sig, metas, need(j, n, where), dot(where, n)));
  return out;
}

json judgement_to_json(const Signature& sig, const Arity& metas, const Judgement& J) {
  auto names = slot_names(J.form, true);
  json slots = json::object();
  for (std::size_t s = 0; s < names.size(); ++s) slots[names[s]] = expr_to_json(sig, metas, J.slots.at(s));
  return json{{"cxt", context_to_json(sig, metas, J.ctx)}, {"form", form_name(J.form)}, {"slots", slots}};
}

Judgement judgement_from_json(const Signature& sig, const Arity& metas, const json& j, const std::string& where) {
  Judgement J;
  J.ctx = context_from_json(sig, metas, need(j, "cxt", where), dot(where, "cxt"));
  J.form = form_from(need(j, "form", where), dot(where, "form"));
  const json& s = need(j, "slots", where);
  if (!s.is_object()) bad(dot(where, "slots"), "expected an object");
  auto names = slot_names(J.form, true);
  if (s.size() != names.size())
    bad(dot(where, "slots"), std::string("a ") + form_name(J.form) + " judgement has " + std::to_string(names.size()) +
                                 " slots");
  for (const char* n : names)
    J.slots.push_back(expr_from_json(sig, metas, need(s, n, dot(where, "slots")), dot(dot(where, "slots"), n)));
  return J;
}

json rule_to_json(const Signature& sig, const RawRule& R) {
  json prem = json::array();
  for (const auto& P : R.premises) prem.push_back(judgement_to_json(sig, R.arity, P));
  return json{{"name", R.name},
              {"arity", arity_to_json(R.arity)},
              {"premises", prem},
              {"conclusion", judgement_to_json(sig, R.arity, R.conclusion)}};
}

RawRule rule_from_json(const Signature& sig, const json& j, const std::string& where) {
  RawRule R;
  R.name = str(need(j, "name", where), dot(where, "name"));
  const std::string w = where + "(" + R.name + ")";
  R.arity = arity_from_json(need(j, "arity", w), dot(w, "arity"));
  const json& ps = arr(need(j, "premises", w), dot(w, "premises"));
  for (std::size_t i = 0; i < ps.size(); ++i)
    R.premises.push_back(judgement_from_json(sig, R.arity, ps[i], at(dot(w, "premises"), i)));
  R.conclusion = judgement_from_json(sig, R.arity, need(j, "conclusion", w), dot(w, "conclusion"));
  return R;
}

// ---- derivations

json derivation_to_json(const RawTypeTheory& T, const Arity& metas, const Derivation& d) {
  const Signature& sig = T.sig;
  json o;
  o["node"] = derivation_kind_name(d.kind);
  using K = Derivation::Kind;
  switch (d.kind) {
    case K::Hyp:
      o["index"] = d.index;
      return o;
    case K::Var:
      o["cxt"] = context_to_json(sig, metas, d.ctx);
      o["index"] = d.index;
      break;
    case K::Equiv:
    case K::Conv:
      o["rule"] = equiv_or_conv_name(d);
      o["cxt"] = context_to_json(sig, metas, d.ctx);
      o["inst"] = exprs_to_json(sig, metas, d.ctx.scope(), d.inst.args);
      break;
    case K::Rule:
      o["rule"] = T.rules.at(d.index).name;
      o["cxt"] = context_to_json(sig, metas, d.ctx);
      o["inst"] = exprs_to_json(sig, metas, d.ctx.scope(), d.inst.args);
      break;
    case K::Subst:
    case K::EqSubst:
      o["cxt"] = context_to_json(sig, metas, d.ctx);
      o["f"] = exprs_to_json(sig, metas, d.f.src, d.f.table);
      if (d.kind == K::EqSubst) o["g"] = exprs_to_json(sig, metas, d.g.src, d.g.table);
      o["trivial"] = d.trivial;
      o["judgement"] = judgement_to_json(sig, metas, d.judgement);
      break;
  }
  json ch = json::array();
  for (const auto& c : d.children) ch.push_back(derivation_to_json(T, metas, c));
  o["children"] = ch;
  return o;
}

Derivation derivation_from_json(const RawTypeTheory& T, const Arity& metas, const json& j, const std::string& where) {
  const Signature& sig = T.sig;
  const std::string node = str(need(j, "node", where), dot(where, "node"));
  std::vector<Derivation> ch;
  if (const json* c = maybe(j, "children")) {
    arr(*c, dot(where, "children"));
    for (std::size_t i = 0; i < c->size(); ++i)
      ch.push_back(derivation_from_json(T, metas, (*c)[i], at(dot(where, "children"), i)));
  }
  auto cx = [&] { return context_from_json(sig, metas, need(j, "cxt", where), dot(where, "cxt")); };
  if (node == "hyp") return Derivation::hyp(nat(need(j, "index", where), dot(where, "index")));
  if (node == "var") {
    if (ch.size() != 1) bad(where, "a var node has one child");
    return Derivation::var(cx(), nat(need(j, "index", where), dot(where, "index")), ch[0]);
  }
  if (node == "equiv" || node == "conv") {
    const std::string name = str(need(j, "rule", where), dot(where, "rule"));
    const RawContext G = cx();
    if (node == "equiv") {
      for (EquivRule k : {EquivRule::TyRefl, EquivRule::TySym, EquivRule::TyTrans, EquivRule::TmRefl, EquivRule::TmSym,
                          EquivRule::TmTrans})
        if (name == equiv_rule_name(k))
          return Derivation::equiv(
              k, inst_from_json(sig, metas, equivalence_rule(k).arity, G.scope(), need(j, "inst", where), dot(where, "inst")),
              G, ch);
    } else {
      for (ConvRule k : {ConvRule::Tm, ConvRule::Eq})
        if (name == conv_rule_name(k))
          return Derivation::conv(
              k, inst_from_json(sig, metas, conversion_rule(k).arity, G.scope(), need(j, "inst", where), dot(where, "inst")),
              G, ch);
    }
    fail(ErrorKind::UnknownName, where + ": unknown structural rule '" + name + "'");
  }
  if (node == "rule") {
    const std::size_t r = rule_ref(T, need(j, "rule", where), dot(where, "rule"));
    const RawContext G = cx();
    return Derivation::rule(
        r, inst_from_json(sig, metas, T.rules[r].arity, G.scope(), need(j, "inst", where), dot(where, "inst")), G, ch);
  }
  if (node == "subst" || node == "eqsubst") {
    const RawContext D = cx();
    const Judgement J = judgement_from_json(sig, metas, need(j, "judgement", where), dot(where, "judgement"));
    auto table = [&](const char* key) {
      return RawSubstitution{D.scope(), J.ctx.scope(),
                             exprs_from_json(sig, metas, need(j, key, where), dot(where, key))};
    };
    TrivialSet K;
    const json& tv = arr(need(j, "trivial", where), dot(where, "trivial"));
    for (std::size_t i = 0; i < tv.size(); ++i) {
      if (!tv[i].is_boolean()) bad(at(dot(where, "trivial"), i), "expected a boolean");
      K.push_back(tv[i].get<bool>());
    }
    if (node == "subst") return Derivation::subst(D, table("f"), K, J, ch);
    return Derivation::eqsubst(D, table("f"), table("g"), K, J, ch);
  }
  bad(dot(where, "node"), "unknown node kind '" + node + "'");
}

json witnesses_to_json(const RawTypeTheory& T, const TheoryWitnesses& W) {
  json o = json::object();
  for (const auto& [name, w] : W) {
    auto r = T.find_rule(name);
    o[name] = presup_witnesses_to_json(T, r ? T.rules[*r].arity : Arity{}, w);
  }
  return o;
}

TheoryWitnesses witnesses_from_json(const RawTypeTheory& T, const json& j, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object keyed by rule name");
  TheoryWitnesses W;
  for (auto it = j.begin(); it != j.end(); ++it) {
    auto r = T.find_rule(it.key());
    if (!r) fail(ErrorKind::UnknownName, where + ": witnesses for unknown rule '" + it.key() + "'");
    W[it.key()] = presup_witnesses_from_json(T, T.rules[*r].arity, it.value(), dot(where, it.key()));
  }
  return W;
}

json derivation_file_to_json(const RawTypeTheory& T, const DerivationFile& f) {
  json hyps = json::array();
  for (const auto& h : f.hyps) hyps.push_back(judgement_to_json(T.sig, f.arity, h));
  return json{{"arity", arity_to_json(f.arity)},
              {"hypotheses", hyps},
              {"derivation", derivation_to_json(T, f.arity, f.deriv)}};
}

DerivationFile derivation_file_from_json(const RawTypeTheory& T, const json& j) {
  DerivationFile f;
  if (maybe(j, "node")) {
    f.deriv = derivation_from_json(T, {}, j);
    return f;
  }
  if (const json* a = maybe(j, "arity")) f.arity = arity_from_json(*a);
  if (const json* h = maybe(j, "hypotheses")) {
    arr(*h, "hypotheses");
    for (std::size_t i = 0; i < h->size(); ++i)
      f.hyps.push_back(judgement_from_json(T.sig, f.arity, (*h)[i], at("hypotheses", i)));
  }
  f.deriv = derivation_from_json(T, f.arity, need(j, "derivation", "derivation file"));
  return f;
}

// ---- theories

json theory_to_json(const TheoryFile& f) {
  const RawTypeTheory& T = f.theory;
  json rules = json::array();
  for (const auto& R : T.rules) rules.push_back(rule_to_json(T.sig, R));
  json o{{"name", f.name},
         {"scope_system", scope_system_name(T.sys)},
         {"signature", signature_to_json(T.sig)},
         {"rules", rules},
         {"witnesses", witnesses_to_json(T, f.witnesses)}};
  if (f.order) o["order"] = order_to_json(*f.order);
  return o;
}

TheoryFile theory_from_json(const json& j) {
  TheoryFile f;
  if (const json* n = maybe(j, "name")) f.name = str(*n, "name");
  if (const json* s = maybe(j, "scope_system")) {
    try {
      f.theory.sys = parse_scope_system(str(*s, "scope_system"));
    } catch (const KernelError&) {
      bad("scope_system", "unknown scope system");
    }
  }
  f.theory.sig = signature_from_json(need(j, "signature", "theory"));
  const json& rs = arr(need(j, "rules", "theory"), "rules");
  for (std::size_t i = 0; i < rs.size(); ++i) {
    RawRule R = rule_from_json(f.theory.sig, rs[i], at("rules", i));
    if (f.theory.find_rule(R.name)) bad(at("rules", i), "duplicate rule '" + R.name + "'");
    f.theory.rules.push_back(std::move(R));
  }
  if (const json* w = maybe(j, "witnesses")) f.witnesses = witnesses_from_json(f.theory, *w);
  if (const json* o = maybe(j, "order")) f.order = order_from_json(*o, "order");
  return f;
}

namespace {

// the names and arities of the elaborated theory, enough to parse witnesses
RawTypeTheory spec_name_table(const WellPresentedTheorySpec& s) {
  RawTypeTheory T;
  T.sys = s.sys;
  T.sig = well_presented_signature(s);
  for (const auto& r : s.rules) T.rules.push_back(RawRule{r.boundary.name, premise_family_arity(r.boundary.premises), {}, {}});
  for (const auto& r : s.rules)
    if (is_object_form(r.boundary.form))
      T.rules.push_back(RawRule{r.boundary.name + "-cong", doubled(premise_family_arity(r.boundary.premises)), {}, {}});
  return T;
}

}  // namespace

json spec_to_json(const WellPresentedTheorySpec& s) {
  const RawTypeTheory names = spec_name_table(s);
  json rules = json::array();
  for (const auto& r : s.rules) {
    json o = boundary_spec_to_json(names, r.boundary);
    if (is_object_form(r.boundary.form)) o["symbol"] = r.symbol;
    if (r.congruence_witnesses)
      o["congruence_witnesses"] =
          presup_witnesses_to_json(names, doubled(premise_family_arity(r.boundary.premises)), *r.congruence_witnesses);
    rules.push_back(o);
  }
  return json{{"name", s.name}, {"scope_system", scope_system_name(s.sys)}, {"order", order_to_json(s.order)}, {"rules", rules}};
}

WellPresentedTheorySpec spec_from_json(const json& j) {
  WellPresentedTheorySpec s;
  if (const json* n = maybe(j, "name")) s.name = str(*n, "name");
  if (const json* sy = maybe(j, "scope_system")) {
    try {
      s.sys = parse_scope_system(str(*sy, "scope_system"));
    } catch (const KernelError&) {
      bad("scope_system", "unknown scope system");
    }
  }
  if (const json* o = maybe(j, "order")) s.order = order_from_json(*o, "order");
  const json& rs = arr(need(j, "rules", "spec"), "rules");
  // first pass: shapes, so that the total signature is known
  Signature sig;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const std::string w = at("rules", i);
    const JudgementForm f = form_from(need(rs[i], "form", w), dot(w, "form"));
    WellPresentedRule r;
    r.boundary.name = str(need(rs[i], "name", w), dot(w, "name"));
    r.boundary.form = f;
    if (is_object_form(f)) {
      r.symbol = str(need(rs[i], "symbol", w), dot(w, "symbol"));
      sig.symbols.push_back(Symbol{r.symbol, head_class(f), family_arity_from_json(need(rs[i], "premises", w), dot(w, "premises"))});
    }
    s.rules.push_back(std::move(r));
  }
  // second pass: expressions over the total signature, witnesses by rule name
  RawTypeTheory names;
  names.sys = s.sys;
  names.sig = sig;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    Arity a = family_arity_from_json(need(rs[i], "premises", at("rules", i)), at("rules", i));
    names.rules.push_back(RawRule{s.rules[i].boundary.name, a, {}, {}});
  }
  for (std::size_t i = 0; i < rs.size(); ++i)
    if (is_object_form(s.rules[i].boundary.form))
      names.rules.push_back(RawRule{s.rules[i].boundary.name + "-cong", doubled(names.rules[i].arity), {}, {}});
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const std::string w = at("rules", i);
    WellPresentedRule& r = s.rules[i];
    r.boundary = boundary_spec_from_json(names, rs[i], w);
    if (const json* cw = maybe(rs[i], "congruence_witnesses"))
      r.congruence_witnesses =
          presup_witnesses_from_json(names, doubled(premise_family_arity(r.boundary.premises)), *cw, dot(w, "congruence_witnesses"));
  }
  return s;
}

bool is_spec_document(const json& j) {
  const json* rs = maybe(j, "rules");
  return rs && rs->is_array() && !rs->empty() && maybe((*rs)[0], "conclusion_boundary");
}

// ---- maps and replacement

json syntax_map_to_json(const RawSyntaxMap& f) {
  json o = json::object();
  for (std::size_t k = 0; k < f.images.size(); ++k)
    o[f.src.symbols[k].name] = expr_to_json(f.dst, f.src.symbols[k].arity, f.images[k]);
  return o;
}

json theory_map_to_json(const RawTypeTheory& src, const RawTypeTheory& dst, const RawTheoryMap& F) {
  json imgs = json::object();
  for (std::size_t r = 0; r < F.rule_images.size(); ++r)
    imgs[src.rules[r].name] = F.rule_images[r] ? derivation_to_json(dst, src.rules[r].arity, *F.rule_images[r]) : json();
  return json{{"symbols", syntax_map_to_json(F.map)}, {"rules", imgs}};
}

json step_to_json(const RawTypeTheory& current, const RawTypeTheory& target, const ReplacementStep& s) {
  json o = boundary_spec_to_json(current, s.boundary);
  const Arity metas = premise_family_arity(s.boundary.premises);
  if (is_object_form(s.boundary.form)) o["symbol"] = s.symbol;
  if (s.realiser) o["realiser"] = expr_to_json(target.sig, metas, *s.realiser);
  o["witness"] = derivation_to_json(target, metas, s.witness);
  if (s.congruence_witnesses) {
    // the congruence rule is not in `current` yet: name table with it added
    RawTypeTheory ext = current;
    ext.rules.push_back(RawRule{s.boundary.name, metas, {}, {}});
    ext.rules.push_back(RawRule{s.boundary.name + "-cong", doubled(metas), {}, {}});
    ext.sig.symbols.push_back(Symbol{s.symbol, head_class(s.boundary.form), metas});
    o["congruence_witnesses"] = presup_witnesses_to_json(ext, doubled(metas), *s.congruence_witnesses);
  }
  return o;
}

ReplacementStep step_from_json(const RawTypeTheory& current, const RawTypeTheory& target, const json& j,
                               const std::string& where) {
  ReplacementStep s;
  s.boundary = boundary_spec_from_json(current, j, where);
  const Arity metas = premise_family_arity(s.boundary.premises);
  if (const json* n = maybe(j, "symbol")) s.symbol = str(*n, dot(where, "symbol"));
  if (const json* e = maybe(j, "realiser")) s.realiser = expr_from_json(target.sig, metas, *e, dot(where, "realiser"));
  s.witness = derivation_from_json(target, metas, need(j, "witness", where), dot(where, "witness"));
  if (const json* cw = maybe(j, "congruence_witnesses")) {
    RawTypeTheory ext = current;
    if (!s.symbol.empty()) ext.sig.symbols.push_back(Symbol{s.symbol, head_class(s.boundary.form), metas});
    ext.rules.push_back(RawRule{s.boundary.name, metas, {}, {}});
    ext.rules.push_back(RawRule{s.boundary.name + "-cong", doubled(metas), {}, {}});
    s.congruence_witnesses = presup_witnesses_from_json(ext, doubled(metas), *cw, dot(where, "congruence_witnesses"));
  }
  return s;
}

}  // namespace gtt::io
