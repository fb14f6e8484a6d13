// gtt: command-line front end. Exit codes: 0 pass, 1 check failure, 2 input error.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gtt/bundled.hpp"
#include "gtt/error.hpp"
#include "gtt/json_io.hpp"
#include "gtt/pretty.hpp"

using namespace gtt;
namespace fs = std::filesystem;
using io::json;

namespace {

constexpr int kPass = 0, kFail = 1, kInput = 2;

// input problems, reported with exit code 2
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::optional<fs::path> out;
  bool pretty = false;
  bool weak = false;
  bool json_report = false;
};

struct Loaded {
  io::TheoryFile file;
  std::optional<WellPresentedTheorySpec> spec;
  std::optional<Elaboration> elaboration;
};

template <class F>
auto input_stage(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const KernelError& e) {
    throw InputError(e.what());
  } catch (const json::exception& e) {
    throw InputError(std::string("ParseError: ") + e.what());
  }
}

// A raw theory, or a well-presented spec elaborated into one.
Loaded load_theory(const fs::path& p) {
  Loaded L;
  json j = input_stage([&] { return io::read_json_file(p); });
  if (io::is_spec_document(j)) {
    L.spec = input_stage([&] { return io::spec_from_json(j); });
    L.elaboration = elaborate_theory(*L.spec);
    L.file = io::TheoryFile{L.spec->name, L.elaboration->theory, L.elaboration->witnesses, L.elaboration->order};
  } else {
    L.file = input_stage([&] { return io::theory_from_json(j); });
    input_stage([&] {
      validate_theory(L.file.theory);
      return 0;
    });
  }
  return L;
}

io::DerivationFile load_derivation(const RawTypeTheory& T, const fs::path& p) {
  return input_stage([&] { return io::derivation_file_from_json(T, io::read_json_file(p)); });
}

void emit(const Options& o, const json& j, const std::string& pretty_text) {
  io::write_text(o.out, o.pretty ? pretty_text : io::dump_canonical(j));
}

void emit_derivation(const Options& o, const RawTypeTheory& T, const io::DerivationFile& f) {
  // round trip before emission: the output must re-parse and re-check
  const json j = io::derivation_file_to_json(T, f);
  const io::DerivationFile back = io::derivation_file_from_json(T, io::parse_json_text(io::dump_canonical(j)));
  check_derivation(T, back.hyps, back.deriv, back.arity);
  emit(o, j, pretty::show_derivation(T, f.arity, f.hyps, f.deriv));
}

// ---- check-theory

json acceptability_json(const AcceptabilityReport& r, bool weak) {
  json rules = json::array();
  for (const auto& x : r.rules)
    rules.push_back(json{{"name", x.name},
                         {"tight", x.tight},
                         {"presuppositive", x.presuppositive},
                         {"weakly_presuppositive", x.weakly_presuppositive},
                         {"empty_conclusion_context", x.empty_conclusion_context},
                         {"diagnostics", x.diagnostics}});
  bool pres = r.presuppositive;
  if (weak) {
    pres = true;
    for (const auto& x : r.rules) pres = pres && x.weakly_presuppositive;
  }
  const bool pass = r.tight && pres && r.substitutive && r.congruous;
  return json{{"pass", pass},
              {"tight", r.tight},
              {"presuppositive", pres},
              {"substitutive", r.substitutive},
              {"congruous", r.congruous},
              {"rules", rules},
              {"diagnostics", r.diagnostics}};
}

json well_founded_json(const WellFoundedReport& r) {
  json edges = json::array();
  for (auto [a, b] : r.edges) edges.push_back(json::array({a, b}));
  return json{{"pass", r.well_founded},
              {"rules_well_founded", r.rules_well_founded},
              {"order_ok", r.order_ok},
              {"edges", edges},
              {"cycles", r.cycles},
              {"diagnostics", r.diagnostics}};
}

// The raw theory read back as a well-presented spec: every rule that is not
// the congruence rule of another, in order, totally ordered. Elaboration
// numbers symbols by object rule and puts congruence rules last, so rules,
// symbols and witnesses are renumbered first.
WellPresentedTheorySpec read_back(const io::TheoryFile& f) {
  const RawTypeTheory& T = f.theory;
  const SymbolRuleMap sr = symbol_rules(T);
  if (!sr.bijective()) fail(ErrorKind::NotAcceptable, "no symbol-rule bijection: " + sr.problems.front());
  const std::size_t n = T.rules.size();
  std::vector<std::optional<std::size_t>> cong_of(n);
  std::vector<bool> is_cong(n, false);
  for (std::size_t r = 0; r < n; ++r)
    if (is_object_rule(T.rules[r]))
      if (auto c = find_congruence_rule(T, r)) {
        cong_of[r] = *c;
        is_cong[*c] = true;
      }
  std::vector<std::size_t> kept;
  for (std::size_t r = 0; r < n; ++r)
    if (!is_cong[r]) kept.push_back(r);
  SimpleTheoryMap F;
  F.sig.sym.assign(T.sig.base_size(), 0);
  F.rules.assign(n, 0);
  std::size_t next_sym = 0, next_cong = kept.size();
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const std::size_t r = kept[i];
    F.rules[r] = i;
    if (!is_object_rule(T.rules[r])) continue;
    F.sig.sym[*sr.symbol_of_rule[r]] = next_sym++;
    if (cong_of[r]) F.rules[*cong_of[r]] = next_cong;
    ++next_cong;
  }
  auto witnesses_of = [&](std::size_t r) {
    PresupWitnesses out;
    if (auto it = f.witnesses.find(T.rules[r].name); it != f.witnesses.end())
      for (const auto& [k, d] : it->second) out[k] = translate_derivation(F, d);
    return out;
  };
  WellPresentedTheorySpec s{f.name, T.sys, {}, {}};
  for (std::size_t r : kept) {
    const RawRule R = translate_rule(F.sig, T.rules[r]);
    std::string symbol;
    if (is_object_rule(R)) symbol = T.sig.sym(*sr.symbol_of_rule[r]).name;
    WellPresentedRule wp = bundled::well_presented_rule_of(T.sys, R, witnesses_of(r), symbol);
    if (cong_of[r]) wp.congruence_witnesses = witnesses_of(*cong_of[r]);
    s.rules.push_back(std::move(wp));
  }
  for (std::size_t i = 1; i < s.rules.size(); ++i) s.order.emplace_back(i - 1, i);
  return s;
}

int cmd_check_theory(const Options& o, const fs::path& path, bool acceptable, bool well_founded, bool well_presented) {
  if (!acceptable && !well_founded && !well_presented) acceptable = true;
  Loaded L = load_theory(path);
  const RawTypeTheory& T = L.file.theory;
  json report{{"theory", L.file.name}};
  bool pass = true;
  std::string text;
  if (acceptable) {
    AcceptabilityReport r = check_acceptable_theory(T, L.file.witnesses);
    json a = acceptability_json(r, o.weak);
    pass = pass && a["pass"].get<bool>();
    report["acceptable"] = a;
    text += "== acceptability" + std::string(o.weak ? " (weak presuppositivity)" : "") + "\n" +
            pretty::show_acceptability(r);
  }
  if (well_founded) {
    WellFoundedReport r = check_well_founded_theory(T, L.file.witnesses, L.file.order);
    pass = pass && r.well_founded;
    report["well_founded"] = well_founded_json(r);
    text += "== well-foundedness\nwell-founded: " + std::string(r.well_founded ? "yes" : "no") + "\n";
    for (const auto& d : r.diagnostics) text += "  " + d + "\n";
  }
  if (well_presented) {
    json w;
    try {
      Elaboration e = L.elaboration ? *L.elaboration : elaborate_theory(read_back(L.file));
      const bool ok = e.acceptability.acceptable() && e.well_founded.well_founded;
      w = json{{"pass", ok}, {"acceptable", e.acceptability.acceptable()}, {"well_founded", e.well_founded.well_founded}};
      text += "== well-presented\nelaborated: yes\nacceptable: " + std::string(e.acceptability.acceptable() ? "yes" : "no") +
              "\nwell-founded: " + (e.well_founded.well_founded ? "yes" : "no") + "\n";
      pass = pass && ok;
    } catch (const KernelError& e) {
      w = json{{"pass", false}, {"error", e.what()}};
      text += "== well-presented\nelaborated: no\n  " + std::string(e.what()) + "\n";
      pass = false;
    }
    report["well_presented"] = w;
  }
  report["status"] = pass ? "pass" : "fail";
  text += std::string("status: ") + (pass ? "pass" : "fail") + "\n";
  io::write_text(o.out, o.json_report ? io::dump_canonical(report) : text);
  return pass ? kPass : kFail;
}

// ---- derivation commands

int cmd_check_derivation(const Options& o, const fs::path& theory, const fs::path& deriv) {
  Loaded L = load_theory(theory);
  const RawTypeTheory& T = L.file.theory;
  io::DerivationFile f = load_derivation(T, deriv);
  Judgement J = check_derivation(T, f.hyps, f.deriv, f.arity);
  emit(o, io::judgement_to_json(T.sig, f.arity, J), pretty::show_judgement(T.sig, f.arity, J) + "\n");
  return kPass;
}

int cmd_presup(const Options& o, const fs::path& theory, const fs::path& deriv) {
  Loaded L = load_theory(theory);
  const RawTypeTheory& T = L.file.theory;
  io::DerivationFile f = load_derivation(T, deriv);
  const Judgement J = check_derivation(T, f.hyps, f.deriv, f.arity);
  const Family<Judgement> hyps = weak_hypotheses(f.hyps);
  const Family<Derivation> ds = derive_presuppositions(T, L.file.witnesses, f.hyps, f.deriv);
  const Family<Judgement> ps = presuppositions(J);
  json out = json::array();
  std::string text;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (auto c = check_derivation_concludes(T, hyps, ds[i], ps.at(i), f.arity); !c)
      fail(ErrorKind::WitnessFailure, "presupposition " + std::to_string(i) + ": " + c.message);
    out.push_back(io::derivation_file_to_json(T, io::DerivationFile{f.arity, hyps, ds[i]}));
    text += pretty::show_derivation(T, f.arity, hyps, ds[i]) + "\n";
  }
  emit(o, out, text);
  return kPass;
}

int cmd_elim_subst(const Options& o, const fs::path& theory, const fs::path& deriv) {
  Loaded L = load_theory(theory);
  const RawTypeTheory& T = L.file.theory;
  io::DerivationFile f = load_derivation(T, deriv);
  const Judgement J = check_derivation(T, f.hyps, f.deriv, f.arity);
  Derivation e = eliminate_substitution(T, f.deriv);
  if (!is_substitution_free(e)) fail(ErrorKind::NotSubstitutionFree, "elimination left a substitution node");
  if (auto c = check_derivation_concludes(T, f.hyps, e, J, f.arity); !c) fail(ErrorKind::WitnessFailure, c.message);
  emit_derivation(o, T, io::DerivationFile{f.arity, f.hyps, e});
  return kPass;
}

int cmd_natural_type(const Options& o, const fs::path& theory, const fs::path& input) {
  Loaded L = load_theory(theory);
  const RawTypeTheory& T = L.file.theory;
  Arity metas;
  RawContext G;
  Expr t;
  input_stage([&] {
    json j = io::read_json_file(input);
    if (j.contains("term")) {
      if (j.contains("arity")) metas = io::arity_from_json(j["arity"]);
      if (j.contains("cxt")) G = io::context_from_json(T.sig, metas, j["cxt"]);
      t = io::expr_from_json(T.sig, metas, j["term"], "term");
    } else {
      io::DerivationFile f = io::derivation_file_from_json(T, j);
      metas = f.arity;
      Judgement J = conclusion_of(T, f.hyps, f.deriv);
      if (J.form != JudgementForm::IsTm) fail(ErrorKind::ParseError, "the derivation does not conclude a typing");
      G = J.ctx;
      t = J.head();
    }
    return 0;
  });
  Expr A = natural_type(T, G, t);
  emit(o, io::expr_to_json(T.sig, metas, A), pretty::show_expr(T.sig, metas, A) + "\n");
  return kPass;
}

int cmd_invert(const Options& o, const fs::path& theory, const fs::path& deriv) {
  Loaded L = load_theory(theory);
  const RawTypeTheory& T = L.file.theory;
  io::DerivationFile f = load_derivation(T, deriv);
  const Judgement J = check_derivation(T, f.hyps, f.deriv, f.arity);
  Derivation d = invert(T, L.file.witnesses, f.deriv);
  if (auto c = check_derivation_concludes(T, f.hyps, d, J, f.arity); !c) fail(ErrorKind::WitnessFailure, c.message);
  if (!is_inversion_canonical(T, d)) fail(ErrorKind::WitnessFailure, "inverted derivation is not in canonical shape");
  emit_derivation(o, T, io::DerivationFile{f.arity, f.hyps, d});
  return kPass;
}

int cmd_unique_typing(const Options& o, const fs::path& theory, const fs::path& d1p, const fs::path& d2p) {
  Loaded L = load_theory(theory);
  const RawTypeTheory& T = L.file.theory;
  io::DerivationFile f1 = load_derivation(T, d1p), f2 = load_derivation(T, d2p);
  const Judgement J1 = check_derivation(T, f1.hyps, f1.deriv, f1.arity);
  const Judgement J2 = check_derivation(T, f2.hyps, f2.deriv, f2.arity);
  if (J1.form != JudgementForm::IsTm || J2.form != JudgementForm::IsTm || J1.ctx != J2.ctx || J1.head() != J2.head())
    fail(ErrorKind::PremiseMismatch, "the two derivations must type the same term in the same context");
  Derivation d = unique_typing(T, L.file.witnesses, f1.deriv, f2.deriv);
  if (auto c = check_derivation_concludes(T, f1.hyps, d, Judgement::ty_eq(J1.ctx, J1.type(), J2.type()), f1.arity); !c)
    fail(ErrorKind::WitnessFailure, c.message);
  emit_derivation(o, T, io::DerivationFile{f1.arity, f1.hyps, d});
  return kPass;
}

// ---- rules

int cmd_congruence(const Options& o, const fs::path& theory, const std::string& rule) {
  Loaded L = load_theory(theory);
  const RawTypeTheory& T = L.file.theory;
  auto r = T.find_rule(rule);
  if (!r) throw InputError("UnknownName: no rule '" + rule + "'");
  RawRule C = congruence_rule(T.rules[*r]);
  validate_rule(T.sig, C);
  const json j = io::rule_to_json(T.sig, C);
  if (!same_rule(io::rule_from_json(T.sig, io::parse_json_text(io::dump_canonical(j))), C))
    fail(ErrorKind::WitnessFailure, "congruence rule does not round-trip");
  emit(o, j, pretty::show_rule(T.sig, C));
  return kPass;
}

int cmd_flatten(const Options& o, const fs::path& spec, const std::optional<std::string>& rule) {
  Loaded L = load_theory(spec);
  const RawTypeTheory& T = L.file.theory;
  if (rule) {
    auto r = T.find_rule(*rule);
    if (!r) throw InputError("UnknownName: no rule '" + *rule + "'");
    emit(o, io::rule_to_json(T.sig, T.rules[*r]), pretty::show_rule(T.sig, T.rules[*r]));
    return kPass;
  }
  std::string text;
  for (const auto& R : T.rules) text += pretty::show_rule(T.sig, R) + "\n";
  emit(o, io::theory_to_json(L.file), text);
  return kPass;
}

// ---- replacement

int cmd_replace_step(const Options& o, const fs::path& script) {
  json j = input_stage([&] { return io::read_json_file(script); });
  if (!j.is_object() || !j.contains("target") || !j.contains("steps") || !j["steps"].is_array())
    throw InputError("ParseError: a replacement script has \"target\" and \"steps\"");
  io::TheoryFile target;
  if (j["target"].is_string()) {
    fs::path tp = j["target"].get<std::string>();
    if (tp.is_relative()) tp = script.parent_path() / tp;
    target = load_theory(tp).file;
  } else {
    target = input_stage([&] { return io::theory_from_json(j["target"]); });
  }
  ReplacementBuilder B = start_replacement(target.theory);
  std::string text;
  for (std::size_t i = 0; i < j["steps"].size(); ++i) {
    ReplacementStep s = input_stage(
        [&] { return io::step_from_json(B.theory, target.theory, j["steps"][i], "steps[" + std::to_string(i) + "]"); });
    StepResult r = replacement_step(B, s);
    text += "step " + std::to_string(i) + ": " + B.theory.rules[r.rule].name + "\n";
    text += pretty::show_rule(B.theory.sig, B.theory.rules[r.rule]);
    if (r.symbol)
      text += "  " + B.theory.sig.sym(*r.symbol).name + " |-> " +
              pretty::show_expr(target.theory.sig, B.theory.sig.sym(*r.symbol).arity, B.map.map.images[*r.symbol]) + "\n";
  }
  if (auto c = check_theory_map(B.theory, target.theory, B.map, true); !c) fail(ErrorKind::WitnessFailure, c.message);
  AcceptabilityReport acc = check_acceptable_theory(B.theory, B.witnesses);
  WellFoundedReport wf = check_well_founded_theory(B.theory, B.witnesses, B.order);
  text += std::string("acceptable: ") + (acc.acceptable() ? "yes" : "no") + "\nwell-founded: " +
          (wf.well_founded ? "yes" : "no") + "\n";
  json out{{"theory", io::theory_to_json(io::TheoryFile{target.name + "-replacement", B.theory, B.witnesses, B.order})},
           {"map", io::theory_map_to_json(B.theory, target.theory, B.map)},
           {"acceptable", acc.acceptable()},
           {"well_founded", wf.well_founded}};
  emit(o, out, text);
  return wf.well_founded ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gtt: raw type theories, derivations and their metatheory"};
  app.require_subcommand(1);
  Options o;
  std::string out;
  auto common = [&](CLI::App* s) {
    s->add_option("--out", out, "write the result to this file");
    s->add_flag("--pretty", o.pretty, "ASCII rendering instead of JSON");
    s->add_flag("--json", o.json_report, "machine-readable report");
    s->add_flag("--weak", o.weak, "weak presuppositivity");
  };

  std::string theory, deriv, deriv2, rule, script;
  std::optional<std::string> flat_rule;
  bool acc = false, wf = false, wp = false;

  auto* ct = app.add_subcommand("check-theory", "run acceptability / well-foundedness / well-presentedness checks");
  ct->add_option("theory", theory)->required();
  ct->add_flag("--acceptable", acc);
  ct->add_flag("--well-founded", wf);
  ct->add_flag("--well-presented", wp);
  common(ct);
  auto* cd = app.add_subcommand("check-derivation", "check a derivation and print its conclusion");
  cd->add_option("theory", theory)->required();
  cd->add_option("derivation", deriv)->required();
  common(cd);
  auto* fl = app.add_subcommand("flatten", "elaborate a well-presented spec into a raw theory");
  fl->add_option("spec", theory)->required();
  fl->add_option("rule", flat_rule);
  common(fl);
  auto* cg = app.add_subcommand("congruence", "congruence rule of a rule");
  cg->add_option("theory", theory)->required();
  cg->add_option("rule", rule)->required();
  common(cg);
  auto* ps = app.add_subcommand("presup", "derive the presuppositions of a derivation's conclusion");
  ps->add_option("theory", theory)->required();
  ps->add_option("derivation", deriv)->required();
  common(ps);
  auto* es = app.add_subcommand("elim-subst", "eliminate substitution nodes");
  es->add_option("theory", theory)->required();
  es->add_option("derivation", deriv)->required();
  common(es);
  auto* nt = app.add_subcommand("natural-type", "natural type of a term");
  nt->add_option("theory", theory)->required();
  nt->add_option("input", deriv, "term file or typing derivation")->required();
  common(nt);
  auto* iv = app.add_subcommand("invert", "inversion of a derivation");
  iv->add_option("theory", theory)->required();
  iv->add_option("derivation", deriv)->required();
  common(iv);
  auto* ut = app.add_subcommand("unique-typing", "type equality from two typings of a term");
  ut->add_option("theory", theory)->required();
  ut->add_option("first", deriv)->required();
  ut->add_option("second", deriv2)->required();
  common(ut);
  auto* rs = app.add_subcommand("replace-step", "run a replacement script");
  rs->add_option("script", script)->required();
  common(rs);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInput;
  }
  if (!out.empty()) o.out = fs::path(out);

  try {
    if (*ct) return cmd_check_theory(o, theory, acc, wf, wp);
    if (*cd) return cmd_check_derivation(o, theory, deriv);
    if (*fl) return cmd_flatten(o, theory, flat_rule);
    if (*cg) return cmd_congruence(o, theory, rule);
    if (*ps) return cmd_presup(o, theory, deriv);
    if (*es) return cmd_elim_subst(o, theory, deriv);
    if (*nt) return cmd_natural_type(o, theory, deriv);
    if (*iv) return cmd_invert(o, theory, deriv);
    if (*ut) return cmd_unique_typing(o, theory, deriv, deriv2);
    if (*rs) return cmd_replace_step(o, script);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const KernelError& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return kFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
  return kInput;
}
