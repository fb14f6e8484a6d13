// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gtt/builders.hpp"
#include "gtt/bundled.hpp"
#include "gtt/json_io.hpp"
#include "gtt/maps.hpp"
#include "gtt/metatheory.hpp"
#include "gtt/presentation.hpp"
#include "gtt/pretty.hpp"
#include "support/contexts.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

using namespace gtt;

namespace {

constexpr auto Ix = ScopeSystem::DeBruijnIndices;
constexpr auto Lv = ScopeSystem::DeBruijnLevels;

// pinned sizes and limits
constexpr std::size_t kSubstCases = 1000;
constexpr int kSubstDepth = 4;
constexpr std::size_t kSubstSignatureSize = 5;
constexpr double kSubstSeconds = 10;
constexpr std::size_t kInstCases = 500;
constexpr int kInstDepth = 3;
constexpr double kInstSeconds = 30;
constexpr std::size_t kCorpusSize = 60;
constexpr std::size_t kCorpusMinimum = 50;
constexpr double kPresupSeconds = 60;
constexpr std::size_t kSubstCorpusSize = 24;
constexpr std::size_t kTypingPairs = 30;
constexpr Scope kContextScope = 3;
constexpr int kContextDepth = 2;
constexpr double kContextSeconds = 60;
constexpr std::uint64_t kSeed = 20261015;

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
  void require(bool ok, const std::string& why) {
    if (!ok) fail(why);
  }
};

struct Criterion {
  int id;
  const char* title;
  std::optional<double> limit;
  std::function<Outcome()> run;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string concl(const RawTypeTheory& T, const Judgement& J) { return pretty::show_judgement(T.sig, {}, J); }

void concludes(Outcome& out, const RawTypeTheory& T, const Derivation& d, const Judgement& J, const std::string& what) {
  const CheckResult r = check_derivation_concludes(T, {}, d, J);
  out.require(r.ok, what + ": " + r.message);
}

std::size_t count_kind(const Derivation& d, Derivation::Kind k) {
  std::size_t n = d.kind == k ? 1 : 0;
  for (const auto& c : d.children) n += count_kind(c, k);
  return n;
}

Outcome laws(const std::vector<oracle::LawResult>& rs, std::size_t min_cases) {
  Outcome out;
  std::size_t least = SIZE_MAX;
  for (const auto& r : rs) {
    least = std::min(least, r.cases);
    out.require(r.failures == 0, r.law + ": " + r.first_failure);
  }
  out.require(!rs.empty() && least >= min_cases, "too few cases");
  if (out.pass) out.detail = std::to_string(rs.size()) + " laws x " + std::to_string(least) + " cases";
  return out;
}

bool has_cycle_with(const WellFoundedReport& r, const std::vector<std::string>& names) {
  return std::any_of(r.cycles.begin(), r.cycles.end(), [&](const std::vector<std::string>& c) {
    return std::all_of(names.begin(), names.end(),
                       [&](const std::string& n) { return std::find(c.begin(), c.end(), n) != c.end(); });
  });
}

std::vector<bundled::Bundle> all_bundles() {
  std::vector<bundled::Bundle> out{bundled::mltt_pi(), bundled::mltt_pi_base(), bundled::type_in_type(),
                                   bundled::cyclic_quantifier(), bundled::universe_el()};
  for (int k = 1; k <= 6; ++k) out.push_back(bundled::app_variant(k));
  return out;
}

// ---- criteria

Outcome substitution_algebra() {
  Outcome out;
  if (oracle::small_signature().symbols.size() != kSubstSignatureSize) out.fail("signature size");
  for (auto sys : {Ix, Lv}) {
    const Outcome o = laws(oracle::substitution_laws(sys, kSeed, kSubstCases, kSubstDepth), kSubstCases);
    if (!o.pass) out.fail(std::string(scope_system_name(sys)) + ": " + o.detail);
    else if (out.pass) out.detail = o.detail + " per scope system";
  }
  return out;
}

Outcome instantiation_boilerplate() {
  Outcome out;
  for (auto sys : {Ix, Lv}) {
    const Outcome o = laws(oracle::instantiation_laws(sys, kSeed + 1, kInstCases, kInstDepth), kInstCases);
    if (!o.pass) out.fail(std::string(scope_system_name(sys)) + ": " + o.detail);
    else if (out.pass) out.detail = o.detail + " per scope system";
  }
  return out;
}

Outcome app_variants() {
  std::vector<int> tight, presup;
  for (int k = 1; k <= 6; ++k) {
    const bundled::Bundle b = bundled::app_variant(k);
    const RawRule& R = b.theory.rules[b.theory.rule_index("app-" + std::to_string(k))];
    if (check_tight(R).tight) tight.push_back(k);
    const auto w = b.witnesses.find(R.name);
    if (w != b.witnesses.end() && check_presuppositive(b.theory, R, w->second, false).ok) presup.push_back(k);
  }
  auto show = [](const std::vector<int>& v) {
    std::string s = "{";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "}";
  };
  Outcome out;
  out.detail = "tight " + show(tight) + ", presuppositive " + show(presup);
  out.pass = tight == std::vector<int>{1, 2, 3, 6} && presup == std::vector<int>{1, 2, 4, 6};
  return out;
}

Outcome congruence_generation() {
  Outcome out;
  const bundled::Bundle pi = bundled::mltt_pi();
  const RawRule C = congruence_rule(pi.theory.rules[pi.theory.rule_index("Pi-form")]);
  const std::string got = io::dump_canonical(io::rule_to_json(pi.theory.sig, C));
  const std::string hand = io::dump_canonical(io::rule_to_json(pi.theory.sig, bundled::pi_congruence_expected()));
  const std::string committed = slurp(std::filesystem::path(GTT_SOURCE_DIR) / "theories" / "pi_congruence_expected.json");
  out.require(C.premises.size() == 6, "premise count " + std::to_string(C.premises.size()));
  out.require(got == hand, "differs from the hand-encoded rule");
  out.require(got == committed, "differs from the committed fixture");
  if (out.pass) out.detail = std::to_string(got.size()) + " bytes identical";
  return out;
}

Outcome acceptability() {
  Outcome out;
  for (const auto& b : {bundled::mltt_pi(), bundled::type_in_type()})
    out.require(check_acceptable_theory(b.theory, b.witnesses).acceptable(), b.name + " not acceptable");
  const bundled::Bundle tt = bundled::type_in_type();
  const WellFoundedReport rt = check_well_founded_theory(tt.theory, tt.witnesses);
  out.require(!rt.well_founded && has_cycle_with(rt, {"u-intro", "El-form"}), "type_in_type: u-intro/El-form cycle");
  const bundled::Bundle q = bundled::cyclic_quantifier();
  const WellFoundedReport rq = check_well_founded_theory(q.theory, q.witnesses);
  out.require(!rq.well_founded && has_cycle_with(rq, {"Q-form"}), "cyclic_quantifier: Q-form cycle");
  const Elaboration e = elaborate_theory(bundled::mltt_pi_spec());
  out.require(e.acceptability.acceptable(), "elaborated spec not acceptable");
  out.require(e.well_founded.well_founded, "elaborated spec not well-founded");
  if (out.pass) out.detail = "cycles found: " + std::to_string(rt.cycles.size()) + " + " + std::to_string(rq.cycles.size());
  return out;
}

Outcome presuppositions_theorem() {
  Outcome out;
  const bundled::Bundle b = bundled::mltt_pi_base();
  const auto items = corpus::mltt_corpus(b, kSeed, kCorpusSize);
  out.require(items.size() >= kCorpusMinimum, "corpus too small");
  std::size_t derived = 0;
  for (const auto& it : items) {
    const Judgement J = check_derivation(b.theory, {}, it.deriv);
    const Family<Derivation> ps = derive_presuppositions(b.theory, b.witnesses, {}, it.deriv);
    const Family<Judgement> want = presuppositions(J);
    if (ps.size() != want.size()) {
      out.fail(it.label + ": wrong number of presuppositions");
      continue;
    }
    for (std::size_t j = 0; j < ps.size(); ++j) concludes(out, b.theory, ps[j], want[j], it.label);
    derived += ps.size();
  }
  if (out.pass) out.detail = std::to_string(items.size()) + " derivations, " + std::to_string(derived) + " presuppositions";
  return out;
}

Outcome substitution_elimination() {
  Outcome out;
  const bundled::Bundle b = bundled::mltt_pi_base();
  auto items = corpus::mltt_corpus(b, kSeed, kCorpusSize);
  for (auto& it : corpus::substitution_corpus(b, kSeed, kSubstCorpusSize)) items.push_back(std::move(it));
  std::size_t subst = 0, eqsubst = 0;
  for (const auto& it : items) {
    subst += count_kind(it.deriv, Derivation::Kind::Subst);
    eqsubst += count_kind(it.deriv, Derivation::Kind::EqSubst);
    const Judgement J = check_derivation(b.theory, {}, it.deriv);
    const Derivation e = eliminate_substitution(b.theory, it.deriv);
    concludes(out, b.theory, e, J, it.label);
    out.require(is_substitution_free(e), it.label + ": substitution left");
    out.require(eliminate_substitution(b.theory, e) == e, it.label + ": not a fixed point");
  }
  out.require(subst > 0 && eqsubst > 0, "corpus lacks Subst or EqSubst nodes");
  if (out.pass)
    out.detail = std::to_string(items.size()) + " derivations, " + std::to_string(subst) + " Subst, " +
                 std::to_string(eqsubst) + " EqSubst nodes";
  return out;
}

Outcome typing_uniqueness() {
  Outcome out;
  const bundled::Bundle b = bundled::mltt_pi_base();
  const auto pairs = corpus::typing_pairs(b, kSeed, kTypingPairs);
  for (const auto& p : pairs) {
    const Judgement J1 = check_derivation(b.theory, {}, p.d1), J2 = check_derivation(b.theory, {}, p.d2);
    if (J1.head() != J2.head() || J1.ctx != J2.ctx) {
      out.fail("pair types different terms");
      continue;
    }
    const Judgement want = Judgement::ty_eq(J1.ctx, J1.type(), J2.type());
    const Derivation dA = derive_presuppositions(b.theory, b.witnesses, {}, p.d1).at(0);
    const Derivation dB = derive_presuppositions(b.theory, b.witnesses, {}, p.d2).at(0);
    concludes(out, b.theory, unique_typing(b.theory, dA, dB, p.d1, p.d2), want, concl(b.theory, want));
    concludes(out, b.theory, unique_typing(b.theory, b.witnesses, p.d1, p.d2), want, "corollary " + concl(b.theory, want));
  }
  out.require(!pairs.empty(), "no pairs");
  if (out.pass) out.detail = std::to_string(pairs.size()) + " pairs, both variants";
  return out;
}

Outcome inversion() {
  Outcome out;
  const bundled::Bundle b = bundled::mltt_pi_base();
  std::vector<Derivation> terms;
  for (const auto& it : corpus::mltt_corpus(b, kSeed, kCorpusSize))
    if (check_derivation(b.theory, {}, it.deriv).form == JudgementForm::IsTm) terms.push_back(it.deriv);
  for (const auto& p : corpus::typing_pairs(b, kSeed, kTypingPairs)) terms.push_back(p.d2);
  for (const auto& d : terms) {
    const Judgement J = check_derivation(b.theory, {}, d);
    const Derivation inv = invert(b.theory, b.witnesses, d);
    concludes(out, b.theory, inv, J, concl(b.theory, J));
    out.require(is_inversion_canonical(b.theory, inv), "not canonical: " + concl(b.theory, J));
    const Judgement core = check_derivation(b.theory, {}, inv.children.at(2));
    out.require(core.type() == natural_type(b.theory, core.ctx, core.head()), "core type: " + concl(b.theory, J));
  }

  // app(A, B, s, t) has natural type B[t/x], generically and on the fixture
  const bundled::Bundle pi = bundled::mltt_pi();
  const RawTypeTheory& T = pi.theory;
  const Expr A = Expr::meta(0, {}), Bx = Expr::meta(1, {Expr::var(0)}), s = Expr::meta(2, {}), t = Expr::meta(3, {});
  const Expr app = make_sym(T.sig, T.symbol_index("app"), {A, Bx, s, t});
  out.require(natural_type(T, RawContext(), app) == substitute_expr(Ix, RawSubstitution{0, 1, {t}}, Bx),
              "natural type of a generic application");
  const io::json tf = io::read_json_file(std::filesystem::path(GTT_SOURCE_DIR) / "theories" / "derivations" / "app_term.json");
  const Arity metas = io::arity_from_json(tf.at("arity"));
  const Expr nt = natural_type(T, io::context_from_json(T.sig, metas, tf.at("cxt")), io::expr_from_json(T.sig, metas, tf.at("term")));
  out.require(pretty::show_expr(T.sig, metas, nt) == "B(t)", "fixture natural type " + pretty::show_expr(T.sig, metas, nt));
  if (out.pass) out.detail = std::to_string(terms.size()) + " term derivations";
  return out;
}

Outcome context_definitions() {
  Outcome out;
  bundled::Bundle u = bundled::universe_el();
  out.require(u.theory.sig.symbols.size() == 2, "signature size");
  std::size_t flat = 0, seq = 0, wf = 0;
  for (auto sys : {Ix, Lv}) {
    u.theory.sys = sys;
    const oracle::ContextAgreement r =
        oracle::compare_context_definitions(u.theory, oracle::universe_el_deriver(u.theory), kContextScope, kContextDepth);
    out.require(r.disagreements == 0, std::string(scope_system_name(sys)) + ": " + r.first_disagreement);
    flat += r.flat;
    seq += r.sequential;
    wf += r.well_formed;
  }
  if (out.pass)
    out.detail = std::to_string(flat) + " flat, " + std::to_string(seq) + " sequential, " + std::to_string(wf) +
                 " well-formed, no disagreement";
  return out;
}

Outcome replacement() {
  Outcome out;
  const bundled::Bundle tt = bundled::type_in_type();
  ReplacementBuilder B = start_replacement(tt.theory);
  std::vector<StepResult> res;
  for (const auto& s : bundled::type_in_type_replacement()) res.push_back(replacement_step(B, s));
  std::vector<std::string> names;
  for (const auto& S : B.theory.sig.symbols) names.push_back(S.name);
  out.require(names == std::vector<std::string>{"U", "El'", "u'"}, "symbols");
  if (!out.pass) return out;
  const Signature& sig = B.theory.sig;
  const Judgement eq = Judgement::ty_eq(
      RawContext(), make_sym(sig, 0), make_sym(sig, 1, {make_sym(sig, 2)}));
  out.require(std::any_of(B.theory.rules.begin(), B.theory.rules.end(),
                          [&](const RawRule& R) { return R.premises.empty() && R.conclusion == eq; }),
              "no rule U == El'(u')");
  out.require(check_theory_map(B.theory, tt.theory, B.map, true).ok, "replacement map does not check");
  out.require(check_acceptable_theory(B.theory, B.witnesses).acceptable(), "replacement not acceptable");
  out.require(check_well_founded_theory(B.theory, B.witnesses, B.order).well_founded, "replacement not well-founded");

  std::size_t sections = 0;
  std::string skipped;
  for (const auto& b : all_bundles()) {
    if (!check_acceptable_theory(b.theory, b.witnesses).acceptable()) continue;
    // a premise that mentions its own metavariable has no sequential reading,
    // so there is nothing to replace; the section must refuse it
    if (!check_well_founded_theory(b.theory, b.witnesses).rules_well_founded) {
      std::optional<ErrorKind> k;
      try {
        section_s(b.theory, b.witnesses);
      } catch (const KernelError& e) {
        k = e.kind();
      }
      out.require(k == ErrorKind::NotSequential, b.name + ": section of a non-sequential theory");
      skipped += " " + b.name;
      continue;
    }
    const Section S = section_s(b.theory, b.witnesses);
    out.require(section_is_retraction(b.theory.sys, S), b.name + ": t.s is not the identity");
    ++sections;
  }
  out.require(sections >= 4, "too few sections");
  if (out.pass) out.detail = "U, El', u' and U == El'(u'); " + std::to_string(sections) + " sections with t.s = id; not sequential:" + skipped;
  return out;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "substitution algebra", kSubstSeconds, substitution_algebra},
      {2, "instantiation boilerplate", kInstSeconds, instantiation_boilerplate},
      {3, "application rule variants", std::nullopt, app_variants},
      {4, "congruence of Pi-formation", std::nullopt, congruence_generation},
      {5, "acceptability and well-foundedness", std::nullopt, acceptability},
      {6, "presuppositions", kPresupSeconds, presuppositions_theorem},
      {7, "substitution elimination", std::nullopt, substitution_elimination},
      {8, "uniqueness of typing", std::nullopt, typing_uniqueness},
      {9, "inversion", std::nullopt, inversion},
      {10, "context definitions agree", kContextSeconds, context_definitions},
      {11, "replacement and section", std::nullopt, replacement},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit && secs > *c.limit) o.fail("over the time limit; " + o.detail);
    char timing[64];
    if (c.limit) std::snprintf(timing, sizeof timing, "%.2fs / %.0fs", secs, *c.limit);
    else std::snprintf(timing, sizeof timing, "%.2fs", secs);
    std::printf("%-4s criterion %2d  %-36s %-18s %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, timing, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
