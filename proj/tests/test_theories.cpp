#include <doctest.h>

#include "gtt/builders.hpp"
#include "gtt/bundled.hpp"
#include "support/expect.hpp"

using namespace gtt;
using gtt::testing::error_kind;

namespace {

constexpr auto Ix = ScopeSystem::DeBruijnIndices;
using C = SyntacticClass;

Expr v(Position i) { return Expr::var(i); }
Expr M(std::size_t i, std::vector<Expr> a = {}) { return Expr::meta(i, std::move(a)); }
RawContext cx(std::vector<Expr> ts = {}) { return RawContext(std::move(ts)); }

struct Base {
  bundled::Bundle b = bundled::mltt_pi_base();
  const RawTypeTheory& T = b.theory;
  Expr S(const std::string& n, std::vector<Expr> a = {}) const {
    return make_sym(T.sig, T.symbol_index(n), std::move(a));
  }
  Expr o() const { return S("o"); }
  Expr c() const { return S("c"); }
  Expr arrow(Expr a, Expr b) const { return S("Pi", {std::move(a), std::move(b)}); }
  Derivation R(const std::string& n, const RawContext& G, std::vector<Expr> a = {}, std::vector<Derivation> ch = {}) const {
    return mk::rule(T, n, G, std::move(a), std::move(ch));
  }
  Derivation d_o(const RawContext& G = {}) const { return R("o-form", G); }
  Derivation d_oo() const { return R("Pi-form", cx(), {o(), o()}, {d_o(), d_o(cx({o()}))}); }
  // |- lam(o, o, x.x) : Pi(o, o)
  Derivation d_id() const {
    const RawContext G({o()});
    return R("lam-intro", cx(), {o(), o(), v(0)}, {d_o(), d_o(G), Derivation::var(G, 0, d_o(G))});
  }
};

// arity A, B(x); premises |- A type, x : A |- B(x) type
const Arity pi_arity{ArityArg{C::Ty, 0, "A"}, ArityArg{C::Ty, 1, "B"}};

// [Pi(A, B), A] |- app(A, B, #0, #1) : B(#1), derived from the two premises
RawRule hypothetical_app_rule(const Base& B) {
  const Expr Pi = B.arrow(M(0), M(1, {v(0)}));
  return RawRule{"app-hyp",
                 pi_arity,
                 {Judgement::is_ty(cx(), M(0)), Judgement::is_ty(cx({M(0)}), M(1, {v(0)}))},
                 Judgement::is_tm(cx({Pi, M(0)}), B.S("app", {M(0), M(1, {v(0)}), v(0), v(1)}), M(1, {v(1)}))};
}

Derivation hypothetical_app_witness(const Base& B) {
  const Expr A = M(0), Bx = M(1, {v(0)});
  const RawContext G({B.arrow(A, Bx), A});
  const RawContext GA = extend_context(Ix, G, {A});
  const Derivation wA = bundled::weaken_closed(G, Judgement::is_ty(cx(), A), Derivation::hyp(0));
  const Derivation wB = Derivation::subst(GA, RawSubstitution{3, 1, {v(0)}}, all_positions(1),
                                          Judgement::is_ty(cx({A}), Bx), {Derivation::hyp(1)});
  const Derivation dPi = B.R("Pi-form", G, {A, Bx}, {wA, wB});
  return B.R("app-elim", G, {A, Bx, v(0), v(1)}, {wA, wB, Derivation::var(G, 0, dPi), Derivation::var(G, 1, wA)});
}

}  // namespace

TEST_CASE("hypotheses and rule nodes") {
  Base B;
  const Judgement J = Judgement::is_ty(cx(), B.o());
  CHECK(check_derivation(B.T, {J}, Derivation::hyp(0)) == J);
  CHECK(error_kind([&] { check_derivation(B.T, {J}, Derivation::hyp(1)); }) == ErrorKind::IndexOutOfRange);

  const Derivation d = B.d_oo();
  CHECK(check_derivation(B.T, {}, d) == Judgement::is_ty(cx(), B.arrow(B.o(), B.o())));
  CHECK(derivation_size(d) == 3);
  CHECK(derivation_depth(d) == 2);
  CHECK(is_hypothesis_free(d));
  CHECK(is_substitution_free(d));

  CHECK(check_derivation(B.T, {}, B.d_id()).head() == B.S("lam", {B.o(), B.o(), v(0)}));
  const Derivation app = B.R("app-elim", cx(), {B.o(), B.o(), B.S("lam", {B.o(), B.o(), v(0)}), B.c()},
                             {B.d_o(), B.d_o(cx({B.o()})), B.d_id(), B.R("c-intro", cx())});
  CHECK(check_derivation(B.T, {}, app).type() == B.o());
  CHECK(conclusion_of(B.T, {}, app) == check_derivation(B.T, {}, app));
}

TEST_CASE("mismatches report the path") {
  Base B;
  const RawContext G({B.o()});
  Derivation bad = B.R("Pi-form", cx(), {B.o(), B.o()}, {B.d_o(), B.R("o_alt-form", G)});
  try {
    check_derivation(B.T, {}, bad);
    FAIL("accepted");
  } catch (const KernelError& e) {
    CHECK(e.kind() == ErrorKind::PremiseMismatch);
    CHECK(e.path() == std::vector<std::size_t>{1});
  }
  // variable typed by the wrong type derivation, two levels down
  Derivation deep = B.R("lam-intro", cx(), {B.o(), B.o(), v(0)},
                        {B.d_o(), B.d_o(G), Derivation::var(G, 0, B.R("o_alt-form", G))});
  try {
    check_derivation(B.T, {}, deep);
    FAIL("accepted");
  } catch (const KernelError& e) {
    CHECK(e.kind() == ErrorKind::PremiseMismatch);
    CHECK(e.path() == std::vector<std::size_t>{2, 0});
  }
  Derivation few = B.R("Pi-form", cx(), {B.o(), B.o()}, {B.d_o()});
  CHECK(error_kind([&] { check_derivation(B.T, {}, few); }) == ErrorKind::ChildCountMismatch);
  CHECK_FALSE(check_derivation_concludes(B.T, {}, B.d_oo(), Judgement::is_ty(cx(), B.o())).ok);
}

TEST_CASE("structural nodes") {
  Base B;
  const Expr o = B.o(), oa = B.S("o_alt");
  const Derivation dalt = B.R("o_alt-form", cx()), def = B.R("o_alt-def", cx());
  CHECK(check_derivation(B.T, {}, mk::ty_refl(cx(), o, B.d_o())) == Judgement::ty_eq(cx(), o, o));
  const Derivation sym = mk::ty_sym(cx(), oa, o, dalt, B.d_o(), def);
  CHECK(check_derivation(B.T, {}, sym) == Judgement::ty_eq(cx(), o, oa));
  const Derivation conv = mk::conv_tm(cx(), o, oa, B.c(), B.d_o(), dalt, B.R("c-intro", cx()), sym);
  CHECK(check_derivation(B.T, {}, conv) == Judgement::is_tm(cx(), B.c(), oa));
  const Derivation w = bundled::weaken_closed(cx({oa}), Judgement::is_ty(cx(), o), B.d_o());
  CHECK(check_derivation(B.T, {}, w) == Judgement::is_ty(cx({oa}), o));
  CHECK_FALSE(is_substitution_free(w));
  CHECK(provenance(conv).rules == std::set<std::size_t>{B.T.rule_index("o-form"), B.T.rule_index("o_alt-form"),
                                                        B.T.rule_index("o_alt-def"), B.T.rule_index("c-intro")});
}

TEST_CASE("translation along simple theory maps") {
  const bundled::Bundle pi = bundled::mltt_pi();
  Base B;
  SimpleTheoryMap incl;
  for (const auto& s : pi.theory.sig.symbols) incl.sig.sym.push_back(B.T.symbol_index(s.name));
  for (const auto& r : pi.theory.rules) incl.rules.push_back(B.T.rule_index(r.name));
  REQUIRE_NOTHROW(validate_simple_map(incl, pi.theory, B.T));

  // generic: |- A type  gives  |- Pi(A, A) type
  const Arity alpha{ArityArg{C::Ty, 0, "A"}};
  const Family<Judgement> hyps{Judgement::is_ty(cx(), M(0))};
  const Derivation d = mk::rule(pi.theory, "Pi-form", cx(), {M(0), M(0)},
                                {Derivation::hyp(0), bundled::weaken_closed(cx({M(0)}), hyps[0], Derivation::hyp(0))});
  const Judgement J = check_derivation(pi.theory, hyps, d, alpha);
  const Derivation td = translate_derivation(incl, d);
  CHECK(check_derivation(B.T, hyps, td, alpha) == translate_judgement(incl.sig, J));

  SimpleTheoryMap id;
  id.sig = SignatureMap::identity(pi.theory.sig);
  for (std::size_t r = 0; r < pi.theory.rules.size(); ++r) id.rules.push_back(r);
  CHECK(translate_derivation(id, d) == d);
  CHECK(translate_derivation(compose_simple_maps(incl, id), d) == td);

  SimpleTheoryMap bad = incl;
  std::swap(bad.rules[0], bad.rules[1]);
  CHECK(error_kind([&] { validate_simple_map(bad, pi.theory, B.T); }).has_value());
}

TEST_CASE("instantiating derivations") {
  Base B;
  const Expr o = B.o();
  const Arity alpha{ArityArg{C::Ty, 0, "A"}};
  const Family<Judgement> hyps{Judgement::is_ty(cx(), M(0))};
  const Derivation d = B.R("Pi-form", cx(), {M(0), M(0)},
                           {Derivation::hyp(0), bundled::weaken_closed(cx({M(0)}), hyps[0], Derivation::hyp(0))});
  const Judgement J = check_derivation(B.T, hyps, d, alpha);
  const RawContext G({B.arrow(o, o)});
  const Instantiation I{alpha, 1, {B.arrow(o, o)}};
  const Derivation di = instantiate_derivation(Ix, I, G, d);
  const Family<Judgement> ihyps{instantiate_judgement(Ix, I, G, hyps[0])};
  CHECK(check_derivation(B.T, ihyps, di) == instantiate_judgement(Ix, I, G, J));
  // grafting a derivation of the instantiated hypothesis removes it
  const Derivation closed = graft_derivation(di, {B.R("Pi-form", G, {o, o}, {B.d_o(G), B.d_o(extend_context(Ix, G, {o}))})});
  CHECK(is_hypothesis_free(closed));
  CHECK(check_derivation(B.T, {}, closed) == instantiate_judgement(Ix, I, G, J));
  CHECK(error_kind([&] { instantiate_derivation(Ix, I, cx(), d); }) == ErrorKind::ScopeMismatch);
}

TEST_CASE("derived and admissible rules") {
  Base B;
  const RawRule R = hypothetical_app_rule(B);
  const Derivation w = hypothetical_app_witness(B);
  const CheckResult ok = check_derived_rule(B.T, R, w);
  CHECK_MESSAGE(ok.ok, ok.message);

  RawRule wrong = R;
  wrong.conclusion.slots[0] = M(0);
  CHECK_FALSE(check_derived_rule(B.T, wrong, w).ok);

  const RawRule one{"Pi-oo", {}, {}, Judgement::is_ty(cx(), B.arrow(B.o(), B.o()))};
  CHECK(check_derived_rule(B.T, one, B.d_oo()).ok);

  // every instance is then admissible, witnessed by the instantiated tree
  const Instantiation I{pi_arity, 0, {B.o(), B.arrow(B.o(), B.o())}};
  const Derivation wi = instantiate_derivation(Ix, I, cx(), w);
  const CheckResult adm = check_admissible_instance(B.T, R, I, cx(), wi);
  CHECK_MESSAGE(adm.ok, adm.message);
  CHECK_FALSE(check_admissible_instance(B.T, R, Instantiation{pi_arity, 1, I.args}, cx(), wi).ok);
}
