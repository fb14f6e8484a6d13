#include "gtt/builders.hpp"

namespace gtt::mk {

Instantiation inst_of(const RawRule& R, const RawContext& gamma, std::vector<Expr> args) {
  return Instantiation{R.arity, gamma.scope(), std::move(args)};
}

namespace {

Derivation eq_node(EquivRule k, const RawContext& G, std::vector<Expr> args, std::vector<Derivation> ch) {
  return Derivation::equiv(k, inst_of(equivalence_rule(k), G, std::move(args)), G, std::move(ch));
}

}  // namespace

Derivation ty_refl(const RawContext& G, Expr A, Derivation dA) {
  return eq_node(EquivRule::TyRefl, G, {std::move(A)}, {std::move(dA)});
}

Derivation ty_sym(const RawContext& G, Expr A, Expr B, Derivation dA, Derivation dB, Derivation dAB) {
  return eq_node(EquivRule::TySym, G, {std::move(A), std::move(B)}, {std::move(dA), std::move(dB), std::move(dAB)});
}

Derivation ty_trans(const RawContext& G, Expr A, Expr B, Expr C, Derivation dA, Derivation dB, Derivation dC,
                    Derivation dAB, Derivation dBC) {
  return eq_node(EquivRule::TyTrans, G, {std::move(A), std::move(B), std::move(C)},
                 {std::move(dA), std::move(dB), std::move(dC), std::move(dAB), std::move(dBC)});
}

Derivation tm_refl(const RawContext& G, Expr A, Expr s, Derivation dA, Derivation ds) {
  return eq_node(EquivRule::TmRefl, G, {std::move(A), std::move(s)}, {std::move(dA), std::move(ds)});
}

Derivation tm_sym(const RawContext& G, Expr A, Expr s, Expr t, Derivation dA, Derivation ds, Derivation dt,
                  Derivation dst) {
  return eq_node(EquivRule::TmSym, G, {std::move(A), std::move(s), std::move(t)},
                 {std::move(dA), std::move(ds), std::move(dt), std::move(dst)});
}

Derivation tm_trans(const RawContext& G, Expr A, Expr s, Expr t, Expr u, Derivation dA, Derivation ds, Derivation dt,
                    Derivation du, Derivation dst, Derivation dtu) {
  return eq_node(EquivRule::TmTrans, G, {std::move(A), std::move(s), std::move(t), std::move(u)},
                 {std::move(dA), std::move(ds), std::move(dt), std::move(du), std::move(dst), std::move(dtu)});
}

Derivation conv_tm(const RawContext& G, Expr A, Expr B, Expr s, Derivation dA, Derivation dB, Derivation ds,
                   Derivation dAB) {
  return Derivation::conv(ConvRule::Tm, inst_of(conversion_rule(ConvRule::Tm), G, {std::move(A), std::move(B), std::move(s)}),
                          G, {std::move(dA), std::move(dB), std::move(ds), std::move(dAB)});
}

Derivation conv_eq(const RawContext& G, Expr A, Expr B, Expr s, Expr t, Derivation dA, Derivation dB, Derivation ds,
                   Derivation dt, Derivation dst, Derivation dAB) {
  return Derivation::conv(
      ConvRule::Eq,
      inst_of(conversion_rule(ConvRule::Eq), G, {std::move(A), std::move(B), std::move(s), std::move(t)}), G,
      {std::move(dA), std::move(dB), std::move(ds), std::move(dt), std::move(dst), std::move(dAB)});
}

Derivation rule(const RawTypeTheory& T, const std::string& name, const RawContext& G, std::vector<Expr> args,
                std::vector<Derivation> ch) {
  std::size_t r = T.rule_index(name);
  return Derivation::rule(r, inst_of(T.rules[r], G, std::move(args)), G, std::move(ch));
}

}  // namespace gtt::mk
