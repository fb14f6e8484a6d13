#pragma once

// Shorthands for structural derivation nodes. Every builder takes the
// ambient context and the expressions the closure rule is instantiated with,
// then the premise derivations in premise order.

#include "gtt/theories.hpp"

namespace gtt::mk {

// instantiation of a fixed structural rule over gamma
Instantiation inst_of(const RawRule& R, const RawContext& gamma, std::vector<Expr> args);

Derivation ty_refl(const RawContext& G, Expr A, Derivation dA);
// B == A from A == B
Derivation ty_sym(const RawContext& G, Expr A, Expr B, Derivation dA, Derivation dB, Derivation dAB);
Derivation ty_trans(const RawContext& G, Expr A, Expr B, Expr C, Derivation dA, Derivation dB, Derivation dC,
                    Derivation dAB, Derivation dBC);
Derivation tm_refl(const RawContext& G, Expr A, Expr s, Derivation dA, Derivation ds);
// t == s : A from s == t : A
Derivation tm_sym(const RawContext& G, Expr A, Expr s, Expr t, Derivation dA, Derivation ds, Derivation dt,
                  Derivation dst);
Derivation tm_trans(const RawContext& G, Expr A, Expr s, Expr t, Expr u, Derivation dA, Derivation ds, Derivation dt,
                    Derivation du, Derivation dst, Derivation dtu);
// s : B from s : A and A == B
Derivation conv_tm(const RawContext& G, Expr A, Expr B, Expr s, Derivation dA, Derivation dB, Derivation ds,
                   Derivation dAB);
Derivation conv_eq(const RawContext& G, Expr A, Expr B, Expr s, Expr t, Derivation dA, Derivation dB, Derivation ds,
                   Derivation dt, Derivation dst, Derivation dAB);

// specific rule by name, instantiated over gamma
Derivation rule(const RawTypeTheory& T, const std::string& name, const RawContext& G, std::vector<Expr> args,
                std::vector<Derivation> ch = {});

}  // namespace gtt::mk
