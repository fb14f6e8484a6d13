#pragma once

// Human-readable ASCII renderings. Variables print as #p (flat position),
// binder arguments as \b.e with b the binder scope.

#include <string>

#include "gtt/metatheory.hpp"

namespace gtt::pretty {

std::string show_expr(const Signature& sig, const Arity& metas, const Expr& e);
std::string show_context(const Signature& sig, const Arity& metas, const RawContext& G);
std::string show_judgement(const Signature& sig, const Arity& metas, const Judgement& J);

// premises side by side over a rule line, the name to its right:
//   P1    P2
//   ---------- name
//   C
std::string show_rule(const Signature& sig, const RawRule& R);

// one node per line, children indented, each with its conclusion
std::string show_derivation(const RawTypeTheory& T, const Arity& metas, const Family<Judgement>& hyps,
                            const Derivation& d);

std::string show_acceptability(const AcceptabilityReport& r);

}  // namespace gtt::pretty
