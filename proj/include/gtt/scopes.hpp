#pragma once

// De Bruijn scope systems. A scope is a natural number n; its positions are
// 0..n-1. Both systems are strict: sums are associative and unital on the
// nose, so no reassociation maps are ever needed.

#include <cstddef>
#include <string>
#include <vector>

namespace gtt {

enum class ScopeSystem { DeBruijnIndices, DeBruijnLevels };

using Scope = std::size_t;
using Position = std::size_t;

const char* scope_system_name(ScopeSystem s);
ScopeSystem parse_scope_system(const std::string& s);

// Position maps of the sum gamma + delta.
Position inl(ScopeSystem sys, Scope gamma, Scope delta, Position i);
Position inr(ScopeSystem sys, Scope gamma, Scope delta, Position j);

// Which side of gamma + delta a position comes from.
struct SumSide {
  bool left;
  Position pos;  // preimage under inl or inr
};
SumSide split_sum(ScopeSystem sys, Scope gamma, Scope delta, Position p);

struct SumScope {
  Scope scope;
  std::vector<Position> inl;  // positions(gamma) -> positions(scope)
  std::vector<Position> inr;  // positions(delta) -> positions(scope)
};
SumScope sum_scope(ScopeSystem sys, Scope gamma, Scope delta);

struct Renaming {
  Scope src = 0;
  Scope dst = 0;
  std::vector<Position> table;  // size src, entries < dst

  static Renaming identity(Scope n);
  Position operator()(Position i) const { return table.at(i); }
  bool operator==(const Renaming&) const = default;
};

// (r2 . r1)(i) = r2(r1(i))
Renaming compose_renaming(const Renaming& r2, const Renaming& r1);

Renaming inl_renaming(ScopeSystem sys, Scope gamma, Scope delta);
Renaming inr_renaming(ScopeSystem sys, Scope gamma, Scope delta);

// r + r' : gamma + gamma' -> delta + delta'
Renaming sum_renaming(ScopeSystem sys, const Renaming& r, const Renaming& rp);

// r + id_eta, the extension used under binders
Renaming extend_renaming(ScopeSystem sys, const Renaming& r, Scope eta);

}  // namespace gtt
