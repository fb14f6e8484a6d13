#include "gtt/scopes.hpp"

#include "gtt/error.hpp"

namespace gtt {

const char* scope_system_name(ScopeSystem s) {
  return s == ScopeSystem::DeBruijnIndices ? "debruijn-indices" : "debruijn-levels";
}

ScopeSystem parse_scope_system(const std::string& s) {
  if (s == "debruijn-indices") return ScopeSystem::DeBruijnIndices;
  if (s == "debruijn-levels") return ScopeSystem::DeBruijnLevels;
  fail(ErrorKind::ParseError, "unknown scope system '" + s + "'");
}

Position inl(ScopeSystem sys, Scope, Scope delta, Position i) {
  return sys == ScopeSystem::DeBruijnIndices ? i + delta : i;
}

Position inr(ScopeSystem sys, Scope gamma, Scope, Position j) {
  return sys == ScopeSystem::DeBruijnIndices ? j : j + gamma;
}

SumSide split_sum(ScopeSystem sys, Scope gamma, Scope delta, Position p) {
  if (p >= gamma + delta) fail(ErrorKind::ScopeMismatch, "position outside sum scope");
  if (sys == ScopeSystem::DeBruijnIndices) {
    if (p < delta) return {false, p};
    return {true, p - delta};
  }
  if (p < gamma) return {true, p};
  return {false, p - gamma};
}

SumScope sum_scope(ScopeSystem sys, Scope gamma, Scope delta) {
  SumScope s{gamma + delta, {}, {}};
  s.inl.reserve(gamma);
  s.inr.reserve(delta);
  for (Position i = 0; i < gamma; ++i) s.inl.push_back(inl(sys, gamma, delta, i));
  for (Position j = 0; j < delta; ++j) s.inr.push_back(inr(sys, gamma, delta, j));
  return s;
}

Renaming Renaming::identity(Scope n) {
  Renaming r{n, n, {}};
  r.table.reserve(n);
  for (Position i = 0; i < n; ++i) r.table.push_back(i);
  return r;
}

Renaming compose_renaming(const Renaming& r2, const Renaming& r1) {
  if (r1.dst != r2.src) fail(ErrorKind::ScopeMismatch, "renaming composition: scopes do not chain");
  Renaming r{r1.src, r2.dst, {}};
  r.table.reserve(r1.src);
  for (Position i : r1.table) r.table.push_back(r2.table.at(i));
  return r;
}

Renaming inl_renaming(ScopeSystem sys, Scope gamma, Scope delta) {
  return {gamma, gamma + delta, sum_scope(sys, gamma, delta).inl};
}

Renaming inr_renaming(ScopeSystem sys, Scope gamma, Scope delta) {
  return {delta, gamma + delta, sum_scope(sys, gamma, delta).inr};
}

Renaming sum_renaming(ScopeSystem sys, const Renaming& r, const Renaming& rp) {
  Renaming out{r.src + rp.src, r.dst + rp.dst, std::vector<Position>(r.src + rp.src)};
  for (Position i = 0; i < r.src; ++i)
    out.table[inl(sys, r.src, rp.src, i)] = inl(sys, r.dst, rp.dst, r.table.at(i));
  for (Position j = 0; j < rp.src; ++j)
    out.table[inr(sys, r.src, rp.src, j)] = inr(sys, r.dst, rp.dst, rp.table.at(j));
  return out;
}

Renaming extend_renaming(ScopeSystem sys, const Renaming& r, Scope eta) {
  return sum_renaming(sys, r, Renaming::identity(eta));
}

}  // namespace gtt
