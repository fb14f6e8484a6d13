#pragma once

// Closure systems and their derivation trees, generic in the judgement type.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gtt/error.hpp"

namespace gtt {

template <class X>
using Family = std::vector<X>;

template <class X>
struct ClosureRule {
  Family<X> premises;
  X conclusion;
};

template <class X>
using ClosureSystem = std::vector<ClosureRule<X>>;

// A tree whose leaves are hypotheses or rules; `index` is the hypothesis
// number or the rule number.
struct GenericDerivation {
  enum class Kind { Hyp, Step };
  Kind kind = Kind::Hyp;
  std::size_t index = 0;
  std::vector<GenericDerivation> children;

  static GenericDerivation hyp(std::size_t k) { return {Kind::Hyp, k, {}}; }
  static GenericDerivation step(std::size_t r, std::vector<GenericDerivation> ch) {
    return {Kind::Step, r, std::move(ch)};
  }
  bool operator==(const GenericDerivation&) const = default;
};

template <class X>
X check_generic_derivation(const ClosureSystem<X>& system, const Family<X>& hyps, const GenericDerivation& d) {
  if (d.kind == GenericDerivation::Kind::Hyp) {
    if (d.index >= hyps.size())
      fail(ErrorKind::IndexOutOfRange, "hypothesis " + std::to_string(d.index) + " of " + std::to_string(hyps.size()));
    if (!d.children.empty()) fail(ErrorKind::ChildCountMismatch, "hypothesis leaf with children");
    return hyps[d.index];
  }
  if (d.index >= system.size())
    fail(ErrorKind::IndexOutOfRange, "rule " + std::to_string(d.index) + " of " + std::to_string(system.size()));
  const ClosureRule<X>& r = system[d.index];
  if (r.premises.size() != d.children.size())
    fail(ErrorKind::ChildCountMismatch, "rule " + std::to_string(d.index) + " expects " +
                                            std::to_string(r.premises.size()) + " premises, got " +
                                            std::to_string(d.children.size()));
  for (std::size_t i = 0; i < d.children.size(); ++i) {
    X got = [&] {
      try {
        return check_generic_derivation(system, hyps, d.children[i]);
      } catch (const KernelError& e) {
        throw e.under(i);
      }
    }();
    if (!(got == r.premises[i]))
      throw KernelError(ErrorKind::PremiseMismatch, "premise " + std::to_string(i) + " does not match", {i});
  }
  return r.conclusion;
}

// Replace hypothesis leaves by the given fillers.
inline GenericDerivation graft(const GenericDerivation& outer, const std::vector<GenericDerivation>& fillers) {
  if (outer.kind == GenericDerivation::Kind::Hyp) {
    if (outer.index >= fillers.size()) fail(ErrorKind::IndexOutOfRange, "graft: no filler for hypothesis");
    return fillers[outer.index];
  }
  GenericDerivation out{GenericDerivation::Kind::Step, outer.index, {}};
  out.children.reserve(outer.children.size());
  for (const auto& c : outer.children) out.children.push_back(graft(c, fillers));
  return out;
}

// Checked grafting: each filler must derive the hypothesis it replaces,
// from the new hypotheses.
template <class X>
GenericDerivation graft(const ClosureSystem<X>& system, const Family<X>& outer_hyps, const GenericDerivation& outer,
                        const Family<X>& new_hyps, const std::vector<GenericDerivation>& fillers) {
  if (fillers.size() != outer_hyps.size()) fail(ErrorKind::ChildCountMismatch, "graft: filler count");
  for (std::size_t k = 0; k < fillers.size(); ++k) {
    X c = check_generic_derivation(system, new_hyps, fillers[k]);
    if (!(c == outer_hyps[k]))
      fail(ErrorKind::FillerConclusionMismatch, "filler " + std::to_string(k) + " concludes the wrong judgement");
  }
  return graft(outer, fillers);
}

// Transport along a map of closure systems: each source rule r is sent to
// csmap[r], a derivation over the target from the images of r's premises.
inline GenericDerivation map_derivation(const std::vector<GenericDerivation>& csmap, const GenericDerivation& d) {
  if (d.kind == GenericDerivation::Kind::Hyp) return d;
  if (d.index >= csmap.size()) fail(ErrorKind::IndexOutOfRange, "map_derivation: rule without image");
  std::vector<GenericDerivation> ch;
  ch.reserve(d.children.size());
  for (const auto& c : d.children) ch.push_back(map_derivation(csmap, c));
  return graft(csmap[d.index], ch);
}

// A finite relation read as the strict part of a partial order (after
// transitive closure).
struct FinitePoset {
  std::size_t size = 0;
  std::vector<std::pair<std::size_t, std::size_t>> less;  // (i, j) means i < j
};

// transitive closure as a dense matrix; reach[i][j] iff i <+ j
std::vector<std::vector<bool>> transitive_closure(const FinitePoset& p);

bool check_well_founded(const FinitePoset& p);

// Nontrivial strongly connected components (cycles), each sorted.
std::vector<std::vector<std::size_t>> cycles(const FinitePoset& p);

// A linear extension, or nullopt if cyclic.
std::optional<std::vector<std::size_t>> topological_order(const FinitePoset& p);

}  // namespace gtt
