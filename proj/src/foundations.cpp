#include "gtt/foundations.hpp"

#include <algorithm>
#include <functional>

namespace gtt {

namespace {

void check_edges(const FinitePoset& p) {
  for (auto [i, j] : p.less)
    if (i >= p.size || j >= p.size) fail(ErrorKind::IndexOutOfRange, "poset edge out of range");
}

std::vector<std::vector<std::size_t>> adjacency(const FinitePoset& p) {
  check_edges(p);
  std::vector<std::vector<std::size_t>> adj(p.size);
  for (auto [i, j] : p.less) adj[i].push_back(j);
  return adj;
}

}  // namespace

std::vector<std::vector<bool>> transitive_closure(const FinitePoset& p) {
  auto adj = adjacency(p);
  std::vector<std::vector<bool>> reach(p.size, std::vector<bool>(p.size, false));
  for (std::size_t s = 0; s < p.size; ++s) {
    std::vector<std::size_t> stack(adj[s].begin(), adj[s].end());
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      if (reach[s][v]) continue;
      reach[s][v] = true;
      for (std::size_t w : adj[v]) stack.push_back(w);
    }
  }
  return reach;
}

bool check_well_founded(const FinitePoset& p) { return topological_order(p).has_value(); }

std::optional<std::vector<std::size_t>> topological_order(const FinitePoset& p) {
  auto adj = adjacency(p);
  std::vector<std::size_t> indeg(p.size, 0);
  for (auto [i, j] : p.less) ++indeg[j];
  std::vector<std::size_t> ready, out;
  for (std::size_t i = p.size; i-- > 0;)
    if (indeg[i] == 0) ready.push_back(i);
  while (!ready.empty()) {
    // smallest index first keeps the result deterministic
    auto it = std::min_element(ready.begin(), ready.end());
    std::size_t v = *it;
    ready.erase(it);
    out.push_back(v);
    for (std::size_t w : adj[v])
      if (--indeg[w] == 0) ready.push_back(w);
  }
  if (out.size() != p.size) return std::nullopt;
  return out;
}

std::vector<std::vector<std::size_t>> cycles(const FinitePoset& p) {
  auto reach = transitive_closure(p);
  std::vector<bool> seen(p.size, false);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < p.size; ++i) {
    if (seen[i] || !reach[i][i]) continue;
    std::vector<std::size_t> comp;
    for (std::size_t j = 0; j < p.size; ++j)
      if (j == i || (reach[i][j] && reach[j][i])) {
        comp.push_back(j);
        seen[j] = true;
      }
    out.push_back(comp);
  }
  return out;
}

}  // namespace gtt
