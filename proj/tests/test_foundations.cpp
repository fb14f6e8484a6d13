#include <doctest.h>

#include <random>
#include <set>
#include <string>

#include "gtt/foundations.hpp"

using namespace gtt;
using GD = GenericDerivation;

namespace {

// judgements are plain strings here
using Sys = ClosureSystem<std::string>;

ClosureRule<std::string> cr(std::vector<std::string> p, std::string c) { return {std::move(p), std::move(c)}; }

// every conclusion reachable by derivations of depth <= d, by brute force
std::set<std::string> derivable(const Sys& s, const Family<std::string>& hyps, int d) {
  std::set<std::string> got(hyps.begin(), hyps.end());
  for (int k = 0; k < d; ++k) {
    std::set<std::string> next = got;
    for (const auto& r : s) {
      bool ok = true;
      for (const auto& p : r.premises) ok = ok && got.count(p);
      if (ok) next.insert(r.conclusion);
    }
    got = next;
  }
  return got;
}

GD random_tree(std::mt19937& g, const Sys& s, std::size_t nhyps, int depth) {
  std::uniform_int_distribution<std::size_t> pick(0, s.size() + nhyps - 1);
  for (;;) {
    std::size_t k = pick(g);
    if (k < nhyps) return GD::hyp(k);
    const auto& r = s[k - nhyps];
    if (depth == 0 && !r.premises.empty()) continue;
    std::vector<GD> ch;
    for (std::size_t i = 0; i < r.premises.size(); ++i) ch.push_back(random_tree(g, s, nhyps, depth - 1));
    return GD::step(k - nhyps, ch);
  }
}

// premise-insensitive system, so every tree with the right child counts checks
Sys free_system() { return {cr({}, "x"), cr({"x"}, "x"), cr({"x", "x"}, "x")}; }

}  // namespace

TEST_CASE("hypothesis and axiom derivations") {
  CHECK(check_generic_derivation<std::string>({}, {"a"}, GD::hyp(0)) == "a");
  CHECK(check_generic_derivation<std::string>({cr({}, "b")}, {}, GD::step(0, {})) == "b");
}

TEST_CASE("two-step derivation agrees with brute-force derivability") {
  Sys s{cr({}, "a"), cr({"a", "a"}, "b"), cr({"d"}, "c")};
  CHECK(check_generic_derivation<std::string>(s, {}, GD::step(1, {GD::step(0, {}), GD::step(0, {})})) == "b");
  auto reach = derivable(s, {}, 2);
  CHECK(reach.count("b") == 1);
  CHECK(reach.count("c") == 0);
}

TEST_CASE("checking errors") {
  Sys s{cr({}, "a"), cr({"a"}, "b")};
  auto kind_of = [&](const GD& d) {
    try {
      check_generic_derivation<std::string>(s, {"z"}, d);
    } catch (const KernelError& e) {
      return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::ParseError;
  };
  CHECK(kind_of(GD::hyp(3)) == ErrorKind::IndexOutOfRange);
  CHECK(kind_of(GD::step(7, {})) == ErrorKind::IndexOutOfRange);
  CHECK(kind_of(GD::step(1, {})) == ErrorKind::ChildCountMismatch);
  CHECK(kind_of(GD::step(1, {GD::hyp(0)})) == ErrorKind::PremiseMismatch);
  try {
    check_generic_derivation<std::string>(s, {"z"}, GD::step(1, {GD::step(1, {GD::hyp(0)})}));
  } catch (const KernelError& e) {
    CHECK(e.path() == std::vector<std::size_t>{0, 0});
  }
}

TEST_CASE("grafting") {
  Sys s{cr({}, "a"), cr({"a"}, "b")};
  const GD d0 = GD::step(0, {});
  CHECK(graft(GD::hyp(0), {d0}) == d0);
  CHECK(graft(GD::step(1, {GD::hyp(0)}), {d0}) == GD::step(1, {d0}));
  CHECK(graft<std::string>(s, {"a"}, GD::step(1, {GD::hyp(0)}), {}, {d0}) == GD::step(1, {d0}));
  CHECK_THROWS_AS(graft<std::string>(s, {"b"}, GD::hyp(0), {}, {d0}), KernelError);
}

TEST_CASE("grafting preserves conclusions on random trees") {
  const Sys s = free_system();
  std::mt19937 g(7);
  for (int n = 0; n < 300; ++n) {
    const GD outer = random_tree(g, s, 2, 4);
    std::vector<GD> fillers{random_tree(g, s, 1, 3), random_tree(g, s, 1, 3)};
    const std::string before = check_generic_derivation<std::string>(s, {"x", "x"}, outer);
    const GD grafted = graft<std::string>(s, {"x", "x"}, outer, {"x"}, fillers);
    CHECK(check_generic_derivation<std::string>(s, {"x"}, grafted) == before);
  }
}

TEST_CASE("maps of closure systems act on derivations") {
  // source: a, a -> b ; target: a, a -> m, m -> b
  Sys src{cr({}, "a"), cr({"a"}, "b")};
  Sys dst{cr({}, "a"), cr({"a"}, "m"), cr({"m"}, "b")};
  const std::vector<GD> csmap{GD::step(0, {}), GD::step(2, {GD::step(1, {GD::hyp(0)})})};
  const GD d = GD::step(1, {GD::step(0, {})});
  const GD m = map_derivation(csmap, d);
  CHECK(check_generic_derivation<std::string>(dst, {}, m) == "b");
  CHECK(m == GD::step(2, {GD::step(1, {GD::step(0, {})})}));

  // identity map
  const std::vector<GD> id{GD::step(0, {}), GD::step(1, {GD::hyp(0)})};
  CHECK(map_derivation(id, d) == d);

  // composite: dst -> dst2 where m is split again
  Sys dst2{cr({}, "a"), cr({"a"}, "m"), cr({"m"}, "n"), cr({"n"}, "b")};
  const std::vector<GD> second{GD::step(0, {}), GD::step(1, {GD::hyp(0)}), GD::step(3, {GD::step(2, {GD::hyp(0)})})};
  std::vector<GD> composite;
  for (const auto& x : csmap) composite.push_back(map_derivation(second, x));
  CHECK(map_derivation(composite, d) == map_derivation(second, map_derivation(csmap, d)));
  CHECK(check_generic_derivation<std::string>(dst2, {}, map_derivation(composite, d)) == "b");
}

TEST_CASE("composite of random closure-system maps equals mapping twice") {
  const Sys s = free_system();
  std::mt19937 g(11);
  for (int n = 0; n < 100; ++n) {
    std::vector<GD> f, h;
    for (const auto& r : s) {
      f.push_back(random_tree(g, s, r.premises.size(), 2));
      h.push_back(random_tree(g, s, r.premises.size(), 2));
    }
    const GD d = random_tree(g, s, 0, 4);
    std::vector<GD> hf;
    for (const auto& x : f) hf.push_back(map_derivation(h, x));
    CHECK(map_derivation(hf, d) == map_derivation(h, map_derivation(f, d)));
  }
}

TEST_CASE("well-foundedness of finite orders") {
  CHECK(check_well_founded({0, {}}));
  CHECK_FALSE(check_well_founded({2, {{0, 1}, {1, 0}}}));
  CHECK(check_well_founded({3, {{0, 1}, {1, 2}}}));
  CHECK(cycles({2, {{0, 1}, {1, 0}}}) == std::vector<std::vector<std::size_t>>{{0, 1}});
  auto topo = topological_order({3, {{2, 1}, {1, 0}}});
  REQUIRE(topo);
  CHECK(*topo == std::vector<std::size_t>{2, 1, 0});
}

// every <-progressive subset is the whole set: S progressive when each x all
// of whose predecessors lie in S is itself in S
TEST_CASE("well-foundedness agrees with progressive subsets, all relations on up to 3 points") {
  for (std::size_t n = 0; n <= 3; ++n) {
    std::vector<std::pair<std::size_t, std::size_t>> all;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) all.emplace_back(i, j);
    for (std::size_t mask = 0; mask < (1u << all.size()); ++mask) {
      FinitePoset p{n, {}};
      for (std::size_t k = 0; k < all.size(); ++k)
        if (mask >> k & 1) p.less.push_back(all[k]);
      const auto reach = transitive_closure(p);
      bool every_progressive_full = true;
      for (std::size_t S = 0; S < (1u << n); ++S) {
        bool progressive = true;
        for (std::size_t x = 0; x < n; ++x) {
          bool preds_in = true;
          for (std::size_t y = 0; y < n; ++y)
            if (reach[y][x] && !(S >> y & 1)) preds_in = false;
          if (preds_in && !(S >> x & 1)) progressive = false;
        }
        if (progressive && S != (1u << n) - 1) every_progressive_full = false;
      }
      CHECK(check_well_founded(p) == every_progressive_full);
    }
  }
}
