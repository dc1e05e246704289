#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

#include "coarsetop/coarse.hpp"
#include "coarsetop/rng.hpp"
#include "coarsetop/separation.hpp"
#include "coarsetop/window.hpp"

using namespace coarsetop;

namespace {

// Independent oracle: BFS over pairs at distance ≤ s, by brute-force scan.
std::size_t bfs_component_count(const FiniteMetricSpace& w, const Subset& S, double s) {
  std::vector<int> label(w.size(), -1);
  std::size_t count = 0;
  for (Index start : S.indices()) {
    if (label[start] >= 0) continue;
    std::queue<Index> q;
    q.push(start);
    label[start] = static_cast<int>(count);
    while (!q.empty()) {
      const Index x = q.front();
      q.pop();
      for (Index y : S.indices())
        if (label[y] < 0 && w.distance(x, y) <= s + 1e-9) {
          label[y] = static_cast<int>(count);
          q.push(y);
        }
    }
    ++count;
  }
  return count;
}

Subset spec(const WindowFamily& f, const FiniteMetricSpace& w, const char* text) {
  return SubsetSpec::parse(text).resolve(f, w);
}

std::vector<std::string> ids(const FiniteMetricSpace& w, const Subset& s) {
  std::vector<std::string> out;
  for (Index i : s.indices()) out.push_back(w.id(i));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(RBoundary, Examples) {
  const auto z1 = WindowFamily::grid(1);
  const auto w = z1.window(6);
  Subset C(w->size());
  for (Index i = 0; i < w->size(); ++i)
    if (w->coordinates(i)[0] >= 0) C.insert(i);
  EXPECT_EQ(ids(*w, r_boundary(*w, C, 2)), (std::vector<std::string>{"-1", "-2"}));
  EXPECT_TRUE(r_boundary(*w, Subset::full(w->size()), 3).empty());

  const auto z2 = WindowFamily::grid(2);
  const auto v = z2.window(8);
  const auto b = r_boundary(*v, spec(z2, *v, "half:1"), 1);
  // (±8, 0) have no neighbour inside the window.
  EXPECT_EQ(b, spec(z2, *v, "inter(axis:0,ball:7)"));
}

TEST(Components, SmallExamples) {
  const auto z1 = WindowFamily::grid(1);
  const auto w = z1.window(12);
  Subset S(w->size());
  for (long long x : {0, 1, 2, 10, 11}) S.insert(*w->find_coordinates(std::vector<long long>{x}));
  const auto comps = components_at_scale(*w, S, 1);
  ASSERT_EQ(comps.size(), 2u);
  EXPECT_EQ(comps[0].members.size(), 3u);
  EXPECT_EQ(comps[1].members.size(), 2u);
  EXPECT_EQ(components_at_scale(*w, S, 11).size(), 1u);
}

TEST(Components, MatchBfsOracleOnRandomSubsets) {
  SplitMix64 g(11);
  const auto z2 = WindowFamily::grid(2);
  const auto w = z2.window(6);
  for (int trial = 0; trial < 60; ++trial) {
    Subset S(w->size());
    const auto density = 2 + g.below(6);
    for (Index i = 0; i < w->size(); ++i)
      if (g.below(10) < density) S.insert(i);
    const double s = 1 + static_cast<double>(g.below(3));
    EXPECT_EQ(components_at_scale(*w, S, s).size(), bfs_component_count(*w, S, s)) << trial;
  }
}

TEST(Components, PlaneMinusAxisBand) {
  const auto z2 = WindowFamily::grid(2);
  const auto w = z2.window(16);
  const auto rest = neighborhood(*w, spec(z2, *w, "axis:0"), 3).complement();
  EXPECT_EQ(components_at_scale(*w, rest, 1).size(), 2u);
  EXPECT_EQ(bfs_component_count(*w, rest, 1), 2u);
}

TEST(ClassifyDeep, Examples) {
  const auto z2 = WindowFamily::grid(2);
  const auto schedule = ScaleSchedule::defaults();
  const auto axis = resolver(z2, SubsetSpec::parse("axis:0"));
  const auto cell = classify_deep(z2, axis, 4, 64, schedule);
  EXPECT_EQ(cell.deep, 2u);
  EXPECT_EQ(cell.shallow, 0u);
  for (const auto& c : cell.components) EXPECT_EQ(c.depth, 64);

  const auto ball = resolver(z2, SubsetSpec::parse("ball:5"));
  const auto b = classify_deep(z2, ball, 2, 64, schedule);
  EXPECT_EQ(b.deep, 1u);
  EXPECT_EQ(b.shallow, 0u);
}

TEST(ClassifyDeep, ComponentInsideNeighbourhoodIsShallow) {
  // A = everything except one point far out; that point is a component of
  // depth 1 < α·W.
  const auto z2 = WindowFamily::grid(2);
  const auto A = resolver(z2, SubsetSpec::parse("minus(all,ids:" TEST_DATA_DIR "/far_point.txt)"));
  const auto cell = classify_deep(z2, A, 0.5, 16, ScaleSchedule::defaults());
  EXPECT_EQ(cell.deep, 0u);
  EXPECT_EQ(cell.shallow, 1u);
}

TEST(DeepRank, PlaneExamples) {
  const auto z2 = WindowFamily::grid(2);
  const auto schedule = ScaleSchedule::defaults();
  const auto rank = [&](const char* s) { return deep_separation_rank(z2, resolver(z2, SubsetSpec::parse(s)), schedule); };
  const auto axis = rank("axis:0");
  EXPECT_EQ(axis.verdict, SweepVerdict::Stable);
  EXPECT_EQ(axis.k, 1);
  EXPECT_EQ(axis.cells.size(), 16u);
  EXPECT_EQ(rank("ball:5").k, 0);
  EXPECT_EQ(rank("union(axis:0,axis:1)").k, 3);
}

TEST(DeepRank, InvariantUnderThickening) {
  const auto z2 = WindowFamily::grid(2);
  const auto schedule = ScaleSchedule::defaults();
  for (double t : {0.0, 1.0, 2.0}) {
    const auto base = resolver(z2, SubsetSpec::parse("axis:0"));
    const SubsetResolver thick = [base, t](const FiniteMetricSpace& w) {
      const Subset a = base(w);
      return t == 0 ? a : neighborhood(w, a, t + 0.5);
    };
    EXPECT_EQ(deep_separation_rank(z2, thick, schedule).k, 1) << t;
  }
}

TEST(DeepRank, ThreadCountDoesNotChangeCells) {
  const auto z2 = WindowFamily::grid(2);
  const auto A = resolver(z2, SubsetSpec::parse("union(axis:0,axis:1)"));
  const auto a = deep_separation_rank(z2, A, ScaleSchedule::defaults(), 1);
  const auto b = deep_separation_rank(z2, A, ScaleSchedule::defaults(), 4);
  ASSERT_EQ(a.cells.size(), b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    EXPECT_EQ(a.cells[i].deep, b.cells[i].deep);
    ASSERT_EQ(a.cells[i].components.size(), b.cells[i].components.size());
    for (std::size_t j = 0; j < a.cells[i].components.size(); ++j)
      EXPECT_EQ(a.cells[i].components[j].witness, b.cells[i].components[j].witness);
  }
}

TEST(SeparationCocycle, Examples) {
  const auto X = FiniteMetricSpace::from_matrix({"0", "1"}, {0, 1, 1, 0}, {});
  Subset C(2);
  C.insert(0);
  const SeparationCocycle phi(C);
  EXPECT_EQ(phi(0, 1), Gf2(1));
  EXPECT_EQ(phi(1, 0), Gf2(1));
  EXPECT_EQ(phi(0, 0), Gf2(0));
  const SeparationCocycle none(Subset(2));
  EXPECT_EQ(none(0, 1), Gf2(0));
}

TEST(SeparationCocycle, ComplementGivesSameCocycleAndSumIsSymmetricDifference) {
  SplitMix64 g(3);
  std::vector<std::string> names{"a", "b", "c", "d", "e", "f"};
  std::vector<double> table(36);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) table[i * 6 + j] = i == j ? 0 : 1;
  const auto X = FiniteMetricSpace::from_matrix(names, table, {});
  for (int trial = 0; trial < 50; ++trial) {
    Subset C(6), D(6);
    for (Index i = 0; i < 6; ++i) {
      if (g.below(2)) C.insert(i);
      if (g.below(2)) D.insert(i);
    }
    const SeparationCocycle fc(C), fx(C.complement()), fd(D);
    const SeparationCocycle sym(C.unite(D).minus(C.intersect(D)));
    for (Index x = 0; x < 6; ++x)
      for (Index y = 0; y < 6; ++y) {
        EXPECT_EQ(fc(x, y), fx(x, y));
        EXPECT_EQ(fc(x, y) + fd(x, y), sym(x, y));
      }
    const auto sep = cocycle_to_separation(X, [&](Index x, Index y) { return fc(x, y); });
    EXPECT_EQ(sep, Separation::from_side(X, C));
  }
}

TEST(SeparationCocycle, ZeroGivesTrivialSeparation) {
  const auto X = FiniteMetricSpace::from_matrix({"p", "q", "r"}, {0, 1, 1, 1, 0, 1, 1, 1, 0}, {});
  const auto sep = cocycle_to_separation(X, [](Index, Index) { return Gf2(0); });
  EXPECT_TRUE(sep.side().empty());
}

TEST(SeparationCocycle, ExhaustiveOnFivePoints) {
  // Over all 2^10 symmetric zero-diagonal 1-cochains on 5 points, the cocycles
  // are exactly the 16 images d(1_C).
  std::vector<double> table(25, 1);
  for (int i = 0; i < 5; ++i) table[i * 5 + i] = 0;
  const auto X = FiniteMetricSpace::from_matrix({"0", "1", "2", "3", "4"}, table, {});
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) pairs.push_back({i, j});
  std::set<std::vector<bool>> images;
  for (unsigned mask = 0; mask < 32; ++mask) {
    std::vector<bool> v;
    for (auto [i, j] : pairs) v.push_back(((mask >> i) & 1) != ((mask >> j) & 1));
    images.insert(v);
  }
  ASSERT_EQ(images.size(), 16u);
  std::size_t cocycles = 0;
  for (unsigned bits = 0; bits < 1024; ++bits) {
    std::vector<bool> v;
    for (std::size_t p = 0; p < pairs.size(); ++p) v.push_back((bits >> p) & 1);
    auto phi = [&](Index x, Index y) {
      if (x == y) return Gf2(0);
      const auto key = std::make_pair(std::min<int>(x, y), std::max<int>(x, y));
      const auto it = std::find(pairs.begin(), pairs.end(), key);
      return Gf2(v[static_cast<std::size_t>(it - pairs.begin())] ? 1 : 0);
    };
    bool ok = true;
    try {
      cocycle_to_separation(X, phi);
    } catch (const NotACocycle& e) {
      ok = false;
      const auto [a, b, c] = e.witness();
      EXPECT_EQ(phi(b, c) + phi(a, c) + phi(a, b), Gf2(1));
    }
    EXPECT_EQ(ok, images.count(v) == 1) << bits;
    cocycles += ok;
  }
  EXPECT_EQ(cocycles, 16u);
}

TEST(ComponentTest, Examples) {
  const auto z2 = WindowFamily::grid(2);
  const auto schedule = ScaleSchedule::defaults();
  const auto A = resolver(z2, SubsetSpec::parse("axis:0"));
  const auto upper = coarse_component_test(z2, A, resolver(z2, SubsetSpec::parse("half:1")), schedule);
  EXPECT_TRUE(upper.component);
  // Windows with W < 2r have an empty core and report 0.
  for (std::size_t i = 0; i < upper.radii.size(); ++i)
    for (std::size_t j = 0; j < upper.windows.size(); ++j)
      if (upper.windows[j] >= 2 * upper.radii[i]) EXPECT_EQ(upper.profile[i][j], upper.radii[i] - 1);
  const auto right = coarse_component_test(z2, A, resolver(z2, SubsetSpec::parse("half:0")), schedule);
  EXPECT_FALSE(right.component);
  ASSERT_TRUE(right.escape_radius.has_value());
  EXPECT_FALSE(right.escape.empty());
  const auto all = coarse_component_test(z2, A, resolver(z2, SubsetSpec::parse("all")), schedule);
  EXPECT_TRUE(all.component);
  for (const auto& row : all.profile)
    for (double v : row) EXPECT_EQ(v, 0);
}

TEST(ComponentTest, UnionProfileBoundedByMax) {
  const auto z2 = WindowFamily::grid(2);
  const auto schedule = ScaleSchedule::parse("windows=8,16,24,32;radii=1,2,3");
  const auto A = resolver(z2, SubsetSpec::parse("union(axis:0,axis:1)"));
  const char* quadrants[] = {"inter(half:0,half:1)", "inter(half:1,minus(all,half:0))"};
  const auto c1 = coarse_component_test(z2, A, resolver(z2, SubsetSpec::parse(quadrants[0])), schedule);
  const auto c2 = coarse_component_test(z2, A, resolver(z2, SubsetSpec::parse(quadrants[1])), schedule);
  const auto u = coarse_component_test(
      z2, A, resolver(z2, SubsetSpec::parse("union(inter(half:0,half:1),inter(half:1,minus(all,half:0)))")),
      schedule);
  ASSERT_TRUE(c1.component && c2.component);
  EXPECT_TRUE(u.component);
  for (std::size_t i = 0; i < u.radii.size(); ++i)
    for (std::size_t j = 0; j < u.windows.size(); ++j)
      EXPECT_LE(u.profile[i][j], std::max(c1.profile[i][j], c2.profile[i][j]));
}

TEST(ComponentTest, UniformBoundOnComplementComponents) {
  // Each component C of X − N_r(A) has max over the core of ∂_R C of d(x, A) ≤ R + r.
  const auto z2 = WindowFamily::grid(2);
  const double W = 24;
  const auto w = z2.window(W);
  for (const char* a : {"axis:0", "union(axis:0,axis:1)", "ball:3"}) {
    const Subset A = spec(z2, *w, a);
    const auto dist = w->distance_to_set(A);
    for (double r : {1.0, 2.0, 3.0}) {
      const auto comps = components_at_scale(*w, neighborhood(*w, A, r).complement(), 1);
      for (const auto& comp : comps) {
        const Subset C = Subset::from_indices(w->size(), comp.members);
        for (double R : {1.0, 2.0, 4.0}) {
          const Subset core = window_core(*w, W, R);
          for (Index x : r_boundary(*w, C, R).indices())
            if (core.contains(x)) EXPECT_LE(dist[x], R + r) << a << " " << w->id(x);
        }
      }
    }
  }
}
