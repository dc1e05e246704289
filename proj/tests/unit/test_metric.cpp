#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <queue>

#include "coarsetop/coarse.hpp"
#include "coarsetop/errors.hpp"
#include "coarsetop/rng.hpp"
#include "coarsetop/window.hpp"

using namespace coarsetop;

namespace {

Subset resolve(const WindowFamily& f, const FiniteMetricSpace& w, const char* spec) {
  return SubsetSpec::parse(spec).resolve(f, w);
}

Index at(const FiniteMetricSpace& w, std::vector<long long> c) { return *w.find_coordinates(c); }

}  // namespace

TEST(Window, GridSizes) {
  const auto z1 = WindowFamily::grid(1);
  const auto z2 = WindowFamily::grid(2);
  EXPECT_EQ(z1.window(4)->size(), 9u);
  // ℓ1 ball of radius W in ℤ² holds 2W² + 2W + 1 points.
  for (double W : {1, 2, 8, 16}) EXPECT_EQ(z2.window(W)->size(), static_cast<std::size_t>(2 * W * W + 2 * W + 1));
  const auto box = WindowFamily::grid(2, Norm::Linf);
  EXPECT_EQ(box.window(3)->size(), 49u);
}

TEST(Window, BasepointIsOrigin) {
  const auto w = WindowFamily::grid(2).window(5);
  EXPECT_EQ(w->id(w->basepoint()), "0,0");
}

TEST(Window, SpaceSpecRoundTrip) {
  for (const char* s : {"zn:1", "zn:2", "zn:3:linf"}) {
    const auto spec = SpaceSpec::parse(s);
    EXPECT_EQ(SpaceSpec::parse(spec.to_string()).to_string(), spec.to_string());
  }
  EXPECT_THROW(SpaceSpec::parse("zn:0"), InputError);
  EXPECT_THROW(SpaceSpec::parse("torus:2"), InputError);
  EXPECT_THROW(SpaceSpec::parse("zn"), InputError);
}

TEST(Window, GraphShortestPaths) {
  // Weighted 4-cycle with a chord; oracle is Floyd-Warshall on the same edges.
  const char* text = "a b 1\nb c 2\nc d 1\nd a 5\na c 4\n";
  const auto f = WindowFamily::from_graph_text(text, std::string("a"));
  const auto& X = *f.ambient();
  ASSERT_EQ(X.size(), 4u);
  const std::vector<std::string> ids{"a", "b", "c", "d"};
  double d[4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) d[i][j] = i == j ? 0 : 1e18;
  auto edge = [&](int i, int j, double w) { d[i][j] = d[j][i] = std::min(d[i][j], w); };
  edge(0, 1, 1), edge(1, 2, 2), edge(2, 3, 1), edge(3, 0, 5), edge(0, 2, 4);
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      EXPECT_DOUBLE_EQ(X.distance(*X.find(ids[i]), *X.find(ids[j])), d[i][j]);
  EXPECT_NO_THROW(X.validate());
}

TEST(Window, GraphRejectsBadLines) {
  EXPECT_THROW(WindowFamily::from_graph_text("a b\n", std::nullopt), InputError);
  EXPECT_THROW(WindowFamily::from_graph_text("a b -1\n", std::nullopt), InputError);
  EXPECT_THROW(WindowFamily::from_graph_text("# nothing\n", std::nullopt), InputError);
}

TEST(Window, ValidateCatchesTriangleViolation) {
  const auto X = FiniteMetricSpace::from_matrix({"p", "q", "r"}, {0, 1, 5, 1, 0, 1, 5, 1, 0}, {});
  EXPECT_THROW(X.validate(), InputError);
}

TEST(Subsets, Grammar) {
  const auto f = WindowFamily::grid(2);
  const auto w = f.window(4);
  EXPECT_EQ(resolve(f, *w, "axis:0").count(), 9u);
  EXPECT_EQ(resolve(f, *w, "union(axis:0,axis:1)").count(), 17u);
  EXPECT_EQ(resolve(f, *w, "inter(axis:0,axis:1)").count(), 1u);
  EXPECT_EQ(resolve(f, *w, "minus(all,axis:0)").count(), w->size() - 9);
  EXPECT_EQ(resolve(f, *w, "empty").count(), 0u);
  EXPECT_EQ(resolve(f, *w, "ball:1").count(), 5u);
  EXPECT_EQ(resolve(f, *w, "hyperplane:1=2").count(), 5u);
  // half:1 is y > 0: rows y = 1..4 of widths 7, 5, 3, 1.
  EXPECT_EQ(resolve(f, *w, "half:1").count(), 16u);
  EXPECT_THROW(SubsetSpec::parse("axis:x"), InputError);
  EXPECT_THROW(SubsetSpec::parse("blob:1"), InputError);
  EXPECT_THROW(resolve(f, *w, "axis:2"), InputError);
}

TEST(Subsets, MissingIdsFileNamesFile) {
  try {
    SubsetSpec::parse("ids:/no/such/subset.txt");
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("/no/such/subset.txt"), std::string::npos);
  }
}

TEST(Neighborhood, StrictOnIntegers) {
  const auto f = WindowFamily::grid(1);
  const auto w = f.window(4);
  const auto A = resolve(f, *w, "ball:0");
  const auto N = neighborhood(*w, A, 2);
  std::vector<std::string> ids;
  for (Index i : N.indices()) ids.push_back(w->id(i));
  EXPECT_EQ(ids, (std::vector<std::string>{"-1", "0", "1"}));
  EXPECT_TRUE(neighborhood(*w, A, 0).empty());
}

TEST(Neighborhood, AxisBandMatchesScan) {
  const auto f = WindowFamily::grid(2);
  const auto w = f.window(8);
  const auto N = neighborhood(*w, resolve(f, *w, "axis:0"), 3);
  for (Index i = 0; i < w->size(); ++i) EXPECT_EQ(N.contains(i), std::abs(w->coordinates(i)[1]) <= 2) << w->id(i);
}

TEST(Neighborhood, ExpandingMatchesDirectEvaluation) {
  const auto f = WindowFamily::grid(1);
  auto w = f.window(16);
  const auto keep = [&] {
    std::vector<Index> k;
    for (Index i = 0; i < w->size(); ++i)
      if (w->coordinates(i)[0] >= 0) k.push_back(i);
    return k;
  }();
  const auto X = w->restrict(keep, 0);
  const Subset A = Subset::full(X.size());
  const auto fx = [&](Index a) -> std::optional<double> { return std::floor(std::sqrt(X.coordinates(a)[0])); };
  const auto N = expanding_neighborhood(X, A, fx);
  for (Index y = 0; y < X.size(); ++y) {
    bool expect = false;
    for (Index x = 0; x < X.size(); ++x)
      if (std::abs(X.coordinates(y)[0] - X.coordinates(x)[0]) < *fx(x)) expect = true;
    EXPECT_EQ(N.contains(y), expect) << y;
  }
  const auto zero = expanding_neighborhood(X, A, [](Index) -> std::optional<double> { return 0.0; });
  EXPECT_TRUE(zero.empty());
  const auto constant = expanding_neighborhood(X, A, [](Index) -> std::optional<double> { return 3.0; });
  EXPECT_EQ(constant, neighborhood(X, A, 3));
  EXPECT_THROW(expanding_neighborhood(X, A, [](Index) -> std::optional<double> { return std::nullopt; }),
               InputError);
}

TEST(Containment, Examples) {
  const auto f = WindowFamily::grid(1);
  const auto w = f.window(12);
  const auto A = resolve(f, *w, "union(ball:0,ball:0@10)");
  const auto B = resolve(f, *w, "ball:0");
  EXPECT_FALSE(contained_at_scale(*w, A, B, 5));
  EXPECT_TRUE(contained_at_scale(*w, A, B, 11));
  EXPECT_TRUE(contained_at_scale(*w, B, A, 1));

  const auto g = WindowFamily::grid(2);
  const auto v = g.window(32);
  Subset diag(v->size());
  for (Index i = 0; i < v->size(); ++i)
    if (v->coordinates(i)[0] == v->coordinates(i)[1]) diag.insert(i);
  EXPECT_FALSE(contained_at_scale(*v, diag, resolve(g, *v, "axis:0"), 4));
}

TEST(Containment, DisjointnessProfile) {
  const auto f = WindowFamily::grid(2);
  const auto schedule = ScaleSchedule::defaults();
  const auto x = resolver(f, SubsetSpec::parse("axis:0"));
  const auto y = resolver(f, SubsetSpec::parse("axis:1"));
  const auto p = disjointness_profile(f, x, y, 2, schedule);
  EXPECT_TRUE(p.bounded);
  // Oracle: x-axis points with |x| < 2, i.e. 3 points, in every window.
  for (auto c : p.counts) EXPECT_EQ(c, 3u);
  const auto q = disjointness_profile(f, x, x, 1, schedule);
  EXPECT_FALSE(q.bounded);
  for (std::size_t i = 0; i < q.windows.size(); ++i)
    EXPECT_EQ(q.counts[i], static_cast<std::size_t>(2 * q.windows[i] + 1));
  const auto e = disjointness_profile(f, resolver(f, SubsetSpec::parse("empty")), y, 2, schedule);
  EXPECT_TRUE(e.bounded);
}

TEST(SimplexScale, Examples) {
  const auto w = WindowFamily::grid(1).window(5);
  const Index o = at(*w, {0}), a = at(*w, {3}), b = at(*w, {1});
  EXPECT_EQ(simplex_scale(*w, std::vector<Index>{o, o, o}), 0);
  EXPECT_EQ(simplex_scale(*w, std::vector<Index>{o, a, b}), 3);
  EXPECT_EQ(simplex_scale(*w, std::vector<Index>{o, a}), simplex_scale(*w, std::vector<Index>{o, a, a, a}));
  EXPECT_THROW(simplex_scale(*w, std::vector<Index>{}), InputError);
}

TEST(Rng, SplitMixReferenceValues) {
  // Reference outputs of the SplitMix64 update for seed 0.
  SplitMix64 g(0);
  EXPECT_EQ(g(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(g(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(g(), 0x06c45d188009454fULL);
}
