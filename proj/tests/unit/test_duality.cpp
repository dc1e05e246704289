#include <gtest/gtest.h>

#include "coarsetop/coarse.hpp"
#include "coarsetop/duality.hpp"
#include "coarsetop/separation.hpp"

using namespace coarsetop;

namespace {

using Z = Integer;

Tuple<GridPoint> pts(std::initializer_list<long long> xs) {
  Tuple<GridPoint> t;
  for (long long x : xs) t.push_back(GridPoint{x});
  return t;
}

const OrientationPair& z1_pair_16() {
  static const OrientationPair pair = [] {
    const auto line = WindowFamily::grid(1);
    const auto p = build_z1_pair(line, 16);
    return with_verification(p, verify_pair(p, 4));
  }();
  return pair;
}

}  // namespace

TEST(LineCocycle, Values) {
  const auto U = z1_cocycle();
  EXPECT_EQ(U(pts({0}), pts({-1, 1})), Z(1));
  EXPECT_EQ(U(pts({5}), pts({-1, 1})), Z(0));
  EXPECT_EQ(U(pts({-1, 1}), pts({0})), Z(-1));
  EXPECT_EQ(U(pts({0}), pts({0})), Z(0));
  const auto dU = coboundary(U);
  for (long long a = -2; a <= 2; ++a)
    for (long long b = -2; b <= 2; ++b)
      for (long long c = -2; c <= 2; ++c)
        for (long long d = -2; d <= 2; ++d) {
          EXPECT_EQ(dU(pts({a}), pts({b, c, d})), Z(0));
          EXPECT_EQ(dU(pts({a, b}), pts({c, d})), Z(0));
          EXPECT_EQ(dU(pts({a, b, c}), pts({d})), Z(0));
        }
}

TEST(FundamentalCycle, LineTelescopes) {
  const auto line = WindowFamily::grid(1);
  const auto c = build_fundamental_cycle(line, 1, 6);
  const auto b = boundary(c);
  Chain<Z, GridPoint> expect;
  expect.add(pts({6}), Z(1));
  expect.add(pts({-6}), Z(-1));
  EXPECT_EQ(b, expect);
}

TEST(FundamentalCycle, SquareTriangles) {
  const auto plane = WindowFamily::grid(2);
  const auto c = build_fundamental_cycle(plane, 2, 4);
  const Tuple<GridPoint> t1{GridPoint{0, 0}, GridPoint{1, 0}, GridPoint{1, 1}};
  const Tuple<GridPoint> t2{GridPoint{0, 0}, GridPoint{0, 1}, GridPoint{1, 1}};
  EXPECT_EQ(abs(c.coefficient(t1)), Z(1));
  EXPECT_EQ(c.coefficient(t1), -c.coefficient(t2));
  const auto b = boundary(c);
  EXPECT_FALSE(b.zero());
  EXPECT_TRUE(boundary(b).zero());
  // Interior edges cancel.
  EXPECT_EQ(b.coefficient(Tuple<GridPoint>{GridPoint{0, 0}, GridPoint{1, 1}}), Z(0));
  EXPECT_EQ(b.coefficient(Tuple<GridPoint>{GridPoint{0, 0}, GridPoint{1, 0}}), Z(0));
}

TEST(LinePair, VerifiesAndFitsRho) {
  const auto& pair = z1_pair_16();
  ASSERT_TRUE(pair.verification.has_value());
  const auto& v = *pair.verification;
  EXPECT_TRUE(v.cocycle_ok());
  EXPECT_TRUE(v.support_ok());
  EXPECT_TRUE(v.normalization_ok());
  EXPECT_TRUE(v.coverage_ok());
  EXPECT_LE(v.fitted_rho, v.rho_bound);
}

TEST(LinePair, BrokenPairsFailNormalization) {
  const auto line = WindowFamily::grid(1);
  auto doubled = build_z1_pair(line, 12);
  doubled.c = Z(2) * doubled.c;
  const auto vd = verify_pair(doubled, 3);
  EXPECT_FALSE(vd.normalization_ok());
  EXPECT_NE(vd.normalization_witness.find("= 2"), std::string::npos);

  auto zeroed = build_z1_pair(line, 12);
  zeroed.U = {1, [](const Tuple<GridPoint>&, const Tuple<GridPoint>&) { return Z(0); }};
  const auto vz = verify_pair(zeroed, 3);
  EXPECT_FALSE(vz.normalization_ok());
  EXPECT_NE(vz.normalization_witness.find("= 0"), std::string::npos);
}

TEST(LinePair, DualityMaps) {
  const auto& pair = z1_pair_16();
  const TupleCochain<Z> one{0, [](const Simplex&) { return Z(1); }};
  const auto p1 = duality_p<Z>(pair, one);
  EXPECT_EQ(p1, pair.chain());
  const TupleCochain<Z> zero{0, [](const Simplex&) { return Z(0); }};
  EXPECT_TRUE(duality_p<Z>(pair, zero).zero());
  EXPECT_TRUE(duality_q<Z>(pair, Chain<Z>()).fn(Simplex{0}) == Z(0));
  const auto comp = composition_normalization(pair, 4);
  EXPECT_TRUE(comp.passed()) << comp.witness;
}

TEST(LinePair, SlantOfFarChainStaysNear) {
  // q of a far piece of c is supported near that piece.
  const auto& pair = z1_pair_16();
  const auto& w = *pair.window;
  Chain<Z> piece;
  for (const auto& [s, coef] : pair.chain())
    if (pair.point(s[0])[0] >= 8 && pair.point(s[0])[0] < 11) piece.add(s, coef);
  ASSERT_FALSE(piece.zero());
  const auto q = duality_q<Z>(pair, piece);
  for (Index x = 0; x < w.size(); ++x) {
    const long long cx = pair.point(x)[0];
    if (q(Simplex{x}) != 0) EXPECT_TRUE(cx >= 7 && cx <= 12) << cx;
  }
}

TEST(Pairs, UnverifiedInputsRejected) {
  const auto line = WindowFamily::grid(1);
  const auto raw = build_z1_pair(line, 8);
  const TupleCochain<Z> one{0, [](const Simplex&) { return Z(1); }};
  EXPECT_THROW(duality_p<Z>(raw, one), InputError);
  EXPECT_THROW(build_product_pair(raw, raw, WindowFamily::grid(2), 8), InputError);
}

TEST(Pairs, PointFactorIsNeutral) {
  const auto point = with_verification(build_point_pair(), verify_pair(build_point_pair(), 0));
  ASSERT_TRUE(point.verified());
  const auto& line = z1_pair_16();
  const auto family = WindowFamily::grid(1);
  const auto prod = build_product_pair(line, point, family, 16);
  EXPECT_EQ(prod.n, 1);
  EXPECT_EQ(prod.c, line.c);
  for (long long a = -3; a <= 3; ++a)
    for (long long b = -3; b <= 3; ++b)
      EXPECT_EQ(prod.U.fn(pts({a}), pts({b, b + 1})), line.U.fn(pts({a}), pts({b, b + 1})));
}

TEST(PlanePair, ProductVerifiesOnWindow16) {
  const auto line = WindowFamily::grid(1);
  const auto f = build_z1_pair(line, 16);
  const auto factor = with_verification(f, verify_pair(f, 2));
  const auto plane = WindowFamily::grid(2);
  const auto pair = build_product_pair(factor, factor, plane, 16);
  const auto v = verify_pair(pair, 2);
  EXPECT_TRUE(v.passed()) << v.cocycle_witness << " | " << v.support_witness << " | " << v.normalization_witness;
  EXPECT_EQ(v.cocycle_failures, 0u);
}

TEST(PlanePair, SeparationDuality) {
  const auto line = WindowFamily::grid(1);
  const auto f = build_z1_pair(line, 16);
  const auto factor = with_verification(f, verify_pair(f, 2));
  const auto plane = WindowFamily::grid(2);
  const auto raw = build_product_pair(factor, factor, plane, 16);
  const auto pair = with_verification(raw, verify_pair(raw, 2));
  ASSERT_TRUE(pair.verified());
  const auto schedule = ScaleSchedule::parse("windows=8,16;radii=1,2");
  const auto axis = separation_duality_check(plane, resolver(plane, SubsetSpec::parse("axis:0")), pair, schedule);
  EXPECT_TRUE(axis.passed());
  EXPECT_EQ(axis.k, 1);
  EXPECT_EQ(axis.independent_classes, 1u);
  const auto ball = separation_duality_check(plane, resolver(plane, SubsetSpec::parse("ball:3")), pair, schedule);
  EXPECT_EQ(ball.k, 0);
  EXPECT_EQ(ball.independent_classes, 0u);
  EXPECT_TRUE(ball.passed());
}
