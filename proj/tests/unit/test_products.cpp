#include <gtest/gtest.h>

#include "coarsetop/products.hpp"
#include "coarsetop/products_selftest.hpp"
#include "coarsetop/rng.hpp"

using namespace coarsetop;

namespace {

using P = PairVertex<Index, Index>;
using Z = Integer;

P pv(Index a, Index b) { return {a, b}; }

Chain<Z> random_chain(SplitMix64& g, int degree, std::size_t symbols, int terms) {
  Chain<Z> c;
  for (int t = 0; t < terms; ++t) {
    Simplex s;
    for (int k = 0; k <= degree; ++k) s.push_back(static_cast<Index>(g.below(symbols)));
    c.add(s, Z(static_cast<long long>(g.below(5)) - 2));
  }
  return c;
}

TupleCochain<Z> random_cochain(std::uint64_t salt, int degree) {
  return {degree, [salt](const Simplex& s) {
            std::uint64_t h = salt;
            for (Index v : s) h = mix64(h, v);
            return Z(static_cast<long long>(h % 5) - 2);
          }};
}

TensorCochain<Z> random_tensor_cochain(std::uint64_t salt, int degree) {
  return {degree, [salt](const Simplex& s, const Simplex& t) {
            std::uint64_t h = salt;
            for (Index v : s) h = mix64(h, v);
            h = mix64(h, 0xfeed);
            for (Index v : t) h = mix64(h, v);
            return Z(static_cast<long long>(h % 5) - 2);
          }};
}

}  // namespace

TEST(Faces, FrontAndBack) {
  const Simplex s{7, 8, 9};
  EXPECT_EQ(front_face(s, 1), (Simplex{7, 8}));
  EXPECT_EQ(back_face(s, 1), (Simplex{8, 9}));
  EXPECT_EQ(front_face(s, 0), (Simplex{7}));
  EXPECT_EQ(back_face(s, 2), s);
  EXPECT_EQ(back_face(s, 0), (Simplex{9}));
}

TEST(AlexanderWhitney, Examples) {
  const Tuple<P> rho{pv(0, 10), pv(1, 11)};
  const auto a = alexander_whitney<Z, Index, Index>(rho);
  TensorChain<Z> expect;
  expect.add({Simplex{0}, Simplex{10, 11}}, Z(1));
  expect.add({Simplex{0, 1}, Simplex{11}}, Z(1));
  EXPECT_EQ(a, expect);
  const auto point = alexander_whitney<Z, Index, Index>(Tuple<P>{pv(3, 4)});
  EXPECT_EQ(point, (TensorChain<Z>({Simplex{3}, Simplex{4}}, Z(1))));
}

TEST(CrossProduct, Examples) {
  const auto a = cross_product<Z, Index, Index>(Simplex{0, 1}, Simplex{10});
  EXPECT_EQ(a, (Chain<Z, P>(Tuple<P>{pv(0, 10), pv(1, 10)}, Z(1))));
  const auto b = cross_product<Z, Index, Index>(Simplex{0, 1}, Simplex{10, 11});
  Chain<Z, P> expect;
  expect.add(Tuple<P>{pv(0, 10), pv(1, 10), pv(1, 11)}, Z(1));
  expect.add(Tuple<P>{pv(0, 10), pv(0, 11), pv(1, 11)}, Z(-1));
  EXPECT_EQ(b, expect);
}

TEST(CrossProduct, ChainMapAndLeftInverse) {
  SplitMix64 g(4);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = static_cast<int>(g.below(3)), l = static_cast<int>(g.below(3));
    Simplex s, t;
    for (int i = 0; i <= k; ++i) s.push_back(static_cast<Index>(g.below(4)));
    for (int i = 0; i <= l; ++i) t.push_back(static_cast<Index>(g.below(4)));
    const TensorChain<Z> st({s, t}, Z(1));
    EXPECT_EQ(boundary(cross_product(st)), cross_product(boundary(st)));
    const auto c = cross_product(st);
    EXPECT_EQ(boundary(alexander_whitney(c)), alexander_whitney(boundary(c)));
  }
}

TEST(Transpose, Examples) {
  const TensorChain<Z> a({Simplex{0, 1}, Simplex{2}}, Z(1));
  EXPECT_EQ(transpose(a), (TensorChain<Z>({Simplex{2}, Simplex{0, 1}}, Z(1))));
  const TensorChain<Z> b({Simplex{0, 1}, Simplex{2, 3}}, Z(1));
  EXPECT_EQ(transpose(b), (TensorChain<Z>({Simplex{2, 3}, Simplex{0, 1}}, Z(-1))));
  EXPECT_EQ(transpose(transpose(b)), b);
}

TEST(TranspositionHomotopy, Examples) {
  const Chain<Z, P> c(Tuple<P>{pv(0, 1)}, Z(1));
  const auto D = transposition_homotopy(c);
  EXPECT_EQ(D, (Chain<Z, P>(Tuple<P>{pv(0, 1), pv(1, 0)}, Z(1))));
  Chain<Z, P> t_minus_id;
  t_minus_id.add(Tuple<P>{pv(1, 0)}, Z(1));
  t_minus_id.add(Tuple<P>{pv(0, 1)}, Z(-1));
  EXPECT_EQ(boundary(D), t_minus_id);

  // Diagonal entries are fixed by T, so ∂D + D∂ vanishes on them.
  const Chain<Z, P> diag(Tuple<P>{pv(2, 2), pv(3, 3)}, Z(1));
  EXPECT_TRUE((boundary(transposition_homotopy(diag)) + transposition_homotopy(boundary(diag))).zero());
}

TEST(PrismHomotopy, Examples) {
  auto f = [](Index x) { return x + 10; };
  auto g = [](Index x) { return x + 20; };
  const Chain<Z> point(Simplex{3}, Z(1));
  const auto D = prism_homotopy<Z, Index, Index>(point, f, g);
  EXPECT_EQ(D, (Chain<Z>(Simplex{13, 23}, Z(1))));
  SplitMix64 r(8);
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = random_chain(r, 1 + static_cast<int>(r.below(3)), 6, 3);
    const auto same = prism_homotopy<Z, Index, Index>(c, f, f);
    EXPECT_TRUE((boundary(same) + prism_homotopy<Z, Index, Index>(boundary(c), f, f)).zero());
  }
}

TEST(DiagonalApproximation, Examples) {
  const auto a = diagonal_approximation(TensorChain<Z>({Simplex{0}, Simplex{5}}, Z(1)));
  QuadChain<Z> expect;
  expect.add({Simplex{0}, Simplex{5}, Simplex{0}, Simplex{5}}, Z(1));
  EXPECT_EQ(a, expect);
  const auto b = diagonal_approximation(TensorChain<Z>({Simplex{0, 1}, Simplex{5}}, Z(1)));
  EXPECT_EQ(b.size(), 2u);
  for (const auto& [key, coef] : b) EXPECT_EQ(coef, Z(1));
}

TEST(Cup, UnitAndZero) {
  const TensorCochain<Z> unit{0, [](const Simplex&, const Simplex&) { return Z(1); }};
  const TensorCochain<Z> zero{1, [](const Simplex&, const Simplex&) { return Z(0); }};
  const auto phi = random_tensor_cochain(99, 2);
  SplitMix64 g(6);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = static_cast<int>(g.below(3));
    Simplex s, t;
    for (int i = 0; i <= k; ++i) s.push_back(static_cast<Index>(g.below(5)));
    for (int i = 0; i <= 2 - k; ++i) t.push_back(static_cast<Index>(g.below(5)));
    EXPECT_EQ(cup(phi, unit)(s, t), phi(s, t));
    EXPECT_EQ(cup(unit, phi)(s, t), phi(s, t));
    EXPECT_EQ(cup(zero, phi).degree, 3);
  }
}

TEST(Cap, Examples) {
  const auto psi = random_cochain(5, 1);
  const Simplex s{0, 1, 2};
  EXPECT_EQ(cap(psi, Chain<Z>(s, Z(1))), (Chain<Z>(Simplex{0, 1}, psi(Simplex{1, 2}))));
  const auto point = random_cochain(6, 0);
  EXPECT_EQ(cap(point, Chain<Z>(s, Z(1))), (Chain<Z>(s, point(Simplex{2}))));
}

TEST(Slant, Examples) {
  // (φ/σ)(x) = φ((x) ⊗ σ) when deg σ = deg φ.
  const auto phi = random_tensor_cochain(17, 1);
  const Simplex sigma{3, 4};
  const auto q = slant(phi, Chain<Z>(sigma, Z(1)));
  EXPECT_EQ(q.degree, 0);
  for (Index x = 0; x < 6; ++x) EXPECT_EQ(q(Simplex{x}), phi(Simplex{x}, sigma));

  // Decomposable φ = F × G: φ/σ = G(σ) F.
  const auto F = random_cochain(1, 1), G = random_cochain(2, 1);
  const TensorCochain<Z> FG{2, [F, G](const Simplex& s, const Simplex& t) { return F(s) * G(t); }};
  const auto r = slant(FG, Chain<Z>(sigma, Z(1)));
  for (Index a = 0; a < 4; ++a)
    for (Index b = 0; b < 4; ++b) EXPECT_EQ(r(Simplex{a, b}), G(sigma) * F(Simplex{a, b}));

  EXPECT_THROW(slant(phi, Chain<Z>(Simplex{1}, Z(1)) + Chain<Z>(Simplex{1, 2}, Z(1))), std::invalid_argument);
}

TEST(Homotopy, EqualMapsNeedNothing) {
  using Gen = Simplex;
  HomotopySolver<Gen, Z> h([](const Gen&) { return Chain<Z>(); },
                           [](const Gen& g) { return boundary<Z>(g); },
                           [](const Gen& g, const Chain<Z>& z) { return cone(g.front(), z); });
  for (const Gen& g : {Gen{0}, Gen{0, 1}, Gen{2, 0, 1}}) {
    EXPECT_TRUE(h(g).zero());
    EXPECT_TRUE(h.residual(g).zero());
  }
}

TEST(SelfTest, SignSequences) {
  for (const auto& c : sign_sequence_checks()) EXPECT_TRUE(c.passed()) << c.name;
  EXPECT_EQ(eps_prime(-1), 1);
  EXPECT_EQ(eps_prime(1), -1);
  EXPECT_EQ(eps_prime(2), -1);
  EXPECT_EQ(eps_prime(3), 1);
}

TEST(SelfTest, SignTablesShape) {
  const auto tables = sign_identity_tables(8);
  ASSERT_EQ(tables.size(), 3u);
  for (const auto& t : tables) EXPECT_EQ(t.rows.size(), 45u) << t.name;
  // The first composite identity, as stated, breaks at n = 1, k = 0; the form
  // with ε′_k in place of ε′_{n−k−1} holds everywhere.
  EXPECT_GT(tables[0].failures(), 0u);
  const auto row = std::find_if(tables[0].rows.begin(), tables[0].rows.end(),
                                [](const auto& r) { return r.n == 1 && r.k == 0; });
  ASSERT_NE(row, tables[0].rows.end());
  EXPECT_NE(row->lhs, row->rhs);
  EXPECT_EQ(tables[1].failures(), 0u);
  EXPECT_EQ(tables[2].failures(), 0u);
}

TEST(SelfTest, SmallBatteriesPass) {
  AlgebraBatteryOptions o;
  o.instances = 300;
  for (const auto& c : run_algebra_battery(o)) EXPECT_TRUE(c.passed()) << c.group << "/" << c.name << " " << c.witness;
  for (const auto& c : run_chain_map_battery(o)) EXPECT_TRUE(c.passed()) << c.group << "/" << c.name << " " << c.witness;
  SlantBatteryOptions s;
  s.exhaustive_max = 1;
  s.exhaustive_symbols = 3;
  s.random_instances = 50;
  for (const auto& c : run_slant_battery(s)) EXPECT_TRUE(c.passed()) << c.name << " " << c.witness;
  EXPECT_TRUE(run_sa_homotopy(2, 3).passed());
}

TEST(SelfTest, AsBranchSmall) {
  AsBranchOptions o;
  o.max_degree = 2;
  o.symbols = 3;
  o.direct_samples = 100;
  const auto r = run_as_branch(o);
  EXPECT_TRUE(r.verified()) << r.residual_witness;
  EXPECT_EQ(r.branch, r.discrepancies ? "homotopy" : "identity");
}

TEST(SelfTest, ReportIsSeedDeterministic) {
  AlgebraBatteryOptions o;
  o.instances = 100;
  o.seed = 123;
  const auto a = run_algebra_battery(o), b = run_algebra_battery(o);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(to_json(a[i]).dump(), to_json(b[i]).dump());
}
