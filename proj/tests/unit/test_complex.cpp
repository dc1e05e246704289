#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "coarsetop/complex.hpp"
#include "coarsetop/errors.hpp"
#include "coarsetop/homology.hpp"
#include "coarsetop/rng.hpp"
#include "coarsetop/window.hpp"

using namespace coarsetop;

namespace {

std::shared_ptr<const FiniteMetricSpace> owned_graph(const std::string& text) {
  return std::make_shared<FiniteMetricSpace>(*WindowFamily::from_graph_text(text, std::nullopt).ambient());
}

std::string path_text(int n) {
  std::string s;
  for (int i = 0; i + 1 < n; ++i) s += "v" + std::to_string(i) + " v" + std::to_string(i + 1) + " 1\n";
  return s;
}

std::string cycle_text(int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s += "v" + std::to_string(i) + " v" + std::to_string((i + 1) % n) + " 1\n";
  return s;
}

// Oracle: betti numbers of the flag complex of the scale-r graph, with ranks
// computed by dense elimination modulo a large prime (ℤ) or modulo 2.
std::vector<std::size_t> flag_betti(const FiniteMetricSpace& X, double r, int maxdim, long long p) {
  const std::size_t n = X.size();
  std::vector<std::vector<std::vector<Index>>> faces(maxdim + 2);
  for (Index i = 0; i < n; ++i) faces[0].push_back({i});
  for (int d = 1; d <= maxdim + 1; ++d)
    for (const auto& f : faces[d - 1])
      for (Index v = f.back() + 1; v < n; ++v) {
        bool ok = true;
        for (Index u : f) ok = ok && X.distance(u, v) <= r + 1e-9;
        if (ok) {
          auto g = f;
          g.push_back(v);
          faces[d].push_back(g);
        }
      }
  auto rank = [&](int d) -> std::size_t {
    if (d == 0 || faces[d].empty() || faces[d - 1].empty()) return 0;
    const auto& rows = faces[d - 1];
    std::vector<std::vector<long long>> m(rows.size(), std::vector<long long>(faces[d].size(), 0));
    for (std::size_t j = 0; j < faces[d].size(); ++j)
      for (std::size_t drop = 0; drop < faces[d][j].size(); ++drop) {
        auto f = faces[d][j];
        f.erase(f.begin() + static_cast<long>(drop));
        const auto i = static_cast<std::size_t>(std::find(rows.begin(), rows.end(), f) - rows.begin());
        m[i][j] = ((drop % 2 ? -1 : 1) % p + p) % p;
      }
    auto inv = [&](long long a) {
      long long r = 1, e = p - 2;
      while (e) {
        if (e & 1) r = static_cast<long long>((__int128)r * a % p);
        a = static_cast<long long>((__int128)a * a % p);
        e >>= 1;
      }
      return r;
    };
    std::size_t rk = 0;
    for (std::size_t c = 0; c < m[0].size() && rk < m.size(); ++c) {
      std::size_t piv = rk;
      while (piv < m.size() && m[piv][c] == 0) ++piv;
      if (piv == m.size()) continue;
      std::swap(m[piv], m[rk]);
      const long long iv = inv(m[rk][c]);
      for (std::size_t i = 0; i < m.size(); ++i)
        if (i != rk && m[i][c]) {
          const long long f = static_cast<long long>((__int128)m[i][c] * iv % p);
          for (std::size_t k = c; k < m[0].size(); ++k)
            m[i][k] = ((m[i][k] - static_cast<long long>((__int128)f * m[rk][k] % p)) % p + p) % p;
        }
      ++rk;
    }
    return rk;
  };
  std::vector<std::size_t> betti;
  for (int d = 0; d <= maxdim; ++d) betti.push_back(faces[d].size() - rank(d) - rank(d + 1));
  return betti;
}

}  // namespace

TEST(Enumerate, PathGraphCounts) {
  const auto K = TruncatedComplex::enumerate(owned_graph(path_text(7)), 1, 1);
  EXPECT_EQ(K->count(0), 7u);
  EXPECT_EQ(K->count(1), 19u);
}

TEST(Enumerate, ScaleZeroAndFull) {
  const auto X = owned_graph(cycle_text(5));
  const auto K0 = TruncatedComplex::enumerate(X, 3, 0);
  for (int d = 0; d <= 3; ++d) EXPECT_EQ(K0->count(d), 5u);
  const auto Kf = TruncatedComplex::enumerate(X, 2, 10);
  EXPECT_EQ(Kf->count(1), 25u);
  EXPECT_EQ(Kf->count(2), 125u);
}

TEST(Enumerate, LexicographicAndIndexed) {
  const auto K = TruncatedComplex::enumerate(owned_graph(path_text(5)), 2, 1);
  for (int d = 0; d <= 2; ++d)
    for (std::size_t i = 0; i < K->count(d); ++i) {
      const auto s = K->simplex(d, i);
      EXPECT_EQ(K->index_of(s), i);
      if (i > 0) EXPECT_LT(K->simplex(d, i - 1), s);
    }
  EXPECT_FALSE(K->index_of(std::vector<Index>{0, 3}).has_value());
}

TEST(Enumerate, CapRefuses) {
  EXPECT_THROW(TruncatedComplex::enumerate(owned_graph(cycle_text(12)), 3, 100, 1000), ResourceError);
}

TEST(Boundary, Examples) {
  const Simplex e{4, 7};
  const auto b = boundary<Integer>(e);
  EXPECT_EQ(b.coefficient({7}), Integer(1));
  EXPECT_EQ(b.coefficient({4}), Integer(-1));
  EXPECT_TRUE(boundary<Integer>(boundary<Integer>(Simplex{1, 2, 3})).zero());
  EXPECT_TRUE(boundary<Gf2>(Simplex{5, 5}).zero());
}

TEST(Boundary, SquaredZeroOnRandomChains) {
  SplitMix64 g(5);
  for (int trial = 0; trial < 300; ++trial) {
    Chain<Integer> c;
    Chain<Gf2> c2;
    const int d = 1 + static_cast<int>(g.below(4));
    for (int t = 0; t < 4; ++t) {
      Simplex s;
      for (int k = 0; k <= d; ++k) s.push_back(static_cast<Index>(g.below(8)));
      c.add(s, Integer(static_cast<long long>(g.below(7)) - 3));
      c2.add(s, Gf2(static_cast<long long>(g.below(2))));
    }
    EXPECT_TRUE(boundary(boundary(c)).zero());
    EXPECT_TRUE(boundary(boundary(c2)).zero());
  }
}

TEST(Coboundary, ConstantsAndIndicators) {
  const auto X = owned_graph(path_text(6));
  const auto K = TruncatedComplex::enumerate(X, 2, 2);
  const auto one = Cochain<Integer>::from_function(K, 0, [](auto) { return Integer(1); });
  EXPECT_TRUE(coboundary(one).values().empty());
  const auto ind = Cochain<Gf2>::from_function(K, 0, [](auto s) { return Gf2(s[0] < 3 ? 1 : 0); });
  const auto d = coboundary(ind);
  for (std::size_t i = 0; i < K->count(1); ++i) {
    const auto s = K->view(1, i);
    EXPECT_EQ(d.at(i), Gf2((s[0] < 3) != (s[1] < 3) ? 1 : 0));
  }
  EXPECT_TRUE(coboundary(d).values().empty());
}

TEST(Coboundary, SquaredZeroAndAdjunction) {
  SplitMix64 g(9);
  const auto X = owned_graph(cycle_text(7));
  const auto K = TruncatedComplex::enumerate(X, 3, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto phi = Cochain<Integer>::from_function(
        K, 1, [&](auto) { return Integer(static_cast<long long>(g.below(5)) - 2); });
    EXPECT_TRUE(coboundary(coboundary(phi)).values().empty());
    Chain<Integer> c;
    for (int t = 0; t < 5; ++t) c.add(K->simplex(2, g.below(K->count(2))), Integer(static_cast<long long>(g.below(5)) - 2));
    EXPECT_EQ(pairing(coboundary(phi), c), pairing(phi, boundary(c)));
  }
}

TEST(Smith, KnownInvariants) {
  SparseMatrix<Integer> m;
  m.rows = 2;
  m.cols = 2;
  m.columns = {{{0, Integer(2)}, {1, Integer(6)}}, {{0, Integer(4)}, {1, Integer(8)}}};
  const auto s = smith_normal_form(m);
  EXPECT_TRUE(s.self_check_passed);
  ASSERT_EQ(s.rank, 2u);
  EXPECT_EQ(abs(s.invariants[0]), Integer(2));
  EXPECT_EQ(abs(s.invariants[1]), Integer(4));
}

TEST(Smith, RandomMatricesSelfCheck) {
  SplitMix64 g(21);
  for (int trial = 0; trial < 40; ++trial) {
    SparseMatrix<Integer> m;
    m.rows = 1 + g.below(7);
    m.cols = 1 + g.below(7);
    m.columns.resize(m.cols);
    for (std::size_t j = 0; j < m.cols; ++j)
      for (std::size_t i = 0; i < m.rows; ++i)
        if (g.below(3) == 0) m.columns[j].push_back({i, Integer(static_cast<long long>(g.below(41)) - 20)});
    for (auto& col : m.columns)
      col.erase(std::remove_if(col.begin(), col.end(), [](const auto& e) { return e.second == 0; }), col.end());
    const auto s = smith_normal_form(m);
    EXPECT_TRUE(s.self_check_passed) << trial;
    for (std::size_t t = 0; t + 1 < s.invariants.size(); ++t) EXPECT_EQ(s.invariants[t + 1] % s.invariants[t], 0);
  }
}

TEST(Smith, DenseCapRefuses) {
  SparseMatrix<Integer> m;
  m.rows = 3000;
  m.cols = 3000;
  m.columns.resize(m.cols);
  EXPECT_THROW(smith_normal_form(m, true, 1000), ResourceError);
}

TEST(Homology, PathAndCycle) {
  const auto path = TruncatedComplex::enumerate(owned_graph(path_text(7)), 2, 1);
  for (auto ring : {RingKind::Z, RingKind::GF2}) {
    const auto h = homology_of_truncation(*path, ring, 0, 1);
    EXPECT_EQ(h.betti, (std::vector<std::size_t>{1, 0}));
    EXPECT_TRUE(h.self_check_passed);
  }
  const auto cyc = TruncatedComplex::enumerate(owned_graph(cycle_text(6)), 2, 1);
  for (auto ring : {RingKind::Z, RingKind::GF2}) {
    const auto h = homology_of_truncation(*cyc, ring, 0, 1);
    EXPECT_EQ(h.betti, (std::vector<std::size_t>{1, 1}));
  }
}

TEST(Homology, SinglePoint) {
  const auto X = std::make_shared<FiniteMetricSpace>(FiniteMetricSpace::from_matrix({"o"}, {0}, {}));
  const auto K = TruncatedComplex::enumerate(X, 3, 1);
  EXPECT_EQ(homology_of_truncation(*K, RingKind::Z, 0, 2).betti, (std::vector<std::size_t>{1, 0, 0}));
}

TEST(Homology, MatchesFlagComplexOracle) {
  SplitMix64 g(17);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 5 + g.below(4);
    std::vector<std::string> ids;
    std::vector<double> coords;
    for (std::size_t i = 0; i < n; ++i) {
      ids.push_back("p" + std::to_string(i));
      coords.push_back(static_cast<double>(g.below(5)));
      coords.push_back(static_cast<double>(g.below(5)));
    }
    const auto X = std::make_shared<FiniteMetricSpace>(
        FiniteMetricSpace::from_coordinates(ids, 2, coords, Norm::L2, {.basepoint = 0, .exact = false, .pseudometric = true}));
    const double r = 1.5;
    const auto K = TruncatedComplex::enumerate(X, 2, r);
    EXPECT_EQ(homology_of_truncation(*K, RingKind::Z, 0, 1).betti, flag_betti(*X, r, 1, 1'000'000'007)) << trial;
    EXPECT_EQ(homology_of_truncation(*K, RingKind::GF2, 0, 1).betti, flag_betti(*X, r, 1, 2)) << trial;
  }
}

TEST(Homology, GridTorsionFree) {
  const auto w = WindowFamily::grid(2).window(2);
  const auto K = TruncatedComplex::enumerate(w, 2, 1);
  const auto h = homology_of_truncation(*K, RingKind::Z, 0, 1);
  EXPECT_EQ(h.betti, (std::vector<std::size_t>{1, 4}));
  for (const auto& t : h.torsion) EXPECT_TRUE(t.empty());
}

TEST(Homology, RequiresNextDegree) {
  const auto K = TruncatedComplex::enumerate(owned_graph(path_text(3)), 1, 1);
  EXPECT_THROW(homology_of_truncation(*K, RingKind::Z, 0, 1), InputError);
}

TEST(Triplets, Format) {
  const auto K = TruncatedComplex::enumerate(owned_graph(path_text(2)), 1, 1);
  std::ostringstream os;
  export_triplets(os, boundary_matrix<Integer>(*K, 1));
  // Simplices (0,0) (0,1) (1,0) (1,1); only the two edges have nonzero boundary.
  EXPECT_EQ(os.str(), "# rows 2 cols 4\n0 1 -1\n1 1 1\n0 2 1\n1 2 -1\n");
}
