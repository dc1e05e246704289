#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "coarsetop/complex.hpp"
#include "coarsetop/ring.hpp"

namespace coarsetop {

enum class RingKind { Z, GF2 };
RingKind parse_ring(std::string_view text);
std::string_view ring_name(RingKind ring);

// Column-major sparse matrix; each column sorted by row, no explicit zeros.
template <class R>
struct SparseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::vector<std::pair<std::size_t, R>>> columns;
};

// ∂_d : C_d → C_{d−1}, columns indexed by degree-d simplices. d ≥ 1.
template <class R>
SparseMatrix<R> boundary_matrix(const TruncatedComplex& K, int d) {
  SparseMatrix<R> m;
  m.rows = K.count(d - 1);
  m.cols = K.count(d);
  m.columns.resize(m.cols);
  std::vector<Index> f(static_cast<std::size_t>(d));
  for (std::size_t j = 0; j < m.cols; ++j) {
    const auto s = K.view(d, j);
    std::map<std::size_t, R> col;
    for (std::size_t drop = 0; drop < s.size(); ++drop) {
      std::size_t w = 0;
      for (std::size_t k = 0; k < s.size(); ++k)
        if (k != drop) f[w++] = s[k];
      auto i = K.index_of(f);
      if (!i) throw InvariantError("face of an enumerated simplex is missing");
      col[*i] += R(eps(static_cast<long long>(drop)));
    }
    for (auto& [i, v] : col)
      if (!is_zero(v)) m.columns[j].push_back({i, v});
  }
  return m;
}

std::size_t rank_gf2(const SparseMatrix<Gf2>& m);

struct SmithResult {
  std::size_t rank = 0;
  std::vector<Integer> invariants;  // nonzero diagonal entries, each dividing the next
  bool self_check_passed = false;
};

// Dense Smith normal form with transforms tracked, so that M = U·D·V can be
// re-multiplied and compared. Throws ResourceError above `max_entries`.
SmithResult smith_normal_form(const SparseMatrix<Integer>& m, bool self_check = true,
                              std::size_t max_entries = 4'000'000);

struct HomologyReport {
  RingKind ring = RingKind::Z;
  int lo = 0;
  int hi = 0;
  std::vector<std::size_t> chain_ranks;                 // dim C_d, d = lo..hi
  std::vector<std::size_t> betti;                       // d = lo..hi
  std::vector<std::vector<std::string>> torsion;        // invariants > 1, ℤ only
  bool self_checked = false;  // U·D·V = M re-multiplied for every SNF
  bool self_check_passed = true;
};

// Homology of the truncation in degrees lo..hi; needs degree hi+1 enumerated.
HomologyReport homology_of_truncation(const TruncatedComplex& K, RingKind ring, int lo, int hi,
                                      bool self_check = true);

// "i j value" lines, one per nonzero entry, column by column.
template <class R>
void export_triplets(std::ostream& os, const SparseMatrix<R>& m) {
  os << "# rows " << m.rows << " cols " << m.cols << "\n";
  for (std::size_t j = 0; j < m.cols; ++j)
    for (const auto& [i, v] : m.columns[j]) os << i << ' ' << j << ' ' << RingTraits<R>::to_string(v) << '\n';
}

}  // namespace coarsetop
