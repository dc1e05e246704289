#include "coarsetop/homology.hpp"

#include <algorithm>
#include <unordered_map>

namespace coarsetop {

RingKind parse_ring(std::string_view text) {
  if (text == "z" || text == "Z") return RingKind::Z;
  if (text == "gf2" || text == "GF2") return RingKind::GF2;
  throw InputError("unknown ring '" + std::string(text) + "' (expected z or gf2)");
}

std::string_view ring_name(RingKind ring) { return ring == RingKind::Z ? "Z" : "GF2"; }

std::size_t rank_gf2(const SparseMatrix<Gf2>& m) {
  // Column reduction keyed on the largest row index.
  std::unordered_map<std::size_t, std::vector<std::size_t>> pivots;
  std::size_t rank = 0;
  std::vector<std::size_t> col, tmp;
  for (std::size_t j = 0; j < m.cols; ++j) {
    col.clear();
    for (const auto& [i, v] : m.columns[j])
      if (v.bit()) col.push_back(i);
    while (!col.empty()) {
      auto it = pivots.find(col.back());
      if (it == pivots.end()) break;
      tmp.clear();
      std::set_symmetric_difference(col.begin(), col.end(), it->second.begin(), it->second.end(),
                                    std::back_inserter(tmp));
      col.swap(tmp);
    }
    if (!col.empty()) {
      pivots.emplace(col.back(), col);
      ++rank;
    }
  }
  return rank;
}

namespace {

using Dense = std::vector<std::vector<Integer>>;

Dense identity(std::size_t n) {
  Dense d(n, std::vector<Integer>(n, 0));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 1;
  return d;
}

Integer abs_of(const Integer& v) { return v < 0 ? Integer(-v) : v; }

// Maintains M = P · A · Q while A is reduced to diagonal form.
class SmithReducer {
 public:
  SmithReducer(Dense a, bool track)
      : a_(std::move(a)), m_(a_.size()), n_(m_ ? a_[0].size() : 0), track_(track) {
    if (track_) {
      p_ = identity(m_);
      q_ = identity(n_);
    }
  }

  void run() {
    const std::size_t lim = std::min(m_, n_);
    for (std::size_t t = 0; t < lim; ++t) {
      if (!place_min_pivot(t)) break;
      while (true) {
        if (!clear_column(t)) continue;
        if (!clear_row(t)) continue;
        if (!fix_divisibility(t)) continue;
        break;
      }
      if (a_[t][t] < 0) negate_row(t);
      ++rank_;
    }
  }

  std::size_t rank() const { return rank_; }
  const Dense& a() const { return a_; }
  const Dense& p() const { return p_; }
  const Dense& q() const { return q_; }

 private:
  Dense a_, p_, q_;
  std::size_t m_, n_;
  bool track_;
  std::size_t rank_ = 0;

  bool place_min_pivot(std::size_t t) {
    std::size_t bi = m_, bj = n_;
    Integer best = 0;
    for (std::size_t i = t; i < m_; ++i)
      for (std::size_t j = t; j < n_; ++j)
        if (a_[i][j] != 0 && (bi == m_ || abs_of(a_[i][j]) < best)) {
          best = abs_of(a_[i][j]);
          bi = i;
          bj = j;
        }
    if (bi == m_) return false;
    swap_rows(t, bi);
    swap_cols(t, bj);
    return true;
  }

  // Returns false when a smaller remainder was moved into the pivot.
  bool clear_column(std::size_t t) {
    for (std::size_t i = t + 1; i < m_; ++i) {
      if (a_[i][t] == 0) continue;
      const Integer q = a_[i][t] / a_[t][t];
      add_row(i, t, -q);
      if (a_[i][t] != 0) {
        swap_rows(t, i);
        return false;
      }
    }
    return true;
  }

  bool clear_row(std::size_t t) {
    for (std::size_t j = t + 1; j < n_; ++j) {
      if (a_[t][j] == 0) continue;
      const Integer q = a_[t][j] / a_[t][t];
      add_col(j, t, -q);
      if (a_[t][j] != 0) {
        swap_cols(t, j);
        return false;
      }
    }
    return true;
  }

  bool fix_divisibility(std::size_t t) {
    for (std::size_t i = t + 1; i < m_; ++i)
      for (std::size_t j = t + 1; j < n_; ++j)
        if (a_[i][j] % a_[t][t] != 0) {
          add_row(t, i, 1);
          return false;
        }
    return true;
  }

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    std::swap(a_[i], a_[j]);
    if (track_)
      for (auto& row : p_) std::swap(row[i], row[j]);
  }
  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (auto& row : a_) std::swap(row[i], row[j]);
    if (track_) std::swap(q_[i], q_[j]);
  }
  // row_i += c · row_j
  void add_row(std::size_t i, std::size_t j, const Integer& c) {
    for (std::size_t k = 0; k < n_; ++k)
      if (a_[j][k] != 0) a_[i][k] += c * a_[j][k];
    if (track_)
      for (auto& row : p_)
        if (row[i] != 0) row[j] -= c * row[i];
  }
  // col_i += c · col_j
  void add_col(std::size_t i, std::size_t j, const Integer& c) {
    for (auto& row : a_)
      if (row[j] != 0) row[i] += c * row[j];
    if (track_)
      for (std::size_t k = 0; k < n_; ++k)
        if (q_[i][k] != 0) q_[j][k] -= c * q_[i][k];
  }
  void negate_row(std::size_t i) {
    for (auto& v : a_[i]) v = -v;
    if (track_)
      for (auto& row : p_) row[i] = -row[i];
  }
};

}  // namespace

SmithResult smith_normal_form(const SparseMatrix<Integer>& m, bool self_check, std::size_t max_entries) {
  SmithResult res;
  const long double entries = static_cast<long double>(m.rows) * m.cols +
                              (self_check ? static_cast<long double>(m.rows) * m.rows +
                                                static_cast<long double>(m.cols) * m.cols
                                          : 0.0L);
  if (entries > max_entries)
    throw ResourceError("Smith normal form of a " + std::to_string(m.rows) + "x" +
                        std::to_string(m.cols) + " matrix exceeds the dense cap");
  if (m.rows == 0 || m.cols == 0) {
    res.self_check_passed = true;
    return res;
  }
  Dense a(m.rows, std::vector<Integer>(m.cols, 0));
  for (std::size_t j = 0; j < m.cols; ++j)
    for (const auto& [i, v] : m.columns[j]) a[i][j] = v;
  SmithReducer red(a, self_check);
  red.run();
  res.rank = red.rank();
  for (std::size_t t = 0; t < res.rank; ++t) res.invariants.push_back(red.a()[t][t]);
  if (!self_check) return res;
  // P · D · Q against the input; D is diagonal with `rank` nonzero entries.
  bool ok = true;
  const auto& p = red.p();
  const auto& q = red.q();
  for (std::size_t i = 0; i < m.rows && ok; ++i) {
    for (std::size_t j = 0; j < m.cols && ok; ++j) {
      Integer acc = 0;
      for (std::size_t t = 0; t < res.rank; ++t)
        if (p[i][t] != 0 && q[t][j] != 0) acc += p[i][t] * res.invariants[t] * q[t][j];
      ok = acc == a[i][j];
    }
  }
  for (std::size_t t = 0; t + 1 < res.rank && ok; ++t) ok = res.invariants[t + 1] % res.invariants[t] == 0;
  res.self_check_passed = ok;
  return res;
}

HomologyReport homology_of_truncation(const TruncatedComplex& K, RingKind ring, int lo, int hi,
                                      bool self_check) {
  if (lo < 0 || hi < lo) throw InputError("bad degree range");
  if (hi + 1 > K.max_degree())
    throw InputError("homology in degree " + std::to_string(hi) + " needs degree " +
                     std::to_string(hi + 1) + " enumerated");
  HomologyReport rep;
  rep.ring = ring;
  rep.lo = lo;
  rep.hi = hi;
  rep.self_checked = self_check && ring == RingKind::Z;
  // rank ∂_d for d = lo..hi+1, with ∂_0 = 0.
  std::vector<std::size_t> ranks;
  std::vector<std::vector<Integer>> invariants;
  for (int d = lo; d <= hi + 1; ++d) {
    if (d == 0) {
      ranks.push_back(0);
      invariants.emplace_back();
      continue;
    }
    if (ring == RingKind::GF2) {
      ranks.push_back(rank_gf2(boundary_matrix<Gf2>(K, d)));
      invariants.emplace_back();
    } else {
      auto snf = smith_normal_form(boundary_matrix<Integer>(K, d), self_check);
      if (self_check) rep.self_check_passed = rep.self_check_passed && snf.self_check_passed;
      ranks.push_back(snf.rank);
      invariants.push_back(std::move(snf.invariants));
    }
  }
  for (int d = lo; d <= hi; ++d) {
    const std::size_t i = static_cast<std::size_t>(d - lo);
    const std::size_t c = K.count(d);
    rep.chain_ranks.push_back(c);
    rep.betti.push_back(c - ranks[i] - ranks[i + 1]);
    std::vector<std::string> tors;
    for (const auto& v : invariants[i + 1])
      if (v > 1) tors.push_back(v.str());
    rep.torsion.push_back(std::move(tors));
  }
  return rep;
}

}  // namespace coarsetop
