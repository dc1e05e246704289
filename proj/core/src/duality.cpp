#include "coarsetop/duality.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "coarsetop/complex.hpp"
#include "coarsetop/homology.hpp"
#include "coarsetop/parallel.hpp"
#include "coarsetop/separation.hpp"

namespace coarsetop {

namespace {

std::string tuple_text(const FiniteMetricSpace& w, std::span<const Index> t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? " " : "") + w.id(t[i]);
  return s + ")";
}

template <class V>
Tuple<V> slice(const Tuple<V>& t, std::size_t from, std::size_t to) {
  return Tuple<V>(t.begin() + static_cast<std::ptrdiff_t>(from), t.begin() + static_cast<std::ptrdiff_t>(to));
}

GridPoint head(const GridPoint& p, std::size_t d) { return GridPoint(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(d)); }
GridPoint tail(const GridPoint& p, std::size_t d) { return GridPoint(p.begin() + static_cast<std::ptrdiff_t>(d), p.end()); }

Tuple<GridPoint> project(const Tuple<GridPoint>& t, std::size_t d, bool first) {
  Tuple<GridPoint> out;
  out.reserve(t.size());
  for (const auto& p : t) out.push_back(first ? head(p, d) : tail(p, d));
  return out;
}

void require_grid(const WindowFamily& family, int n) {
  if (family.kind() != SpaceKind::Grid || family.dimension() != n)
    throw InputError("expected the lattice zn:" + std::to_string(n) + ", got " + family.label());
}

// Per-block failure tallies merged in block order, so the reported witness does
// not depend on scheduling.
struct BlockTally {
  std::size_t count = 0;
  std::size_t failures = 0;
  std::string witness;
};

BlockTally merge(const std::vector<BlockTally>& blocks) {
  BlockTally out;
  for (const auto& b : blocks) {
    out.count += b.count;
    if (b.failures && out.failures == 0) out.witness = b.witness;
    out.failures += b.failures;
  }
  return out;
}

}  // namespace

TensorCochain<Integer, GridPoint> z1_cocycle() {
  return {1, [](const Tuple<GridPoint>& s, const Tuple<GridPoint>& t) -> Integer {
            if (s.size() == 1 && t.size() == 2) {
              const long long x = s[0][0];
              return Integer(int(x <= t[1][0]) - int(x <= t[0][0]));
            }
            if (s.size() == 2 && t.size() == 1) {
              const long long b = t[0][0];
              return Integer(int(s[1][0] <= b) - int(s[0][0] <= b));
            }
            return Integer(0);
          }};
}

GridPoint OrientationPair::point(Index i) const {
  const auto c = window->coordinates(i);
  GridPoint p(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) p[k] = std::llround(c[k]);
  return p;
}

Tuple<GridPoint> OrientationPair::points(std::span<const Index> s) const {
  Tuple<GridPoint> out;
  out.reserve(s.size());
  for (Index i : s) out.push_back(point(i));
  return out;
}

Integer OrientationPair::evaluate(std::span<const Index> s, std::span<const Index> t) const {
  return U(points(s), points(t));
}

Chain<Integer> OrientationPair::chain() const {
  Chain<Integer> out;
  for (const auto& [s, coef] : c) {
    Simplex idx;
    idx.reserve(s.size());
    for (const auto& p : s) {
      std::optional<Index> i;
      if (!window->has_coordinates()) {
        if (window->size() == 1) i = 0;
      } else {
        i = window->find_coordinates(p);
      }
      if (!i) break;
      idx.push_back(*i);
    }
    if (idx.size() == s.size()) out.add(idx, coef);
  }
  return out;
}

OrientationPair build_z1_pair(const WindowFamily& family, double W) {
  require_grid(family, 1);
  OrientationPair pair;
  pair.n = 1;
  pair.provenance = "builtin-z1";
  pair.window = family.window(W);
  pair.W = W;
  pair.U = z1_cocycle();
  const long long w = static_cast<long long>(std::floor(W));
  for (long long i = -w; i < w; ++i) pair.c.add(Tuple<GridPoint>{GridPoint{i}, GridPoint{i + 1}}, Integer(1));
  return pair;
}

OrientationPair build_point_pair() {
  OrientationPair pair;
  pair.n = 0;
  pair.provenance = "point";
  pair.window = std::make_shared<FiniteMetricSpace>(
      FiniteMetricSpace::from_matrix({"o"}, {0.0}, FiniteMetricSpace::Options{0, true, false}));
  pair.W = 0;
  pair.U = {0, [](const Tuple<GridPoint>& s, const Tuple<GridPoint>& t) {
              return Integer(s.size() == 1 && t.size() == 1 ? 1 : 0);
            }};
  pair.c.add(Tuple<GridPoint>{GridPoint{}}, Integer(1));
  return pair;
}

Chain<Integer, GridPoint> build_fundamental_cycle(const WindowFamily& family, int n, double W) {
  if (n < 1 || n > 3) throw InputError("fundamental cycles are built for n = 1, 2, 3");
  require_grid(family, n);
  const auto w = family.window(W);
  Chain<Integer, GridPoint> out;
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (Index v = 0; v < w->size(); ++v) {
    GridPoint base(static_cast<std::size_t>(n));
    const auto c = w->coordinates(v);
    for (int k = 0; k < n; ++k) base[k] = std::llround(c[k]);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      int inversions = 0;
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) inversions += perm[a] > perm[b];
      Tuple<GridPoint> s{base};
      bool inside = true;
      for (int step = 0; step < n && inside; ++step) {
        GridPoint next = s.back();
        ++next[perm[step]];
        inside = w->find_coordinates(next).has_value();
        s.push_back(std::move(next));
      }
      if (inside) out.add(s, Integer(eps(inversions)));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return out;
}

OrientationPair build_product_pair(const OrientationPair& first, const OrientationPair& second,
                                   const WindowFamily& target, double W) {
  if (!first.verified() || !second.verified()) throw InputError("product pair needs verified factors");
  const std::size_t d1 = first.window->dimension(), d2 = second.window->dimension();
  if (d1 + d2 == 0) return first;
  require_grid(target, static_cast<int>(d1 + d2));
  OrientationPair pair;
  pair.n = first.n + second.n;
  pair.provenance = "product-built";
  pair.window = target.window(W);
  pair.W = W;

  for (const auto& [s, a] : first.c) {
    for (const auto& [t, b] : second.c) {
      for (const auto& [rho, coef] : cross_product<Integer, GridPoint, GridPoint>(s, t)) {
        Tuple<GridPoint> joined;
        joined.reserve(rho.size());
        bool inside = true;
        for (const auto& [x, y] : rho) {
          GridPoint p = x;
          p.insert(p.end(), y.begin(), y.end());
          inside = inside && pair.window->find_coordinates(p).has_value();
          joined.push_back(std::move(p));
        }
        if (inside) pair.c.add(joined, coef * a * b);
      }
    }
  }

  const auto U1 = first.U, U2 = second.U;
  const int n1 = first.n;
  pair.U = {pair.n, [U1, U2, n1, d1](const Tuple<GridPoint>& s, const Tuple<GridPoint>& t) {
              const int k = degree_of(s), l = degree_of(t);
              const auto s1 = project(s, d1, true), s2 = project(s, d1, false);
              const auto t1 = project(t, d1, true), t2 = project(t, d1, false);
              Integer acc = 0;
              for (int i = 0; i <= k; ++i) {
                const int j = n1 - i;
                if (j < 0 || j > l) continue;
                const Integer a = U1(front_face(s1, i), front_face(t1, j));
                if (a == 0) continue;
                const Integer b = U2(back_face(s2, k - i), back_face(t2, l - j));
                if (b == 0) continue;
                acc += Integer(eps(static_cast<long long>(k - i) * j)) * a * b;
              }
              return acc;
            }};
  return pair;
}

PairVerification verify_pair(const OrientationPair& pair, double r, unsigned threads) {
  PairVerification v;
  v.n = pair.n;
  v.W = pair.W;
  v.r = r;
  v.rho_bound = (pair.n + 1) * r;
  const auto& w = *pair.window;
  const double margin = std::max(r, static_cast<double>(pair.n));
  const auto core = window_core(w, pair.W, margin).indices();
  v.core_points = core.size();
  if (core.empty()) return v;
  const auto origin_it = std::find(core.begin(), core.end(), w.basepoint());
  const Index origin = origin_it == core.end() ? 0 : static_cast<Index>(origin_it - core.begin());
  auto core_space = std::make_shared<const FiniteMetricSpace>(w.restrict(core, origin));
  const auto K = TruncatedComplex::enumerate(core_space, pair.n + 1, r);
  auto lift = [&](std::span<const Index> t) {
    Simplex s;
    s.reserve(t.size());
    for (Index i : t) s.push_back(core[i]);
    return s;
  };

  // (a) dU on every split of every core tuple of arity n + 2.
  {
    const int d = pair.n + 1;
    const std::size_t total = K->count(d);
    const std::size_t blocks = std::min<std::size_t>(64, std::max<std::size_t>(1, total));
    std::vector<BlockTally> tallies(blocks);
    parallel_for(blocks, threads, [&](std::size_t b) {
      auto& tally = tallies[b];
      for (std::size_t i = b * total / blocks; i < (b + 1) * total / blocks; ++i) {
        const Simplex t = lift(K->view(d, i));
        const auto pts = pair.points(t);
        for (int k = 0; k <= d; ++k) {
          const Tuple<GridPoint> s = slice(pts, 0, static_cast<std::size_t>(k) + 1);
          const Tuple<GridPoint> u = slice(pts, static_cast<std::size_t>(k) + 1, pts.size());
          if (u.empty()) continue;
          ++tally.count;
          const Integer value = pair.U(boundary(TensorChain<Integer, GridPoint>({s, u}, Integer(1))));
          if (value != 0 && tally.failures++ == 0)
            tally.witness = "dU" + tuple_text(w, std::span<const Index>(t).subspan(0, k + 1)) + "⊗" +
                            tuple_text(w, std::span<const Index>(t).subspan(k + 1)) + " = " + value.str();
        }
      }
    });
    const auto m = merge(tallies);
    v.cocycle_simplices = m.count;
    v.cocycle_failures = m.failures;
    v.cocycle_witness = m.witness;
  }

  // (b) Support: σ inside B(o, r), τ anywhere in the core, both of diameter ≤ r.
  {
    const auto anchor = NeighborFinder(*core_space, r).neighbors(origin);
    Subset in_anchor = Subset::from_indices(core_space->size(), anchor);
    struct Probe {
      std::size_t count = 0, nonzero = 0;
      double rho = 0;
      std::string witness;
    };
    std::vector<Probe> probes(static_cast<std::size_t>(pair.n) + 1);
    parallel_for(probes.size(), threads, [&](std::size_t kk) {
      const int k = static_cast<int>(kk), l = pair.n - k;
      auto& p = probes[kk];
      for (std::size_t a = 0; a < K->count(k); ++a) {
        const auto sv = K->view(k, a);
        if (!std::all_of(sv.begin(), sv.end(), [&](Index x) { return in_anchor.contains(x); })) continue;
        const auto spts = pair.points(lift(sv));
        for (std::size_t b = 0; b < K->count(l); ++b) {
          const auto tv = K->view(l, b);
          ++p.count;
          if (pair.U(spts, pair.points(lift(tv))) == 0) continue;
          ++p.nonzero;
          double far = 0;
          for (Index x : sv)
            for (Index y : tv) far = std::max(far, core_space->distance(x, y));
          if (p.nonzero == 1 || far > p.rho) {
            p.rho = far;
            p.witness = tuple_text(w, lift(sv)) + "⊗" + tuple_text(w, lift(tv));
          }
        }
      }
    });
    for (const auto& p : probes) {
      v.support_probes += p.count;
      v.support_nonzero += p.nonzero;
      if (p.nonzero && (v.support_witness.empty() || p.rho > v.fitted_rho)) {
        v.fitted_rho = p.rho;
        v.support_witness = p.witness;
      }
    }
  }

  // (c) U(x ⊗ c) = 1 and (d) coverage, on the core.
  {
    std::vector<std::pair<Tuple<GridPoint>, Integer>> terms(pair.c.begin(), pair.c.end());
    Subset support(w.size());
    for (const auto& [s, coef] : pair.chain())
      for (Index x : s) support.insert(x);
    NeighborFinder near(w, pair.n);
    std::vector<BlockTally> norm(core.size()), cover(core.size());
    parallel_for(core.size(), threads, [&](std::size_t i) {
      const Index x = core[i];
      const Tuple<GridPoint> xs{pair.point(x)};
      Integer value = 0;
      for (const auto& [s, coef] : terms) value += coef * pair.U(xs, s);
      if (value != 1) {
        norm[i].failures = 1;
        norm[i].witness = "U(" + w.id(x) + "⊗c) = " + value.str();
      }
      const auto ball = near.neighbors(x);
      if (std::none_of(ball.begin(), ball.end(), [&](Index y) { return support.contains(y); })) {
        cover[i].failures = 1;
        cover[i].witness = "no vertex of c within " + std::to_string(pair.n) + " of " + w.id(x);
      }
    });
    const auto mn = merge(norm), mc = merge(cover);
    v.normalization_failures = mn.failures;
    v.normalization_witness = mn.witness;
    v.coverage_failures = mc.failures;
    v.coverage_witness = mc.witness;
  }
  return v;
}

OrientationPair with_verification(const OrientationPair& pair, PairVerification record) {
  OrientationPair out = pair;
  out.verification = std::move(record);
  return out;
}

nlohmann::json to_json(const PairVerification& v) {
  auto entry = [](bool ok, const std::string& witness) {
    nlohmann::json j = {{"passed", ok}};
    if (!witness.empty()) j["witness"] = witness;
    return j;
  };
  nlohmann::json cocycle = entry(v.cocycle_ok(), v.cocycle_witness);
  cocycle["simplices"] = v.cocycle_simplices;
  cocycle["failures"] = v.cocycle_failures;
  nlohmann::json support = entry(v.support_ok(), v.support_witness);
  support["probes"] = v.support_probes;
  support["nonzero"] = v.support_nonzero;
  support["fitted_rho"] = v.fitted_rho;
  support["rho_bound"] = v.rho_bound;
  nlohmann::json normalization = entry(v.normalization_ok(), v.normalization_witness);
  normalization["failures"] = v.normalization_failures;
  nlohmann::json coverage = entry(v.coverage_ok(), v.coverage_witness);
  coverage["failures"] = v.coverage_failures;
  return {{"n", v.n},
          {"W", v.W},
          {"r", v.r},
          {"core_points", v.core_points},
          {"cocycle", cocycle},
          {"support_control", support},
          {"normalization", normalization},
          {"coverage", coverage},
          {"passed", v.passed()}};
}

bool SeparationDualityReport::passed() const {
  return matches_k && std::all_of(classes.begin(), classes.end(),
                                  [](const DualityClass& c) { return c.cycle_ok && c.support_ok; });
}

nlohmann::json to_json(const SeparationDualityReport& r) {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& c : r.classes)
    classes.push_back({{"component", c.component},
                       {"size", c.size},
                       {"simplices", c.simplices},
                       {"boundary_defects", c.boundary_defects},
                       {"cycle_ok", c.cycle_ok},
                       {"max_support_distance", c.max_support_distance},
                       {"support_ok", c.support_ok},
                       {"nonzero", c.nonzero}});
  nlohmann::json j = {{"W", r.W},
                      {"R", r.R},
                      {"tube_radius", r.tube_radius},
                      {"tube_scale", r.tube_scale},
                      {"support_bound", r.support_bound},
                      {"tube_points", r.tube_points},
                      {"rim_points", r.rim_points},
                      {"verdict", r.verdict},
                      {"classes", classes},
                      {"independent_classes", r.independent_classes},
                      {"matches_k", r.matches_k},
                      {"passed", r.passed()}};
  j["k"] = r.k ? nlohmann::json(*r.k) : nlohmann::json(nullptr);
  return j;
}

CompositionCheck composition_normalization(const OrientationPair& pair, double r, unsigned threads) {
  detail::require_verified(pair);
  const auto& w = *pair.window;
  const auto core = window_core(w, pair.W, std::max(r, static_cast<double>(pair.n))).indices();
  const TupleCochain<Integer> one{0, [](const Simplex&) { return Integer(1); }};
  const auto pc = duality_p<Integer>(pair, one);
  const auto q = duality_q<Integer>(pair, pc);
  std::vector<BlockTally> tally(core.size());
  parallel_for(core.size(), threads, [&](std::size_t i) {
    const Integer value = q(Simplex{core[i]});
    if (value != 1) {
      tally[i].failures = 1;
      tally[i].witness = "q(p(1))(" + w.id(core[i]) + ") = " + value.str();
    }
  });
  const auto m = merge(tally);
  CompositionCheck c;
  c.points = core.size();
  c.failures = m.failures;
  c.witness = m.witness;
  return c;
}

nlohmann::json to_json(const CompositionCheck& c) {
  return {{"points", c.points}, {"failures", c.failures}, {"witness", c.witness}, {"passed", c.passed()}};
}

SeparationDualityReport separation_duality_check(const WindowFamily& family, const SubsetResolver& A,
                                                 const OrientationPair& pair, const ScaleSchedule& schedule,
                                                 unsigned threads) {
  detail::require_verified(pair);
  if (pair.n != 2) throw InputError("separation duality is checked on the plane only (n = 2)");
  SeparationDualityReport rep;
  const auto sweep = deep_separation_rank(family, A, schedule, threads);
  rep.k = sweep.k;
  rep.verdict = std::string(verdict_name(sweep.verdict));
  rep.W = pair.W;
  rep.R = schedule.radii.front();
  const int n = pair.n;
  rep.support_bound = rep.R + n;
  rep.tube_radius = rep.R + n + 1;

  const auto w = family.window(pair.W);
  if (w->size() != pair.window->size()) throw InputError("orientation pair window does not match the family");
  const Subset a = A(*w);
  const auto dist = w->distance_to_set(a);
  const Subset rest = neighborhood(*w, a, rep.R).complement();
  const Subset core = window_core(*w, pair.W, std::max(rep.R, static_cast<double>(n)));

  // Tube around A and its rim; the rim is taken thicker than the core margin so
  // that ∂p lies inside it.
  Subset tube(w->size());
  for (Index x = 0; x < w->size(); ++x)
    if (w->less_equal(dist[x], rep.tube_radius)) tube.insert(x);
  const Subset rim = tube.minus(window_core(*w, pair.W, std::max(rep.R, static_cast<double>(n)) + 2));
  rep.tube_points = tube.count();
  rep.rim_points = rim.count();

  // Scale-2 complex on the tube: edges and triangles on sorted vertex triples.
  std::map<std::pair<Index, Index>, std::size_t> edges;
  NeighborFinder near(*w, rep.tube_scale);
  std::vector<std::vector<Index>> up(w->size());
  for (Index x : tube.indices())
    for (Index y : near.neighbors(x))
      if (y > x && tube.contains(y)) {
        up[x].push_back(y);
        edges.emplace(std::pair{x, y}, edges.size());
      }
  SparseMatrix<Gf2> base;
  base.rows = edges.size();
  for (Index x : tube.indices()) {
    for (std::size_t i = 0; i < up[x].size(); ++i) {
      for (std::size_t j = i + 1; j < up[x].size(); ++j) {
        const Index y = up[x][i], z = up[x][j];
        auto yz = edges.find({y, z});
        if (yz == edges.end()) continue;
        std::vector<std::pair<std::size_t, Gf2>> col{{edges.at({x, y}), Gf2(1)}, {edges.at({x, z}), Gf2(1)},
                                                     {yz->second, Gf2(1)}};
        std::sort(col.begin(), col.end(), [](const auto& p, const auto& q) { return p.first < q.first; });
        base.columns.push_back(std::move(col));
      }
    }
  }
  for (const auto& [e, row] : edges)
    if (rim.contains(e.first) && rim.contains(e.second)) base.columns.push_back({{row, Gf2(1)}});
  base.cols = base.columns.size();
  const std::size_t base_rank = rank_gf2(base);

  SparseMatrix<Gf2> all = base;
  for (const auto& comp : components_at_scale(*w, rest, schedule.connect)) {
    double depth = 0;
    for (Index x : comp.members) depth = std::max(depth, dist[x]);
    if (!w->less_equal(schedule.alpha * pair.W, depth)) continue;

    DualityClass cls;
    cls.component = w->id(comp.id);
    cls.size = comp.members.size();
    const Subset side = Subset::from_indices(w->size(), comp.members);
    const TupleCochain<Gf2> psi{1, [&side](const Simplex& s) { return Gf2(side.contains(s[0]) != side.contains(s[1])); }};
    const Chain<Gf2> p = duality_p(pair, psi);
    cls.simplices = p.size();

    for (const auto& [v, coef] : boundary(p))
      if (core.contains(v[0])) ++cls.boundary_defects;
    cls.cycle_ok = cls.boundary_defects == 0;

    std::map<std::size_t, Gf2> column;
    bool inside_tube = true;
    for (const auto& [s, coef] : p) {
      for (Index x : s) cls.max_support_distance = std::max(cls.max_support_distance, dist[x]);
      if (s[0] == s[1]) continue;
      auto e = edges.find({std::min(s[0], s[1]), std::max(s[0], s[1])});
      if (e == edges.end()) {
        inside_tube = false;
        continue;
      }
      column[e->second] += coef;
    }
    cls.support_ok = inside_tube && w->less_equal(cls.max_support_distance, rep.support_bound);
    std::vector<std::pair<std::size_t, Gf2>> col;
    for (const auto& [row, value] : column)
      if (!is_zero(value)) col.push_back({row, value});

    SparseMatrix<Gf2> single = base;
    single.columns.push_back(col);
    single.cols = single.columns.size();
    cls.nonzero = rank_gf2(single) > base_rank;
    all.columns.push_back(std::move(col));
    rep.classes.push_back(std::move(cls));
  }
  all.cols = all.columns.size();
  rep.independent_classes = rank_gf2(all) - base_rank;
  rep.matches_k = rep.k.has_value() && static_cast<std::size_t>(*rep.k) == rep.independent_classes;
  return rep;
}

}  // namespace coarsetop
