#include "coarsetop/separation.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "coarsetop/parallel.hpp"
#include "coarsetop/union_find.hpp"

namespace coarsetop {

Subset r_boundary(const FiniteMetricSpace& space, const Subset& C, double r) {
  Subset out(space.size());
  if (C.empty()) return out;
  const auto dist = space.distance_to_set(C);
  for (Index x = 0; x < space.size(); ++x)
    if (!C.contains(x) && space.less_equal(dist[x], r)) out.insert(x);
  return out;
}

std::vector<Component> components_at_scale(const FiniteMetricSpace& space, const Subset& S, double s) {
  const auto members = S.indices();
  UnionFind uf(space.size());
  NeighborFinder finder(space, s);
  for (Index x : members)
    for (Index y : finder.neighbors(x))
      if (y > x && S.contains(y)) uf.unite(x, y);
  std::map<std::size_t, std::size_t> slot;  // root -> position in out
  std::vector<Component> out;
  for (Index x : members) {  // ascending, so the first member seen is the smallest
    auto [it, fresh] = slot.emplace(uf.find(x), out.size());
    if (fresh) out.push_back(Component{x, {}});
    out[it->second].members.push_back(x);
  }
  return out;
}

CellReport classify_deep(const WindowFamily& family, const SubsetResolver& A, double R, double W,
                         const ScaleSchedule& schedule) {
  auto w = family.window(W);
  const Subset a = A(*w);
  const auto dist = w->distance_to_set(a);
  const Subset rest = neighborhood(*w, a, R).complement();
  CellReport cell;
  cell.W = W;
  cell.R = R;
  const double threshold = schedule.alpha * W;
  for (const auto& comp : components_at_scale(*w, rest, schedule.connect)) {
    ComponentSummary summary;
    summary.id = w->id(comp.id);
    summary.size = comp.members.size();
    Index arg = comp.members.front();
    for (Index x : comp.members)
      if (dist[x] > dist[arg]) arg = x;
    summary.depth = dist[arg];
    summary.witness = w->id(arg);
    summary.deep = w->less_equal(threshold, summary.depth);
    (summary.deep ? cell.deep : cell.shallow)++;
    cell.components.push_back(std::move(summary));
  }
  return cell;
}

std::string_view verdict_name(SweepVerdict v) {
  switch (v) {
    case SweepVerdict::Stable: return "stable";
    case SweepVerdict::Unstable: return "unstable";
    case SweepVerdict::Degenerate: return "degenerate";
  }
  return "?";
}

DeepSweepReport deep_separation_rank(const WindowFamily& family, const SubsetResolver& A,
                                     const ScaleSchedule& schedule, unsigned threads) {
  schedule.validate();
  const std::size_t nw = schedule.windows.size(), nr = schedule.radii.size();
  DeepSweepReport report;
  report.cells.resize(nw * nr);
  // Build windows up front so worker threads only read the cache.
  for (double W : schedule.windows) family.window(W);
  parallel_for(nw * nr, threads, [&](std::size_t i) {
    report.cells[i] = classify_deep(family, A, schedule.radii[i % nr], schedule.windows[i / nr], schedule);
  });
  std::vector<std::size_t> top_deep;
  for (std::size_t wi : schedule.top_half())
    for (std::size_t ri = 0; ri < nr; ++ri) top_deep.push_back(report.cells[wi * nr + ri].deep);
  const bool all_equal = std::all_of(top_deep.begin(), top_deep.end(),
                                     [&](std::size_t d) { return d == top_deep.front(); });
  if (all_equal && top_deep.front() == 0) {
    report.verdict = SweepVerdict::Degenerate;
  } else if (all_equal) {
    report.verdict = SweepVerdict::Stable;
    report.k = static_cast<int>(top_deep.front()) - 1;
  } else {
    report.verdict = SweepVerdict::Unstable;
  }
  return report;
}

Separation Separation::from_side(const FiniteMetricSpace& space, const Subset& side) {
  if (side.universe() != space.size()) throw InputError("separation side has the wrong universe");
  Separation s;
  const Subset other = side.complement();
  const Index o = space.basepoint();
  const bool side_has = side.contains(o), other_has = other.contains(o);
  if (side_has != other_has) {
    s.side_ = side_has ? other : side;
    return s;
  }
  // Unreachable for a genuine partition; kept for empty spaces.
  auto min_of = [](const Subset& x) {
    auto idx = x.indices();
    return idx.empty() ? Index(-1) : idx.front();
  };
  s.side_ = min_of(side) <= min_of(other) ? side : other;
  return s;
}

SeparationCocycle separation_to_cocycle(const FiniteMetricSpace&, const Separation& sep) {
  return SeparationCocycle(sep.side());
}

Separation cocycle_to_separation(const FiniteMetricSpace& space, const PairCochain& phi) {
  const std::size_t n = space.size();
  if (n == 0) return Separation::from_side(space, Subset(0));
  const Index o = space.basepoint();
  if (phi(o, o).bit())
    throw NotACocycle("not a cocycle: dφ(" + space.id(o) + "," + space.id(o) + "," + space.id(o) + ") = 1",
                      {o, o, o});
  Subset side(n);
  for (Index x = 0; x < n; ++x)
    if (phi(o, x).bit()) side.insert(x);
  // dφ(o, x, y) = φ(x, y) + φ(o, y) + φ(o, x) must vanish for all x, y.
  for (Index x = 0; x < n; ++x) {
    for (Index y = 0; y < n; ++y) {
      if (phi(x, y).bit() != (side.contains(x) != side.contains(y)))
        throw NotACocycle("not a cocycle: dφ(" + space.id(o) + "," + space.id(x) + "," + space.id(y) + ") = 1",
                          {o, x, y});
    }
  }
  return Separation::from_side(space, side);
}

ComponentTestReport coarse_component_test(const WindowFamily& family, const SubsetResolver& A,
                                          const SubsetResolver& C, const ScaleSchedule& schedule) {
  schedule.validate();
  ComponentTestReport rep;
  rep.radii = schedule.radii;
  rep.windows = schedule.windows;
  rep.profile.assign(rep.radii.size(), std::vector<double>(rep.windows.size(), 0));
  std::vector<std::vector<std::string>> argmax(rep.radii.size(), std::vector<std::string>(rep.windows.size()));
  for (std::size_t wi = 0; wi < rep.windows.size(); ++wi) {
    const double W = rep.windows[wi];
    auto w = family.window(W);
    const Subset c = C(*w);
    const auto dist = w->distance_to_set(A(*w));
    for (std::size_t ri = 0; ri < rep.radii.size(); ++ri) {
      const double r = rep.radii[ri];
      const Subset core = window_core(*w, W, r);
      const Subset bd = r_boundary(*w, c, r).intersect(core);
      double best = 0;
      std::string where;
      for (Index x : bd.indices()) {
        if (where.empty() || dist[x] > best) {
          best = dist[x];
          where = w->id(x);
        }
      }
      rep.profile[ri][wi] = best;
      argmax[ri][wi] = where;
    }
  }
  rep.component = true;
  for (std::size_t ri = 0; ri < rep.radii.size(); ++ri) {
    const bool finite = std::all_of(rep.profile[ri].begin(), rep.profile[ri].end(),
                                    [](double v) { return std::isfinite(v); });
    const bool ok = finite && stable_over_top_half(schedule, rep.profile[ri], 1e-9);
    rep.stable.push_back(ok);
    if (!ok && rep.component) {
      rep.component = false;
      rep.escape_radius = rep.radii[ri];
      rep.escape = argmax[ri];
    }
  }
  return rep;
}

}  // namespace coarsetop
