#include "coarsetop/membership.hpp"

#include <algorithm>
#include <cmath>

#include "coarsetop/complex.hpp"
#include "coarsetop/parallel.hpp"

namespace coarsetop {

namespace {

// measure(window, simplex) is maxed over the nonzero scale-r simplices.
template <class Measure>
CochainSweep sweep(const WindowFamily& family, const SupportPredicate& nonzero, int degree,
                   const ScaleSchedule& schedule, unsigned threads, Measure&& measure_for) {
  schedule.validate();
  CochainSweep out;
  out.degree = degree;
  out.radii = schedule.radii;
  out.windows = schedule.windows;
  const std::size_t nr = out.radii.size(), nw = out.windows.size();
  out.count.assign(nr, std::vector<std::size_t>(nw, 0));
  out.measure.assign(nr, std::vector<double>(nw, 0));
  for (double W : schedule.windows) family.window(W);
  parallel_for(nr * nw, threads, [&](std::size_t cell) {
    const std::size_t ri = cell / nw, wi = cell % nw;
    auto w = family.window(out.windows[wi]);
    auto K = TruncatedComplex::enumerate(w, degree, out.radii[ri]);
    auto measure = measure_for(*w);
    std::size_t count = 0;
    double best = 0;
    for (std::size_t i = 0; i < K->count(degree); ++i) {
      auto s = K->view(degree, i);
      if (!nonzero(*w, s)) continue;
      ++count;
      best = std::max(best, measure(s));
    }
    out.count[ri][wi] = count;
    out.measure[ri][wi] = best;
  });
  out.member = true;
  for (std::size_t ri = 0; ri < nr; ++ri) {
    const bool finite = std::all_of(out.measure[ri].begin(), out.measure[ri].end(),
                                    [](double v) { return std::isfinite(v); });
    const bool ok = finite && stable_over_top_half(schedule, out.measure[ri], 1e-9);
    out.bounded.push_back(ok);
    out.member = out.member && ok;
  }
  return out;
}

}  // namespace

CochainSweep is_coarse_cochain(const WindowFamily& family, const SupportPredicate& nonzero, int degree,
                               const ScaleSchedule& schedule, unsigned threads) {
  return sweep(family, nonzero, degree, schedule, threads, [](const FiniteMetricSpace& w) {
    const Index o = w.basepoint();
    return [&w, o](std::span<const Index> s) {
      double m = 0;
      for (Index x : s) m = std::max(m, w.distance(o, x));
      return m;
    };
  });
}

CochainSweep is_complement_cochain(const WindowFamily& family, const SupportPredicate& nonzero,
                                   int degree, const SubsetResolver& A, const ScaleSchedule& schedule,
                                   unsigned threads) {
  return sweep(family, nonzero, degree, schedule, threads, [&A](const FiniteMetricSpace& w) {
    auto dist = std::make_shared<std::vector<double>>(w.distance_to_set(A(w)));
    return [dist](std::span<const Index> s) {
      double m = 0;
      for (Index x : s) m = std::max(m, (*dist)[x]);
      return m;
    };
  });
}

ChainMembership is_complement_chain(const WindowFamily& family, const ChainSupport& support,
                                    const SubsetResolver& A, const ScaleSchedule& schedule) {
  schedule.validate();
  ChainMembership out;
  out.windows = schedule.windows;
  out.radii = schedule.radii;
  out.near_counts.assign(out.radii.size(), std::vector<std::size_t>(out.windows.size(), 0));
  for (std::size_t wi = 0; wi < out.windows.size(); ++wi) {
    const double W = out.windows[wi];
    auto w = family.window(W);
    const auto simplices = support(*w, W);
    double diam = 0;
    Subset vertices(w->size());
    for (const auto& s : simplices) {
      diam = std::max(diam, simplex_scale(*w, s));
      for (Index v : s) vertices.insert(v);
    }
    out.diameters.push_back(diam);
    const Subset a = A(*w);
    for (std::size_t ri = 0; ri < out.radii.size(); ++ri)
      out.near_counts[ri][wi] = vertices.intersect(neighborhood(*w, a, out.radii[ri])).count();
  }
  out.diameter_stable = stable_over_top_half(schedule, out.diameters, 1e-9);
  out.member = out.diameter_stable;
  for (std::size_t ri = 0; ri < out.radii.size(); ++ri) {
    const bool ok = stable_over_top_half(schedule, out.near_counts[ri]);
    out.disjoint.push_back(ok);
    out.member = out.member && ok;
  }
  return out;
}

}  // namespace coarsetop
