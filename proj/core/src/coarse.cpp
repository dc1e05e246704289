#include "coarsetop/coarse.hpp"

#include <algorithm>

#include "coarsetop/errors.hpp"

namespace coarsetop {

SubsetResolver resolver(const WindowFamily& family, const SubsetSpec& spec) {
  return [&family, spec](const FiniteMetricSpace& w) { return spec.resolve(family, w); };
}

Subset neighborhood(const FiniteMetricSpace& space, const Subset& A, double r) {
  Subset out(space.size());
  if (A.empty()) return out;
  const auto dist = space.distance_to_set(A);
  for (Index x = 0; x < space.size(); ++x)
    if (space.less(dist[x], r)) out.insert(x);
  return out;
}

Subset expanding_neighborhood(const FiniteMetricSpace& space, const Subset& A,
                              const RadiusFunction& f) {
  Subset out(space.size());
  const auto members = A.indices();
  std::vector<double> radius;
  radius.reserve(members.size());
  for (Index a : members) {
    auto r = f(a);
    if (!r) throw InputError("radius function undefined at '" + space.id(a) + "'");
    if (*r < 0) throw InputError("radius function negative at '" + space.id(a) + "'");
    radius.push_back(*r);
  }
  for (Index x = 0; x < space.size(); ++x) {
    for (std::size_t k = 0; k < members.size(); ++k) {
      if (space.less(space.distance(x, members[k]), radius[k])) {
        out.insert(x);
        break;
      }
    }
  }
  return out;
}

bool contained_at_scale(const FiniteMetricSpace& space, const Subset& A, const Subset& B, double R) {
  if (A.empty()) return true;
  const auto dist = space.distance_to_set(B);
  for (Index a : A.indices())
    if (!space.less(dist[a], R)) return false;
  return true;
}

DisjointnessProfile disjointness_profile(const WindowFamily& family, const SubsetResolver& A,
                                         const SubsetResolver& C, double R,
                                         const ScaleSchedule& schedule) {
  schedule.validate();
  DisjointnessProfile p;
  p.R = R;
  p.windows = schedule.windows;
  for (double W : schedule.windows) {
    auto w = family.window(W);
    const Subset a = A(*w);
    const Subset nc = neighborhood(*w, C(*w), R);
    p.counts.push_back(a.intersect(nc).count());
  }
  p.bounded = stable_over_top_half(schedule, p.counts);
  return p;
}

double simplex_scale(const FiniteMetricSpace& space, std::span<const Index> simplex) {
  if (simplex.empty()) throw InputError("simplex_scale of an empty tuple");
  double diam = 0;
  for (std::size_t i = 0; i < simplex.size(); ++i)
    for (std::size_t j = i + 1; j < simplex.size(); ++j)
      diam = std::max(diam, space.distance(simplex[i], simplex[j]));
  return diam;
}

Subset window_core(const FiniteMetricSpace& window, double W, double margin) {
  Subset out(window.size());
  const Index o = window.basepoint();
  for (Index x = 0; x < window.size(); ++x)
    if (window.less_equal(window.distance(x, o), W - margin)) out.insert(x);
  return out;
}

}  // namespace coarsetop
