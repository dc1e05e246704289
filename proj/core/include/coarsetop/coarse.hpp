#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "coarsetop/metric.hpp"
#include "coarsetop/schedule.hpp"
#include "coarsetop/window.hpp"

namespace coarsetop {

// Produces a subset of a given window; lets predicates take either a
// SubsetSpec or an ad hoc rule.
using SubsetResolver = std::function<Subset(const FiniteMetricSpace&)>;

SubsetResolver resolver(const WindowFamily& family, const SubsetSpec& spec);

// N_r(A) = {x : d(x, A) < r}. Empty when A is empty.
Subset neighborhood(const FiniteMetricSpace& space, const Subset& A, double r);

// Per-point radius f(a) for a ∈ A; nullopt means undefined.
using RadiusFunction = std::function<std::optional<double>(Index)>;

// N_f(A) = union of the open balls B(a, f(a)), a ∈ A. Throws InputError when
// f is undefined or negative on some point of A.
Subset expanding_neighborhood(const FiniteMetricSpace& space, const Subset& A,
                              const RadiusFunction& f);

// A ⊂[R] B: every a ∈ A has d(a, B) < R. Vacuously true for empty A.
bool contained_at_scale(const FiniteMetricSpace& space, const Subset& A, const Subset& B, double R);

struct DisjointnessProfile {
  double R = 0;
  std::vector<double> windows;
  std::vector<std::size_t> counts;  // |A ∩ N_R(C)| per window
  bool bounded = false;             // counts stable over the top half
};

DisjointnessProfile disjointness_profile(const WindowFamily& family, const SubsetResolver& A,
                                         const SubsetResolver& C, double R,
                                         const ScaleSchedule& schedule);

// Diameter of the vertex tuple. Throws InputError on an empty tuple.
double simplex_scale(const FiniteMetricSpace& space, std::span<const Index> simplex);

// Points at distance ≤ W − margin from the basepoint of window W.
Subset window_core(const FiniteMetricSpace& window, double W, double margin);

}  // namespace coarsetop
