#pragma once

#include <functional>
#include <span>
#include <vector>

#include "coarsetop/chain.hpp"
#include "coarsetop/coarse.hpp"
#include "coarsetop/schedule.hpp"
#include "coarsetop/window.hpp"

namespace coarsetop {

// Where a cochain is nonzero, asked window by window.
using SupportPredicate = std::function<bool(const FiniteMetricSpace&, std::span<const Index>)>;

// Sweep of a cochain's scale-r support over the schedule.
struct CochainSweep {
  int degree = 0;
  std::vector<double> radii;
  std::vector<double> windows;
  std::vector<std::vector<std::size_t>> count;  // [radius][window] nonzero scale-r simplices
  std::vector<std::vector<double>> measure;     // [radius][window], see the predicates
  std::vector<bool> bounded;                    // per radius: measure stable over the top half
  bool member = false;
};

// Cx: for each r, is Supp_r φ bounded? The measure is the largest d(o, x) over
// vertices of nonzero scale-r simplices, so the verdict also reads correctly on
// pseudometric windows where bounded sets can be infinite.
CochainSweep is_coarse_cochain(const WindowFamily& family, const SupportPredicate& nonzero, int degree,
                               const ScaleSchedule& schedule, unsigned threads = 1);

// Cx(X − A): for each r, the largest d(σ, A) (sup over vertices) over nonzero
// scale-r simplices must stay bounded.
CochainSweep is_complement_cochain(const WindowFamily& family, const SupportPredicate& nonzero,
                                   int degree, const SubsetResolver& A, const ScaleSchedule& schedule,
                                   unsigned threads = 1);

using ChainSupport = std::function<std::vector<Simplex>(const FiniteMetricSpace&, double W)>;

struct ChainMembership {
  std::vector<double> windows;
  std::vector<double> diameters;  // largest simplex diameter per window
  bool diameter_stable = false;
  std::vector<double> radii;
  std::vector<std::vector<std::size_t>> near_counts;  // [R][window] |V(c) ∩ N_R(A)|
  std::vector<bool> disjoint;                         // per R
  bool member = false;
};

// cx(X − A): bounded simplex scale and vertex set coarsely disjoint from A.
ChainMembership is_complement_chain(const WindowFamily& family, const ChainSupport& support,
                                    const SubsetResolver& A, const ScaleSchedule& schedule);

}  // namespace coarsetop
