#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coarsetop/chain.hpp"
#include "coarsetop/coarse.hpp"
#include "coarsetop/metric.hpp"
#include "coarsetop/window.hpp"

namespace coarsetop {

inline constexpr const char* kCollapsedId = "@A";

struct QuotientPseudometric {
  FiniteMetricSpace space;    // same points, d_A(x,y) = min(d(x,A) + d(y,A), d(x,y))
  bool empty_subset = false;  // A = ∅, so d_A = d
};

QuotientPseudometric quotient_pseudometric(const FiniteMetricSpace& space, const Subset& A);

// X/A: points outside A in their original order, then the collapsed point "@A".
struct CollapsedSpace {
  FiniteMetricSpace space;
  std::vector<Index> projection;  // X → X/A
  std::optional<Index> collapsed;
  bool empty_subset = false;
};

CollapsedSpace collapse(const FiniteMetricSpace& space, const Subset& A);

// Windows of X with d replaced by d_A, where A is resolved per window.
WindowFamily quotient_family(const WindowFamily& family, const SubsetResolver& A);

struct LemmaCheck {
  bool passed = true;
  std::size_t checked = 0;
  std::optional<Simplex> witness;
  std::string detail;
};

// The three neighbourhood comparisons between d and d_A, run exhaustively over
// all tuples of the given arity in the stabilized sup metric:
//   near_A:   N_r^d(A^{n+1}) = N_r^{d_A}(A^{n+1})
//   diagonal: N_r^d(Δ) ⊆ N_r^{d_A}(Δ)
//   doubled:  N_r^{d_A}(Δ) ⊆ N_{2r}^d(Δ ∪ A^{n+1})
struct DaLemmaReport {
  double r = 0;
  int arity = 0;
  LemmaCheck near_A;
  LemmaCheck diagonal;
  LemmaCheck doubled;
  bool passed() const { return near_A.passed && diagonal.passed && doubled.passed; }
};

// `candidate` replaces d_A when given; it must have the same points as `space`.
DaLemmaReport verify_da_lemma(const FiniteMetricSpace& space, const Subset& A, double r, int arity,
                              const FiniteMetricSpace* candidate = nullptr);

}  // namespace coarsetop
