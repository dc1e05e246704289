#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "coarsetop/coarse.hpp"
#include "coarsetop/errors.hpp"
#include "coarsetop/metric.hpp"
#include "coarsetop/ring.hpp"
#include "coarsetop/schedule.hpp"
#include "coarsetop/window.hpp"

namespace coarsetop {

// ∂_r C = {x ∉ C : d(x, C) ≤ r}.
Subset r_boundary(const FiniteMetricSpace& space, const Subset& C, double r);

struct Component {
  Index id = 0;  // smallest member
  std::vector<Index> members;
};

// Classes of the relation "joined by a chain of steps of length ≤ s" on S,
// ordered by id.
std::vector<Component> components_at_scale(const FiniteMetricSpace& space, const Subset& S, double s);

struct ComponentSummary {
  std::string id;
  std::size_t size = 0;
  double depth = 0;  // max d(x, A) over members
  std::string witness;
  bool deep = false;
};

struct CellReport {
  double W = 0;
  double R = 0;
  std::size_t deep = 0;
  std::size_t shallow = 0;
  std::vector<ComponentSummary> components;
};

// Components of window(W) − N_R(A) at connectivity s, each marked deep when it
// holds a point with d(x, A) ≥ α·W.
CellReport classify_deep(const WindowFamily& family, const SubsetResolver& A, double R, double W,
                         const ScaleSchedule& schedule);

enum class SweepVerdict { Stable, Unstable, Degenerate };
std::string_view verdict_name(SweepVerdict v);

struct DeepSweepReport {
  std::vector<CellReport> cells;  // windows outer, radii inner
  SweepVerdict verdict = SweepVerdict::Degenerate;
  std::optional<int> k;  // deep count − 1 when stable
};

DeepSweepReport deep_separation_rank(const WindowFamily& family, const SubsetResolver& A,
                                     const ScaleSchedule& schedule, unsigned threads = 1);

// An unordered pair {C, X − C}, stored by its canonical side: the side that
// avoids the basepoint.
class Separation {
 public:
  static Separation from_side(const FiniteMetricSpace& space, const Subset& side);
  const Subset& side() const { return side_; }
  friend bool operator==(const Separation& a, const Separation& b) { return a.side_ == b.side_; }

 private:
  Subset side_;
};

// F(C) = d(1_C): φ(x, y) = 1_C(x) + 1_C(y) over GF(2).
class SeparationCocycle {
 public:
  explicit SeparationCocycle(Subset side) : side_(std::move(side)) {}
  Gf2 operator()(Index x, Index y) const { return Gf2(side_.contains(x) != side_.contains(y)); }
  const Subset& side() const { return side_; }

 private:
  Subset side_;
};

SeparationCocycle separation_to_cocycle(const FiniteMetricSpace& space, const Separation& sep);

// Raised when a GF(2) 1-cochain has nonzero coboundary; carries (x, y, z) with
// dφ(x, y, z) = 1.
class NotACocycle : public InputError {
 public:
  NotACocycle(const std::string& what, std::array<Index, 3> witness)
      : InputError(what), witness_(witness) {}
  const std::array<Index, 3>& witness() const { return witness_; }

 private:
  std::array<Index, 3> witness_;
};

using PairCochain = std::function<Gf2(Index, Index)>;

Separation cocycle_to_separation(const FiniteMetricSpace& space, const PairCochain& phi);

struct ComponentTestReport {
  std::vector<double> radii;
  std::vector<double> windows;
  // profile[i][j] = max d(x, A) over core points of ∂_{radii[i]} C in windows[j];
  // 0 when that boundary is empty.
  std::vector<std::vector<double>> profile;
  std::vector<bool> stable;  // per radius
  bool component = false;
  std::optional<double> escape_radius;
  std::vector<std::string> escape;  // argmax ids per window at escape_radius
};

ComponentTestReport coarse_component_test(const WindowFamily& family, const SubsetResolver& A,
                                          const SubsetResolver& C, const ScaleSchedule& schedule);

}  // namespace coarsetop
