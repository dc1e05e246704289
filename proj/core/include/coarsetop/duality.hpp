#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coarsetop/chain.hpp"
#include "coarsetop/coarse.hpp"
#include "coarsetop/errors.hpp"
#include "coarsetop/metric.hpp"
#include "coarsetop/products.hpp"
#include "coarsetop/ring.hpp"
#include "coarsetop/schedule.hpp"
#include "coarsetop/window.hpp"

namespace coarsetop {

// Integer lattice point.
using GridPoint = std::vector<long long>;

// The ℤ¹ diagonal cocycle, U = dθ with θ(x⊗y) = [x ≤ y]:
//   U(x ⊗ (b0,b1)) = [x≤b1] − [x≤b0],  U((a0,a1) ⊗ b) = [a1≤b] − [a0≤b].
TensorCochain<Integer, GridPoint> z1_cocycle();

struct PairVerification {
  int n = 0;
  double W = 0;
  double r = 0;
  std::size_t core_points = 0;

  std::size_t cocycle_simplices = 0;  // (a) dU = 0 on core tuples of diameter ≤ r
  std::size_t cocycle_failures = 0;
  std::string cocycle_witness;

  std::size_t support_probes = 0;  // (b) U ≠ 0 on σ⊗τ, each of diameter ≤ r ⇒ d ≤ ρ
  std::size_t support_nonzero = 0;
  double fitted_rho = 0;
  double rho_bound = 0;
  std::string support_witness;

  std::size_t normalization_failures = 0;  // (c) U(x ⊗ c) = 1 on the core
  std::string normalization_witness;

  std::size_t coverage_failures = 0;  // (d) Supp c meets B(x, n) for core x
  std::string coverage_witness;

  bool cocycle_ok() const { return cocycle_simplices > 0 && cocycle_failures == 0; }
  bool support_ok() const { return support_probes > 0 && fitted_rho <= rho_bound; }
  bool normalization_ok() const { return core_points > 0 && normalization_failures == 0; }
  bool coverage_ok() const { return core_points > 0 && coverage_failures == 0; }
  bool passed() const { return cocycle_ok() && support_ok() && normalization_ok() && coverage_ok(); }
};

nlohmann::json to_json(const PairVerification& v);

// A diagonal n-cocycle U on X⊗X and an n-chain c on one grid window. U is
// given on lattice points so that it can be evaluated on any window.
struct OrientationPair {
  int n = 0;
  std::string provenance;  // builtin-z1 | product-built | point
  std::shared_ptr<const FiniteMetricSpace> window;
  double W = 0;
  TensorCochain<Integer, GridPoint> U;
  Chain<Integer, GridPoint> c;
  std::optional<PairVerification> verification;

  bool verified() const { return verification && verification->passed(); }

  GridPoint point(Index i) const;
  Tuple<GridPoint> points(std::span<const Index> s) const;
  Integer evaluate(std::span<const Index> s, std::span<const Index> t) const;
  // c on window indices; simplices leaving the window are dropped.
  Chain<Integer> chain() const;
};

// Σ (i, i+1) for −W ≤ i < W, on the ℤ¹ window of radius W.
OrientationPair build_z1_pair(const WindowFamily& family, double W);

// The one-point space: U = 1 on (o)⊗(o), c = (o).
OrientationPair build_point_pair();

// Standard triangulation of the unit cubes inside window(W) of ℤⁿ, n ≤ 3:
// each cube contributes Σ_π sign(π) (v, v + e_π1, v + e_π1 + e_π2, …).
Chain<Integer, GridPoint> build_fundamental_cycle(const WindowFamily& family, int n, double W);

// Candidate pair on the product grid: c = S(c1 ⊗ c2) with coordinates
// concatenated, U(σ⊗τ) = Σ_{i,j} (−1)^{(k−i)j} U1(_iσ' ⊗ _jτ') U2(σ''_{k−i} ⊗ τ''_{l−j}),
// where ' and '' are the two coordinate projections. Both inputs must be
// verified; the result is unverified.
OrientationPair build_product_pair(const OrientationPair& first, const OrientationPair& second,
                                   const WindowFamily& target, double W);

// Checks (a)–(d) on the core: points at distance ≥ max(r, n) from the rim.
// Support probes σ are anchored in the ball B(o, r) so that the sweep stays
// linear in the window size.
PairVerification verify_pair(const OrientationPair& pair, double r, unsigned threads = 1);

// A copy of `pair` carrying `record`.
OrientationPair with_verification(const OrientationPair& pair, PairVerification record);

namespace detail {
inline void require_verified(const OrientationPair& pair) {
  if (!pair.verified()) throw InputError("orientation pair is not verified");
}
template <class R>
R from_integer(const Integer& v) {
  if constexpr (std::is_same_v<R, Gf2>) return reduce_mod2(v);
  else return v;
}
}  // namespace detail

// p(ψ) = ε′_n ε′_{n−k} (ψ ⌢ c).
template <class R>
Chain<R> duality_p(const OrientationPair& pair, const TupleCochain<R>& psi) {
  detail::require_verified(pair);
  const auto c = map_coefficients<R>(pair.chain(), [](const Integer& v) { return detail::from_integer<R>(v); });
  const int n = pair.n, k = psi.degree;
  return R(eps_prime(n) * eps_prime(n - k)) * cap(psi, c);
}

// q(a) = ε′_{n−k−1} U/a, for a of degree k.
template <class R>
TupleCochain<R> duality_q(const OrientationPair& pair, const Chain<R>& a) {
  detail::require_verified(pair);
  const TensorCochain<R> U{pair.n, [&pair](const Simplex& s, const Simplex& t) {
                             return detail::from_integer<R>(pair.evaluate(s, t));
                           }};
  int k = 0;
  if (!a.zero()) k = degree_of(a.begin()->first);
  const auto q = slant(U, a);
  const R sign(eps_prime(pair.n - k - 1));
  return {q.degree, [q, sign](const Simplex& s) { return sign * q(s); }};
}

// q(p(1)) against the constant 1, pointwise on the core at margin max(r, n).
struct CompositionCheck {
  std::size_t points = 0;
  std::size_t failures = 0;
  std::string witness;
  bool passed() const { return points > 0 && failures == 0; }
};
CompositionCheck composition_normalization(const OrientationPair& pair, double r, unsigned threads = 1);
nlohmann::json to_json(const CompositionCheck& c);

struct DualityClass {
  std::string component;  // id of the smallest member
  std::size_t size = 0;
  std::size_t simplices = 0;          // nonzero terms of p(d 1_C) mod 2
  std::size_t boundary_defects = 0;   // core vertices with nonzero ∂ coefficient
  double max_support_distance = 0;    // max d(v, A) over support vertices
  bool cycle_ok = false;
  bool support_ok = false;
  bool nonzero = false;               // class nonzero in H_1(tube, rim; GF(2))
};

struct SeparationDualityReport {
  double W = 0;
  double R = 0;
  double tube_radius = 0;
  double tube_scale = 2;
  double support_bound = 0;
  std::size_t tube_points = 0;
  std::size_t rim_points = 0;
  std::optional<int> k;
  std::string verdict;
  std::vector<DualityClass> classes;
  std::size_t independent_classes = 0;
  bool matches_k = false;

  bool passed() const;
};

nlohmann::json to_json(const SeparationDualityReport& r);

// For each deep component C at the smallest radius on the pair's window,
// computes p(d 1_C) mod 2 and checks it against A, then counts independent
// classes in H_1(tube, rim; GF(2)) of the scale-2 complex on the tube around A.
SeparationDualityReport separation_duality_check(const WindowFamily& family, const SubsetResolver& A,
                                                 const OrientationPair& pair, const ScaleSchedule& schedule,
                                                 unsigned threads = 1);

}  // namespace coarsetop
