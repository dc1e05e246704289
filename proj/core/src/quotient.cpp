#include "coarsetop/quotient.hpp"

#include <algorithm>
#include <cmath>

#include "coarsetop/errors.hpp"

namespace coarsetop {

namespace {

class QuotientKernel final : public DistanceKernel {
 public:
  QuotientKernel(std::shared_ptr<const DistanceKernel> base, std::vector<double> to_a)
      : base_(std::move(base)), to_a_(std::move(to_a)) {}
  double distance(Index i, Index j) const override {
    if (i == j) return 0;
    return std::min(to_a_[i] + to_a_[j], base_->distance(i, j));
  }

 private:
  std::shared_ptr<const DistanceKernel> base_;
  std::vector<double> to_a_;
};

// Old indices for the kept points, kCollapsed for the new point.
class CollapsedKernel final : public DistanceKernel {
 public:
  static constexpr Index kCollapsed = static_cast<Index>(-1);

  CollapsedKernel(std::shared_ptr<const DistanceKernel> base, std::vector<double> to_a,
                  std::vector<Index> origin)
      : base_(std::move(base)), to_a_(std::move(to_a)), origin_(std::move(origin)) {}
  double distance(Index i, Index j) const override {
    if (i == j) return 0;
    const Index a = origin_[i], b = origin_[j];
    if (a == kCollapsed) return to_a_[b];
    if (b == kCollapsed) return to_a_[a];
    return std::min(to_a_[a] + to_a_[b], base_->distance(a, b));
  }

 private:
  std::shared_ptr<const DistanceKernel> base_;
  std::vector<double> to_a_;
  std::vector<Index> origin_;
};

}  // namespace

QuotientPseudometric quotient_pseudometric(const FiniteMetricSpace& space, const Subset& A) {
  QuotientPseudometric q;
  q.empty_subset = A.empty();
  FiniteMetricSpace::Options opts;
  opts.basepoint = space.basepoint();
  opts.exact = space.exact();
  opts.pseudometric = true;
  if (q.empty_subset) {
    q.space = FiniteMetricSpace::from_kernel(space.ids(), space.kernel(), opts);
  } else {
    q.space = FiniteMetricSpace::from_kernel(
        space.ids(), std::make_shared<QuotientKernel>(space.kernel(), space.distance_to_set(A)), opts);
  }
  if (space.has_coordinates()) q.space.adopt_coordinates(space);
  return q;
}

CollapsedSpace collapse(const FiniteMetricSpace& space, const Subset& A) {
  if (space.find(kCollapsedId)) throw InputError(std::string("point id '") + kCollapsedId + "' is reserved");
  CollapsedSpace c;
  c.empty_subset = A.empty();
  FiniteMetricSpace::Options opts;
  opts.exact = space.exact();
  if (c.empty_subset) {
    opts.basepoint = space.basepoint();
    c.space = FiniteMetricSpace::from_kernel(space.ids(), space.kernel(), opts);
    c.projection.resize(space.size());
    for (Index i = 0; i < space.size(); ++i) c.projection[i] = i;
    return c;
  }
  std::vector<std::string> ids;
  std::vector<Index> origin;
  c.projection.assign(space.size(), 0);
  for (Index i = 0; i < space.size(); ++i) {
    if (A.contains(i)) continue;
    c.projection[i] = static_cast<Index>(ids.size());
    ids.push_back(space.id(i));
    origin.push_back(i);
  }
  const Index hat = static_cast<Index>(ids.size());
  ids.push_back(kCollapsedId);
  origin.push_back(CollapsedKernel::kCollapsed);
  for (Index i : A.indices()) c.projection[i] = hat;
  c.collapsed = hat;
  opts.basepoint = c.projection[space.basepoint()];
  c.space = FiniteMetricSpace::from_kernel(
      std::move(ids),
      std::make_shared<CollapsedKernel>(space.kernel(), space.distance_to_set(A), std::move(origin)), opts);
  return c;
}

WindowFamily quotient_family(const WindowFamily& family, const SubsetResolver& A) {
  return family.transformed(
      [A](const FiniteMetricSpace& w) { return quotient_pseudometric(w, A(w)).space; },
      family.label() + "/A");
}

DaLemmaReport verify_da_lemma(const FiniteMetricSpace& space, const Subset& A, double r, int arity,
                              const FiniteMetricSpace* candidate) {
  if (arity < 1) throw InputError("arity must be ≥ 1");
  QuotientPseudometric own;
  if (!candidate) {
    own = quotient_pseudometric(space, A);
    candidate = &own.space;
  }
  if (candidate->size() != space.size()) throw InputError("candidate pseudometric has the wrong size");
  const std::size_t n = space.size();
  const auto members = A.indices();
  auto to_set = [&](const FiniteMetricSpace& m) {
    std::vector<double> out(n, kInfinity);
    for (Index x = 0; x < n; ++x)
      for (Index a : members) out[x] = std::min(out[x], m.distance(x, a));
    return out;
  };
  const auto dA_d = to_set(space);
  const auto dA_q = to_set(*candidate);
  auto to_diagonal = [&](const FiniteMetricSpace& m, const Simplex& s) {
    double best = kInfinity;
    for (Index x = 0; x < n; ++x) {
      double worst = 0;
      for (Index v : s) worst = std::max(worst, m.distance(v, x));
      best = std::min(best, worst);
    }
    return best;
  };
  auto to_power = [](const std::vector<double>& dist, const Simplex& s) {
    double worst = 0;
    for (Index v : s) worst = std::max(worst, dist[v]);
    return worst;
  };
  const double tol = space.tolerance();
  auto lt = [tol](double a, double b) { return a < b - tol; };

  DaLemmaReport rep;
  rep.r = r;
  rep.arity = arity;
  auto fail = [&](LemmaCheck& c, const Simplex& s, std::string detail) {
    if (!c.passed) return;
    c.passed = false;
    c.witness = s;
    c.detail = std::move(detail);
  };
  Simplex s(static_cast<std::size_t>(arity), 0);
  while (true) {
    const double pd = to_power(dA_d, s), pq = to_power(dA_q, s);
    const double dd = to_diagonal(space, s), dq = to_diagonal(*candidate, s);
    ++rep.near_A.checked;
    if (lt(pd, r) != lt(pq, r))
      fail(rep.near_A, s, "d(σ,A^{n+1}) = " + std::to_string(pd) + ", d_A(σ,A^{n+1}) = " + std::to_string(pq));
    if (lt(dd, r)) {
      ++rep.diagonal.checked;
      if (!lt(dq, r))
        fail(rep.diagonal, s, "d(σ,Δ) = " + std::to_string(dd) + ", d_A(σ,Δ) = " + std::to_string(dq));
    }
    if (lt(dq, r)) {
      ++rep.doubled.checked;
      if (!lt(std::min(dd, pd), 2 * r))
        fail(rep.doubled, s, "d_A(σ,Δ) = " + std::to_string(dq) + ", d(σ,Δ ∪ A^{n+1}) = " +
                                 std::to_string(std::min(dd, pd)));
    }
    std::size_t k = s.size();
    while (k > 0 && s[k - 1] + 1 == n) s[--k] = 0;
    if (k == 0) break;
    ++s[k - 1];
  }
  return rep;
}

}  // namespace coarsetop
