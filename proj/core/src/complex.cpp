#include "coarsetop/complex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace coarsetop {

std::size_t default_enumeration_cap() {
  if (const char* env = std::getenv("COARSETOP_CAP")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && v >= 1) return static_cast<std::size_t>(v);
  }
  return 50'000'000;
}

namespace {

// Depth-first extension of tuples whose vertices are pairwise within r.
// Vertices are drawn from the closed r-ball of the first vertex, in order, so
// the output is lexicographic.
class Enumerator {
 public:
  Enumerator(const FiniteMetricSpace& space, double r, const std::vector<std::vector<Index>>& balls)
      : space_(space), r_(r), balls_(balls) {}

  template <class Sink>
  void run(std::size_t arity, Sink&& sink) {
    tuple_.assign(arity, 0);
    for (Index v = 0; v < space_.size(); ++v) {
      tuple_[0] = v;
      if (!extend(1, arity, sink)) return;
    }
  }

 private:
  const FiniteMetricSpace& space_;
  double r_;
  const std::vector<std::vector<Index>>& balls_;
  std::vector<Index> tuple_;

  template <class Sink>
  bool extend(std::size_t depth, std::size_t arity, Sink& sink) {
    if (depth == arity) return sink(tuple_);
    for (Index c : balls_[tuple_[0]]) {
      bool ok = true;
      for (std::size_t k = 1; k < depth && ok; ++k)
        ok = tuple_[k] == c || space_.less_equal(space_.distance(tuple_[k], c), r_);
      if (!ok) continue;
      tuple_[depth] = c;
      if (!extend(depth + 1, arity, sink)) return false;
    }
    return true;
  }
};

}  // namespace

std::shared_ptr<const TruncatedComplex> TruncatedComplex::enumerate(
    std::shared_ptr<const FiniteMetricSpace> space, int max_degree, double r, std::size_t cap) {
  if (max_degree < 0) throw InputError("max degree must be ≥ 0");
  if (r < 0) throw InputError("scale must be ≥ 0");
  auto K = std::make_shared<TruncatedComplex>();
  K->space_ = std::move(space);
  K->scale_ = r;
  const auto& X = *K->space_;
  NeighborFinder finder(X, r);
  std::vector<std::vector<Index>> balls(X.size());
  for (Index v = 0; v < X.size(); ++v) balls[v] = finder.neighbors(v);
  Enumerator en(X, r, balls);
  std::size_t total = 0;
  for (int d = 0; d <= max_degree; ++d) {
    const std::size_t arity = static_cast<std::size_t>(d) + 1;
    // Cheap upper bound first, exact count only when the bound is over the cap.
    long double bound = 0;
    for (const auto& b : balls) bound += std::pow(static_cast<long double>(b.size()), d);
    if (bound + total > cap) {
      std::size_t exact = 0;
      const std::size_t limit = cap - std::min(cap, total);
      en.run(arity, [&](const std::vector<Index>&) { return ++exact <= limit; });
      if (exact > limit)
        throw ResourceError("enumeration of degree " + std::to_string(d) + " at scale " +
                            std::to_string(r) + " projects " +
                            std::to_string(static_cast<unsigned long long>(bound)) +
                            " simplices (cap " + std::to_string(cap) + ")");
    }
    std::vector<Index> flat;
    en.run(arity, [&](const std::vector<Index>& t) {
      flat.insert(flat.end(), t.begin(), t.end());
      return true;
    });
    total += flat.size() / arity;
    K->cells_.push_back(std::move(flat));
  }
  return K;
}

std::size_t TruncatedComplex::count(int degree) const {
  if (degree < 0 || degree > max_degree()) return 0;
  return cells_[degree].size() / (static_cast<std::size_t>(degree) + 1);
}

std::span<const Index> TruncatedComplex::view(int degree, std::size_t i) const {
  const std::size_t a = static_cast<std::size_t>(degree) + 1;
  return {cells_[degree].data() + i * a, a};
}

Simplex TruncatedComplex::simplex(int degree, std::size_t i) const {
  auto v = view(degree, i);
  return Simplex(v.begin(), v.end());
}

std::optional<std::size_t> TruncatedComplex::index_of(std::span<const Index> s) const {
  if (s.empty()) return std::nullopt;
  const int d = static_cast<int>(s.size()) - 1;
  if (d > max_degree()) return std::nullopt;
  std::size_t lo = 0, hi = count(d);
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    auto m = view(d, mid);
    if (std::lexicographical_compare(m.begin(), m.end(), s.begin(), s.end())) lo = mid + 1;
    else hi = mid;
  }
  if (lo < count(d)) {
    auto m = view(d, lo);
    if (std::equal(m.begin(), m.end(), s.begin(), s.end())) return lo;
  }
  return std::nullopt;
}

}  // namespace coarsetop
