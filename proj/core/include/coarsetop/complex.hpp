#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "coarsetop/chain.hpp"
#include "coarsetop/errors.hpp"
#include "coarsetop/metric.hpp"

namespace coarsetop {

// Cap on enumerated simplices, from COARSETOP_CAP or 5e7.
std::size_t default_enumeration_cap();

// All tuples of diameter ≤ r in degrees 0..max_degree, each degree in
// lexicographic order.
class TruncatedComplex {
 public:
  static std::shared_ptr<const TruncatedComplex> enumerate(
      std::shared_ptr<const FiniteMetricSpace> space, int max_degree, double r,
      std::size_t cap = default_enumeration_cap());

  const FiniteMetricSpace& space() const { return *space_; }
  const std::shared_ptr<const FiniteMetricSpace>& space_ptr() const { return space_; }
  int max_degree() const { return static_cast<int>(cells_.size()) - 1; }
  double scale() const { return scale_; }

  std::size_t count(int degree) const;
  Simplex simplex(int degree, std::size_t i) const;
  std::span<const Index> view(int degree, std::size_t i) const;
  std::optional<std::size_t> index_of(std::span<const Index> s) const;

 private:
  std::shared_ptr<const FiniteMetricSpace> space_;
  double scale_ = 0;
  std::vector<std::vector<Index>> cells_;  // flat, stride degree + 1
};

// Sparse cochain on one degree of a truncated complex; values outside the
// enumeration read as zero.
template <class R>
class Cochain {
 public:
  struct Evaluation {
    R value;
    bool truncated;
  };

  Cochain(std::shared_ptr<const TruncatedComplex> complex, int degree)
      : complex_(std::move(complex)), degree_(degree) {
    if (degree < 0 || degree > complex_->max_degree())
      throw InputError("cochain degree outside the enumerated range");
  }

  template <class Fn>
  static Cochain from_function(std::shared_ptr<const TruncatedComplex> complex, int degree, Fn&& fn) {
    Cochain c(std::move(complex), degree);
    const std::size_t n = c.complex_->count(degree);
    for (std::size_t i = 0; i < n; ++i) c.set(i, fn(c.complex_->view(degree, i)));
    return c;
  }

  const TruncatedComplex& complex() const { return *complex_; }
  const std::shared_ptr<const TruncatedComplex>& complex_ptr() const { return complex_; }
  int degree() const { return degree_; }
  std::size_t arity() const { return static_cast<std::size_t>(degree_) + 1; }

  void set(std::size_t index, const R& value) {
    if (is_zero(value)) values_.erase(index);
    else values_[index] = value;
  }
  R at(std::size_t index) const {
    auto it = values_.find(index);
    return it == values_.end() ? R(0) : it->second;
  }
  const std::map<std::size_t, R>& values() const { return values_; }

  Evaluation evaluate(std::span<const Index> s) const {
    if (s.size() != arity()) return {R(0), false};
    auto i = complex_->index_of(s);
    if (!i) return {R(0), true};
    return {at(*i), false};
  }

  friend bool operator==(const Cochain& a, const Cochain& b) {
    return a.degree_ == b.degree_ && a.values_ == b.values_;
  }

 private:
  std::shared_ptr<const TruncatedComplex> complex_;
  int degree_;
  std::map<std::size_t, R> values_;
};

// dφ(σ) = Σ (−1)^i φ(d_i σ) on the next degree of the same complex.
template <class R>
Cochain<R> coboundary(const Cochain<R>& phi) {
  const auto& K = phi.complex();
  const int d = phi.degree() + 1;
  if (d > K.max_degree()) throw InputError("coboundary needs degree " + std::to_string(d) + " enumerated");
  Cochain<R> out(phi.complex_ptr(), d);
  if (phi.values().empty()) return out;
  std::vector<Index> f(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < K.count(d); ++i) {
    const auto s = K.view(d, i);
    R acc(0);
    for (std::size_t drop = 0; drop < s.size(); ++drop) {
      std::size_t w = 0;
      for (std::size_t k = 0; k < s.size(); ++k)
        if (k != drop) f[w++] = s[k];
      auto j = K.index_of(f);
      if (!j) throw InvariantError("face of an enumerated simplex is missing");
      const R v = phi.at(*j);
      if (!is_zero(v)) acc += R(eps(static_cast<long long>(drop))) * v;
    }
    out.set(i, acc);
  }
  return out;
}

// ⟨φ, c⟩ = Σ c_σ φ(σ); simplices outside the enumeration contribute zero.
template <class R>
R pairing(const Cochain<R>& phi, const Chain<R>& c) {
  R acc(0);
  for (const auto& [s, coef] : c) acc += coef * phi.evaluate(s).value;
  return acc;
}

}  // namespace coarsetop
