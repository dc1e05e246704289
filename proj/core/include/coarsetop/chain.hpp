#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "coarsetop/metric.hpp"
#include "coarsetop/ring.hpp"

namespace coarsetop {

// An Alexander–Spanier simplex: an arbitrary tuple of vertices, repeats allowed.
// Degree is length − 1.
template <class V>
using Tuple = std::vector<V>;
using Simplex = Tuple<Index>;

template <class V>
int degree_of(const Tuple<V>& t) {
  return static_cast<int>(t.size()) - 1;
}

// i-th face: drop the i-th vertex.
template <class V>
Tuple<V> face(const Tuple<V>& t, std::size_t i) {
  Tuple<V> out;
  out.reserve(t.size() - 1);
  for (std::size_t k = 0; k < t.size(); ++k)
    if (k != i) out.push_back(t[k]);
  return out;
}

// Front face (x0..xi) and back face (x_{k−i}..xk) of a k-simplex.
template <class V>
Tuple<V> front_face(const Tuple<V>& t, int i) {
  return Tuple<V>(t.begin(), t.begin() + i + 1);
}
template <class V>
Tuple<V> back_face(const Tuple<V>& t, int i) {
  return Tuple<V>(t.end() - (i + 1), t.end());
}

// Finite formal sum with nonzero coefficients, ordered by key.
template <class Key, class R>
class LinComb {
 public:
  using key_type = Key;
  using ring_type = R;
  using map_type = std::map<Key, R>;

  LinComb() = default;
  LinComb(const Key& k, const R& c) { add(k, c); }

  void add(const Key& k, const R& c) {
    if (is_zero(c)) return;
    auto [it, fresh] = terms_.try_emplace(k, c);
    if (!fresh) {
      it->second += c;
      if (is_zero(it->second)) terms_.erase(it);
    }
  }

  void add(const LinComb& other, const R& scale = R(1)) {
    for (const auto& [k, c] : other.terms_) add(k, c * scale);
  }

  R coefficient(const Key& k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? R(0) : it->second;
  }

  const map_type& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool zero() const { return terms_.empty(); }
  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }

  LinComb& operator+=(const LinComb& o) {
    add(o);
    return *this;
  }
  LinComb& operator-=(const LinComb& o) {
    add(o, R(-1));
    return *this;
  }
  friend LinComb operator+(LinComb a, const LinComb& b) { return a += b; }
  friend LinComb operator-(LinComb a, const LinComb& b) { return a -= b; }
  friend LinComb operator*(const R& s, const LinComb& a) {
    LinComb out;
    out.add(a, s);
    return out;
  }
  friend bool operator==(const LinComb& a, const LinComb& b) { return a.terms_ == b.terms_; }

 private:
  map_type terms_;
};

template <class R, class V = Index>
using Chain = LinComb<Tuple<V>, R>;

// σ ⊗ τ.
template <class V, class W = V>
using TensorKey = std::pair<Tuple<V>, Tuple<W>>;
template <class R, class V = Index, class W = V>
using TensorChain = LinComb<TensorKey<V, W>, R>;

// (a ⊗ b) ⊗ (c ⊗ e), stored flat.
template <class V>
using QuadKey = std::array<Tuple<V>, 4>;
template <class R, class V = Index>
using QuadChain = LinComb<QuadKey<V>, R>;

// ∂(x0..xn) = Σ (−1)^i (..x̂i..); zero on 0-simplices.
template <class R, class V>
Chain<R, V> boundary(const Tuple<V>& s) {
  Chain<R, V> out;
  if (s.size() <= 1) return out;
  for (std::size_t i = 0; i < s.size(); ++i) out.add(face(s, i), R(eps(static_cast<long long>(i))));
  return out;
}

template <class R, class V>
Chain<R, V> boundary(const Chain<R, V>& c) {
  Chain<R, V> out;
  for (const auto& [s, coef] : c) out.add(boundary<R>(s), coef);
  return out;
}

// ∂(σ⊗τ) = ∂σ⊗τ + (−1)^{|σ|} σ⊗∂τ.
template <class R, class V, class W>
TensorChain<R, V, W> boundary(const TensorChain<R, V, W>& c) {
  TensorChain<R, V, W> out;
  for (const auto& [key, coef] : c) {
    const auto& [s, t] = key;
    for (const auto& [f, fc] : boundary<R>(s)) out.add({f, t}, coef * fc);
    const R sign(eps(degree_of(s)));
    for (const auto& [f, fc] : boundary<R>(t)) out.add({s, f}, coef * fc * sign);
  }
  return out;
}

// Koszul-signed boundary of a four-fold tensor.
template <class R, class V>
QuadChain<R, V> boundary(const QuadChain<R, V>& c) {
  QuadChain<R, V> out;
  for (const auto& [key, coef] : c) {
    long long shift = 0;
    for (std::size_t slot = 0; slot < 4; ++slot) {
      const R sign(eps(shift));
      for (const auto& [f, fc] : boundary<R>(key[slot])) {
        QuadKey<V> k = key;
        k[slot] = f;
        out.add(k, coef * fc * sign);
      }
      shift += degree_of(key[slot]);
    }
  }
  return out;
}

// Coefficient-wise ring change.
template <class To, class Key, class From, class Fn>
LinComb<Key, To> map_coefficients(const LinComb<Key, From>& c, Fn&& fn) {
  LinComb<Key, To> out;
  for (const auto& [k, v] : c) out.add(k, fn(v));
  return out;
}

// Image under a vertex map.
template <class R, class V, class W, class Fn>
Chain<R, W> push_forward(const Chain<R, V>& c, Fn&& f) {
  Chain<R, W> out;
  for (const auto& [s, coef] : c) {
    Tuple<W> t;
    t.reserve(s.size());
    for (const auto& v : s) t.push_back(f(v));
    out.add(t, coef);
  }
  return out;
}

}  // namespace coarsetop
