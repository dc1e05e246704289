#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "coarsetop/chain.hpp"
#include "coarsetop/ring.hpp"

namespace coarsetop {

// Homogeneous cochains given as total functions. Evaluation off the stated
// degree is zero.
template <class R, class V = Index>
struct TupleCochain {
  int degree = 0;
  std::function<R(const Tuple<V>&)> fn;

  R operator()(const Tuple<V>& s) const { return degree_of(s) == degree ? fn(s) : R(0); }
  R operator()(const Chain<R, V>& c) const {
    R acc(0);
    for (const auto& [s, coef] : c) acc += coef * (*this)(s);
    return acc;
  }
};

template <class R, class V = Index, class W = V>
struct TensorCochain {
  int degree = 0;
  std::function<R(const Tuple<V>&, const Tuple<W>&)> fn;

  R operator()(const Tuple<V>& s, const Tuple<W>& t) const {
    return degree_of(s) + degree_of(t) == degree ? fn(s, t) : R(0);
  }
  R operator()(const TensorChain<R, V, W>& c) const {
    R acc(0);
    for (const auto& [key, coef] : c) acc += coef * (*this)(key.first, key.second);
    return acc;
  }
};

template <class V, class W>
using PairVertex = std::pair<V, W>;

template <class V, class W>
Tuple<V> project_first(const Tuple<PairVertex<V, W>>& r) {
  Tuple<V> out;
  out.reserve(r.size());
  for (const auto& p : r) out.push_back(p.first);
  return out;
}

template <class V, class W>
Tuple<W> project_second(const Tuple<PairVertex<V, W>>& r) {
  Tuple<W> out;
  out.reserve(r.size());
  for (const auto& p : r) out.push_back(p.second);
  return out;
}

// Coboundaries by precomposition with ∂.
template <class R, class V>
TupleCochain<R, V> coboundary(const TupleCochain<R, V>& phi) {
  return {phi.degree + 1, [phi](const Tuple<V>& s) { return phi(boundary<R>(s)); }};
}

template <class R, class V, class W>
TensorCochain<R, V, W> coboundary(const TensorCochain<R, V, W>& phi) {
  return {phi.degree + 1, [phi](const Tuple<V>& s, const Tuple<W>& t) {
            return phi(boundary(TensorChain<R, V, W>({s, t}, R(1))));
          }};
}

// Alexander–Whitney: ρ ↦ Σ_i (front_i p_X ρ) ⊗ (back_{k−i} p_Y ρ).
template <class R, class V, class W>
TensorChain<R, V, W> alexander_whitney(const Tuple<PairVertex<V, W>>& rho) {
  TensorChain<R, V, W> out;
  const int k = degree_of(rho);
  const auto x = project_first(rho);
  const auto y = project_second(rho);
  for (int i = 0; i <= k; ++i) out.add({front_face(x, i), back_face(y, k - i)}, R(1));
  return out;
}

template <class R, class V, class W>
TensorChain<R, V, W> alexander_whitney(const Chain<R, PairVertex<V, W>>& c) {
  TensorChain<R, V, W> out;
  for (const auto& [rho, coef] : c) out.add(alexander_whitney<R, V, W>(rho), coef);
  return out;
}

// Cross product σ^k × τ^l: sum over monotone lattice paths from (0,0) to (k,l),
// each signed by (−1)^{squares below the path}. East steps advance σ.
template <class R, class V, class W>
Chain<R, PairVertex<V, W>> cross_product(const Tuple<V>& s, const Tuple<W>& t) {
  Chain<R, PairVertex<V, W>> out;
  const int k = degree_of(s), l = degree_of(t);
  Tuple<PairVertex<V, W>> path;
  path.reserve(static_cast<std::size_t>(k + l + 1));
  // Depth-first over paths; `below` counts squares under the east steps so far.
  std::function<void(int, int, long long)> walk = [&](int i, int j, long long below) {
    path.push_back({s[i], t[j]});
    if (i == k && j == l) {
      out.add(path, R(eps(below)));
    } else {
      if (i < k) walk(i + 1, j, below + j);
      if (j < l) walk(i, j + 1, below);
    }
    path.pop_back();
  };
  walk(0, 0, 0);
  return out;
}

template <class R, class V, class W>
Chain<R, PairVertex<V, W>> cross_product(const TensorChain<R, V, W>& c) {
  Chain<R, PairVertex<V, W>> out;
  for (const auto& [key, coef] : c) out.add(cross_product<R, V, W>(key.first, key.second), coef);
  return out;
}

// T_*(σ^k ⊗ τ^l) = (−1)^{kl} τ ⊗ σ.
template <class R, class V, class W>
TensorChain<R, W, V> transpose(const TensorChain<R, V, W>& c) {
  TensorChain<R, W, V> out;
  for (const auto& [key, coef] : c) {
    const long long kl = static_cast<long long>(degree_of(key.first)) * degree_of(key.second);
    out.add({key.second, key.first}, coef * R(eps(kl)));
  }
  return out;
}

// Vertexwise swap on X × Y.
template <class R, class V, class W>
Chain<R, PairVertex<W, V>> transpose(const Chain<R, PairVertex<V, W>>& c) {
  return push_forward<R, PairVertex<V, W>, PairVertex<W, V>>(
      c, [](const PairVertex<V, W>& p) { return PairVertex<W, V>{p.second, p.first}; });
}

// Prism between vertex maps f and g:
//   D(x0..xn) = Σ_i (−1)^i (f(x0)..f(xi), g(xi)..g(xn)),  ∂D + D∂ = g − f.
template <class R, class V, class W, class F, class G>
Chain<R, W> prism_homotopy(const Chain<R, V>& c, F&& f, G&& g) {
  Chain<R, W> out;
  for (const auto& [s, coef] : c) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      Tuple<W> t;
      t.reserve(s.size() + 1);
      for (std::size_t a = 0; a <= i; ++a) t.push_back(f(s[a]));
      for (std::size_t a = i; a < s.size(); ++a) t.push_back(g(s[a]));
      out.add(t, coef * R(eps(static_cast<long long>(i))));
    }
  }
  return out;
}

// D on X × X: prism from the identity to the swap; ∂D + D∂ = T_* − id.
template <class R, class V>
Chain<R, PairVertex<V, V>> transposition_homotopy(const Chain<R, PairVertex<V, V>>& c) {
  using P = PairVertex<V, V>;
  return prism_homotopy<R, P, P>(c, [](const P& p) { return p; },
                                 [](const P& p) { return P{p.second, p.first}; });
}

// δ^A(σ⊗τ) = Σ_{i,j} (−1)^{j(k−i)} (iσ ⊗ jτ) ⊗ (σ_{k−i} ⊗ τ_{l−j}).
template <class R, class V>
QuadChain<R, V> diagonal_approximation(const TensorChain<R, V>& c) {
  QuadChain<R, V> out;
  for (const auto& [key, coef] : c) {
    const auto& [s, t] = key;
    const int k = degree_of(s), l = degree_of(t);
    for (int i = 0; i <= k; ++i)
      for (int j = 0; j <= l; ++j)
        out.add({front_face(s, i), front_face(t, j), back_face(s, k - i), back_face(t, l - j)},
                coef * R(eps(static_cast<long long>(j) * (k - i))));
  }
  return out;
}

// Cup on X ⊗ X: (φ ⌣ ψ)(σ⊗τ) = (φ × ψ)(δ^A(σ⊗τ)).
template <class R, class V>
TensorCochain<R, V> cup(const TensorCochain<R, V>& phi, const TensorCochain<R, V>& psi) {
  return {phi.degree + psi.degree, [phi, psi](const Tuple<V>& s, const Tuple<V>& t) {
            const int k = degree_of(s), l = degree_of(t);
            R acc(0);
            for (int i = 0; i <= k; ++i) {
              const int j = phi.degree - i;
              if (j < 0 || j > l) continue;
              const R a = phi(front_face(s, i), front_face(t, j));
              if (is_zero(a)) continue;
              const R b = psi(back_face(s, k - i), back_face(t, l - j));
              acc += R(eps(static_cast<long long>(j) * (k - i))) * a * b;
            }
            return acc;
          }};
}

// Cup on X: (α ⌣ β)(σ) = α(front) β(back).
template <class R, class V>
TupleCochain<R, V> cup(const TupleCochain<R, V>& a, const TupleCochain<R, V>& b) {
  return {a.degree + b.degree, [a, b](const Tuple<V>& s) {
            return a(front_face(s, a.degree)) * b(back_face(s, b.degree));
          }};
}

// ψ ⌢ σ = ψ(σ_n) · (k−n σ): the cochain reads the back face, the output is the front face.
template <class R, class V>
Chain<R, V> cap(const TupleCochain<R, V>& psi, const Chain<R, V>& c) {
  Chain<R, V> out;
  const int n = psi.degree;
  for (const auto& [s, coef] : c) {
    const int k = degree_of(s);
    if (k < n) continue;
    const R v = psi(back_face(s, n));
    if (!is_zero(v)) out.add(front_face(s, k - n), coef * v);
  }
  return out;
}

// φ ⌢ (σ^k ⊗ τ^l) = Σ_{i+j=n} (−1)^{i(l−j)} φ(σ_i ⊗ τ_j) · (k−i σ ⊗ l−j τ).
template <class R, class V>
TensorChain<R, V> cap(const TensorCochain<R, V>& phi, const TensorChain<R, V>& c) {
  TensorChain<R, V> out;
  const int n = phi.degree;
  for (const auto& [key, coef] : c) {
    const auto& [s, t] = key;
    const int k = degree_of(s), l = degree_of(t);
    for (int i = 0; i <= std::min(n, k); ++i) {
      const int j = n - i;
      if (j > l) continue;
      const R v = phi(back_face(s, i), back_face(t, j));
      if (is_zero(v)) continue;
      out.add({front_face(s, k - i), front_face(t, l - j)},
              coef * v * R(eps(static_cast<long long>(i) * (l - j))));
    }
  }
  return out;
}

// Slant with the chain in the second slot: (φ / a)(τ) = φ(τ ⊗ a). `a` must be
// homogeneous; the result has degree deg φ − deg a.
template <class R, class V>
TupleCochain<R, V> slant(const TensorCochain<R, V>& phi, const Chain<R, V>& a) {
  int k = 0;
  if (!a.zero()) {
    k = degree_of(a.begin()->first);
    for (const auto& [s, coef] : a)
      if (degree_of(s) != k) throw std::invalid_argument("slant needs a homogeneous chain");
  }
  return {phi.degree - k, [phi, a](const Tuple<V>& t) {
            R acc(0);
            for (const auto& [s, coef] : a) acc += coef * phi(t, s);
            return acc;
          }};
}

// p1^*ψ(σ⊗τ) = ψ(σ)·ε(τ) and p2^*ψ(σ⊗τ) = ε(σ)·ψ(τ), ε the augmentation.
template <class R, class V>
TensorCochain<R, V> pull_first(const TupleCochain<R, V>& psi) {
  return {psi.degree, [psi](const Tuple<V>& s, const Tuple<V>& t) {
            return degree_of(t) == 0 ? psi(s) : R(0);
          }};
}

template <class R, class V>
TensorCochain<R, V> pull_second(const TupleCochain<R, V>& psi) {
  return {psi.degree, [psi](const Tuple<V>& s, const Tuple<V>& t) {
            return degree_of(s) == 0 ? psi(t) : R(0);
          }};
}

// p1_*(σ⊗τ) = ε(τ)·σ.
template <class R, class V>
Chain<R, V> push_first(const TensorChain<R, V>& c) {
  Chain<R, V> out;
  for (const auto& [key, coef] : c)
    if (degree_of(key.second) == 0) out.add(key.first, coef);
  return out;
}

// Chain homotopy between two chain maps on a free complex, built generator by
// generator with a cone contraction: H(g) = K_g(f(g) − H(∂g)), f = Q − P.
template <class Gen, class R>
class HomotopySolver {
 public:
  using Comb = LinComb<Gen, R>;
  using Map = std::function<Comb(const Gen&)>;
  using Contraction = std::function<Comb(const Gen& model, const Comb& z)>;

  HomotopySolver(Map difference, Map boundary, Contraction contraction)
      : f_(std::move(difference)), boundary_(std::move(boundary)), contract_(std::move(contraction)) {}

  const Comb& operator()(const Gen& g) {
    auto it = memo_.find(g);
    if (it != memo_.end()) return it->second;
    Comb z = f_(g);
    z -= apply(boundary_(g));
    Comb h = contract_(g, z);
    return memo_.emplace(g, std::move(h)).first->second;
  }

  Comb apply(const Comb& c) {
    Comb out;
    for (const auto& [g, coef] : c) out.add((*this)(g), coef);
    return out;
  }

  // ∂H(g) + H(∂g) − f(g); zero when the homotopy identity holds at g.
  Comb residual(const Gen& g) {
    Comb lhs;
    for (const auto& [h, coef] : (*this)(g)) lhs.add(boundary_(h), coef);
    lhs += apply(boundary_(g));
    lhs -= f_(g);
    return lhs;
  }

  std::size_t solved() const { return memo_.size(); }

 private:
  Map f_, boundary_;
  Contraction contract_;
  std::map<Gen, Comb> memo_;
};

// Cone at v on the tuple complex: h(σ) = (v, σ).
template <class R, class V>
Chain<R, V> cone(const V& v, const Chain<R, V>& c) {
  Chain<R, V> out;
  for (const auto& [s, coef] : c) {
    Tuple<V> t;
    t.reserve(s.size() + 1);
    t.push_back(v);
    t.insert(t.end(), s.begin(), s.end());
    out.add(t, coef);
  }
  return out;
}

// Contraction of the tensor complex from cones at v and w:
//   K(a⊗b) = (v, a) ⊗ b + ε(a) · (v) ⊗ (w, b).
template <class R, class V, class W>
TensorChain<R, V, W> tensor_cone(const V& v, const W& w, const TensorChain<R, V, W>& c) {
  TensorChain<R, V, W> out;
  for (const auto& [key, coef] : c) {
    const auto& [a, b] = key;
    Tuple<V> va{v};
    va.insert(va.end(), a.begin(), a.end());
    out.add({va, b}, coef);
    if (degree_of(a) == 0) {
      Tuple<W> wb{w};
      wb.insert(wb.end(), b.begin(), b.end());
      out.add({Tuple<V>{v}, wb}, coef);
    }
  }
  return out;
}

}  // namespace coarsetop
