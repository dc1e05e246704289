#include "coarsetop/products_selftest.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "coarsetop/chain.hpp"
#include "coarsetop/products.hpp"
#include "coarsetop/ring.hpp"
#include "coarsetop/rng.hpp"

namespace coarsetop {

namespace {

using PV = PairVertex<Index, Index>;

std::string vertex_text(Index v) { return std::to_string(v); }
std::string vertex_text(const PV& p) { return "[" + std::to_string(p.first) + "," + std::to_string(p.second) + "]"; }

template <class V>
std::string text(const Tuple<V>& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + vertex_text(t[i]);
  return s + ")";
}

template <class V>
std::string text(const Tuple<V>& a, const Tuple<V>& b) {
  return text(a) + "⊗" + text(b);
}

template <class R, class Key, class Fmt>
std::string text(const LinComb<Key, R>& c, Fmt&& fmt) {
  if (c.zero()) return "0";
  std::string s;
  std::size_t shown = 0;
  for (const auto& [k, v] : c) {
    if (shown++ == 6) {
      s += " + …";
      break;
    }
    s += (s.empty() ? "" : " + ") + RingTraits<R>::to_string(v) + "·" + fmt(k);
  }
  return s;
}

template <class R, class V>
std::string text(const Chain<R, V>& c) {
  return text(c, [](const Tuple<V>& t) { return text(t); });
}

template <class R>
std::string text(const TensorChain<R>& c) {
  return text(c, [](const TensorKey<Index>& k) { return text(k.first, k.second); });
}

// Nonzero in ℤ; 1 in GF(2).
template <class R>
R nonzero_coefficient(SplitMix64& rng) {
  static const long long values[] = {-3, -2, -1, 1, 2, 3};
  if constexpr (std::is_same_v<R, Gf2>) return R(1);
  else return R(values[rng.below(6)]);
}

Simplex random_tuple(SplitMix64& rng, std::size_t symbols, int degree) {
  Simplex s(static_cast<std::size_t>(degree) + 1);
  for (auto& v : s) v = static_cast<Index>(rng.below(symbols));
  return s;
}

Tuple<PV> random_pair_tuple(SplitMix64& rng, std::size_t symbols, int degree) {
  Tuple<PV> s(static_cast<std::size_t>(degree) + 1);
  for (auto& v : s) v = {static_cast<Index>(rng.below(symbols)), static_cast<Index>(rng.below(symbols))};
  return s;
}

template <class R>
Chain<R> random_chain(SplitMix64& rng, std::size_t symbols, int degree) {
  Chain<R> c;
  const std::size_t terms = 1 + rng.below(3);
  for (std::size_t i = 0; i < terms; ++i) c.add(random_tuple(rng, symbols, degree), nonzero_coefficient<R>(rng));
  return c;
}

template <class R>
Chain<R, PV> random_pair_chain(SplitMix64& rng, std::size_t symbols, int degree) {
  Chain<R, PV> c;
  const std::size_t terms = 1 + rng.below(3);
  for (std::size_t i = 0; i < terms; ++i) c.add(random_pair_tuple(rng, symbols, degree), nonzero_coefficient<R>(rng));
  return c;
}

// Bidegree (k, l) with k + l ≤ total.
std::pair<int, int> random_bidegree(SplitMix64& rng, int total) {
  const int n = static_cast<int>(rng.below(static_cast<std::uint64_t>(total) + 1));
  const int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(n) + 1));
  return {k, n - k};
}

template <class R>
TensorChain<R> random_tensor_chain(SplitMix64& rng, std::size_t symbols, int k, int l) {
  TensorChain<R> c;
  const std::size_t terms = 1 + rng.below(3);
  for (std::size_t i = 0; i < terms; ++i)
    c.add({random_tuple(rng, symbols, k), random_tuple(rng, symbols, l)}, nonzero_coefficient<R>(rng));
  return c;
}

template <class R>
R hashed_value(std::uint64_t h) {
  return R(static_cast<long long>(h % 7) - 3);
}

// Pseudo-random cochains: values are a hash of (salt, vertices).
template <class R>
TupleCochain<R> random_cochain(std::uint64_t salt, int degree) {
  return {degree, [salt](const Simplex& s) {
            std::uint64_t h = salt;
            for (Index v : s) h = mix64(h, v);
            return hashed_value<R>(h);
          }};
}

template <class R>
TensorCochain<R> random_tensor_cochain(std::uint64_t salt, int degree) {
  return {degree, [salt](const Simplex& s, const Simplex& t) {
            std::uint64_t h = mix64(salt, s.size());
            for (Index v : s) h = mix64(h, v);
            h = mix64(h, 0xffffffffULL);
            for (Index v : t) h = mix64(h, v);
            return hashed_value<R>(h);
          }};
}

template <class Fn>
IdentityCheck sweep(std::string group, std::string name, std::string_view ring, std::size_t n,
                    const SplitMix64& base, Fn&& instance) {
  IdentityCheck check{std::move(group), std::move(name), std::string(ring), n, 0, {}};
  for (std::size_t i = 0; i < n; ++i) {
    SplitMix64 rng = base.fork(i);
    if (auto w = instance(rng)) {
      if (check.failures++ == 0) check.witness = *w;
    }
  }
  return check;
}

std::uint64_t salt_for(const SplitMix64& rng) {
  SplitMix64 copy = rng;
  return copy();
}

template <class R>
void algebra_battery(const AlgebraBatteryOptions& o, std::vector<IdentityCheck>& out) {
  const std::string_view ring = RingTraits<R>::name;
  const std::size_t N = o.instances, S = o.symbols;
  const int D = o.maxdim;
  SplitMix64 root(o.seed ^ (std::is_same_v<R, Gf2> ? 0x2ULL : 0x1ULL));
  using Opt = std::optional<std::string>;

  out.push_back(sweep("algebra", "boundary_squared", ring, N, root.fork(1), [&](SplitMix64& rng) -> Opt {
    const int d = static_cast<int>(rng.below(static_cast<std::uint64_t>(D) + 1));
    const auto c = random_chain<R>(rng, S, d);
    const auto bb = boundary(boundary(c));
    if (bb.zero()) return std::nullopt;
    return "∂∂(" + text(c) + ") = " + text(bb);
  }));

  out.push_back(sweep("algebra", "tensor_boundary_squared", ring, N, root.fork(2), [&](SplitMix64& rng) -> Opt {
    const auto [k, l] = random_bidegree(rng, D);
    const auto c = random_tensor_chain<R>(rng, S, k, l);
    const auto bb = boundary(boundary(c));
    if (bb.zero()) return std::nullopt;
    return "∂∂(" + text(c) + ") ≠ 0";
  }));

  out.push_back(sweep("algebra", "coboundary_squared", ring, N, root.fork(3), [&](SplitMix64& rng) -> Opt {
    const int p = static_cast<int>(rng.below(static_cast<std::uint64_t>(std::max(1, D - 1))));
    const auto phi = random_cochain<R>(salt_for(rng), p);
    const auto s = random_tuple(rng, S, p + 2);
    const R v = coboundary(coboundary(phi))(s);
    if (is_zero(v)) return std::nullopt;
    return "ddφ" + text(s) + " = " + RingTraits<R>::to_string(v);
  }));

  out.push_back(sweep("algebra", "tensor_coboundary_squared", ring, N, root.fork(4), [&](SplitMix64& rng) -> Opt {
    const int p = static_cast<int>(rng.below(static_cast<std::uint64_t>(std::max(1, D - 1))));
    const auto phi = random_tensor_cochain<R>(salt_for(rng), p);
    const int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(p) + 3));
    const auto s = random_tuple(rng, S, k);
    const auto t = random_tuple(rng, S, p + 2 - k);
    const R v = coboundary(coboundary(phi))(s, t);
    if (is_zero(v)) return std::nullopt;
    return "ddφ(" + text(s, t) + ") = " + RingTraits<R>::to_string(v);
  }));

  out.push_back(sweep("algebra", "evaluation_adjunction", ring, N, root.fork(5), [&](SplitMix64& rng) -> Opt {
    const int p = static_cast<int>(rng.below(static_cast<std::uint64_t>(D)));
    const auto phi = random_cochain<R>(salt_for(rng), p);
    const auto c = random_chain<R>(rng, S, p + 1);
    const R lhs = coboundary(phi)(c), rhs = phi(boundary(c));
    if (lhs == rhs) return std::nullopt;
    return "⟨dφ, c⟩ ≠ ⟨φ, ∂c⟩ at c = " + text(c);
  }));

  out.push_back(sweep("algebra", "prism_homotopy", ring, N, root.fork(6), [&](SplitMix64& rng) -> Opt {
    std::vector<Index> f(S), g(S);
    for (auto& v : f) v = static_cast<Index>(rng.below(S));
    for (auto& v : g) v = static_cast<Index>(rng.below(S));
    const int d = static_cast<int>(rng.below(static_cast<std::uint64_t>(D) + 1));
    const auto c = random_chain<R>(rng, S, d);
    auto F = [&](Index v) { return f[v]; };
    auto G = [&](Index v) { return g[v]; };
    const auto lhs = boundary(prism_homotopy<R, Index, Index>(c, F, G)) +
                     prism_homotopy<R, Index, Index>(boundary(c), F, G);
    const auto rhs = push_forward<R, Index, Index>(c, G) - push_forward<R, Index, Index>(c, F);
    if (lhs == rhs) return std::nullopt;
    return "∂D + D∂ ≠ g − f at c = " + text(c);
  }));

  out.push_back(sweep("algebra", "transposition_homotopy", ring, N, root.fork(7), [&](SplitMix64& rng) -> Opt {
    const int d = static_cast<int>(rng.below(static_cast<std::uint64_t>(D) + 1));
    const auto c = random_pair_chain<R>(rng, S, d);
    const auto lhs = boundary(transposition_homotopy(c)) + transposition_homotopy(boundary(c));
    const auto rhs = transpose(c) - c;
    if (lhs == rhs) return std::nullopt;
    return "∂D + D∂ ≠ T − id at c = " + text(c);
  }));
}

template <class R>
void chain_map_battery(const AlgebraBatteryOptions& o, std::vector<IdentityCheck>& out) {
  const std::string_view ring = RingTraits<R>::name;
  const std::size_t N = o.instances, S = o.symbols;
  const int D = o.maxdim;
  SplitMix64 root(o.seed ^ (std::is_same_v<R, Gf2> ? 0x20ULL : 0x10ULL));
  using Opt = std::optional<std::string>;

  out.push_back(sweep("chain_maps", "aw_chain_map", ring, N, root.fork(1), [&](SplitMix64& rng) -> Opt {
    const int d = static_cast<int>(rng.below(static_cast<std::uint64_t>(D) + 1));
    const auto c = random_pair_chain<R>(rng, S, d);
    if (boundary(alexander_whitney<R, Index, Index>(c)) == alexander_whitney<R, Index, Index>(boundary(c)))
      return std::nullopt;
    return "∂A ≠ A∂ at " + text(c);
  }));

  out.push_back(sweep("chain_maps", "cross_chain_map", ring, N, root.fork(2), [&](SplitMix64& rng) -> Opt {
    const auto [k, l] = random_bidegree(rng, D);
    const auto t = random_tensor_chain<R>(rng, S, k, l);
    if (boundary(cross_product(t)) == cross_product(boundary(t))) return std::nullopt;
    return "∂S ≠ S∂ at " + text(t);
  }));

  out.push_back(sweep("chain_maps", "diagonal_chain_map", ring, N, root.fork(3), [&](SplitMix64& rng) -> Opt {
    const auto [k, l] = random_bidegree(rng, D);
    const auto t = random_tensor_chain<R>(rng, S, k, l);
    if (boundary(diagonal_approximation(t)) == diagonal_approximation(boundary(t))) return std::nullopt;
    return "∂δ ≠ δ∂ at " + text(t);
  }));

  out.push_back(sweep("chain_maps", "transpose_commutes_with_cross", ring, N, root.fork(4), [&](SplitMix64& rng) -> Opt {
    const auto [k, l] = random_bidegree(rng, D);
    const auto t = random_tensor_chain<R>(rng, S, k, l);
    if (cross_product(transpose(t)) == transpose(cross_product(t))) return std::nullopt;
    return "S T ≠ T S at " + text(t);
  }));

  out.push_back(sweep("chain_maps", "transpose_involution", ring, N, root.fork(5), [&](SplitMix64& rng) -> Opt {
    const auto [k, l] = random_bidegree(rng, D);
    const auto t = random_tensor_chain<R>(rng, S, k, l);
    if (transpose(transpose(t)) == t) return std::nullopt;
    return "T T ≠ id at " + text(t);
  }));

  out.push_back(sweep("chain_maps", "tensor_cup_leibniz", ring, N, root.fork(6), [&](SplitMix64& rng) -> Opt {
    const int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(D)));
    const int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(D - a)));
    const auto phi = random_tensor_cochain<R>(salt_for(rng), a);
    rng();
    const auto psi = random_tensor_cochain<R>(salt_for(rng), b);
    const auto [k, l] = [&] {
      const int n = a + b + 1;
      const int kk = static_cast<int>(rng.below(static_cast<std::uint64_t>(n) + 1));
      return std::pair{kk, n - kk};
    }();
    const auto s = random_tuple(rng, S, k), t = random_tuple(rng, S, l);
    const R lhs = coboundary(cup(phi, psi))(s, t);
    const R rhs = cup(coboundary(phi), psi)(s, t) + R(eps(a)) * cup(phi, coboundary(psi))(s, t);
    if (lhs == rhs) return std::nullopt;
    return "Leibniz fails at " + text(s, t);
  }));

  out.push_back(sweep("chain_maps", "cup_leibniz", ring, N, root.fork(7), [&](SplitMix64& rng) -> Opt {
    const int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(D)));
    const int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(D - a)));
    const auto alpha = random_cochain<R>(salt_for(rng), a);
    rng();
    const auto beta = random_cochain<R>(salt_for(rng), b);
    const auto s = random_tuple(rng, S, a + b + 1);
    const R lhs = coboundary(cup(alpha, beta))(s);
    const R rhs = cup(coboundary(alpha), beta)(s) + R(eps(a)) * cup(alpha, coboundary(beta))(s);
    if (lhs == rhs) return std::nullopt;
    return "Leibniz fails at " + text(s);
  }));

  out.push_back(sweep("chain_maps", "cap_boundary", ring, N, root.fork(8), [&](SplitMix64& rng) -> Opt {
    const int m = static_cast<int>(rng.below(static_cast<std::uint64_t>(D) + 1));
    const int p = static_cast<int>(rng.below(static_cast<std::uint64_t>(m) + 1));
    const auto psi = random_cochain<R>(salt_for(rng), p);
    const auto c = random_chain<R>(rng, S, m);
    const auto lhs = boundary(cap(psi, c));
    const auto rhs = cap(psi, boundary(c)) + R(eps(m - p)) * cap(coboundary(psi), c);
    if (lhs == rhs) return std::nullopt;
    return "∂(ψ⌢c) mismatch at c = " + text(c);
  }));

  out.push_back(sweep("chain_maps", "slant_sign", ring, N, root.fork(9), [&](SplitMix64& rng) -> Opt {
    // φ = dθ is a cocycle of degree n; a has degree k ≤ n; τ has degree n − k + 1.
    const int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(D)));
    const int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(n) + 1));
    const auto phi = coboundary(random_tensor_cochain<R>(salt_for(rng), n - 1));
    const auto a = random_chain<R>(rng, S, k);
    const auto tau = random_tuple(rng, S, n - k + 1);
    const R lhs = R(eps_prime(n - k - 1)) * slant(phi, a)(boundary<R>(tau));
    const R rhs = R(eps_prime(n - k)) * slant(phi, boundary(a))(tau);
    if (lhs == rhs) return std::nullopt;
    return "d(ε′φ/a) ≠ ε′φ/∂a at a = " + text(a) + ", τ = " + text(tau);
  }));

  out.push_back(sweep("chain_maps", "cap_support", ring, N, root.fork(10), [&](SplitMix64& rng) -> Opt {
    const auto [k, l] = random_bidegree(rng, D);
    const int n = static_cast<int>(rng.below(static_cast<std::uint64_t>(k + l) + 1));
    const auto phi = random_tensor_cochain<R>(salt_for(rng), n);
    const auto s = random_tuple(rng, S, k), t = random_tuple(rng, S, l);
    const auto out_chain = cap(phi, TensorChain<R>({s, t}, R(1)));
    for (const auto& [key, coef] : out_chain) {
      auto inside = [](const Simplex& part, const Simplex& whole) {
        return std::search(whole.begin(), whole.end(), part.begin(), part.end()) == whole.begin();
      };
      if (!inside(key.first, s) || !inside(key.second, t)) return "cap output not a front face of " + text(s, t);
    }
    return std::nullopt;
  }));
}

// Exhaustive enumeration of all tuples of one degree over `symbols` symbols.
std::vector<Simplex> all_tuples(std::size_t symbols, int degree) {
  std::vector<Simplex> out;
  Simplex s(static_cast<std::size_t>(degree) + 1, 0);
  while (true) {
    out.push_back(s);
    std::size_t i = s.size();
    while (i > 0) {
      --i;
      if (++s[i] < symbols) break;
      s[i] = 0;
      if (i == 0) return out;
    }
  }
}

// Instances of the three identities. Degrees: σ has degree k, τ has degree l.
template <class R>
std::optional<std::string> identity_one(const TupleCochain<R>& psi, const TensorCochain<R>& phi,
                                        const Simplex& sigma, const Simplex& tau) {
  // ψ ⌣ (φ/τ) = (p1*ψ ⌣ φ)/τ, evaluated at σ.
  const Chain<R> t(tau, R(1));
  const R lhs = cup(psi, slant(phi, t))(sigma);
  const R rhs = slant(cup(pull_first(psi), phi), t)(sigma);
  if (lhs == rhs) return std::nullopt;
  return "(1) at σ = " + text(sigma) + ", τ = " + text(tau) + ": " + RingTraits<R>::to_string(lhs) +
         " vs " + RingTraits<R>::to_string(rhs);
}

template <class R>
std::optional<std::string> identity_two(const TupleCochain<R>& psi, const TensorCochain<R>& phi,
                                        const Simplex& sigma, const Simplex& tau) {
  // φ/(ψ ⌢ τ) = (φ ⌣ p2*ψ)/τ, evaluated at σ.
  const Chain<R> t(tau, R(1));
  const R lhs = slant(phi, cap(psi, t))(sigma);
  const R rhs = slant(cup(phi, pull_second(psi)), t)(sigma);
  if (lhs == rhs) return std::nullopt;
  return "(2) at σ = " + text(sigma) + ", τ = " + text(tau) + ": " + RingTraits<R>::to_string(lhs) +
         " vs " + RingTraits<R>::to_string(rhs);
}

template <class R>
std::optional<std::string> identity_three(const TensorCochain<R>& phi, const Simplex& sigma, const Simplex& tau) {
  // (φ/σ) ⌢ τ = p1_*(φ ⌢ (τ⊗σ)).
  const auto lhs = cap(slant(phi, Chain<R>(sigma, R(1))), Chain<R>(tau, R(1)));
  const auto rhs = push_first(cap(phi, TensorChain<R>({tau, sigma}, R(1))));
  if (lhs == rhs) return std::nullopt;
  return "(3) at σ = " + text(sigma) + ", τ = " + text(tau) + ": " + text(lhs) + " vs " + text(rhs);
}

struct Tally {
  IdentityCheck check;
  void record(std::optional<std::string> w) {
    ++check.instances;
    if (w && check.failures++ == 0) check.witness = *w;
  }
};

template <class R>
void slant_battery(const SlantBatteryOptions& o, std::vector<IdentityCheck>& out) {
  const std::string ring(RingTraits<R>::name);
  SplitMix64 root(o.seed ^ (std::is_same_v<R, Gf2> ? 0x200ULL : 0x100ULL));
  Tally t1{{"slant", "identity_1_exhaustive", ring, 0, 0, {}}}, t2{{"slant", "identity_2_exhaustive", ring, 0, 0, {}}},
      t3{{"slant", "identity_3_exhaustive", ring, 0, 0, {}}};
  const int M = o.exhaustive_max;
  std::vector<std::vector<Simplex>> tuples(static_cast<std::size_t>(M) + 1);
  for (int d = 0; d <= M; ++d) tuples[d] = all_tuples(o.exhaustive_symbols, d);
  std::uint64_t salt = root();
  for (int k = 0; k <= M; ++k) {
    for (int l = 0; l <= M; ++l) {
      for (int p = 0; p <= std::max(k, l); ++p) {
        const auto psi = random_cochain<R>(mix64(salt, 1000 + p), p);
        const bool one = p <= k, two = p <= l;
        const auto phi1 = random_tensor_cochain<R>(mix64(salt, 2000 + 10 * (k + l - p)), k + l - p);
        // Identity (3): σ in the slant slot has degree l, τ degree k, deg φ = k + l − p.
        for (const auto& sigma : tuples[k]) {
          for (const auto& tau : tuples[l]) {
            if (one) t1.record(identity_one(psi, phi1, sigma, tau));
            if (two) t2.record(identity_two(psi, phi1, sigma, tau));
            if (p <= k) t3.record(identity_three(phi1, tau, sigma));
          }
        }
      }
    }
  }
  out.push_back(t1.check);
  out.push_back(t2.check);
  out.push_back(t3.check);

  using Opt = std::optional<std::string>;
  const std::size_t S = o.random_symbols;
  const int RM = o.random_max;
  auto random_setup = [&](SplitMix64& rng) {
    const int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(RM) + 1));
    const int l = static_cast<int>(rng.below(static_cast<std::uint64_t>(RM) + 1));
    return std::pair{random_tuple(rng, S, k), random_tuple(rng, S, l)};
  };
  out.push_back(sweep("slant", "identity_1_random", ring, o.random_instances, root.fork(1), [&](SplitMix64& rng) -> Opt {
    auto [sigma, tau] = random_setup(rng);
    const int k = degree_of(sigma), l = degree_of(tau);
    const int p = static_cast<int>(rng.below(static_cast<std::uint64_t>(k) + 1));
    return identity_one(random_cochain<R>(rng(), p), random_tensor_cochain<R>(rng(), k + l - p), sigma, tau);
  }));
  out.push_back(sweep("slant", "identity_2_random", ring, o.random_instances, root.fork(2), [&](SplitMix64& rng) -> Opt {
    auto [sigma, tau] = random_setup(rng);
    const int k = degree_of(sigma), l = degree_of(tau);
    const int p = static_cast<int>(rng.below(static_cast<std::uint64_t>(l) + 1));
    return identity_two(random_cochain<R>(rng(), p), random_tensor_cochain<R>(rng(), k + l - p), sigma, tau);
  }));
  out.push_back(sweep("slant", "identity_3_random", ring, o.random_instances, root.fork(3), [&](SplitMix64& rng) -> Opt {
    auto [sigma, tau] = random_setup(rng);
    const int k = degree_of(tau), l = degree_of(sigma);
    const int n = l + static_cast<int>(rng.below(static_cast<std::uint64_t>(k) + 1));
    return identity_three(random_tensor_cochain<R>(rng(), n), sigma, tau);
  }));
}

// Relabels vertices by order of first appearance across σ then τ.
struct Canonical {
  TensorKey<Index> key;
  std::vector<Index> labels;  // canonical label → original vertex
};

Canonical canonicalize(const TensorKey<Index>& g) {
  Canonical c;
  std::map<Index, Index> seen;
  auto relabel = [&](const Simplex& s) {
    Simplex out;
    out.reserve(s.size());
    for (Index v : s) {
      auto [it, fresh] = seen.try_emplace(v, static_cast<Index>(c.labels.size()));
      if (fresh) c.labels.push_back(v);
      out.push_back(it->second);
    }
    return out;
  };
  c.key.first = relabel(g.first);
  c.key.second = relabel(g.second);
  return c;
}

template <class R>
TensorChain<R> relabel(const TensorChain<R>& c, const std::vector<Index>& labels) {
  TensorChain<R> out;
  for (const auto& [key, coef] : c) {
    TensorKey<Index> k = key;
    for (auto& v : k.first) v = labels[v];
    for (auto& v : k.second) v = labels[v];
    out.add(k, coef);
  }
  return out;
}

// Restricted growth strings of the given length using at most `symbols` labels.
void patterns(std::size_t length, std::size_t symbols, std::vector<Index>& cur, Index used,
              std::vector<std::vector<Index>>& out) {
  if (cur.size() == length) {
    out.push_back(cur);
    return;
  }
  for (Index v = 0; v <= used && v < symbols; ++v) {
    cur.push_back(v);
    patterns(length, symbols, cur, std::max<Index>(used, v + 1), out);
    cur.pop_back();
  }
}

std::size_t falling_factorial(std::size_t n, std::size_t m) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < m; ++i) r *= (n - i);
  return r;
}

TensorChain<Integer> as_minus_id(const TensorKey<Index>& g) {
  TensorChain<Integer> out = alexander_whitney<Integer, Index, Index>(cross_product<Integer, Index, Index>(g.first, g.second));
  out.add(g, Integer(-1));
  return out;
}

}  // namespace

nlohmann::json to_json(const IdentityCheck& c) {
  nlohmann::json j = {{"group", c.group}, {"name", c.name}, {"instances", c.instances},
                      {"failures", c.failures}, {"passed", c.passed()}};
  if (!c.ring.empty()) j["ring"] = c.ring;
  if (!c.witness.empty()) j["witness"] = c.witness;
  return j;
}

std::vector<IdentityCheck> run_algebra_battery(const AlgebraBatteryOptions& options) {
  std::vector<IdentityCheck> out;
  algebra_battery<Integer>(options, out);
  algebra_battery<Gf2>(options, out);
  return out;
}

std::vector<IdentityCheck> run_chain_map_battery(const AlgebraBatteryOptions& options) {
  std::vector<IdentityCheck> out;
  chain_map_battery<Integer>(options, out);
  chain_map_battery<Gf2>(options, out);
  return out;
}

std::vector<IdentityCheck> run_slant_battery(const SlantBatteryOptions& options) {
  std::vector<IdentityCheck> out;
  slant_battery<Integer>(options, out);
  slant_battery<Gf2>(options, out);
  return out;
}

std::vector<IdentityCheck> sign_sequence_checks(int max_n) {
  // Closed forms: ε′ runs +,−,−,+ with period 4 starting at n = 0; ε alternates.
  IdentityCheck e{"signs", "eps_alternation", "", 0, 0, {}};
  IdentityCheck ep{"signs", "eps_prime_period_four", "", 0, 0, {}};
  static const int pattern[4] = {1, -1, -1, 1};
  for (int n = -1; n <= max_n; ++n) {
    ++e.instances;
    if (eps(n) != (n % 2 == 0 ? 1 : -1) && e.failures++ == 0) e.witness = "n = " + std::to_string(n);
    ++ep.instances;
    if (eps_prime(n) != pattern[((n % 4) + 4) % 4] && ep.failures++ == 0) ep.witness = "n = " + std::to_string(n);
  }
  return {e, ep};
}

std::size_t SignIdentityTable::failures() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.lhs != r.rhs; }));
}

std::vector<SignIdentityTable> sign_identity_tables(int max_n) {
  SignIdentityTable first{"composite_sign_pq", "ε′_n ε′_{n−k} ε′_{n−k−1} = ε_{nk} ε_n", {}};
  SignIdentityTable second{"composite_sign_qp", "ε′_n ε′_{k−1} ε′_{n−k} = ε_{nk}", {}};
  SignIdentityTable corrected{"composite_sign_pq_corrected", "ε′_n ε′_k ε′_{n−k−1} = ε_{nk} ε_n", {}};
  for (int n = 0; n <= max_n; ++n) {
    for (int k = 0; k <= n; ++k) {
      const int enk = eps(static_cast<long long>(n) * k);
      first.rows.push_back({n, k, eps_prime(n) * eps_prime(n - k) * eps_prime(n - k - 1), enk * eps(n)});
      second.rows.push_back({n, k, eps_prime(n) * eps_prime(k - 1) * eps_prime(n - k), enk});
      corrected.rows.push_back({n, k, eps_prime(n) * eps_prime(k) * eps_prime(n - k - 1), enk * eps(n)});
    }
  }
  return {first, second, corrected};
}

nlohmann::json to_json(const SignIdentityTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  std::optional<SignIdentityRow> first_bad;
  for (const auto& r : t.rows) {
    rows.push_back({{"n", r.n}, {"k", r.k}, {"lhs", r.lhs}, {"rhs", r.rhs}});
    if (r.lhs != r.rhs && !first_bad) first_bad = r;
  }
  nlohmann::json j = {{"name", t.name}, {"statement", t.statement}, {"cases", t.rows.size()},
                      {"failures", t.failures()}, {"passed", t.failures() == 0}, {"rows", rows}};
  if (first_bad)
    j["witness"] = "n = " + std::to_string(first_bad->n) + ", k = " + std::to_string(first_bad->k);
  return j;
}

AsBranchReport run_as_branch(const AsBranchOptions& o) {
  AsBranchReport rep;
  std::vector<TensorKey<Index>> canon;
  std::vector<std::size_t> multiplicity;
  for (int k = 0; k <= o.max_degree; ++k) {
    for (int l = 0; l <= o.max_degree; ++l) {
      std::vector<std::vector<Index>> strings;
      std::vector<Index> cur;
      patterns(static_cast<std::size_t>(k + l + 2), o.symbols, cur, 0, strings);
      for (const auto& s : strings) {
        TensorKey<Index> g{Simplex(s.begin(), s.begin() + k + 1), Simplex(s.begin() + k + 1, s.end())};
        const std::size_t used = *std::max_element(s.begin(), s.end()) + 1;
        canon.push_back(std::move(g));
        multiplicity.push_back(falling_factorial(o.symbols, used));
      }
    }
  }
  rep.patterns = canon.size();
  for (std::size_t i = 0; i < canon.size(); ++i) {
    rep.generators += multiplicity[i];
    const auto diff = as_minus_id(canon[i]);
    if (!diff.zero()) {
      if (rep.discrepancies == 0)
        rep.discrepancy_witness = "A S(" + text(canon[i].first, canon[i].second) + ") − id = " + text(diff);
      rep.discrepancies += multiplicity[i];
    }
  }
  rep.branch = rep.discrepancies == 0 ? "identity" : "homotopy";

  // The homotopy is natural in vertex maps, since the cone vertices are the
  // first vertices of each factor. Solving on patterns covers every generator.
  HomotopySolver<TensorKey<Index>, Integer> solver(
      as_minus_id,
      [](const TensorKey<Index>& g) { return boundary(TensorChain<Integer>(g, Integer(1))); },
      [](const TensorKey<Index>& g, const TensorChain<Integer>& z) {
        return tensor_cone(g.first.front(), g.second.front(), z);
      });
  for (const auto& g : canon) {
    const auto r = solver.residual(g);
    ++rep.verified_patterns;
    if (!r.zero()) {
      if (rep.residual_failures == 0) rep.residual_witness = "residual at " + text(g.first, g.second) + ": " + text(r);
      ++rep.residual_failures;
    }
  }

  // Direct check on sampled generators using the relabelled homotopy.
  auto H = [&](const TensorKey<Index>& g) {
    const auto c = canonicalize(g);
    return relabel(solver(c.key), c.labels);
  };
  SplitMix64 rng(o.seed);
  for (std::size_t i = 0; i < o.direct_samples; ++i) {
    const int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(o.max_degree) + 1));
    const int l = static_cast<int>(rng.below(static_cast<std::uint64_t>(o.max_degree) + 1));
    const TensorKey<Index> g{random_tuple(rng, o.symbols, k), random_tuple(rng, o.symbols, l)};
    TensorChain<Integer> lhs = boundary(H(g));
    for (const auto& [face, coef] : boundary(TensorChain<Integer>(g, Integer(1)))) lhs.add(H(face), coef);
    lhs -= as_minus_id(g);
    ++rep.direct_samples;
    if (!lhs.zero()) {
      if (rep.direct_failures == 0) rep.residual_witness = "direct residual at " + text(g.first, g.second);
      ++rep.direct_failures;
    }
  }
  rep.solved = solver.solved();
  return rep;
}

nlohmann::json to_json(const AsBranchReport& r) {
  nlohmann::json j = {{"generators", r.generators},
                      {"patterns", r.patterns},
                      {"discrepancies", r.discrepancies},
                      {"branch", r.branch},
                      {"solved_entries", r.solved},
                      {"verified_patterns", r.verified_patterns},
                      {"residual_failures", r.residual_failures},
                      {"direct_samples", r.direct_samples},
                      {"direct_failures", r.direct_failures},
                      {"verified", r.verified()}};
  if (!r.discrepancy_witness.empty()) j["discrepancy_witness"] = r.discrepancy_witness;
  if (!r.residual_witness.empty()) j["residual_witness"] = r.residual_witness;
  return j;
}

IdentityCheck run_sa_homotopy(int max_degree, std::size_t symbols) {
  using Gen = Tuple<PV>;
  auto f = [](const Gen& g) {
    Chain<Integer, PV> out = cross_product(alexander_whitney<Integer, Index, Index>(g));
    out.add(g, Integer(-1));
    return out;
  };
  HomotopySolver<Gen, Integer> solver(
      f, [](const Gen& g) { return boundary<Integer>(g); },
      [](const Gen& g, const Chain<Integer, PV>& z) { return cone(g.front(), z); });
  IdentityCheck check{"chain_maps", "sa_homotopy", "Z", 0, 0, {}};
  std::vector<PV> vertices;
  for (Index a = 0; a < symbols; ++a)
    for (Index b = 0; b < symbols; ++b) vertices.push_back({a, b});
  for (int d = 0; d <= max_degree; ++d) {
    for (const auto& idx : all_tuples(vertices.size(), d)) {
      Gen g;
      for (Index i : idx) g.push_back(vertices[i]);
      ++check.instances;
      if (!solver.residual(g).zero() && check.failures++ == 0) check.witness = "residual at " + text(g);
    }
  }
  return check;
}

bool ProductsSelftestReport::all_passed() const {
  return as_branch.verified() &&
         std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.passed(); });
}

ProductsSelftestReport run_products_selftest(const ProductsSelftestOptions& options) {
  ProductsSelftestReport rep;
  rep.options = options;
  AlgebraBatteryOptions ao;
  ao.seed = options.seed;
  ao.instances = options.instances;
  ao.maxdim = options.maxdim;
  for (auto& c : run_algebra_battery(ao)) rep.checks.push_back(std::move(c));
  for (auto& c : run_chain_map_battery(ao)) rep.checks.push_back(std::move(c));
  SlantBatteryOptions so;
  so.seed = options.seed;
  for (auto& c : run_slant_battery(so)) rep.checks.push_back(std::move(c));
  for (auto& c : sign_sequence_checks()) rep.checks.push_back(std::move(c));
  rep.checks.push_back(run_sa_homotopy(std::min(options.maxdim, 3), 3));
  AsBranchOptions as;
  as.seed = options.seed;
  as.max_degree = options.maxdim;
  rep.as_branch = run_as_branch(as);
  return rep;
}

nlohmann::json to_json(const ProductsSelftestReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return {{"seed", r.options.seed},
          {"maxdim", r.options.maxdim},
          {"instances", r.options.instances},
          {"checks", checks},
          {"as_branch", to_json(r.as_branch)},
          {"all_passed", r.all_passed()}};
}

}  // namespace coarsetop
