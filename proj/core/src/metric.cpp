#include "coarsetop/metric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "coarsetop/errors.hpp"
#include "coarsetop/rng.hpp"

namespace coarsetop {

Norm parse_norm(std::string_view text) {
  if (text == "l1") return Norm::L1;
  if (text == "l2") return Norm::L2;
  if (text == "linf") return Norm::Linf;
  throw InputError("unknown metric '" + std::string(text) + "' (expected l1, l2 or linf)");
}

std::string_view norm_name(Norm norm) {
  switch (norm) {
    case Norm::L1: return "l1";
    case Norm::L2: return "l2";
    case Norm::Linf: return "linf";
  }
  return "?";
}

Subset Subset::full(std::size_t universe) {
  Subset s(universe);
  std::fill(s.bits_.begin(), s.bits_.end(), 1);
  s.count_ = universe;
  return s;
}

Subset Subset::from_indices(std::size_t universe, std::span<const Index> indices) {
  Subset s(universe);
  for (Index i : indices) s.insert(i);
  return s;
}

void Subset::insert(Index i) {
  if (!bits_[i]) {
    bits_[i] = 1;
    ++count_;
  }
}

void Subset::erase(Index i) {
  if (bits_[i]) {
    bits_[i] = 0;
    --count_;
  }
}

std::vector<Index> Subset::indices() const {
  std::vector<Index> out;
  out.reserve(count_);
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) out.push_back(static_cast<Index>(i));
  return out;
}

Subset Subset::complement() const {
  Subset s(bits_.size());
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (!bits_[i]) s.insert(static_cast<Index>(i));
  return s;
}

Subset Subset::unite(const Subset& other) const {
  Subset s = *this;
  for (Index i : other.indices()) s.insert(i);
  return s;
}

Subset Subset::intersect(const Subset& other) const {
  Subset s(bits_.size());
  for (Index i : indices())
    if (other.contains(i)) s.insert(i);
  return s;
}

Subset Subset::minus(const Subset& other) const {
  Subset s(bits_.size());
  for (Index i : indices())
    if (!other.contains(i)) s.insert(i);
  return s;
}

namespace {

class CoordinateKernel final : public DistanceKernel {
 public:
  CoordinateKernel(std::size_t dim, std::vector<double> coords, Norm norm)
      : dim_(dim), coords_(std::move(coords)), norm_(norm) {}

  double distance(Index i, Index j) const override {
    const double* a = coords_.data() + static_cast<std::size_t>(i) * dim_;
    const double* b = coords_.data() + static_cast<std::size_t>(j) * dim_;
    double acc = 0;
    for (std::size_t k = 0; k < dim_; ++k) {
      const double d = std::abs(a[k] - b[k]);
      switch (norm_) {
        case Norm::L1: acc += d; break;
        case Norm::L2: acc += d * d; break;
        case Norm::Linf: acc = std::max(acc, d); break;
      }
    }
    return norm_ == Norm::L2 ? std::sqrt(acc) : acc;
  }
  bool metric_by_construction() const override { return true; }

 private:
  std::size_t dim_;
  std::vector<double> coords_;
  Norm norm_;
};

class MatrixKernel final : public DistanceKernel {
 public:
  MatrixKernel(std::size_t n, std::vector<double> table) : n_(n), table_(std::move(table)) {}
  double distance(Index i, Index j) const override {
    return table_[static_cast<std::size_t>(i) * n_ + j];
  }

 private:
  std::size_t n_;
  std::vector<double> table_;
};

class SubspaceKernel final : public DistanceKernel {
 public:
  SubspaceKernel(std::shared_ptr<const DistanceKernel> parent, std::vector<Index> map)
      : parent_(std::move(parent)), map_(std::move(map)) {}
  double distance(Index i, Index j) const override {
    return parent_->distance(map_[i], map_[j]);
  }
  bool metric_by_construction() const override { return parent_->metric_by_construction(); }

 private:
  std::shared_ptr<const DistanceKernel> parent_;
  std::vector<Index> map_;
};

std::string coord_key(std::span<const long long> c) { return format_grid_id(c); }

}  // namespace

std::string format_grid_id(std::span<const long long> coords) {
  std::string out;
  for (std::size_t k = 0; k < coords.size(); ++k) {
    if (k) out += ',';
    out += std::to_string(coords[k]);
  }
  return out;
}

void FiniteMetricSpace::build_lookup() {
  lookup_.clear();
  lookup_.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!lookup_.emplace(ids_[i], static_cast<Index>(i)).second)
      throw InputError("duplicate point id '" + ids_[i] + "'");
  }
  if (!ids_.empty() && options_.basepoint >= ids_.size())
    throw InputError("basepoint index out of range");
}

FiniteMetricSpace FiniteMetricSpace::from_coordinates(std::vector<std::string> ids,
                                                      std::size_t dim,
                                                      std::vector<double> coords, Norm norm,
                                                      Options options) {
  if (dim == 0) throw InputError("coordinates need dimension ≥ 1");
  if (coords.size() != ids.size() * dim) throw InputError("coordinate table has wrong size");
  FiniteMetricSpace s;
  s.ids_ = std::move(ids);
  s.options_ = options;
  s.dim_ = dim;
  s.norm_ = norm;
  s.coords_ = coords;
  s.integer_grid_ = std::all_of(coords.begin(), coords.end(),
                                [](double v) { return v == std::floor(v) && std::abs(v) < 1e15; });
  s.kernel_ = std::make_shared<CoordinateKernel>(dim, std::move(coords), norm);
  s.build_lookup();
  if (s.integer_grid_) {
    std::vector<long long> c(dim);
    for (std::size_t i = 0; i < s.ids_.size(); ++i) {
      for (std::size_t k = 0; k < dim; ++k) c[k] = static_cast<long long>(s.coords_[i * dim + k]);
      s.coord_lookup_.emplace(coord_key(c), static_cast<Index>(i));
    }
  }
  return s;
}

FiniteMetricSpace FiniteMetricSpace::from_matrix(std::vector<std::string> ids,
                                                 std::vector<double> table, Options options) {
  const std::size_t n = ids.size();
  if (table.size() != n * n) throw InputError("distance table has wrong size");
  return from_kernel(std::move(ids), std::make_shared<MatrixKernel>(n, std::move(table)), options);
}

FiniteMetricSpace FiniteMetricSpace::from_kernel(std::vector<std::string> ids,
                                                 std::shared_ptr<const DistanceKernel> kernel,
                                                 Options options) {
  FiniteMetricSpace s;
  s.ids_ = std::move(ids);
  s.kernel_ = std::move(kernel);
  s.options_ = options;
  s.build_lookup();
  return s;
}

std::optional<Index> FiniteMetricSpace::find(std::string_view id) const {
  auto it = lookup_.find(std::string(id));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::span<const double> FiniteMetricSpace::coordinates(Index i) const {
  if (dim_ == 0) return {};
  return {coords_.data() + static_cast<std::size_t>(i) * dim_, dim_};
}

std::optional<Index> FiniteMetricSpace::find_coordinates(std::span<const long long> coords) const {
  if (!integer_grid_ || coords.size() != dim_) return std::nullopt;
  auto it = coord_lookup_.find(coord_key(coords));
  if (it == coord_lookup_.end()) return std::nullopt;
  return it->second;
}

void FiniteMetricSpace::adopt_coordinates(const FiniteMetricSpace& from) {
  if (from.size() != size()) throw InputError("coordinate source has a different size");
  dim_ = from.dim_;
  coords_ = from.coords_;
  integer_grid_ = from.integer_grid_;
  coord_lookup_ = from.coord_lookup_;
  norm_.reset();
}

std::vector<double> FiniteMetricSpace::distance_to_set(const Subset& A) const {
  const std::size_t n = size();
  std::vector<double> out(n, kInfinity);
  const auto members = A.indices();
  if (members.empty()) return out;
  for (std::size_t x = 0; x < n; ++x) {
    if (A.contains(static_cast<Index>(x))) {
      out[x] = 0;
      continue;
    }
    double best = kInfinity;
    for (Index a : members) best = std::min(best, distance(static_cast<Index>(x), a));
    out[x] = best;
  }
  return out;
}

FiniteMetricSpace FiniteMetricSpace::restrict(std::span<const Index> keep, Index basepoint) const {
  std::vector<std::string> ids;
  ids.reserve(keep.size());
  for (Index i : keep) ids.push_back(ids_[i]);
  Options opts = options_;
  opts.basepoint = basepoint;
  if (dim_ > 0 && norm_) {
    std::vector<double> coords;
    coords.reserve(keep.size() * dim_);
    for (Index i : keep) {
      auto c = coordinates(i);
      coords.insert(coords.end(), c.begin(), c.end());
    }
    return from_coordinates(std::move(ids), dim_, std::move(coords), *norm_, opts);
  }
  std::vector<Index> map(keep.begin(), keep.end());
  auto out = from_kernel(std::move(ids), std::make_shared<SubspaceKernel>(kernel_, std::move(map)),
                         opts);
  if (dim_ > 0) {
    FiniteMetricSpace labels = *this;
    labels.coords_.clear();
    for (Index i : keep) {
      auto c = coordinates(i);
      labels.coords_.insert(labels.coords_.end(), c.begin(), c.end());
    }
    labels.ids_ = out.ids_;
    labels.coord_lookup_.clear();
    if (integer_grid_) {
      std::vector<long long> c(dim_);
      for (std::size_t i = 0; i < keep.size(); ++i) {
        for (std::size_t k = 0; k < dim_; ++k) c[k] = static_cast<long long>(labels.coords_[i * dim_ + k]);
        labels.coord_lookup_.emplace(coord_key(c), static_cast<Index>(i));
      }
    }
    out.adopt_coordinates(labels);
  }
  return out;
}

void FiniteMetricSpace::validate(std::uint64_t seed) const {
  const std::size_t n = size();
  const double tol = std::max(tolerance(), 1e-12);
  auto fail = [&](const std::string& what) { throw InputError("metric check failed: " + what); };
  for (std::size_t i = 0; i < n; ++i) {
    const Index a = static_cast<Index>(i);
    if (std::abs(distance(a, a)) > tol) fail("d(" + ids_[i] + "," + ids_[i] + ") != 0");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Index a = static_cast<Index>(i), b = static_cast<Index>(j);
      const double dab = distance(a, b);
      if (!std::isfinite(dab) || dab < 0) fail("d(" + ids_[i] + "," + ids_[j] + ") invalid");
      if (std::abs(dab - distance(b, a)) > tol)
        fail("asymmetric at (" + ids_[i] + "," + ids_[j] + ")");
      if (!options_.pseudometric && dab <= tol)
        fail("distinct points " + ids_[i] + " and " + ids_[j] + " at distance 0");
    }
  }
  auto check = [&](Index a, Index b, Index c) {
    if (distance(a, c) > distance(a, b) + distance(b, c) + tol)
      fail("triangle inequality at (" + ids_[a] + "," + ids_[b] + "," + ids_[c] + ")");
  };
  constexpr std::size_t kExhaustiveLimit = 2000;
  if (n <= kExhaustiveLimit && !kernel_->metric_by_construction()) {
    for (Index a = 0; a < n; ++a)
      for (Index b = 0; b < n; ++b)
        for (Index c = 0; c < n; ++c) check(a, b, c);
    return;
  }
  if (n == 0) return;
  SplitMix64 rng(seed);
  for (int t = 0; t < 100000; ++t)
    check(static_cast<Index>(rng.below(n)), static_cast<Index>(rng.below(n)),
          static_cast<Index>(rng.below(n)));
}

NeighborFinder::NeighborFinder(const FiniteMetricSpace& space, double radius)
    : space_(space), radius_(radius) {
  if (!space.integer_grid() || !space.norm()) return;
  const long long reach = static_cast<long long>(std::floor(radius + space.tolerance()));
  const std::size_t dim = space.dimension();
  std::vector<long long> offset(dim, -reach);
  // Enumerate the cube [-reach, reach]^dim and keep offsets inside the ball.
  while (true) {
    double acc = 0;
    for (long long v : offset) {
      const double d = static_cast<double>(std::llabs(v));
      switch (*space.norm()) {
        case Norm::L1: acc += d; break;
        case Norm::L2: acc += d * d; break;
        case Norm::Linf: acc = std::max(acc, d); break;
      }
    }
    if (*space.norm() == Norm::L2) acc = std::sqrt(acc);
    if (space.less_equal(acc, radius)) stencil_.push_back(offset);
    std::size_t k = 0;
    while (k < dim && offset[k] == reach) offset[k++] = -reach;
    if (k == dim) break;
    ++offset[k];
  }
  use_stencil_ = true;
}

std::vector<Index> NeighborFinder::neighbors(Index i) const {
  std::vector<Index> out;
  if (use_stencil_) {
    const auto base = space_.coordinates(i);
    std::vector<long long> c(base.size());
    for (const auto& off : stencil_) {
      for (std::size_t k = 0; k < c.size(); ++k) c[k] = static_cast<long long>(base[k]) + off[k];
      if (auto j = space_.find_coordinates(c)) out.push_back(*j);
    }
    std::sort(out.begin(), out.end());
    return out;
  }
  for (std::size_t j = 0; j < space_.size(); ++j)
    if (space_.less_equal(space_.distance(i, static_cast<Index>(j)), radius_))
      out.push_back(static_cast<Index>(j));
  return out;
}

}  // namespace coarsetop
