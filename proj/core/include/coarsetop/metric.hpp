#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace coarsetop {

using Index = std::uint32_t;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kFloatTolerance = 1e-9;

enum class Norm { L1, L2, Linf };

Norm parse_norm(std::string_view text);
std::string_view norm_name(Norm norm);

// Membership bitmap over the points of one space.
class Subset {
 public:
  Subset() = default;
  explicit Subset(std::size_t universe) : bits_(universe, 0) {}

  static Subset full(std::size_t universe);
  static Subset from_indices(std::size_t universe, std::span<const Index> indices);

  std::size_t universe() const { return bits_.size(); }
  std::size_t count() const { return count_; }
  bool empty() const { return count_ == 0; }
  bool contains(Index i) const { return i < bits_.size() && bits_[i] != 0; }

  void insert(Index i);
  void erase(Index i);

  std::vector<Index> indices() const;
  Subset complement() const;
  Subset unite(const Subset& other) const;
  Subset intersect(const Subset& other) const;
  Subset minus(const Subset& other) const;

  friend bool operator==(const Subset& a, const Subset& b) { return a.bits_ == b.bits_; }

 private:
  std::vector<std::uint8_t> bits_;
  std::size_t count_ = 0;
};

class DistanceKernel {
 public:
  virtual ~DistanceKernel() = default;
  virtual double distance(Index i, Index j) const = 0;
  // True when the kernel is a metric by construction (norms, shortest paths).
  virtual bool metric_by_construction() const { return false; }
};

// A finite (pseudo)metric space: an ordered list of opaque point ids and a
// distance kernel. Point indices are positions in that list.
class FiniteMetricSpace {
 public:
  struct Options {
    Index basepoint = 0;
    bool exact = false;        // distances are exact; no comparison tolerance
    bool pseudometric = false;  // distinct points may sit at distance 0
  };

  FiniteMetricSpace() = default;

  // Coordinates are stored row-major, `dim` values per point.
  static FiniteMetricSpace from_coordinates(std::vector<std::string> ids, std::size_t dim,
                                            std::vector<double> coords, Norm norm,
                                            Options options);
  // Row-major n×n table.
  static FiniteMetricSpace from_matrix(std::vector<std::string> ids, std::vector<double> table,
                                       Options options);
  static FiniteMetricSpace from_kernel(std::vector<std::string> ids,
                                       std::shared_ptr<const DistanceKernel> kernel,
                                       Options options);

  std::size_t size() const { return ids_.size(); }
  double distance(Index i, Index j) const { return kernel_->distance(i, j); }
  const std::string& id(Index i) const { return ids_[i]; }
  const std::vector<std::string>& ids() const { return ids_; }
  std::optional<Index> find(std::string_view id) const;
  Index basepoint() const { return options_.basepoint; }
  bool exact() const { return options_.exact; }
  bool pseudometric() const { return options_.pseudometric; }
  double tolerance() const { return options_.exact ? 0.0 : kFloatTolerance; }
  const std::shared_ptr<const DistanceKernel>& kernel() const { return kernel_; }

  // Strict and non-strict comparisons honouring the tolerance.
  bool less(double a, double b) const { return a < b - tolerance(); }
  bool less_equal(double a, double b) const { return a <= b + tolerance(); }

  // Coordinates, when the space has them (grids and point clouds).
  std::size_t dimension() const { return dim_; }
  bool has_coordinates() const { return dim_ > 0; }
  bool integer_grid() const { return integer_grid_; }
  std::optional<Norm> norm() const { return norm_; }
  std::span<const double> coordinates(Index i) const;
  std::optional<Index> find_coordinates(std::span<const long long> coords) const;

  // Copies coordinates from a space with the same points, as labels only: the
  // distance kernel is untouched and norm() stays empty.
  void adopt_coordinates(const FiniteMetricSpace& from);

  // d(x, A) for every x; +inf everywhere when A is empty.
  std::vector<double> distance_to_set(const Subset& A) const;

  // Restriction to the listed points, in the listed order.
  FiniteMetricSpace restrict(std::span<const Index> keep, Index basepoint) const;

  // Checks the (pseudo)metric axioms; throws InputError with a witness.
  void validate(std::uint64_t seed = 0) const;

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, Index> lookup_;
  std::shared_ptr<const DistanceKernel> kernel_;
  Options options_;
  std::size_t dim_ = 0;
  std::vector<double> coords_;
  std::optional<Norm> norm_;
  bool integer_grid_ = false;
  std::unordered_map<std::string, Index> coord_lookup_;

  void build_lookup();
};

// Closed-ball neighbour queries at a fixed radius. Grids use an offset stencil;
// other spaces scan.
class NeighborFinder {
 public:
  NeighborFinder(const FiniteMetricSpace& space, double radius);
  // Points j with d(i, j) ≤ radius (within tolerance), ascending, i included.
  std::vector<Index> neighbors(Index i) const;
  double radius() const { return radius_; }

 private:
  const FiniteMetricSpace& space_;
  double radius_;
  std::vector<std::vector<long long>> stencil_;
  bool use_stencil_ = false;
};

std::string format_grid_id(std::span<const long long> coords);

}  // namespace coarsetop
