#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coarsetop/metric.hpp"

namespace coarsetop {

enum class SpaceKind { Grid, Graph, PointCloud };

// Parsed form of a space descriptor:
//   zn:<n>[:l1|l2|linf]     integer lattice, l1 by default
//   graph:<file>[@<id>]     weighted edge list "u v w", basepoint defaults to the first id
//   cloud:<file>[:<norm>]   CSV point cloud, l2 by default, basepoint is row 0
struct SpaceSpec {
  SpaceKind kind = SpaceKind::Grid;
  int dim = 1;
  Norm norm = Norm::L1;
  std::string path;
  std::optional<std::string> basepoint;

  static SpaceSpec parse(std::string_view text);
  std::string to_string() const;
};

// Nested finite windows exhausting an unbounded (or large finite) space:
// window(W) = {x : d(x, o) ≤ W}. Point ids are stable across windows.
class WindowFamily {
 public:
  static WindowFamily grid(int dim, Norm norm = Norm::L1);
  static WindowFamily from_space(FiniteMetricSpace ambient, SpaceKind kind, std::string label);
  static WindowFamily from_graph_text(std::string_view text, std::optional<std::string> basepoint,
                                      std::string label = "graph");
  static WindowFamily from_graph_file(const std::string& path,
                                      std::optional<std::string> basepoint);
  static WindowFamily from_cloud_text(std::string_view text, Norm norm, std::string label = "cloud");
  static WindowFamily from_cloud_file(const std::string& path, Norm norm);
  static WindowFamily from_spec(const SpaceSpec& spec);

  // Same windows with a new metric: window(W) = fn(base.window(W)). The
  // transform must keep the point ids.
  using Transform = std::function<FiniteMetricSpace(const FiniteMetricSpace&)>;
  WindowFamily transformed(Transform fn, std::string label) const;

  SpaceKind kind() const { return kind_; }
  int dimension() const { return dim_; }
  std::optional<Norm> norm() const { return norm_; }
  const std::string& label() const { return label_; }

  std::shared_ptr<const FiniteMetricSpace> window(double W) const;

  // True when `id` names a point of the family (possibly outside any given window).
  bool knows(std::string_view id) const;

  // The whole space, for finite families; grids have none.
  const FiniteMetricSpace* ambient() const { return ambient_.get(); }

 private:
  SpaceKind kind_ = SpaceKind::Grid;
  int dim_ = 0;
  std::optional<Norm> norm_;
  std::string label_;
  std::shared_ptr<const FiniteMetricSpace> ambient_;
  std::shared_ptr<const WindowFamily> base_;
  Transform transform_;

  struct Cache {
    std::mutex mutex;
    std::map<double, std::shared_ptr<const FiniteMetricSpace>> windows;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();

  std::shared_ptr<const FiniteMetricSpace> build_window(double W) const;
};

// Subset descriptors:
//   axis:<k>            k-th coordinate axis {x : x_j = 0 for j ≠ k}
//   hyperplane:<k>[=v]  {x : x_k = v}, v = 0 by default
//   half:<k>            {x : x_k > 0}
//   ball:<r>[@<id>]     closed ball about the basepoint (or <id>)
//   ids:<file>          whitespace-separated point ids
//   empty, all
//   union(a, b, ...), inter(a, b, ...), minus(a, b)
class SubsetSpec {
 public:
  static SubsetSpec parse(std::string_view text);

  Subset resolve(const WindowFamily& family, const FiniteMetricSpace& window) const;
  std::string to_string() const;

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
};

}  // namespace coarsetop
