#include "coarsetop/window.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_map>

#include "coarsetop/errors.hpp"

namespace coarsetop {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::optional<double> parse_double(std::string_view s) {
  std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  char* end = nullptr;
  double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<long long> parse_int(std::string_view s) {
  std::string t = trim(s);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
  return v;
}

std::optional<std::vector<long long>> parse_grid_id(std::string_view id, int dim) {
  auto parts = split(id, ',');
  if (static_cast<int>(parts.size()) != dim) return std::nullopt;
  std::vector<long long> c;
  for (auto& p : parts) {
    auto v = parse_int(p);
    if (!v) return std::nullopt;
    c.push_back(*v);
  }
  return c;
}

}  // namespace

SpaceSpec SpaceSpec::parse(std::string_view text) {
  SpaceSpec s;
  auto colon = text.find(':');
  if (colon == std::string_view::npos) throw InputError("bad space descriptor '" + std::string(text) + "'");
  const std::string head(text.substr(0, colon));
  const std::string rest(text.substr(colon + 1));
  if (head == "zn") {
    auto parts = split(rest, ':');
    auto n = parse_int(parts[0]);
    if (!n || *n < 1 || *n > 6) throw InputError("zn dimension must be 1..6");
    s.kind = SpaceKind::Grid;
    s.dim = static_cast<int>(*n);
    s.norm = parts.size() > 1 ? parse_norm(parts[1]) : Norm::L1;
    if (parts.size() > 2) throw InputError("bad space descriptor '" + std::string(text) + "'");
    return s;
  }
  if (head == "graph") {
    s.kind = SpaceKind::Graph;
    s.dim = 0;
    auto at = rest.rfind('@');
    if (at != std::string::npos) {
      s.path = rest.substr(0, at);
      s.basepoint = rest.substr(at + 1);
    } else {
      s.path = rest;
    }
    return s;
  }
  if (head == "cloud") {
    s.kind = SpaceKind::PointCloud;
    s.norm = Norm::L2;
    auto c2 = rest.rfind(':');
    if (c2 != std::string::npos) {
      const std::string tail = rest.substr(c2 + 1);
      if (tail == "l1" || tail == "l2" || tail == "linf") {
        s.norm = parse_norm(tail);
        s.path = rest.substr(0, c2);
        return s;
      }
    }
    s.path = rest;
    return s;
  }
  throw InputError("unknown space kind '" + head + "'");
}

std::string SpaceSpec::to_string() const {
  switch (kind) {
    case SpaceKind::Grid:
      return "zn:" + std::to_string(dim) + ":" + std::string(norm_name(norm));
    case SpaceKind::Graph:
      return "graph:" + path + (basepoint ? "@" + *basepoint : "");
    case SpaceKind::PointCloud:
      return "cloud:" + path + ":" + std::string(norm_name(norm));
  }
  return "";
}

WindowFamily WindowFamily::grid(int dim, Norm norm) {
  if (dim < 1) throw InputError("grid dimension must be ≥ 1");
  WindowFamily f;
  f.kind_ = SpaceKind::Grid;
  f.dim_ = dim;
  f.norm_ = norm;
  f.label_ = "zn:" + std::to_string(dim) + ":" + std::string(norm_name(norm));
  return f;
}

WindowFamily WindowFamily::from_space(FiniteMetricSpace ambient, SpaceKind kind, std::string label) {
  WindowFamily f;
  f.kind_ = kind;
  f.dim_ = static_cast<int>(ambient.dimension());
  f.norm_ = ambient.norm();
  f.label_ = std::move(label);
  f.ambient_ = std::make_shared<FiniteMetricSpace>(std::move(ambient));
  return f;
}

WindowFamily WindowFamily::from_graph_text(std::string_view text,
                                           std::optional<std::string> basepoint,
                                           std::string label) {
  std::vector<std::string> ids;
  std::unordered_map<std::string, Index> index;
  struct Edge {
    Index u, v;
    double w;
  };
  std::vector<Edge> edges;
  auto intern = [&](const std::string& id) {
    auto [it, fresh] = index.emplace(id, static_cast<Index>(ids.size()));
    if (fresh) ids.push_back(id);
    return it->second;
  };
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  bool integral = true;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string u, v, w;
    if (!(ls >> u)) continue;
    std::string extra;
    if (!(ls >> v >> w) || (ls >> extra))
      throw InputError("edge list line " + std::to_string(lineno) + ": expected 'u v w'");
    auto weight = parse_double(w);
    if (!weight || *weight <= 0)
      throw InputError("edge list line " + std::to_string(lineno) + ": weight must be positive");
    integral = integral && *weight == std::floor(*weight);
    edges.push_back({intern(u), intern(v), *weight});
  }
  if (ids.empty()) throw InputError("edge list is empty");
  const std::size_t n = ids.size();
  std::vector<std::vector<std::pair<Index, double>>> adj(n);
  for (const auto& e : edges) {
    adj[e.u].push_back({e.v, e.w});
    adj[e.v].push_back({e.u, e.w});
  }
  std::vector<double> table(n * n, kInfinity);
  for (Index s = 0; s < n; ++s) {
    double* row = table.data() + static_cast<std::size_t>(s) * n;
    row[s] = 0;
    using Item = std::pair<double, Index>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.push({0, s});
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > row[u]) continue;
      for (auto [v, w] : adj[u]) {
        if (d + w < row[v]) {
          row[v] = d + w;
          pq.push({row[v], v});
        }
      }
    }
    for (Index t = 0; t < n; ++t)
      if (!std::isfinite(row[t]))
        throw InputError("graph is disconnected: '" + ids[s] + "' and '" + ids[t] +
                         "' are mutually unreachable");
  }
  Index base = 0;
  if (basepoint) {
    auto it = index.find(*basepoint);
    if (it == index.end()) throw InputError("unresolved basepoint id '" + *basepoint + "'");
    base = it->second;
  }
  FiniteMetricSpace::Options opts;
  opts.basepoint = base;
  opts.exact = integral;
  auto space = FiniteMetricSpace::from_matrix(std::move(ids), std::move(table), opts);
  return from_space(std::move(space), SpaceKind::Graph, std::move(label));
}

WindowFamily WindowFamily::from_graph_file(const std::string& path,
                                           std::optional<std::string> basepoint) {
  return from_graph_text(read_file(path), std::move(basepoint),
                         "graph:" + path + (basepoint ? "@" + *basepoint : ""));
}

WindowFamily WindowFamily::from_cloud_text(std::string_view text, Norm norm, std::string label) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<std::string> ids;
  std::vector<double> coords;
  std::size_t dim = 0;
  bool id_column = false;
  bool first = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cells = split(line, ',');
    if (first) {
      first = false;
      const bool numeric = std::all_of(cells.begin(), cells.end(),
                                       [](const std::string& c) { return parse_double(c).has_value(); });
      if (!numeric) {
        id_column = !cells.empty() && trim(cells[0]) == "id";
        dim = cells.size() - (id_column ? 1 : 0);
        continue;
      }
    }
    const std::size_t offset = id_column ? 1 : 0;
    if (dim == 0) dim = cells.size();
    if (cells.size() != dim + offset)
      throw InputError("point cloud line " + std::to_string(lineno) + ": wrong column count");
    for (std::size_t k = offset; k < cells.size(); ++k) {
      auto v = parse_double(cells[k]);
      if (!v) throw InputError("point cloud line " + std::to_string(lineno) + ": bad number");
      coords.push_back(*v);
    }
    ids.push_back(id_column ? trim(cells[0]) : std::to_string(ids.size()));
  }
  if (ids.empty() || dim == 0) throw InputError("point cloud is empty");
  FiniteMetricSpace::Options opts;
  opts.exact = false;
  auto space = FiniteMetricSpace::from_coordinates(std::move(ids), dim, std::move(coords), norm, opts);
  return from_space(std::move(space), SpaceKind::PointCloud, std::move(label));
}

WindowFamily WindowFamily::from_cloud_file(const std::string& path, Norm norm) {
  return from_cloud_text(read_file(path), norm,
                         "cloud:" + path + ":" + std::string(norm_name(norm)));
}

WindowFamily WindowFamily::from_spec(const SpaceSpec& spec) {
  switch (spec.kind) {
    case SpaceKind::Grid: return grid(spec.dim, spec.norm);
    case SpaceKind::Graph: return from_graph_file(spec.path, spec.basepoint);
    case SpaceKind::PointCloud: return from_cloud_file(spec.path, spec.norm);
  }
  throw InputError("bad space descriptor");
}

std::shared_ptr<const FiniteMetricSpace> WindowFamily::window(double W) const {
  if (!(W >= 0) || !std::isfinite(W)) throw InputError("window size must be finite and ≥ 0");
  std::lock_guard<std::mutex> lock(cache_->mutex);
  auto it = cache_->windows.find(W);
  if (it != cache_->windows.end()) return it->second;
  auto built = build_window(W);
  cache_->windows.emplace(W, built);
  return built;
}

WindowFamily WindowFamily::transformed(Transform fn, std::string label) const {
  WindowFamily f;
  f.kind_ = kind_;
  f.dim_ = dim_;
  f.norm_ = norm_;
  f.label_ = std::move(label);
  f.base_ = std::make_shared<WindowFamily>(*this);
  f.transform_ = std::move(fn);
  return f;
}

std::shared_ptr<const FiniteMetricSpace> WindowFamily::build_window(double W) const {
  if (transform_) return std::make_shared<FiniteMetricSpace>(transform_(*base_->window(W)));
  if (kind_ != SpaceKind::Grid) {
    const auto& amb = *ambient_;
    std::vector<Index> keep;
    const Index o = amb.basepoint();
    for (Index i = 0; i < amb.size(); ++i)
      if (amb.less_equal(amb.distance(i, o), W)) keep.push_back(i);
    const Index base = static_cast<Index>(std::lower_bound(keep.begin(), keep.end(), o) - keep.begin());
    return std::make_shared<FiniteMetricSpace>(amb.restrict(keep, base));
  }
  const long long reach = static_cast<long long>(std::floor(W));
  const std::size_t dim = static_cast<std::size_t>(dim_);
  std::vector<long long> c(dim, -reach);
  std::vector<std::string> ids;
  std::vector<double> coords;
  Index base = 0;
  while (true) {
    double acc = 0;
    for (long long v : c) {
      const double d = static_cast<double>(std::llabs(v));
      switch (*norm_) {
        case Norm::L1: acc += d; break;
        case Norm::L2: acc += d * d; break;
        case Norm::Linf: acc = std::max(acc, d); break;
      }
    }
    const bool inside = *norm_ == Norm::L2 ? acc <= W * W + kFloatTolerance : acc <= W;
    if (inside) {
      if (std::all_of(c.begin(), c.end(), [](long long v) { return v == 0; }))
        base = static_cast<Index>(ids.size());
      ids.push_back(format_grid_id(c));
      for (long long v : c) coords.push_back(static_cast<double>(v));
    }
    // Lexicographic order: last coordinate varies fastest.
    std::size_t k = dim;
    while (k > 0 && c[k - 1] == reach) c[--k] = -reach;
    if (k == 0) break;
    ++c[k - 1];
  }
  FiniteMetricSpace::Options opts;
  opts.basepoint = base;
  opts.exact = *norm_ != Norm::L2;
  return std::make_shared<FiniteMetricSpace>(
      FiniteMetricSpace::from_coordinates(std::move(ids), dim, std::move(coords), *norm_, opts));
}

bool WindowFamily::knows(std::string_view id) const {
  if (base_) return base_->knows(id);
  if (kind_ == SpaceKind::Grid) return parse_grid_id(id, dim_).has_value();
  return ambient_->find(id).has_value();
}

// SubsetSpec ---------------------------------------------------------------

struct SubsetSpec::Node {
  enum class Kind { Axis, Hyperplane, Half, Ball, Ids, Empty, All, Union, Inter, Minus };
  Kind kind;
  int axis = 0;
  double value = 0;
  std::optional<std::string> center;
  std::string source;
  std::vector<std::string> ids;
  std::vector<std::shared_ptr<const Node>> children;
};

namespace {

using Node = SubsetSpec::Node;

class SubsetParser {
 public:
  explicit SubsetParser(std::string_view text) : text_(text) {}

  std::shared_ptr<const Node> parse() {
    auto node = expr();
    skip_ws();
    if (pos_ != text_.size()) error("trailing input");
    return node;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void error(const std::string& what) const {
    throw InputError("bad subset spec '" + std::string(text_) + "': " + what + " at offset " +
                     std::to_string(pos_));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string word() {
    skip_ws();
    std::size_t b = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    return std::string(text_.substr(b, pos_ - b));
  }

  // Argument after ':' runs until a top-level ',' or ')'.
  std::string argument() {
    std::size_t b = pos_;
    while (pos_ < text_.size() && text_[pos_] != ')' && text_[pos_] != ',') ++pos_;
    return trim(text_.substr(b, pos_ - b));
  }

  std::shared_ptr<const Node> expr() {
    const std::string head = word();
    if (head.empty()) error("expected a subset term");
    auto node = std::make_shared<Node>();
    skip_ws();
    if (head == "union" || head == "inter" || head == "minus") {
      node->kind = head == "union"   ? Node::Kind::Union
                   : head == "inter" ? Node::Kind::Inter
                                     : Node::Kind::Minus;
      if (pos_ >= text_.size() || text_[pos_] != '(') error("expected '('");
      ++pos_;
      while (true) {
        node->children.push_back(expr());
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (pos_ < text_.size() && text_[pos_] == ')') {
          ++pos_;
          break;
        }
        error("expected ',' or ')'");
      }
      if (node->kind == Node::Kind::Minus && node->children.size() != 2) error("minus takes two terms");
      return node;
    }
    if (head == "empty") {
      node->kind = Node::Kind::Empty;
      return node;
    }
    if (head == "all") {
      node->kind = Node::Kind::All;
      return node;
    }
    if (pos_ >= text_.size() || text_[pos_] != ':') error("expected ':' after '" + head + "'");
    ++pos_;
    const std::string arg = argument();
    node->source = arg;
    if (head == "axis" || head == "half") {
      auto k = parse_int(arg);
      if (!k || *k < 0) error("axis index must be a non-negative integer");
      node->kind = head == "axis" ? Node::Kind::Axis : Node::Kind::Half;
      node->axis = static_cast<int>(*k);
    } else if (head == "hyperplane") {
      auto eq = arg.find('=');
      auto k = parse_int(arg.substr(0, eq));
      if (!k || *k < 0) error("axis index must be a non-negative integer");
      node->kind = Node::Kind::Hyperplane;
      node->axis = static_cast<int>(*k);
      if (eq != std::string::npos) {
        auto v = parse_double(arg.substr(eq + 1));
        if (!v) error("bad hyperplane value");
        node->value = *v;
      }
    } else if (head == "ball") {
      auto at = arg.find('@');
      auto r = parse_double(arg.substr(0, at));
      if (!r || *r < 0) error("ball radius must be a number ≥ 0");
      node->kind = Node::Kind::Ball;
      node->value = *r;
      if (at != std::string::npos) node->center = arg.substr(at + 1);
    } else if (head == "ids") {
      node->kind = Node::Kind::Ids;
      std::istringstream in(read_file(arg));
      std::string id;
      while (in >> id) node->ids.push_back(id);
    } else {
      error("unknown subset term '" + head + "'");
    }
    return node;
  }
};

Subset resolve_node(const Node& node, const WindowFamily& family, const FiniteMetricSpace& w) {
  const std::size_t n = w.size();
  auto need_coords = [&](const char* what) {
    if (!w.has_coordinates()) throw InputError(std::string(what) + " needs a space with coordinates");
  };
  auto need_axis = [&](int axis) {
    if (static_cast<std::size_t>(axis) >= w.dimension())
      throw InputError("axis " + std::to_string(axis) + " out of range for dimension " +
                       std::to_string(w.dimension()));
  };
  Subset out(n);
  switch (node.kind) {
    case Node::Kind::Empty: return out;
    case Node::Kind::All: return Subset::full(n);
    case Node::Kind::Axis:
      need_coords("axis");
      need_axis(node.axis);
      for (Index i = 0; i < n; ++i) {
        auto c = w.coordinates(i);
        bool on = true;
        for (std::size_t k = 0; k < c.size(); ++k)
          if (static_cast<int>(k) != node.axis && std::abs(c[k]) > kFloatTolerance) on = false;
        if (on) out.insert(i);
      }
      return out;
    case Node::Kind::Hyperplane:
      need_coords("hyperplane");
      need_axis(node.axis);
      for (Index i = 0; i < n; ++i)
        if (std::abs(w.coordinates(i)[node.axis] - node.value) <= kFloatTolerance) out.insert(i);
      return out;
    case Node::Kind::Half:
      need_coords("half");
      need_axis(node.axis);
      for (Index i = 0; i < n; ++i)
        if (w.coordinates(i)[node.axis] > kFloatTolerance) out.insert(i);
      return out;
    case Node::Kind::Ball: {
      Index center = w.basepoint();
      if (node.center) {
        if (!family.knows(*node.center)) throw InputError("unresolved id '" + *node.center + "'");
        auto c = w.find(*node.center);
        if (!c) return out;  // centre outside this window
        center = *c;
      }
      for (Index i = 0; i < n; ++i)
        if (w.less_equal(w.distance(i, center), node.value)) out.insert(i);
      return out;
    }
    case Node::Kind::Ids:
      for (const auto& id : node.ids) {
        if (!family.knows(id)) throw InputError("unresolved id '" + id + "'");
        if (auto i = w.find(id)) out.insert(*i);
      }
      return out;
    case Node::Kind::Union:
      for (const auto& c : node.children) out = out.unite(resolve_node(*c, family, w));
      return out;
    case Node::Kind::Inter:
      out = Subset::full(n);
      for (const auto& c : node.children) out = out.intersect(resolve_node(*c, family, w));
      return out;
    case Node::Kind::Minus:
      return resolve_node(*node.children[0], family, w).minus(resolve_node(*node.children[1], family, w));
  }
  return out;
}

std::string node_string(const Node& node) {
  auto list = [&](const char* head) {
    std::string s = std::string(head) + "(";
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      if (i) s += ",";
      s += node_string(*node.children[i]);
    }
    return s + ")";
  };
  switch (node.kind) {
    case Node::Kind::Empty: return "empty";
    case Node::Kind::All: return "all";
    case Node::Kind::Axis: return "axis:" + std::to_string(node.axis);
    case Node::Kind::Half: return "half:" + std::to_string(node.axis);
    case Node::Kind::Hyperplane: return "hyperplane:" + node.source;
    case Node::Kind::Ball: return "ball:" + node.source;
    case Node::Kind::Ids: return "ids:" + node.source;
    case Node::Kind::Union: return list("union");
    case Node::Kind::Inter: return list("inter");
    case Node::Kind::Minus: return list("minus");
  }
  return "";
}

}  // namespace

SubsetSpec SubsetSpec::parse(std::string_view text) {
  SubsetSpec s;
  s.root_ = SubsetParser(text).parse();
  return s;
}

Subset SubsetSpec::resolve(const WindowFamily& family, const FiniteMetricSpace& window) const {
  return resolve_node(*root_, family, window);
}

std::string SubsetSpec::to_string() const { return node_string(*root_); }

}  // namespace coarsetop
