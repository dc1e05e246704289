#include "commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "coarsetop/coarse.hpp"
#include "coarsetop/complex.hpp"
#include "coarsetop/duality.hpp"
#include "coarsetop/errors.hpp"
#include "coarsetop/homology.hpp"
#include "coarsetop/membership.hpp"
#include "coarsetop/products_selftest.hpp"
#include "coarsetop/quotient.hpp"
#include "coarsetop/separation.hpp"
#include "coarsetop/window.hpp"

namespace coarsetop::cli {
namespace {

using json = nlohmann::json;

const std::string& require(const std::optional<std::string>& v, const char* flag) {
  if (!v) throw InputError(std::string(flag) + " is required");
  return *v;
}

double param(const RunConfig& c, const char* key) { return c.params.at(key).get<double>(); }

std::optional<double> optional_param(const RunConfig& c, const char* key) {
  if (!c.params.contains(key) || c.params.at(key).is_null()) return std::nullopt;
  return c.params.at(key).get<double>();
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void require_format(const RunConfig& c, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed)
    if (c.format == f) return;
  throw InputError("format '" + c.format + "' is not available for " + c.command);
}

WindowFamily load_family(const RunConfig& c) {
  return WindowFamily::from_spec(SpaceSpec::parse(require(c.space, "--space")));
}

ScaleSchedule schedule_of(const RunConfig& c) { return c.schedule ? *c.schedule : ScaleSchedule::defaults(); }

// The explicit window when given, else window 8 on grids and the whole space
// on finite inputs.
std::shared_ptr<const FiniteMetricSpace> pick_window(const WindowFamily& family, std::optional<double> W) {
  if (W) return family.window(*W);
  if (family.kind() == SpaceKind::Grid) return family.window(8);
  return {std::shared_ptr<const FiniteMetricSpace>(), family.ambient()};
}

void maybe_validate(const RunConfig& c, const FiniteMetricSpace& w) {
  if (c.self_check == SelfCheck::Exhaustive) w.validate(c.seed);
}

json ids_of(const FiniteMetricSpace& w, std::span<const Index> s) {
  json out = json::array();
  for (Index i : s) out.push_back(w.id(i));
  return out;
}

json to_json(const ComponentSummary& s) {
  return {{"id", s.id}, {"size", s.size}, {"depth", s.depth}, {"witness", s.witness}, {"deep", s.deep}};
}

json to_json(const CellReport& cell) {
  json witnesses = json::array();
  for (const auto& comp : cell.components) witnesses.push_back(to_json(comp));
  return {{"W", cell.W}, {"R", cell.R}, {"deep", cell.deep}, {"shallow", cell.shallow}, {"witnesses", witnesses}};
}

json to_json(const CochainSweep& s) {
  return {{"degree", s.degree}, {"radii", s.radii},     {"windows", s.windows}, {"count", s.count},
          {"measure", s.measure}, {"bounded", s.bounded}, {"member", s.member}};
}

json to_json(const ComponentTestReport& r) {
  return {{"radii", r.radii},
          {"windows", r.windows},
          {"profile", r.profile},
          {"stable", r.stable},
          {"component", r.component},
          {"escape_radius", r.escape_radius ? json(*r.escape_radius) : json(nullptr)},
          {"escape", r.escape}};
}

json to_json(const LemmaCheck& l, const FiniteMetricSpace& w) {
  return {{"passed", l.passed},
          {"checked", l.checked},
          {"witness", l.witness ? ids_of(w, *l.witness) : json(nullptr)},
          {"detail", l.detail}};
}

// ---------------------------------------------------------------------------

CommandOutput components(const RunConfig& c) {
  require_format(c, {"json"});
  const auto family = load_family(c);
  const auto A = resolver(family, SubsetSpec::parse(require(c.subset, "--subset")));
  ScaleSchedule s;
  s.windows = {param(c, "window")};
  s.radii = {param(c, "radius")};
  s.connect = param(c, "connect");
  s.alpha = param(c, "alpha");
  s.validate();
  maybe_validate(c, *family.window(s.windows[0]));
  const auto cell = classify_deep(family, A, s.radii[0], s.windows[0], s);
  return {to_json(cell), std::nullopt};
}

CommandOutput separation_rank(const RunConfig& c, unsigned threads) {
  require_format(c, {"json", "csv"});
  const auto family = load_family(c);
  const auto A = resolver(family, SubsetSpec::parse(require(c.subset, "--subset")));
  const auto schedule = schedule_of(c);
  if (c.self_check == SelfCheck::Exhaustive)
    for (double W : schedule.windows) maybe_validate(c, *family.window(W));
  const auto sweep = deep_separation_rank(family, A, schedule, threads);
  const std::string verdict(verdict_name(sweep.verdict));
  if (c.format == "csv") {
    std::ostringstream os;
    os << "W,R,deep,shallow,verdict\n";
    for (const auto& cell : sweep.cells)
      os << format_number(cell.W) << ',' << format_number(cell.R) << ',' << cell.deep << ',' << cell.shallow
         << ',' << verdict << '\n';
    return {json(nullptr), os.str()};
  }
  json cells = json::array();
  for (const auto& cell : sweep.cells) cells.push_back(to_json(cell));
  return {{{"space", *c.space},
           {"subset", *c.subset},
           {"schedule", schedule.to_json()},
           {"cells", cells},
           {"verdict", verdict},
           {"k", sweep.k ? json(*sweep.k) : json(nullptr)}},
          std::nullopt};
}

CommandOutput homology(const RunConfig& c) {
  require_format(c, {"json"});
  const auto family = load_family(c);
  const auto w = pick_window(family, optional_param(c, "window"));
  maybe_validate(c, *w);
  const double r = param(c, "scale");
  const int maxdim = c.params.at("maxdim").get<int>();
  if (maxdim < 0) throw InputError("--maxdim must be ≥ 0");
  const RingKind ring = parse_ring(c.ring.value_or("z"));
  const auto K = TruncatedComplex::enumerate(w, maxdim + 1, r);
  const bool check = c.self_check != SelfCheck::Off;
  const auto rep = homology_of_truncation(*K, ring, 0, maxdim, check);
  if (rep.self_checked && !rep.self_check_passed) throw InvariantError("Smith normal form self-check failed");

  const bool reduced = c.params.value("reduced", false);
  auto betti = rep.betti;
  if (reduced && w->size() > 0 && !betti.empty()) betti[0] -= 1;

  json exported = json::array();
  if (c.params.contains("triplets") && !c.params.at("triplets").is_null()) {
    const auto prefix = c.params.at("triplets").get<std::string>();
    for (int d = 1; d <= maxdim + 1; ++d) {
      const std::string path = prefix + "_d" + std::to_string(d) + ".txt";
      std::ofstream os(path);
      if (!os) throw InputError("cannot write '" + path + "'");
      if (ring == RingKind::GF2) export_triplets(os, boundary_matrix<Gf2>(*K, d));
      else export_triplets(os, boundary_matrix<Integer>(*K, d));
      exported.push_back(path);
    }
  }
  return {{{"ring", std::string(ring_name(ring))},
           {"scale", r},
           {"points", w->size()},
           {"maxdim", maxdim},
           {"chain_ranks", rep.chain_ranks},
           {"betti", betti},
           {"reduced", reduced},
           {"torsion", rep.torsion},
           {"snf_self_check", rep.self_checked ? json(rep.self_check_passed) : json(nullptr)},
           {"triplet_files", exported}},
          std::nullopt};
}

CommandOutput quotient(const RunConfig& c) {
  require_format(c, {"json", "edgelist"});
  const auto family = load_family(c);
  const auto w = pick_window(family, optional_param(c, "window"));
  maybe_validate(c, *w);
  const Subset A = resolver(family, SubsetSpec::parse(require(c.subset, "--subset")))(*w);
  const auto q = collapse(*w, A);
  const auto& Q = q.space;
  if (c.format == "edgelist") {
    std::ostringstream os;
    os << "# quotient edge list: u v d_A(u,v)\n";
    for (Index i = 0; i < Q.size(); ++i)
      for (Index j = i + 1; j < Q.size(); ++j)
        os << Q.id(i) << ' ' << Q.id(j) << ' ' << format_number(Q.distance(i, j)) << '\n';
    return {json(nullptr), os.str()};
  }
  json projection = json::object();
  for (Index i = 0; i < w->size(); ++i) projection[w->id(i)] = Q.id(q.projection[i]);
  json distances = json::array();
  for (Index i = 0; i < Q.size(); ++i) {
    json row = json::array();
    for (Index j = 0; j < Q.size(); ++j) row.push_back(Q.distance(i, j));
    distances.push_back(std::move(row));
  }
  json result = {{"points", w->size()},
                 {"subset_points", A.count()},
                 {"empty_subset", q.empty_subset},
                 {"collapsed", q.collapsed ? json(Q.id(*q.collapsed)) : json(nullptr)},
                 {"ids", Q.ids()},
                 {"projection", projection},
                 {"distances", distances},
                 {"lemma", nullptr}};
  if (auto r = optional_param(c, "lemma_radius")) {
    const int arity = c.params.at("lemma_arity").get<int>();
    const auto rep = verify_da_lemma(*w, A, *r, arity);
    result["lemma"] = {{"r", rep.r},
                       {"arity", rep.arity},
                       {"near_A", to_json(rep.near_A, *w)},
                       {"diagonal", to_json(rep.diagonal, *w)},
                       {"doubled", to_json(rep.doubled, *w)},
                       {"passed", rep.passed()}};
  }
  return {result, std::nullopt};
}

CommandOutput products_selftest(const RunConfig& c) {
  require_format(c, {"json"});
  ProductsSelftestOptions o;
  o.seed = c.seed;
  o.maxdim = c.params.at("maxdim").get<int>();
  o.instances = c.params.at("instances").get<std::size_t>();
  if (o.maxdim < 0 || o.maxdim > 3) throw InputError("--maxdim must be in 0..3");
  const auto rep = run_products_selftest(o);
  json j = to_json(rep);
  j["passed"] = rep.all_passed();
  return {j, std::nullopt};
}

struct BuiltPair {
  std::optional<OrientationPair> pair;  // set when verified
  json record;
};

// The ℤ¹ pair directly, the ℤ² pair as a product of two verified ℤ¹ pairs.
BuiltPair build_pair(const WindowFamily& family, double W, double r, unsigned threads) {
  if (family.kind() != SpaceKind::Grid || family.dimension() > 2)
    throw InputError("orientation pairs are built for zn:1 and zn:2");
  BuiltPair out;
  json factors = json::array();
  OrientationPair pair;
  if (family.dimension() == 1) {
    pair = build_z1_pair(family, W);
  } else {
    const auto line = WindowFamily::grid(1);
    const auto f0 = build_z1_pair(line, W);
    const auto factor = with_verification(f0, verify_pair(f0, r, threads));
    factors.push_back(to_json(*factor.verification));
    if (!factor.verified()) {
      out.record = {{"n", 2}, {"W", W}, {"r", r}, {"factors", factors}, {"verification", nullptr},
                    {"verified", false}, {"provenance", "product-built"}};
      return out;
    }
    pair = build_product_pair(factor, factor, family, W);
  }
  const auto v = verify_pair(pair, r, threads);
  pair = with_verification(pair, v);
  out.record = {{"n", pair.n},          {"W", W},           {"r", r}, {"factors", factors},
                {"verification", to_json(v)}, {"verified", v.passed()}, {"provenance", pair.provenance}};
  if (pair.verified()) out.pair = std::move(pair);
  return out;
}

CommandOutput orientation_check(const RunConfig& c, unsigned threads) {
  require_format(c, {"json"});
  const auto family = load_family(c);
  const double W = param(c, "window"), r = param(c, "scale");
  const auto built = build_pair(family, W, r, threads);
  json composition = nullptr;
  bool passed = built.pair.has_value();
  if (built.pair && c.self_check != SelfCheck::Off) {
    const auto comp = composition_normalization(*built.pair, r, threads);
    composition = to_json(comp);
    passed = passed && comp.passed();
  }
  json tables = json::array();
  for (const auto& t : sign_identity_tables(8)) tables.push_back(to_json(t));
  return {{{"pair", built.record}, {"composition", composition}, {"sign_tables", tables}, {"passed", passed}},
          std::nullopt};
}

CommandOutput duality(const RunConfig& c, unsigned threads) {
  require_format(c, {"json"});
  const auto family = load_family(c);
  if (family.kind() != SpaceKind::Grid || family.dimension() != 2)
    throw InputError("duality is checked on zn:2");
  const auto A = resolver(family, SubsetSpec::parse(require(c.subset, "--subset")));
  const auto schedule = schedule_of(c);
  const double W = param(c, "window"), r = param(c, "scale");
  const auto built = build_pair(family, W, r, threads);
  json result = {{"pair", built.record}, {"composition", nullptr}, {"report", nullptr}};
  if (!built.pair) {
    const auto& v = built.record.at("verification");
    result["status"] = "BLOCKED";
    result["witness"] = v.is_null() ? json("factor pair failed verification") : v;
    result["passed"] = false;
    return {result, std::nullopt};
  }
  bool passed = true;
  if (c.self_check != SelfCheck::Off) {
    const auto comp = composition_normalization(*built.pair, r, threads);
    result["composition"] = to_json(comp);
    passed = comp.passed();
  }
  const auto rep = separation_duality_check(family, A, *built.pair, schedule, threads);
  result["report"] = to_json(rep);
  result["status"] = "checked";
  result["passed"] = passed && rep.passed();
  return {result, std::nullopt};
}

// Resolves a subset once per window; windows are cached by the family, so the
// pointer identifies the window.
class CachedSubset {
 public:
  explicit CachedSubset(SubsetResolver r) : resolve_(std::move(r)) {}
  const Subset& operator()(const FiniteMetricSpace& w) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(&w);
    if (it == cache_.end()) it = cache_.emplace(&w, resolve_(w)).first;
    return it->second;
  }

 private:
  SubsetResolver resolve_;
  std::mutex mutex_;
  std::map<const FiniteMetricSpace*, Subset> cache_;
};

struct ParsedCochain {
  int degree = 0;
  SupportPredicate nonzero;
};

// one | indicator:<subset> | coboundary:<subset>
ParsedCochain parse_cochain(const WindowFamily& family, const std::string& text) {
  if (text == "one") return {0, [](const FiniteMetricSpace&, std::span<const Index>) { return true; }};
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  if (colon == std::string::npos || (head != "indicator" && head != "coboundary"))
    throw InputError("cochain must be one, indicator:<subset> or coboundary:<subset>, got '" + text + "'");
  auto S = std::make_shared<CachedSubset>(resolver(family, SubsetSpec::parse(text.substr(colon + 1))));
  if (head == "indicator")
    return {0, [S](const FiniteMetricSpace& w, std::span<const Index> s) { return (*S)(w).contains(s[0]); }};
  return {1, [S](const FiniteMetricSpace& w, std::span<const Index> s) {
            const Subset& set = (*S)(w);
            return set.contains(s[0]) != set.contains(s[1]);
          }};
}

CommandOutput coarse_test(const RunConfig& c, unsigned threads) {
  require_format(c, {"json"});
  const auto family = load_family(c);
  const auto A = resolver(family, SubsetSpec::parse(require(c.subset, "--subset")));
  const auto schedule = schedule_of(c);
  if (c.self_check == SelfCheck::Exhaustive)
    for (double W : schedule.windows) maybe_validate(c, *family.window(W));
  json result = {{"cochain", nullptr}, {"coarse", nullptr}, {"complement", nullptr}, {"component", nullptr}};
  if (c.params.contains("cochain") && !c.params.at("cochain").is_null()) {
    const auto text = c.params.at("cochain").get<std::string>();
    const auto phi = parse_cochain(family, text);
    result["cochain"] = {{"spec", text}, {"degree", phi.degree}};
    result["coarse"] = to_json(is_coarse_cochain(family, phi.nonzero, phi.degree, schedule, threads));
    result["complement"] =
        to_json(is_complement_cochain(family, phi.nonzero, phi.degree, A, schedule, threads));
  }
  if (c.params.contains("component") && !c.params.at("component").is_null()) {
    const auto C = resolver(family, SubsetSpec::parse(c.params.at("component").get<std::string>()));
    result["component"] = to_json(coarse_component_test(family, A, C, schedule));
  }
  if (result["cochain"].is_null() && result["component"].is_null())
    throw InputError("coarse-test needs --cochain or --component");
  return {result, std::nullopt};
}

}  // namespace

CommandOutput run_command(const RunConfig& config, unsigned threads) {
  const auto& cmd = config.command;
  if (cmd == "components") return components(config);
  if (cmd == "separation-rank") return separation_rank(config, threads);
  if (cmd == "homology") return homology(config);
  if (cmd == "quotient") return quotient(config);
  if (cmd == "products-selftest") return products_selftest(config);
  if (cmd == "orientation-check") return orientation_check(config, threads);
  if (cmd == "duality") return duality(config, threads);
  if (cmd == "coarse-test") return coarse_test(config, threads);
  throw InputError("unknown command '" + cmd + "'");
}

}  // namespace coarsetop::cli
