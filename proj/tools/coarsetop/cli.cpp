#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "coarsetop/errors.hpp"
#include "commands.hpp"
#include "config.hpp"

#ifndef COARSETOP_VERSION
#define COARSETOP_VERSION "0.0.0"
#endif

namespace coarsetop::cli {
namespace {

using json = nlohmann::json;

struct Raw {
  std::string space, subset, schedule = "default", ring = "z", out = "-", format = "json", self_check = "assert";
  std::uint64_t seed = 7;
  unsigned threads = 1;
  bool timing = false;
  double radius = 2, connect = 1, alpha = 0.5, hom_scale = 1;
  double comp_window = 16, orient_window = 64, orient_scale = 8, dual_window = 32, dual_scale = 2;
  std::optional<double> window_opt, lemma_radius;
  int hom_maxdim = 1, self_maxdim = 3, lemma_arity = 2;
  std::size_t instances = 10'000;
  bool reduced = false;
  std::string triplets, cochain, component;
};

void common(CLI::App* app, Raw& raw) {
  app->add_option("--out", raw.out, "Report path, '-' for stdout");
  app->add_option("--seed", raw.seed, "64-bit seed for every random choice");
  app->add_option("--threads", raw.threads, "Worker threads; never changes the report")->check(CLI::PositiveNumber);
  app->add_flag("--timing", raw.timing, "Record wall time in the report");
  app->add_option("--format", raw.format, "json, or csv / edgelist where offered");
  app->add_option("--self-check", raw.self_check, "off | assert | exhaustive");
}

std::string one_line(std::string s) {
  for (char& ch : s)
    if (ch == '\n' || ch == '\r') ch = ' ';
  return s;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coarse topology on finite windows", "coarsetop"};
  app.require_subcommand(1);
  Raw raw;

  auto* components = app.add_subcommand("components", "Components of a window minus N_R(A)");
  components->add_option("--space", raw.space)->required();
  components->add_option("--subset", raw.subset)->required();
  components->add_option("--radius", raw.radius, "R")->capture_default_str();
  components->add_option("--connect", raw.connect, "Step length s")->capture_default_str();
  components->add_option("--window", raw.comp_window, "W")->capture_default_str();
  components->add_option("--alpha", raw.alpha, "Depth factor")->capture_default_str();

  auto* sep = app.add_subcommand("separation-rank", "Deep separation sweep over a schedule");
  sep->add_option("--space", raw.space)->required();
  sep->add_option("--subset", raw.subset)->required();
  sep->add_option("--schedule", raw.schedule, "default, inline or JSON file")->capture_default_str();

  auto* hom = app.add_subcommand("homology", "Homology of a truncated tuple complex");
  hom->add_option("--space", raw.space)->required();
  hom->add_option("--scale", raw.hom_scale, "r")->required();
  hom->add_option("--maxdim", raw.hom_maxdim)->capture_default_str();
  hom->add_option("--ring", raw.ring, "z | gf2")->capture_default_str();
  hom->add_option("--window", raw.window_opt, "W; default 8 on grids, whole space otherwise");
  hom->add_flag("--reduced", raw.reduced);
  hom->add_option("--triplets", raw.triplets, "Write boundary matrices to <prefix>_d<k>.txt");

  auto* quo = app.add_subcommand("quotient", "Quotient pseudometric and collapsed space");
  quo->add_option("--space", raw.space)->required();
  quo->add_option("--subset", raw.subset)->required();
  quo->add_option("--window", raw.window_opt, "W; default 8 on grids, whole space otherwise");
  quo->add_option("--lemma-radius", raw.lemma_radius, "Also compare neighbourhoods under d and d_A");
  quo->add_option("--lemma-arity", raw.lemma_arity)->capture_default_str();

  auto* selftest = app.add_subcommand("products-selftest", "Chain-level product identity battery");
  selftest->add_option("--maxdim", raw.self_maxdim)->capture_default_str();
  selftest->add_option("--instances", raw.instances)->capture_default_str();

  auto* orient = app.add_subcommand("orientation-check", "Build and verify an orientation pair");
  orient->add_option("--space", raw.space, "zn:1 | zn:2")->required();
  orient->add_option("--window", raw.orient_window)->capture_default_str();
  orient->add_option("--scale", raw.orient_scale)->capture_default_str();

  auto* dual = app.add_subcommand("duality", "Separation duality on the plane");
  dual->add_option("--space", raw.space)->required();
  dual->add_option("--subset", raw.subset)->required();
  dual->add_option("--schedule", raw.schedule)->capture_default_str();
  dual->add_option("--window", raw.dual_window)->capture_default_str();
  dual->add_option("--scale", raw.dual_scale)->capture_default_str();

  auto* ctest = app.add_subcommand("coarse-test", "Membership predicates");
  ctest->add_option("--space", raw.space)->required();
  ctest->add_option("--subset", raw.subset)->required();
  ctest->add_option("--schedule", raw.schedule)->capture_default_str();
  ctest->add_option("--cochain", raw.cochain, "one | indicator:<subset> | coboundary:<subset>");
  ctest->add_option("--component", raw.component, "Run the complementary component test on this subset");

  for (auto* sub : app.get_subcommands({})) common(sub, raw);

  if (argc > 1 && argv[1][0] != '-') {
    const std::string name = argv[1];
    const auto subs = app.get_subcommands({});
    if (std::none_of(subs.begin(), subs.end(), [&](const CLI::App* s) { return s->get_name() == name; })) {
      err << "coarsetop: error: unknown command '" << name << "'\n" << app.help();
      return 2;
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "coarsetop: error: " << one_line(e.what()) << "\n" << app.help();
    return 2;
  }

  try {
    const CLI::App* sub = app.get_subcommands().front();
    RunConfig config;
    config.command = sub->get_name();
    config.seed = raw.seed;
    config.out = raw.out;
    config.format = raw.format;
    config.self_check = parse_self_check(raw.self_check);
    auto& p = config.params;
    auto given = [&](const char* flag) { return sub->count(flag) > 0; };

    if (config.command != "products-selftest") config.space = raw.space;
    if (sub->get_option_no_throw("--subset")) config.subset = raw.subset;
    if (sub->get_option_no_throw("--schedule")) {
      auto s = ScaleSchedule::parse(raw.schedule);
      s.validate();
      config.schedule = s;
    }
    if (config.command == "components") {
      p = {{"window", raw.comp_window}, {"radius", raw.radius}, {"connect", raw.connect}, {"alpha", raw.alpha}};
    } else if (config.command == "homology") {
      config.ring = raw.ring;
      p = {{"scale", raw.hom_scale},
           {"maxdim", raw.hom_maxdim},
           {"window", raw.window_opt ? json(*raw.window_opt) : json(nullptr)},
           {"reduced", raw.reduced},
           {"triplets", given("--triplets") ? json(raw.triplets) : json(nullptr)}};
    } else if (config.command == "quotient") {
      p = {{"window", raw.window_opt ? json(*raw.window_opt) : json(nullptr)},
           {"lemma_radius", raw.lemma_radius ? json(*raw.lemma_radius) : json(nullptr)},
           {"lemma_arity", raw.lemma_arity}};
    } else if (config.command == "products-selftest") {
      p = {{"maxdim", raw.self_maxdim}, {"instances", raw.instances}};
    } else if (config.command == "orientation-check") {
      p = {{"window", raw.orient_window}, {"scale", raw.orient_scale}};
    } else if (config.command == "duality") {
      p = {{"window", raw.dual_window}, {"scale", raw.dual_scale}};
    } else if (config.command == "coarse-test") {
      p = {{"cochain", given("--cochain") ? json(raw.cochain) : json(nullptr)},
           {"component", given("--component") ? json(raw.component) : json(nullptr)}};
    }

    // Open the destination before the work starts so a bad path fails fast.
    std::ofstream file;
    if (config.out != "-") {
      file.open(config.out, std::ios::binary | std::ios::trunc);
      if (!file) throw InputError("cannot write '" + config.out + "'");
    }
    std::ostream& dest = config.out == "-" ? out : file;

    const auto t0 = std::chrono::steady_clock::now();
    const auto output = run_command(config, raw.threads);
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);

    if (output.text) {
      dest << *output.text;
    } else {
      json report = {{"format_version", kFormatVersion},
                     {"tool", {{"name", "coarsetop"}, {"version", COARSETOP_VERSION}}},
                     {"config", config.to_json()},
                     {"self_check", self_check_name(config.self_check)},
                     {"wall_time_ms", raw.timing ? json(ms.count()) : json(nullptr)},
                     {"result", output.result}};
      dest << report.dump(2) << "\n";
    }
    dest.flush();
    if (!dest) throw InputError("write to '" + config.out + "' failed");
    return 0;
  } catch (const ResourceError& e) {
    err << "coarsetop: resource cap: " << one_line(e.what()) << "\n";
    return 3;
  } catch (const InputError& e) {
    err << "coarsetop: error: " << one_line(e.what()) << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "coarsetop: internal error: " << one_line(e.what()) << "\n";
    return 1;
  }
}

}  // namespace coarsetop::cli
