#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "coarsetop/schedule.hpp"

namespace coarsetop::cli {

inline constexpr const char* kFormatVersion = "coarsetop-report/1";

enum class SelfCheck { Off, Assert, Exhaustive };
SelfCheck parse_self_check(const std::string& text);
std::string self_check_name(SelfCheck level);

// Everything that determines a report. Thread count and timing are left out on
// purpose: they must not change the result.
struct RunConfig {
  std::string command;
  std::optional<std::string> space;
  std::optional<std::string> subset;
  std::optional<ScaleSchedule> schedule;
  std::optional<std::string> ring;
  std::uint64_t seed = 7;
  std::string out = "-";
  std::string format = "json";
  SelfCheck self_check = SelfCheck::Assert;
  nlohmann::json params = nlohmann::json::object();  // command-specific, sorted by key

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
  // Pretty-printed, sorted keys; from_json(parse(serialize())) serializes to the same bytes.
  std::string serialize() const;
};

}  // namespace coarsetop::cli
