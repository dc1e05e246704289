#include "config.hpp"

#include "coarsetop/errors.hpp"

namespace coarsetop::cli {

SelfCheck parse_self_check(const std::string& text) {
  if (text == "off") return SelfCheck::Off;
  if (text == "assert") return SelfCheck::Assert;
  if (text == "exhaustive") return SelfCheck::Exhaustive;
  throw InputError("self-check level must be off, assert or exhaustive, got '" + text + "'");
}

std::string self_check_name(SelfCheck level) {
  switch (level) {
    case SelfCheck::Off: return "off";
    case SelfCheck::Assert: return "assert";
    case SelfCheck::Exhaustive: return "exhaustive";
  }
  return "assert";
}

namespace {

template <class T>
nlohmann::json optional_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<std::string> optional_string(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<std::string>();
}

}  // namespace

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["space"] = optional_json(space);
  j["subset"] = optional_json(subset);
  j["schedule"] = schedule ? schedule->to_json() : nlohmann::json(nullptr);
  j["ring"] = optional_json(ring);
  j["seed"] = seed;
  j["out"] = out;
  j["format"] = format;
  j["self_check"] = self_check_name(self_check);
  j["params"] = params;
  return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig c;
  try {
    c.command = j.at("command").get<std::string>();
    c.space = optional_string(j, "space");
    c.subset = optional_string(j, "subset");
    if (j.contains("schedule") && !j.at("schedule").is_null())
      c.schedule = ScaleSchedule::from_json(j.at("schedule"));
    c.ring = optional_string(j, "ring");
    c.seed = j.at("seed").get<std::uint64_t>();
    c.out = j.at("out").get<std::string>();
    c.format = j.at("format").get<std::string>();
    c.self_check = parse_self_check(j.at("self_check").get<std::string>());
    c.params = j.value("params", nlohmann::json::object());
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("run config: ") + e.what());
  }
  return c;
}

std::string RunConfig::serialize() const { return to_json().dump(2); }

}  // namespace coarsetop::cli
