#include "coarsetop/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "coarsetop/errors.hpp"

namespace coarsetop {

namespace {

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end != item.c_str() + item.size() || !std::isfinite(v))
      throw InputError("schedule: bad number '" + item + "' in " + key);
    out.push_back(v);
  }
  return out;
}

double parse_scalar(const std::string& key, const std::string& text) {
  auto v = parse_list(key, text);
  if (v.size() != 1) throw InputError("schedule: " + key + " takes one value");
  return v[0];
}

}  // namespace

ScaleSchedule ScaleSchedule::parse(std::string_view text) {
  ScaleSchedule s;
  if (text.empty() || text == "default") return s;
  const std::string str(text);
  if (str.find('=') == std::string::npos) {
    std::ifstream in(str);
    if (!in) throw InputError("cannot open schedule file '" + str + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw InputError("schedule file '" + str + "': " + e.what());
    }
    s = from_json(j);
    s.validate();
    return s;
  }
  std::stringstream ss(str);
  std::string part;
  while (std::getline(ss, part, ';')) {
    if (part.empty()) continue;
    auto eq = part.find('=');
    if (eq == std::string::npos) throw InputError("schedule: expected key=value in '" + part + "'");
    const std::string key = part.substr(0, eq), value = part.substr(eq + 1);
    if (key == "windows") s.windows = parse_list(key, value);
    else if (key == "radii") s.radii = parse_list(key, value);
    else if (key == "alpha") s.alpha = parse_scalar(key, value);
    else if (key == "connect") s.connect = parse_scalar(key, value);
    else throw InputError("schedule: unknown key '" + key + "'");
  }
  s.validate();
  return s;
}

void ScaleSchedule::validate() const {
  auto increasing = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
      if (!(v[i] > v[i - 1])) return false;
    return true;
  };
  if (radii.empty() || windows.empty()) throw InputError("schedule: radii and windows must be non-empty");
  if (!increasing(radii)) throw InputError("schedule: radii must be strictly increasing");
  if (!increasing(windows)) throw InputError("schedule: windows must be strictly increasing");
  if (radii.front() < 0 || windows.front() < 0) throw InputError("schedule: values must be ≥ 0");
  if (radii.back() > windows.back()) throw InputError("schedule: largest radius exceeds largest window");
  if (!(alpha > 0 && alpha <= 1)) throw InputError("schedule: alpha must lie in (0, 1]");
  if (!(connect > 0)) throw InputError("schedule: connect must be > 0");
}

std::vector<std::size_t> ScaleSchedule::top_half() const {
  std::vector<std::size_t> out;
  for (std::size_t i = windows.size() / 2; i < windows.size(); ++i) out.push_back(i);
  return out;
}

nlohmann::json ScaleSchedule::to_json() const {
  return {{"radii", radii}, {"windows", windows}, {"alpha", alpha}, {"connect", connect}};
}

ScaleSchedule ScaleSchedule::from_json(const nlohmann::json& j) {
  ScaleSchedule s;
  try {
    if (j.contains("radii")) s.radii = j.at("radii").get<std::vector<double>>();
    if (j.contains("windows")) s.windows = j.at("windows").get<std::vector<double>>();
    if (j.contains("alpha")) s.alpha = j.at("alpha").get<double>();
    if (j.contains("connect")) s.connect = j.at("connect").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("schedule: ") + e.what());
  }
  return s;
}

}  // namespace coarsetop
