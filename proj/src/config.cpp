#include "schwinger/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

#include "schwinger/errors.hpp"
#include "schwinger/units.hpp"

namespace schwinger {

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw SimError(ErrorCode::kConfig, msg); }

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    config_error("bad number for " + key + ": '" + text + "'");
  }
  return x;
}

long parse_long(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  long x = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    config_error("bad integer for " + key + ": '" + text + "'");
  }
  return x;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  if (out.empty()) config_error("empty list for " + key);
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

template <typename F>
Setter number(F assign) {
  return [assign](RunConfig& c, const std::string& k, const std::string& v) {
    assign(c, parse_double(k, v));
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"L_pH", number([](RunConfig& c, double x) { c.device.L = x; })},
      {"C_nF", number([](RunConfig& c, double x) { c.device.C = x; })},
      {"EC_ueV", number([](RunConfig& c, double x) { c.device.E_C = units::ueV_to_rad_per_ns(x); })},
      {"EJ_ueV", number([](RunConfig& c, double x) { c.device.E_J = units::ueV_to_rad_per_ns(x); })},
      {"g_MHz", number([](RunConfig& c, double x) { c.device.g = x * units::kMHz; })},
      {"g_GHz", number([](RunConfig& c, double x) { c.device.g = x * units::kGHz; })},
      {"gamma_plus_prime_kHz",
       number([](RunConfig& c, double x) { c.device.rates.gammaPlusPrime = x * units::kKHz; })},
      {"gamma_plus_kHz",
       number([](RunConfig& c, double x) { c.device.rates.gammaPlus = x * units::kKHz; })},
      {"gamma_minus_prime_kHz",
       number([](RunConfig& c, double x) { c.device.rates.gammaMinusPrime = x * units::kKHz; })},
      {"gamma_minus_kHz",
       number([](RunConfig& c, double x) { c.device.rates.gammaMinus = x * units::kKHz; })},
      {"drive_scale", number([](RunConfig& c, double x) { c.device.driveScale = x; })},
      {"experiment",
       [](RunConfig& c, const std::string&, const std::string& v) { c.experiment = trim(v); }},
      {"order",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.plan.order = static_cast<int>(parse_long(k, v));
       }},
      {"smax", number([](RunConfig& c, double x) { c.plan.sMax = x; })},
      {"Vo_nV", number([](RunConfig& c, double x) { c.plan.Vo = x; })},
      {"Vp_nV", number([](RunConfig& c, double x) { c.plan.Vp = x; })},
      {"Vc_nV", number([](RunConfig& c, double x) { c.plan.Vc = x; })},
      {"detuning_kHz", number([](RunConfig& c, double x) { c.plan.detuning = x * units::kKHz; })},
      {"t2_us", number([](RunConfig& c, double x) { c.plan.tReadout = x * units::kMicrosecond; })},
      {"tend_us", number([](RunConfig& c, double x) { c.plan.tEnd = x * units::kMicrosecond; })},
      {"dt_ns", number([](RunConfig& c, double x) { c.plan.dt = x; })},
      {"stride",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.plan.stride = parse_long(k, v);
       }},
      {"grid_points",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.plan.gridPoints = static_cast<int>(parse_long(k, v));
       }},
      {"grid_halfwidth", number([](RunConfig& c, double x) { c.plan.gridHalfWidth = x; })},
      {"omega_grid_GHz",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.plan.omegaGrid = parse_list(k, v);
       }},
      {"g_list_MHz",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.plan.gList = parse_list(k, v);
         for (double& g : c.plan.gList) g *= units::kMHz;
       }},
      {"states",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         StateSet set;
         for (double x : parse_list(k, v)) {
           if (x < 1 || x != static_cast<int>(x)) config_error("states are 1-based integers");
           set.push_back(static_cast<int>(x) - 1);
         }
         c.plan.stateSet = set;
       }},
  };
  return table;
}

}  // namespace

std::vector<std::string> known_config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : setters()) keys.push_back(k);
  return keys;
}

void apply_setting(RunConfig& config, const std::string& key, const std::string& value) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) config_error("unknown key '" + key + "'");
  it->second(config, key, value);
  config.keys.push_back(key);
}

void read_config(std::istream& in, RunConfig& config, const std::string& origin) {
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      config_error(origin + ":" + std::to_string(lineNo) + ": expected key = value");
    }
    try {
      apply_setting(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const SimError& e) {
      config_error(origin + ":" + std::to_string(lineNo) + ": " + e.what());
    }
  }
}

void load_config_file(const std::filesystem::path& path, RunConfig& config) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file " + path.string());
  read_config(in, config, path.string());
}

void apply_override(RunConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) config_error("override must be key=value: '" + assignment + "'");
  apply_setting(config, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

}  // namespace schwinger
