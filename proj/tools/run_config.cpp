#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "g2lab/acceptance.hpp"

namespace g2lab::cli {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// drop a trailing comment that is not inside quotes
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

double to_double(const std::string& v, const std::string& key) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty()) throw ConfigError("'" + key + "': expected a number, got '" + v + "'");
  return x;
}

int to_int(const std::string& v, const std::string& key) {
  const double x = to_double(v, key);
  if (x != std::floor(x) || std::abs(x) > 1e9) throw ConfigError("'" + key + "': expected an integer, got '" + v + "'");
  return static_cast<int>(x);
}

bool to_bool(const std::string& v, const std::string& key) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError("'" + key + "': expected true or false, got '" + v + "'");
}

std::string to_string_value(const std::string& v, const std::string& key) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  if (v.find_first_of(" \t\"[]") != std::string::npos) throw ConfigError("'" + key + "': malformed string");
  return v;
}

std::vector<std::string> to_list(const std::string& v, const std::string& key) {
  if (v.size() < 2 || v.front() != '[' || v.back() != ']') throw ConfigError("'" + key + "': expected [a, b, ...]");
  std::vector<std::string> out;
  std::stringstream ss(v.substr(1, v.size() - 2));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) {
      if (ss.eof() && !out.empty()) break;  // trailing comma
      continue;
    }
    out.push_back(item);
  }
  return out;
}

}  // namespace

RunConfig default_config() {
  RunConfig c;
  c.params = desk_params();
  c.params.lambda = lambda_for_flow_coupling(0.05, c.params);
  return c;
}

RunConfig parse_config(const std::string& text, RunConfig c) {
  using Setter = std::function<void(const std::string&, const std::string&)>;
  auto num = [](double& t) { return Setter([&t](const std::string& v, const std::string& k) { t = to_double(v, k); }); };
  auto integer = [](int& t) { return Setter([&t](const std::string& v, const std::string& k) { t = to_int(v, k); }); };
  auto flag = [](bool& t) { return Setter([&t](const std::string& v, const std::string& k) { t = to_bool(v, k); }); };
  auto str = [](std::string& t) { return Setter([&t](const std::string& v, const std::string& k) { t = to_string_value(v, k); }); };
  const std::map<std::string, Setter> keys = {
      {"m", num(c.params.m)},
      {"M", num(c.params.M)},
      {"lambda", num(c.params.lambda)},
      {"kappa", num(c.params.kappa)},
      {"N", integer(c.params.N)},
      {"K", integer(c.params.K)},
      {"ir_floor_scale", integer(c.params.irFloorScale)},
      {"sharpness", num(c.params.sharpness)},
      {"rel_tolerance", num(c.quad.relTolerance)},
      {"abs_tolerance", num(c.quad.absTolerance)},
      {"max_subdivisions", integer(c.quad.maxSubdivisions)},
      {"cutoff_ladder", [&c](const std::string& v, const std::string& k) {
         c.cutoffLadder.clear();
         for (const auto& s : to_list(v, k)) c.cutoffLadder.push_back(to_int(s, k));
       }},
      {"mass_ratios", [&c](const std::string& v, const std::string& k) {
         c.massRatios.clear();
         for (const auto& s : to_list(v, k)) c.massRatios.push_back(to_double(s, k));
       }},
      {"couplings", [&c](const std::string& v, const std::string& k) {
         c.couplings.clear();
         for (const auto& s : to_list(v, k)) c.couplings.push_back(to_double(s, k));
       }},
      {"scan_z", num(c.scanZ)},
      {"route", str(c.route)},
      {"solve_flow", flag(c.solveFlow)},
      {"flow_tolerance", num(c.flowTolerance)},
      {"flow_max_iter", integer(c.flowMaxIter)},
      {"envelope_c1", num(c.envelopeC1)},
      {"envelope_c2", num(c.envelopeC2)},
      {"preset", str(c.preset)},
      {"tree_root_scale", integer(c.treeRootScale)},
      {"tree_max_scale", integer(c.treeMaxScale)},
      {"tree_lambda", integer(c.treeLambda)},
      {"tree_j", integer(c.treeJ)},
      {"tree_eta", integer(c.treeEta)},
      {"tree_guard", integer(c.treeGuard)},
      {"theta", num(c.theta)},
      {"out", str(c.out)},
      {"jobs", integer(c.jobs)},
      {"serial", flag(c.serial)},
  };
  std::istringstream is(text);
  std::string line;
  int n = 0;
  while (std::getline(is, line)) {
    ++n;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(n) + ": expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    const auto it = keys.find(key);
    if (it == keys.end()) throw ConfigError("line " + std::to_string(n) + ": unknown key '" + key + "'");
    try {
      it->second(value, key);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(n) + ": " + e.what());
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

void validate_config(const RunConfig& c) {
  const PhysicalParams& p = c.params;
  if (!(p.m > 0.0) || !(p.M > 0.0)) throw ConfigError("masses must be positive");
  const int minN = static_cast<int>(std::ceil(std::log2(p.M))) + 2;
  if (p.N < minN) throw ConfigError("N must be at least ceil(log2 M) + 2 = " + std::to_string(minN));
  for (int N : c.cutoffLadder)
    if (N < minN) throw ConfigError("cutoff_ladder entries must be at least " + std::to_string(minN));
  if (p.K < 0 || p.K > 8) throw ConfigError("K must lie in 0..8");
  if (!(c.quad.relTolerance > 0.0) || !(c.quad.absTolerance > 0.0)) throw ConfigError("tolerances must be positive");
  if (c.quad.maxSubdivisions < 1) throw ConfigError("max_subdivisions must be positive");
  if (c.treeGuard < 1) throw ConfigError("tree_guard must be positive");
  if (c.jobs < 1) throw ConfigError("jobs must be at least 1");
  if (c.route != "cutoff" && c.route != "closed-form") throw ConfigError("route must be cutoff or closed-form");
  if (c.theta < 0.0 || c.theta > 2.0) throw ConfigError("theta must lie in [0, 2]");
  for (double r : c.massRatios)
    if (!(r > 0.0)) throw ConfigError("mass_ratios must be positive");
  for (double l : c.couplings)
    if (!(l >= 0.0)) throw ConfigError("couplings must be nonnegative");
}

}  // namespace g2lab::cli
