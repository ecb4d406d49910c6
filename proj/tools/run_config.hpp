#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "g2lab/propagators.hpp"
#include "g2lab/quadrature.hpp"

namespace g2lab::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  PhysicalParams params;
  QuadratureSpec quad;
  // scans
  std::vector<int> cutoffLadder{6, 7, 8, 9, 10};
  std::vector<double> massRatios{1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
  std::vector<double> couplings{0.01, 0.02, 0.04, 0.08};
  double scanZ = 0.0;  // 0 picks m/2
  std::string route = "cutoff";
  // flow
  bool solveFlow = true;
  double flowTolerance = 1e-13;
  int flowMaxIter = 50;
  // remainder envelope C1 (m/M)^2 (1 + ln(M/m)) + C2 (M/Lambda)^2
  double envelopeC1 = 10.0, envelopeC2 = 10.0;
  // trees
  std::string preset;
  int treeRootScale = 0, treeMaxScale = 3, treeLambda = 2, treeJ = 1, treeEta = 0;
  int treeGuard = 1000000;
  double theta = 2.0;
  // plumbing
  std::string out;
  int jobs = 1;
  bool serial = false;
};

RunConfig default_config();
// flat "key = value" lines, '#' comments, TOML-style strings, booleans and arrays
RunConfig parse_config(const std::string& text, RunConfig base = default_config());
RunConfig load_config(const std::string& path);
void validate_config(const RunConfig& c);

}  // namespace g2lab::cli
