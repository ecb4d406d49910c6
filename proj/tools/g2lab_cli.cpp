#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "g2lab/acceptance.hpp"
#include "g2lab/fit.hpp"
#include "g2lab/gfactor_pipeline.hpp"
#include "g2lab/power_counting.hpp"
#include "g2lab/rg_flow.hpp"
#include "g2lab/triangle_vertex.hpp"
#include "oracles.hpp"
#include "run_config.hpp"

using namespace g2lab;
using cli::RunConfig;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kNumeric = 1, kConfig = 2, kGuard = 3 };

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x + 0.0;  // no "-0"
  return os.str();
}

json params_json(const RunConfig& c) {
  const PhysicalParams& p = c.params;
  return json{{"m", p.m},
              {"M", p.M},
              {"lambda", p.lambda},
              {"kappa", p.kappa},
              {"N", p.N},
              {"K", p.K},
              {"irFloorScale", p.irFloorScale},
              {"sharpness", p.sharpness},
              {"relTolerance", c.quad.relTolerance},
              {"absTolerance", c.quad.absTolerance},
              {"maxSubdivisions", c.quad.maxSubdivisions}};
}

// CSV prefix shared by every scan row
const char* kParamColumns = "m,M,lambda,kappa,N,K,rel_tolerance";
std::string param_cells(const PhysicalParams& p, const QuadratureSpec& q) {
  return fmt(p.m) + "," + fmt(p.M) + "," + fmt(p.lambda) + "," + fmt(p.kappa) + "," +
         std::to_string(p.N) + "," + std::to_string(p.K) + "," + fmt(q.relTolerance);
}

// runs f(i) for i < n on `jobs` threads; results land in input order
template <class R, class F>
std::vector<R> run_pool(std::size_t n, int jobs, F f) {
  std::vector<R> out(n);
  std::vector<std::exception_ptr> errs(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        out[i] = f(i);
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  const int t = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
  if (t == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < t; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

AmplitudeRoute route_of(const RunConfig& c) {
  return c.route == "closed-form" ? AmplitudeRoute::ClosedForm : AmplitudeRoute::Cutoff;
}

double relative_envelope(const RunConfig& c) {
  const PhysicalParams& p = c.params;
  const double r = p.m / p.M, L = p.M / p.Lambda();
  return c.envelopeC1 * r * r * (1.0 + std::log(p.M / p.m)) + c.envelopeC2 * L * L;
}

void cmd_compute(const RunConfig& c, std::ostream& os) {
  json j;
  j["command"] = "compute";
  j["params"] = params_json(c);
  j["route"] = c.route;
  if (c.solveFlow) {
    auto [rc, rep] = solve_bare_constants(c.params, c.flowTolerance, c.flowMaxIter, c.quad);
    json zs = json::array();
    for (int h = c.params.hStar() - 1; h <= c.params.N; ++h) {
      const CouplingSet& s = rc.at(h);
      zs.push_back(json{{"h", h}, {"Zplus", s.Zplus}, {"Zminus", s.Zminus}, {"ZJplus", s.ZJplus},
                        {"ZJminus", s.ZJminus}, {"mPlus", s.mPlus}, {"mMinus", s.mMinus}});
    }
    j["flow"] = json{{"converged", rep.converged},   {"iterations", rep.iterations},
                     {"residual", rep.residual},     {"boundaryResidual", rep.boundaryResidual},
                     {"fittedC", rep.fittedC},       {"betaSlope", rep.betaSlope},
                     {"flowCoupling", c.params.flowCoupling()},
                     {"warnings", rep.warnings},     {"couplings", zs}};
  }
  const GFactorReport g = compute_gfactor(c.params, c.quad, route_of(c));
  json ders = json::array();
  for (const cplx& d : g.derivatives) ders.push_back(json::array({d.real(), d.imag()}));
  const double rel = relative_envelope(c);
  // absolute scale: the kappa-free JW magnitude
  PhysicalParams p0 = c.params;
  p0.kappa = 0.0;
  const double bound = rel * std::abs(jackiw_weinberg(p0));
  j["maclaurinValue"] = g.maclaurinValue;
  j["jwClosedForm"] = g.jwClosedForm;
  j["relativeRemainder"] = std::isfinite(g.relativeRemainder) ? json(g.relativeRemainder) : json(nullptr);
  j["termBreakdown"] = g.termBreakdown;
  j["derivatives"] = ders;
  j["remainderEnvelope"] = json{{"C1", c.envelopeC1},
                                {"C2", c.envelopeC2},
                                {"relative", rel},
                                {"absolute", bound},
                                {"within", std::abs(g.maclaurinValue - g.jwClosedForm) <= bound}};
  os << j.dump(2) << "\n";
}

void cmd_scan(const RunConfig& c, const std::string& axis, std::ostream& os) {
  const PhysicalParams& base = c.params;
  const int jobs = c.serial ? 1 : c.jobs;
  if (axis == "cutoff") {
    if (c.cutoffLadder.size() < 2) throw cli::ConfigError("cutoff scan needs at least two ladder points");
    const double z = c.scanZ != 0.0 ? c.scanZ : base.m / 2.0;
    const CutoffScan s = cutoff_removal_scan(base, c.cutoffLadder, c.quad, z);
    os << kParamColumns << ",z,scan_N,Lambda_over_M,re_a2,im_a2,deviation,deviation_closed_form,error_estimate\n";
    for (const ScanRow& r : s.rows) {
      PhysicalParams p = base;
      p.N = r.N;
      os << param_cells(p, c.quad) << "," << fmt(z) << "," << r.N << "," << fmt(r.Lambda / base.M) << ","
         << fmt(r.value.real()) << "," << fmt(r.value.imag()) << "," << fmt(r.deviation) << ","
         << fmt(r.deviationClosedForm) << "," << fmt(r.errorEstimate) << "\n";
    }
    os << "# closed_form " << fmt(s.closedForm.real()) << " " << fmt(s.closedForm.imag()) << "\n";
    os << "# slope " << fmt(s.slope) << "\n# slope_closed_form " << fmt(s.slopeClosedForm) << "\n";
    return;
  }
  std::vector<PhysicalParams> grid;
  if (axis == "massratio") {
    for (double r : c.massRatios) {
      PhysicalParams p = base;
      p.m = r * base.M;
      grid.push_back(p);
    }
  } else if (axis == "coupling") {
    for (double l : c.couplings) {
      PhysicalParams p = base;
      p.lambda = l;
      grid.push_back(p);
    }
  } else {
    throw cli::ConfigError("unknown axis '" + axis + "' (cutoff, massratio, coupling)");
  }
  if (grid.empty()) throw cli::ConfigError("empty scan grid");
  for (const auto& p : grid) validate(p);
  const auto reps = run_pool<GFactorReport>(grid.size(), jobs, [&](std::size_t i) {
    return compute_gfactor(grid[i], c.quad, route_of(c));
  });
  os << kParamColumns << ",m_over_M,maclaurin_value,jw_closed_form,relative_remainder\n";
  std::vector<double> xs, ys, js;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& p = grid[i];
    const auto& r = reps[i];
    os << param_cells(p, c.quad) << "," << fmt(p.m / p.M) << "," << fmt(r.maclaurinValue) << ","
       << fmt(r.jwClosedForm) << "," << fmt(r.relativeRemainder) << "\n";
    xs.push_back(axis == "massratio" ? p.m / p.M : p.lambda);
    ys.push_back(std::abs(r.maclaurinValue));
    js.push_back(std::abs(r.jwClosedForm));
  }
  auto positive = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0; });
  };
  if (grid.size() >= 2 && positive(xs) && positive(ys) && positive(js)) {
    os << "# slope " << fmt(loglog_slope(xs, ys)) << "\n";
    os << "# slope_jw " << fmt(loglog_slope(xs, js)) << "\n";
  }
}

void print_report(const GNTree& t, double theta, std::ostream& os) {
  const BoundReport r = bound_report(t, {}, theta);
  os << "# theta " << fmt(theta) << "\n";
  for (const VertexExponent& v : r.perVertex)
    os << "# vertex " << v.id << " h " << v.h << " hParent " << v.hParent << " D " << fmt(v.D) << " R "
       << v.R << " theta " << fmt(v.theta) << " coefficient " << fmt(v.coefficient()) << " exponent "
       << fmt(v.exponent()) << "\n";
  for (const EndpointFactor& e : r.endpointFactors)
    os << "# endpoint " << e.id << " " << node_type_name(e.type) << " hParent " << e.hParent << " exponent "
       << fmt(e.exponent) << "\n";
  os << "# path";
  for (int id : r.path) os << " " << id;
  os << "\n# shortMemoryExponent " << fmt(r.shortMemoryExponent) << "\n# totalExponent "
     << fmt(r.totalExponent()) << "\n# logFactorCount " << r.logFactorCount << "\n";
}

void cmd_trees(const RunConfig& c, std::ostream& os) {
  if (!c.preset.empty()) {
    const GNTree t = preset_tree(c.preset, c.params.N, c.params.hStar());
    os << "# preset " << c.preset << "\n" << serialize_tree(t);
    print_report(t, c.theta, os);
    return;
  }
  if (c.treeMaxScale <= c.treeRootScale) throw cli::ConfigError("tree window must have tree_max_scale > tree_root_scale");
  const auto trees = enumerate_trees(c.treeRootScale, c.treeMaxScale, c.treeLambda, c.treeJ, c.treeEta,
                                     static_cast<std::size_t>(c.treeGuard));
  os << "# window " << c.treeRootScale << " " << c.treeMaxScale << " lambda " << c.treeLambda << " J "
     << c.treeJ << " eta " << c.treeEta << "\n# count " << trees.size() << "\n";
  for (const GNTree& t : trees) {
    os << "\n" << serialize_tree(t);
    os << "# signature " << canonical_signature(t) << "\n";
    if (c.treeEta == 0) {
      const double margin = max_dimension_margin(t);
      if (margin > -1e299) os << "# margin " << fmt(margin) << "\n";  // no vertex below the first nonroot
    }
  }
}

int cmd_selftest(const RunConfig& c, bool flipEpsilon, const std::vector<int>& only, std::ostream& os) {
  AcceptanceOptions opt;
  opt.quad = c.quad;
  opt.epsilon = flipEpsilon ? EpsilonConvention::Literal : EpsilonConvention::Basis;
  opt.oracleSuite = oracle::oracle_equivalence_suite;
  opt.only = only;
  const auto results = run_acceptance(opt);
  int passed = 0;
  for (const auto& r : results) {
    os << format_result(r) << "\n" << std::flush;
    passed += r.pass;
  }
  os << passed << "/" << results.size() << " criteria passed\n";
  return passed == static_cast<int>(results.size()) ? kOk : kNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"g2lab: multiscale one-loop g-2 computations"};
  app.require_subcommand(1);
  std::string configPath, outPath, axis = "cutoff", preset;
  int jobs = 0;
  bool serial = false, flipEps = false;
  double tolerance = 0.0;
  std::vector<int> only;
  app.add_option("--config", configPath, "parameter file (default: $G2LAB_CONFIG)");
  app.add_option("--out", outPath, "write output here instead of stdout");
  app.add_option("--jobs", jobs, "worker threads for scans")->check(CLI::PositiveNumber);
  app.add_flag("--serial", serial, "force one worker");
  app.add_option("--tolerance", tolerance, "relative quadrature tolerance")->check(CLI::PositiveNumber);
  auto* compute = app.add_subcommand("compute", "g-2 report as JSON")->fallthrough();
  auto* scan = app.add_subcommand("scan", "parameter scan as CSV")->fallthrough();
  scan->add_option("--axis", axis, "cutoff, massratio or coupling");
  auto* trees = app.add_subcommand("trees", "tree listings and bound reports")->fallthrough();
  trees->add_option("--preset", preset, "named preset tree");
  auto* selftest = app.add_subcommand("selftest", "acceptance criteria")->fallthrough();
  selftest->add_flag("--debug-flip-epsilon", flipEps, "use the flipped spatial epsilon");
  selftest->add_option("--criteria", only, "run only these criterion ids")->delimiter(',');
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  RunConfig cfg;
  try {
    if (configPath.empty())
      if (const char* env = std::getenv("G2LAB_CONFIG")) configPath = env;
    cfg = configPath.empty() ? cli::default_config() : cli::load_config(configPath);
    if (!outPath.empty()) cfg.out = outPath;
    if (jobs > 0) cfg.jobs = jobs;
    if (serial) cfg.serial = true;
    if (tolerance > 0.0) cfg.quad.relTolerance = tolerance;
    if (!preset.empty()) cfg.preset = preset;
    cli::validate_config(cfg);
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  }

  std::ofstream file;
  if (!cfg.out.empty()) {
    file.open(cfg.out);
    if (!file) {
      std::cerr << "config error: cannot write '" << cfg.out << "'\n";
      return kConfig;
    }
  }
  std::ostream& os = cfg.out.empty() ? std::cout : file;
  try {
    if (*compute) cmd_compute(cfg, os);
    if (*scan) cmd_scan(cfg, axis, os);
    if (*trees) cmd_trees(cfg, os);
    if (*selftest) return cmd_selftest(cfg, flipEps, only, os);
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kConfig;
  } catch (const ResourceGuardError& e) {
    std::cerr << "resource guard: " << e.what() << "\n";
    return kGuard;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumeric;
  }
  return kOk;
}
