#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "g2lab/power_counting.hpp"
#include "oracles.hpp"

using namespace g2lab;

namespace {

std::string report_text(const GNTree& t, double theta) {
  const BoundReport r = bound_report(t, {}, theta);
  std::ostringstream os;
  os << "# theta " << theta << "\n";
  for (const auto& v : r.perVertex)
    os << "# vertex " << v.id << " h " << v.h << " hParent " << v.hParent << " D " << v.D << " R " << v.R
       << " coefficient " << v.coefficient() << "\n";
  for (const auto& e : r.endpointFactors)
    os << "# endpoint " << e.id << " " << node_type_name(e.type) << " exponent " << e.exponent + 0.0 << "\n";
  os << "# shortMemory " << r.shortMemoryExponent + 0.0 << " total " << r.totalExponent() << " logs "
     << r.logFactorCount << "\n";
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// path vertices top-down as (D, R)
std::vector<std::pair<double, int>> path_dr(const BoundReport& r) {
  std::vector<std::pair<double, int>> out;
  for (int id : r.path)
    for (const auto& v : r.perVertex)
      if (v.id == id) out.emplace_back(v.D, v.R);
  return out;
}

}  // namespace

TEST_SUITE("power_counting") {

TEST_CASE("scaling dimensions and gains") {
  CHECK(scaling_dimension(2, 0, 0) == 1.0);
  CHECK(scaling_dimension(2, 1, 0) == 0.0);
  CHECK(scaling_dimension(2, 0, 1) == 0.0);
  CHECK(scaling_dimension(4, 0, 0) == -2.0);
  CHECK(scaling_dimension(0, 0, 0, 2) == 1.0);
  CHECK_THROWS_AS(scaling_dimension(-1, 0, 0), DomainError);
  CHECK(renormalization_gain(2, 0, 0, 0, false, false) == 3);
  CHECK(renormalization_gain(2, 0, 1, 0, false, false) == 2);
  CHECK(renormalization_gain(2, 1, 0, 0, false, false) == 2);
  CHECK(renormalization_gain(2, 0, 0, 0, true, false) == 0);
  CHECK(renormalization_gain(2, 0, 0, 0, false, true) == 0);
  CHECK(renormalization_gain(4, 0, 0, 0, false, false) == 0);
}

TEST_CASE("worked presets: exponent decomposition and log counts") {
  const GNTree a = preset_tree("appendixC-fourth-order");
  const BoundReport ra = bound_report(a, {}, 2.0);
  CHECK(path_dr(ra) == std::vector<std::pair<double, int>>{{0.0, 2}, {-3.0, 0}, {-3.0, 0}});
  CHECK(ra.logFactorCount == 1);
  const GNTree b = preset_tree("appendixC-nested");
  const BoundReport rb = bound_report(b, {}, 2.0);
  CHECK(path_dr(rb) == std::vector<std::pair<double, int>>{{0.0, 2}, {0.0, 2}});
  CHECK(rb.logFactorCount == 2);
  CHECK_THROWS_AS(preset_tree("nope"), DomainError);
  CHECK_THROWS_AS(preset_tree("appendixC-nested", 5, 0), DomainError);
}

TEST_CASE("preset golden files") {
  const bool update = std::getenv("G2LAB_UPDATE_GOLDEN") != nullptr;
  for (const std::string& name : preset_names()) {
    const GNTree t = preset_tree(name);
    const std::string text = serialize_tree(t) + report_text(t, 2.0) + report_text(t, 0.0);
    const std::string path = std::string(G2LAB_GOLDEN_DIR) + "/" + name + ".txt";
    if (update) std::ofstream(path) << text;
    CHECK_MESSAGE(read_file(path) == text, name);
  }
}

TEST_CASE("short memory only moves exponent around") {
  for (const std::string& name : preset_names()) {
    const GNTree t = preset_tree(name);
    const double t0 = bound_report(t, {}, 0.0).totalExponent();
    for (double theta : {0.5, 1.0, 2.0}) CHECK(bound_report(t, {}, theta).totalExponent() == doctest::Approx(t0));
    CHECK_THROWS_AS(bound_report(t, {}, 2.5), DomainError);
  }
}

TEST_CASE("text round trip and malformed input") {
  for (const std::string& name : preset_names()) {
    const GNTree t = preset_tree(name);
    const GNTree u = parse_tree(serialize_tree(t));
    CHECK(serialize_tree(u) == serialize_tree(t));
    CHECK(canonical_signature(u) == canonical_signature(t));
  }
  CHECK_THROWS_AS(parse_tree("0 -1 0 root 0 0 0 0 0\n"), DomainError);
  CHECK_THROWS_AS(parse_tree("# N 3 hStar 1\n0 -1 0 root 0 0\n"), DomainError);
  // lambda endpoint off the N + 1 line
  CHECK_THROWS_AS(parse_tree("# N 3 hStar 1\n0 -1 0 root 0 0 0 0 0\n1 0 1 vertex 0 0 0 0 0\n"
                             "2 1 2 lambda 0 0 0 0 0\n3 1 4 lambda 0 0 0 0 0\n"),
                  DomainError);
}

TEST_CASE("enumeration matches the partition-chain generator") {
  for (int N = 1; N <= 3; ++N)
    for (int nl = 0; nl <= 3; ++nl)
      for (int nj = 0; nj <= 1; ++nj)
        for (int ne = 0; ne <= 1; ++ne) {
          if (nl + nj + ne > 3) continue;
          std::set<std::string> got;
          for (const GNTree& t : enumerate_trees(0, N, nl, nj, ne)) {
            CHECK_NOTHROW(validate_tree(t));
            got.insert(canonical_signature(t));
          }
          CHECK_MESSAGE(got == oracle::brute_force_trees(0, N, nl, nj, ne),
                        "N=" << N << " lambda=" << nl << " J=" << nj << " eta=" << ne);
        }
}

TEST_CASE("width-1 window count") {
  const auto trees = enumerate_trees(0, 1, 2, 1, 0);
  CHECK(trees.size() == oracle::brute_force_trees(0, 1, 2, 1, 0).size());
  CHECK(trees.size() == 1u);
}

TEST_CASE("tree counts grow with the window") {
  std::size_t prev = 0;
  for (int N = 1; N <= 4; ++N) {
    const std::size_t n = enumerate_trees(0, N, 2, 1, 0).size();
    CHECK(n >= prev);
    prev = n;
  }
  CHECK(enumerate_trees(0, 3, 0, 0, 0).empty());
  CHECK(enumerate_trees(0, 3, 0, 1, 0).empty());
  CHECK_THROWS_AS(enumerate_trees(0, 10, 6, 1, 0, 100), ResourceGuardError);
}

TEST_CASE("scale sums match their geometric closed form") {
  for (const std::string& name : preset_names()) {
    const GNTree t = preset_tree(name, 10, 0);
    for (double theta : {0.0, 1.0, 2.0})
      CHECK(scale_sum_value(t, theta) == doctest::Approx(scale_sum_closed_form(t, theta)).epsilon(1e-12));
  }
  // a vertex with no external fields below the first nonroot has D - R = 4
  const GNTree bad = parse_tree("# N 3 hStar 0\n0 -1 -1 root 0 0 0 0 0\n1 0 0 vertex 0 0 0 0 0\n"
                                "2 1 1 vertex 0 0 0 0 0\n3 2 4 lambda 0 0 0 0 0\n4 2 4 lambda 0 0 0 0 0\n");
  CHECK_THROWS_AS(scale_sum_value(bad, 0.0), DomainError);
}

TEST_CASE("dimension margin below the first nonroot") {
  double worst = -1e300;
  for (int N = 1; N <= 4; ++N)
    for (int nl = 1; nl <= 3; ++nl)
      for (int nj = 0; nj <= 1; ++nj)
        for (const GNTree& t : enumerate_trees(0, N, nl, nj, 0)) worst = std::max(worst, max_dimension_margin(t));
  CHECK(worst <= -2.0);
  // a derivative on the |P| = 2, n_J = 1 vertex breaks the bound
  double broken = -1e300;
  for (const GNTree& t : enumerate_trees(0, 4, 2, 1, 0))
    broken = std::max(broken, max_dimension_margin(t, GainModel{true}));
  CHECK(broken == doctest::Approx(-1.0));
}

}
