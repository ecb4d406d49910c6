#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "g2lab/core.hpp"

namespace g2lab {

enum class NodeType { Root, Vertex, Lambda, J, Eta };

const char* node_type_name(NodeType t);
NodeType parse_node_type(const std::string& s);

struct GNNode {
  int id = 0;
  int parent = -1;
  int scale = 0;
  NodeType type = NodeType::Vertex;
  int P = 0;      // external field count |P_v|
  int deriv = 0;  // derivative count
  int nLambda = 0, nJ = 0, nEta = 0;
  std::vector<int> children;

  bool isEndpoint() const {
    return type == NodeType::Lambda || type == NodeType::J || type == NodeType::Eta;
  }
};

// nodes[0] is the root; lambda and eta endpoints sit on N + 1
struct GNTree {
  int N = 0;
  int hStar = 0;
  std::vector<GNNode> nodes;

  const GNNode& root() const { return nodes.at(0); }
  int firstNonroot() const { return root().children.at(0); }
};

// D = 4 - 3(|P| + n_eta)/2 - n_J - derivatives
double scaling_dimension(int externalFields, int nJ, int derivatives, int nEta = 0);

// R table; also 0 whenever D < 0 since R then acts trivially
int renormalization_gain(int externalFields, int derivatives, int nJ, int nEta,
                         bool isFirstNonroot, bool isEndpoint);

// recompute subtree endpoint counts and child lists from parent links
void refresh_counts(GNTree& t);
// throws DomainError on a structural violation
void validate_tree(const GNTree& t);
std::string canonical_signature(const GNTree& t);

inline constexpr std::size_t kTreeGuard = 1000000;

// compressed trees: branching vertices, trivial vertices above >= 2 endpoints, endpoints;
// a single lambda/eta line is stored as an endpoint on N + 1 hanging from its last branch
std::vector<GNTree> enumerate_trees(int rootScale, int maxScale, int nLambda, int nJ, int nEta,
                                    std::size_t guard = kTreeGuard);

struct VertexExponent {
  int id = 0;
  int h = 0, hParent = 0;
  double D = 0.0;
  int R = 0;
  double theta = 0.0;  // short-memory share, nonzero on the path only
  double coefficient() const { return D - R + theta; }
  double exponent() const { return (h - hParent) * coefficient(); }
};

struct EndpointFactor {
  int id = 0;
  NodeType type = NodeType::Lambda;
  int hParent = 0;
  double exponent = 0.0;
};

struct BoundReport {
  std::vector<VertexExponent> perVertex;
  std::vector<EndpointFactor> endpointFactors;
  double shortMemoryExponent = 0.0;
  int logFactorCount = 0;
  std::vector<int> path;
  double totalExponent() const;
};

// clusterScales indexed by node id (empty: use the scales stored in the tree)
BoundReport bound_report(const GNTree& tree, const std::vector<int>& clusterScales, double theta);

// prod over vertices below the first nonroot of sum_{b=1}^{N-h*} 2^{b x_v}
double scale_sum_value(const GNTree& tree, double theta);
double scale_sum_closed_form(const GNTree& tree, double theta);

struct GainModel {
  bool derivativeWithJ = false;  // also allow a derivative on |P| = 2, n_J = 1 vertices
};
// max of D_v - R_v over vertices strictly below the first nonroot and all admissible
// assignments of |P_v| and derivative counts
double max_dimension_margin(const GNTree& tree, const GainModel& model = {});

GNTree preset_tree(const std::string& name, int N = 8, int hStar = 0);
std::vector<std::string> preset_names();

std::string serialize_tree(const GNTree& t);
GNTree parse_tree(const std::string& text);

}  // namespace g2lab
