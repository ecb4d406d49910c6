#include "g2lab/power_counting.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <tuple>

namespace g2lab {

const char* node_type_name(NodeType t) {
  switch (t) {
    case NodeType::Root: return "root";
    case NodeType::Vertex: return "vertex";
    case NodeType::Lambda: return "lambda";
    case NodeType::J: return "J";
    case NodeType::Eta: return "eta";
  }
  return "?";
}

NodeType parse_node_type(const std::string& s) {
  if (s == "root") return NodeType::Root;
  if (s == "vertex") return NodeType::Vertex;
  if (s == "lambda") return NodeType::Lambda;
  if (s == "J") return NodeType::J;
  if (s == "eta") return NodeType::Eta;
  throw DomainError("unknown node type '" + s + "'");
}

double scaling_dimension(int externalFields, int nJ, int derivatives, int nEta) {
  if (externalFields < 0 || nJ < 0 || derivatives < 0 || nEta < 0)
    throw DomainError("scaling_dimension: negative count");
  return 4.0 - 1.5 * (externalFields + nEta) - nJ - derivatives;
}

int renormalization_gain(int externalFields, int derivatives, int nJ, int nEta, bool isFirstNonroot,
                         bool isEndpoint) {
  if (isFirstNonroot || isEndpoint || externalFields != 2) return 0;
  if (scaling_dimension(externalFields, nJ, derivatives, nEta) < 0.0) return 0;
  if (derivatives == 0 && nJ == 0 && nEta == 0) return 3;
  if (derivatives == 1 || nJ == 1) return 2;
  return 0;
}

void refresh_counts(GNTree& t) {
  for (auto& n : t.nodes) n.children.clear();
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    if (t.nodes[i].id != static_cast<int>(i)) throw DomainError("tree ids must be 0..n-1 in order");
    const int p = t.nodes[i].parent;
    if (i == 0) continue;
    if (p < 0 || p >= static_cast<int>(t.nodes.size()) || p == static_cast<int>(i))
      throw DomainError("tree node " + std::to_string(i) + " has an invalid parent");
    t.nodes[p].children.push_back(static_cast<int>(i));
  }
  std::function<void(int)> visit = [&](int v) {
    GNNode& n = t.nodes[v];
    if (n.isEndpoint()) {
      n.nLambda = n.type == NodeType::Lambda;
      n.nJ = n.type == NodeType::J;
      n.nEta = n.type == NodeType::Eta;
      return;
    }
    n.nLambda = n.nJ = n.nEta = 0;
    for (int c : n.children) {
      visit(c);
      n.nLambda += t.nodes[c].nLambda;
      n.nJ += t.nodes[c].nJ;
      n.nEta += t.nodes[c].nEta;
    }
  };
  if (!t.nodes.empty()) visit(0);
}

void validate_tree(const GNTree& t) {
  if (t.nodes.empty()) throw DomainError("empty tree");
  const GNNode& r = t.root();
  if (r.type != NodeType::Root || r.parent != -1) throw DomainError("node 0 must be the root");
  if (r.children.size() != 1) throw DomainError("the root must have exactly one child");
  std::vector<int> seen(t.nodes.size(), 0);
  std::function<void(int)> visit = [&](int v) {
    if (seen[v]++) throw DomainError("tree has a cycle");
    const GNNode& n = t.nodes[v];
    if (n.isEndpoint() && !n.children.empty()) throw DomainError("endpoints cannot have children");
    if (!n.isEndpoint() && n.children.empty()) throw DomainError("vertex without children");
    if (v != 0 && n.type == NodeType::Root) throw DomainError("second root");
    if ((n.type == NodeType::Lambda || n.type == NodeType::Eta) && n.scale != t.N + 1)
      throw DomainError("lambda and eta endpoints sit on N + 1");
    if (n.type == NodeType::Vertex && n.scale > t.N) throw DomainError("vertex above N");
    if (n.type == NodeType::J) {
      const GNNode& p = t.nodes[n.parent];
      if (p.children.size() < 2 || n.scale != p.scale + 1)
        throw DomainError("a J endpoint needs a nontrivial parent one scale below");
    }
    for (int c : n.children) {
      if (t.nodes[c].scale <= n.scale) throw DomainError("child scale must exceed parent scale");
      visit(c);
    }
  };
  visit(0);
  if (std::count(seen.begin(), seen.end(), 0) != 0) throw DomainError("disconnected tree");
}

std::string canonical_signature(const GNTree& t) {
  std::function<std::string(int)> sig = [&](int v) {
    const GNNode& n = t.nodes[v];
    std::vector<std::string> cs;
    for (int c : n.children) cs.push_back(sig(c));
    std::sort(cs.begin(), cs.end());
    std::string s = std::string(node_type_name(n.type)) + "@" + std::to_string(n.scale);
    if (n.P || n.deriv) s += "[" + std::to_string(n.P) + "," + std::to_string(n.deriv) + "]";
    if (!cs.empty()) {
      s += "(";
      for (std::size_t i = 0; i < cs.size(); ++i) s += (i ? "," : "") + cs[i];
      s += ")";
    }
    return s;
  };
  return sig(0);
}

// --- enumeration ---------------------------------------------------------

namespace {

struct Counts {
  int l = 0, j = 0, e = 0;
  int total() const { return l + j + e; }
  auto key() const { return std::make_tuple(l, j, e); }
  bool operator<(const Counts& o) const { return key() < o.key(); }
  bool operator==(const Counts& o) const { return key() == o.key(); }
};

struct Sub;
using SubPtr = std::shared_ptr<const Sub>;
struct Sub {
  NodeType type;
  int scale;
  std::vector<SubPtr> children;
  std::string sig;
};

SubPtr make_sub(NodeType type, int scale, std::vector<SubPtr> children) {
  auto s = std::make_shared<Sub>();
  s->type = type;
  s->scale = scale;
  std::sort(children.begin(), children.end(),
            [](const SubPtr& a, const SubPtr& b) { return a->sig < b->sig; });
  s->sig = std::string(node_type_name(type)) + "@" + std::to_string(scale);
  if (!children.empty()) {
    s->sig += "(";
    for (std::size_t i = 0; i < children.size(); ++i) s->sig += (i ? "," : "") + children[i]->sig;
    s->sig += ")";
  }
  s->children = std::move(children);
  return s;
}

// multiset partitions of a count vector into >= 2 nonzero blocks, blocks nondecreasing
void partitions(Counts rest, Counts minBlock, std::vector<Counts>& cur,
                std::vector<std::vector<Counts>>& out) {
  if (rest.total() == 0) {
    if (cur.size() >= 2) out.push_back(cur);
    return;
  }
  for (int a = 0; a <= rest.l; ++a)
    for (int b = 0; b <= rest.j; ++b)
      for (int c = 0; c <= rest.e; ++c) {
        Counts blk{a, b, c};
        if (blk.total() == 0 || blk < minBlock) continue;
        Counts r{rest.l - a, rest.j - b, rest.e - c};
        // remaining blocks are >= blk, so r must be empty or >= blk
        if (r.total() != 0 && r < blk) continue;
        cur.push_back(blk);
        partitions(r, blk, cur, out);
        cur.pop_back();
      }
}

class Enumerator {
 public:
  Enumerator(int N, std::size_t guard) : N_(N), guard_(guard) {}

  // child lists of a non-endpoint vertex at scale s whose endpoints are E
  const std::vector<std::vector<SubPtr>>& forests(int s, Counts E) {
    auto key = std::make_tuple(s, E.l, E.j, E.e);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::vector<std::vector<SubPtr>> out;
    std::set<std::string> seen;
    auto add = [&](std::vector<SubPtr> ch) {
      std::sort(ch.begin(), ch.end(), [](const SubPtr& a, const SubPtr& b) { return a->sig < b->sig; });
      std::string sig;
      for (auto& c : ch) sig += c->sig + ";";
      if (seen.insert(sig).second) {
        out.push_back(std::move(ch));
        if (out.size() > guard_) throw ResourceGuardError("tree enumeration exceeds the guard");
      }
    };
    if (E.total() == 1) {
      // a lone lambda/eta line ends on N + 1; a lone J cannot hang from a trivial vertex
      if (E.j == 0) add({make_sub(E.l ? NodeType::Lambda : NodeType::Eta, N_ + 1, {})});
    } else {
      if (s + 1 <= N_)
        for (const auto& f : forests(s + 1, E)) add({make_sub(NodeType::Vertex, s + 1, f)});
      std::vector<std::vector<Counts>> parts;
      std::vector<Counts> cur;
      partitions(E, Counts{0, 0, 0}, cur, parts);
      for (const auto& part : parts) {
        std::vector<std::vector<SubPtr>> options;
        bool ok = true;
        for (const Counts& b : part) {
          std::vector<SubPtr> opt;
          if (b.total() == 1) {
            if (b.j) opt.push_back(make_sub(NodeType::J, s + 1, {}));
            else opt.push_back(make_sub(b.l ? NodeType::Lambda : NodeType::Eta, N_ + 1, {}));
          } else if (s + 1 <= N_) {
            for (const auto& f : forests(s + 1, b)) opt.push_back(make_sub(NodeType::Vertex, s + 1, f));
          }
          if (opt.empty()) { ok = false; break; }
          options.push_back(std::move(opt));
        }
        if (!ok) continue;
        std::vector<std::size_t> idx(options.size(), 0);
        while (true) {
          std::vector<SubPtr> ch;
          for (std::size_t i = 0; i < options.size(); ++i) ch.push_back(options[i][idx[i]]);
          add(std::move(ch));
          std::size_t k = 0;
          while (k < idx.size() && ++idx[k] == options[k].size()) idx[k++] = 0;
          if (k == idx.size()) break;
        }
      }
    }
    return memo_[key] = std::move(out);
  }

 private:
  int N_;
  std::size_t guard_;
  std::map<std::tuple<int, int, int, int>, std::vector<std::vector<SubPtr>>> memo_;
};

void flatten(const SubPtr& s, int parent, GNTree& t) {
  GNNode n;
  n.id = static_cast<int>(t.nodes.size());
  n.parent = parent;
  n.scale = s->scale;
  n.type = s->type;
  t.nodes.push_back(n);
  const int id = n.id;
  for (const auto& c : s->children) flatten(c, id, t);
}

}  // namespace

std::vector<GNTree> enumerate_trees(int rootScale, int maxScale, int nLambda, int nJ, int nEta,
                                    std::size_t guard) {
  if (nLambda < 0 || nJ < 0 || nEta < 0) throw DomainError("enumerate_trees: negative count");
  if (rootScale >= maxScale) throw DomainError("enumerate_trees: empty scale window");
  std::vector<GNTree> out;
  const Counts E{nLambda, nJ, nEta};
  if (E.total() == 0) return out;
  Enumerator en(maxScale, guard);
  std::vector<SubPtr> roots;
  if (E.total() == 1) {
    if (nJ == 0) roots.push_back(make_sub(NodeType::Root, rootScale, {make_sub(nLambda ? NodeType::Lambda : NodeType::Eta, maxScale + 1, {})}));
  } else {
    for (const auto& f : en.forests(rootScale + 1, E))
      roots.push_back(make_sub(NodeType::Root, rootScale, {make_sub(NodeType::Vertex, rootScale + 1, f)}));
  }
  std::sort(roots.begin(), roots.end(), [](const SubPtr& a, const SubPtr& b) { return a->sig < b->sig; });
  for (const auto& r : roots) {
    GNTree t;
    t.N = maxScale;
    t.hStar = rootScale + 1;
    flatten(r, -1, t);
    refresh_counts(t);
    out.push_back(std::move(t));
    if (out.size() > guard) throw ResourceGuardError("tree enumeration exceeds the guard");
  }
  return out;
}

// --- bound bookkeeping ---------------------------------------------------

double BoundReport::totalExponent() const {
  double s = shortMemoryExponent;
  for (const auto& v : perVertex) s += v.exponent();
  for (const auto& e : endpointFactors) s += e.exponent;
  return s;
}

namespace {

std::vector<int> short_memory_path(const GNTree& t, int& lambdaEndpoint) {
  const int v0 = t.firstNonroot();
  lambdaEndpoint = -1;
  int best = -1;
  for (const auto& n : t.nodes)
    if (n.type == NodeType::Lambda) {
      const int p = n.parent;
      if (best < 0 || t.nodes[p].scale > t.nodes[best].scale) {
        best = p;
        lambdaEndpoint = n.id;
      }
    }
  std::vector<int> path;
  if (best < 0) return path;
  for (int v = best; v != v0 && v > 0; v = t.nodes[v].parent) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

BoundReport bound_report(const GNTree& tree, const std::vector<int>& clusterScales, double theta) {
  GNTree t = tree;
  refresh_counts(t);
  if (!clusterScales.empty()) {
    if (clusterScales.size() != t.nodes.size()) throw DomainError("bound_report: one scale per node");
    for (std::size_t i = 0; i < t.nodes.size(); ++i) t.nodes[i].scale = clusterScales[i];
  }
  validate_tree(t);
  if (theta < 0.0 || theta > 2.0) throw DomainError("bound_report: theta must lie in [0, 2]");
  BoundReport rep;
  int lam = -1;
  rep.path = short_memory_path(t, lam);
  std::set<int> onPath(rep.path.begin(), rep.path.end());
  const int v0 = t.firstNonroot();
  for (const auto& n : t.nodes) {
    if (n.type != NodeType::Vertex) continue;
    VertexExponent e;
    e.id = n.id;
    e.h = n.scale;
    e.hParent = t.nodes[n.parent].scale;
    e.D = scaling_dimension(n.P, n.nJ, n.deriv, n.nEta);
    e.R = renormalization_gain(n.P, n.deriv, n.nJ, n.nEta, n.id == v0, false);
    e.theta = onPath.count(n.id) ? theta : 0.0;
    rep.perVertex.push_back(e);
    if (onPath.count(n.id) && e.coefficient() == 0.0) ++rep.logFactorCount;
  }
  for (const auto& n : t.nodes) {
    const int hp = n.parent >= 0 ? t.nodes[n.parent].scale : 0;
    if (n.type == NodeType::Lambda) {
      double x = 2.0 * (hp - t.N);
      if (n.id == lam && !rep.path.empty()) x += theta * (t.N - hp);
      rep.endpointFactors.push_back({n.id, n.type, hp, x});
    } else if (n.type == NodeType::Eta) {
      rep.endpointFactors.push_back({n.id, n.type, hp, -static_cast<double>(hp)});
    }
  }
  if (!rep.path.empty()) rep.shortMemoryExponent = theta * (t.nodes[v0].scale - t.N);
  return rep;
}

namespace {

std::vector<double> free_sum_exponents(const GNTree& tree, double theta) {
  const BoundReport rep = bound_report(tree, {}, theta);
  const int v0 = tree.firstNonroot();
  std::vector<double> xs;
  for (const auto& v : rep.perVertex) {
    if (v.id == v0) continue;
    if (v.coefficient() > 0.0)
      throw DomainError("scale_sum_value: positive exponent at vertex " + std::to_string(v.id) +
                        " (divergent power counting)");
    xs.push_back(v.coefficient());
  }
  return xs;
}

}  // namespace

double scale_sum_value(const GNTree& tree, double theta) {
  const int W = tree.N - tree.hStar;
  double value = 1.0;
  for (double x : free_sum_exponents(tree, theta)) {
    double s = 0.0;
    for (int b = 1; b <= W; ++b) s += std::exp2(b * x);
    value *= s;
  }
  return value;
}

double scale_sum_closed_form(const GNTree& tree, double theta) {
  const int W = tree.N - tree.hStar;
  double value = 1.0;
  for (double x : free_sum_exponents(tree, theta)) {
    if (x == 0.0) {
      value *= W;
    } else {
      const double r = std::exp2(x);
      value *= r * (1.0 - std::pow(r, W)) / (1.0 - r);
    }
  }
  return value;
}

double max_dimension_margin(const GNTree& tree, const GainModel& model) {
  GNTree t = tree;
  refresh_counts(t);
  const int v0 = t.firstNonroot();
  double best = -1e300;
  std::function<std::set<int>(int)> feasible = [&](int v) -> std::set<int> {
    const GNNode& n = t.nodes[v];
    switch (n.type) {
      case NodeType::Lambda: return {4};
      case NodeType::J: return {2};
      case NodeType::Eta: return {1};
      default: break;
    }
    std::set<int> sums{0};
    for (int c : n.children) {
      const std::set<int> fc = feasible(c);
      std::set<int> next;
      for (int a : sums)
        for (int b : fc) next.insert(a + b);
      sums = std::move(next);
    }
    const int k = static_cast<int>(n.children.size());
    std::set<int> out;
    for (int avail : sums)
      for (int P = avail - 2 * (k - 1); P >= 0; P -= 2) out.insert(P);
    if (n.type == NodeType::Vertex && n.id != v0) {
      std::set<int> kept;
      for (int P : out) {
        if (P < 2) continue;
        kept.insert(P);
        std::vector<int> ds{0};
        if (P == 2 && n.nEta == 0 && (n.nJ == 0 || model.derivativeWithJ)) ds.push_back(1);
        for (int d : ds) {
          const double D = scaling_dimension(P, n.nJ, d, n.nEta);
          best = std::max(best, D - renormalization_gain(P, d, n.nJ, n.nEta, false, false));
        }
      }
      return kept;
    }
    return out;
  };
  feasible(0);
  return best;
}

// --- presets -------------------------------------------------------------

std::vector<std::string> preset_names() { return {"appendixC-fourth-order", "appendixC-nested"}; }

GNTree preset_tree(const std::string& name, int N, int hStar) {
  GNTree t;
  t.N = N;
  t.hStar = hStar;
  auto add = [&](int parent, int scale, NodeType type, int P = 0) {
    GNNode n;
    n.id = static_cast<int>(t.nodes.size());
    n.parent = parent;
    n.scale = scale;
    n.type = type;
    n.P = P;
    t.nodes.push_back(n);
    return n.id;
  };
  const int ep = N + 1;
  if (name == "appendixC-fourth-order") {
    if (N - hStar < 7) throw DomainError("preset needs N - h* >= 7");
    const int h3 = hStar + 2, h2 = hStar + 4, h1 = hStar + 6;
    const int root = add(-1, hStar - 1, NodeType::Root);
    const int v0 = add(root, hStar, NodeType::Vertex, 0);
    const int v3 = add(v0, h3, NodeType::Vertex, 2);
    add(v0, ep, NodeType::Eta);
    add(v0, ep, NodeType::Eta);
    const int v2 = add(v3, h2, NodeType::Vertex, 4);
    const int v1 = add(v2, h1, NodeType::Vertex, 4);
    add(v2, ep, NodeType::Lambda);
    add(v1, h1 + 1, NodeType::J);
    add(v1, ep, NodeType::Lambda);
  } else if (name == "appendixC-nested") {
    if (N - hStar < 7) throw DomainError("preset needs N - h* >= 7");
    const int h2 = hStar + 3, h1 = hStar + 6;
    const int root = add(-1, hStar - 1, NodeType::Root);
    const int v0 = add(root, hStar, NodeType::Vertex, 0);
    const int v2 = add(v0, h2, NodeType::Vertex, 2);
    add(v0, ep, NodeType::Eta);
    add(v0, ep, NodeType::Eta);
    const int v1 = add(v2, h1, NodeType::Vertex, 2);
    add(v2, ep, NodeType::Lambda);
    add(v1, h1 + 1, NodeType::J);
    add(v1, ep, NodeType::Lambda);
  } else {
    throw DomainError("unknown preset '" + name + "'");
  }
  refresh_counts(t);
  validate_tree(t);
  return t;
}

// --- text format ---------------------------------------------------------

std::string serialize_tree(const GNTree& t) {
  std::ostringstream os;
  os << "# N " << t.N << " hStar " << t.hStar << "\n";
  os << "# id parent scale type P deriv nLambda nJ nEta\n";
  for (const auto& n : t.nodes)
    os << n.id << ' ' << n.parent << ' ' << n.scale << ' ' << node_type_name(n.type) << ' ' << n.P
       << ' ' << n.deriv << ' ' << n.nLambda << ' ' << n.nJ << ' ' << n.nEta << "\n";
  return os.str();
}

GNTree parse_tree(const std::string& text) {
  GNTree t;
  std::istringstream is(text);
  std::string line;
  bool header = false;
  int lineNo = 0;
  while (std::getline(is, line)) {
    ++lineNo;
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      std::string hash, kN, kH;
      int N, H;
      if (ls >> hash >> kN >> N >> kH >> H && kN == "N" && kH == "hStar") {
        t.N = N;
        t.hStar = H;
        header = true;
      }
      continue;
    }
    GNNode n;
    std::string type;
    if (!(ls >> n.id >> n.parent >> n.scale >> type >> n.P >> n.deriv >> n.nLambda >> n.nJ >> n.nEta))
      throw DomainError("parse_tree: malformed line " + std::to_string(lineNo));
    n.type = parse_node_type(type);
    t.nodes.push_back(n);
  }
  if (!header) throw DomainError("parse_tree: missing '# N .. hStar ..' header");
  refresh_counts(t);
  validate_tree(t);
  return t;
}

}  // namespace g2lab
