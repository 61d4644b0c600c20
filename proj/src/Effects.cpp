#include "mrnet/Effects.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <set>

#include <Eigen/Dense>

#include "mrnet/Errors.hpp"

namespace mrnet {

namespace {

constexpr std::size_t kMaxPaths = 1000000;

Eigen::Index columnOf(const FeatureMatrix& m, const std::string& name) {
  for (std::size_t i = 0; i < m.features.size(); ++i)
    if (m.features[i] == name) return static_cast<Eigen::Index>(i);
  throw DataError("fit_coefficients: node '" + name + "' missing from the dataset");
}

void requireNode(const CausalGraph& g, const std::string& id, const std::string& op) {
  if (!g.hasNode(id)) throw DataError(op + ": unknown node '" + id + "'");
}

}  // namespace

FitResult fitCoefficients(const CausalGraph& graph, const FeatureMatrix& raw,
                          double conditionLimit) {
  FitResult result;
  result.graph = graph;
  const auto parents = graph.parentsOf();
  const Eigen::Index n = raw.values.rows();

  for (const auto& node : graph.nodes) {
    const auto& ps = parents.at(node);
    if (ps.empty()) continue;
    const Eigen::Index k = static_cast<Eigen::Index>(ps.size());
    if (n <= k + 1)
      throw DataError("fit_coefficients: node '" + node + "' has " + std::to_string(ps.size()) +
                      " parents but only " + std::to_string(n) + " samples");

    // Centered design; collinearity judged on the standardized block so the
    // condition number reflects correlation, not raw scale.
    Eigen::MatrixXd design(n, k);
    Eigen::MatrixXd scaled(n, k);
    for (Eigen::Index j = 0; j < k; ++j) {
      Eigen::VectorXd col = raw.values.col(columnOf(raw, ps[static_cast<std::size_t>(j)]));
      col.array() -= col.mean();
      design.col(j) = col;
      const double sd = std::sqrt(col.squaredNorm() / static_cast<double>(n - 1));
      scaled.col(j) = sd > 0.0 ? Eigen::VectorXd(col / sd) : col;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    const double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (cond > conditionLimit) {
      // Withheld means withheld: drop any coefficients the input carried.
      for (const auto& p : ps) {
        Edge* e = result.graph.findEdge(p, node);
        if (e) e->coefficient.reset();
      }
      result.issues.push_back({node, cond,
                               "parents of '" + node +
                                   "' are collinear (condition number above limit); "
                                   "coefficients withheld"});
      continue;
    }

    Eigen::VectorXd y = raw.values.col(columnOf(raw, node));
    y.array() -= y.mean();
    const Eigen::VectorXd beta = design.colPivHouseholderQr().solve(y);
    for (Eigen::Index j = 0; j < k; ++j) {
      Edge* e = result.graph.findEdge(ps[static_cast<std::size_t>(j)], node);
      if (!e || e->status != EdgeStatus::Directed)
        throw InternalError("fit_coefficients: parent edge vanished mid-fit");
      e->coefficient = beta(j);
    }
  }
  return result;
}

namespace {

// Depth-first enumeration of directed source -> target paths with the
// coefficient product accumulated along the way. The directed subgraph is a
// DAG (validated on load), so no visited set is needed.
void walkPaths(const CausalGraph& g,
               const std::map<std::string, std::vector<std::string>>& children,
               const std::string& target, std::vector<std::string>& stack, double product,
               std::vector<PathContribution>& out) {
  // By value: push_back below may reallocate the stack.
  const std::string here = stack.back();
  if (here == target) {
    if (out.size() >= kMaxPaths)
      throw DataError("total_effect: more than " + std::to_string(kMaxPaths) +
                      " directed paths between the endpoints");
    out.push_back({stack, product});
    return;
  }
  for (const auto& c : children.at(here)) {
    const Edge* e = g.findEdge(here, c);
    if (!e->coefficient)
      throw DataError("total_effect: edge " + here + " -> " + c +
                      " has no fitted coefficient");
    stack.push_back(c);
    walkPaths(g, children, target, stack, product * *e->coefficient, out);
    stack.pop_back();
  }
}

}  // namespace

EffectEstimate totalEffect(const CausalGraph& graph, const std::string& source,
                           const std::string& target) {
  requireNode(graph, source, "total_effect");
  requireNode(graph, target, "total_effect");
  if (source == target) throw ConfigError("total_effect: source and target must differ");

  EffectEstimate est;
  est.source = source;
  est.target = target;

  const auto children = graph.childrenOf();
  std::vector<std::string> stack{source};
  walkPaths(graph, children, target, stack, 1.0, est.paths);
  std::sort(est.paths.begin(), est.paths.end(),
            [](const PathContribution& a, const PathContribution& b) { return a.nodes < b.nodes; });

  for (const auto& p : est.paths) est.total += p.product;
  const Edge* direct = graph.findEdge(source, target);
  if (direct && direct->status == EdgeStatus::Directed && direct->a == source)
    est.direct = direct->coefficient ? *direct->coefficient : 0.0;
  est.indirect = est.total - est.direct;

  const auto parents = graph.parentsOf();
  est.adjustmentSet = parents.at(source);

  for (const auto& e : graph.edges)
    if (e.status != EdgeStatus::Directed)
      est.excludedEdges.push_back(e.a + " -- " + e.b);

  // Partial when some simple source -> target route needs at least one
  // excluded edge (walked in either direction). Simple paths only: a walk
  // that revisits a node is not a route. Bounded search; if the budget
  // trips the flag is set conservatively, never cleared.
  std::set<std::string> onPath{source};
  std::size_t budget = kMaxPaths;
  std::function<bool(const std::string&, bool)> probe = [&](const std::string& node,
                                                            bool used) -> bool {
    if (node == target) return used;
    if (budget == 0) return true;
    --budget;
    for (const auto& e : graph.edges) {
      if (e.a != node && e.b != node) continue;
      std::string next;
      bool nextUsed = used;
      if (e.status == EdgeStatus::Directed) {
        if (e.a != node) continue;
        next = e.b;
      } else {
        next = e.a == node ? e.b : e.a;
        nextUsed = true;
      }
      if (!onPath.insert(next).second) continue;
      const bool hit = probe(next, nextUsed);
      onPath.erase(next);
      if (hit) return true;
    }
    return false;
  };
  est.partial = probe(source, false);
  return est;
}

nlohmann::json effectEstimateToJson(const EffectEstimate& e) {
  nlohmann::json paths = nlohmann::json::array();
  for (const auto& p : e.paths)
    paths.push_back({{"nodes", p.nodes}, {"product", p.product}});
  return nlohmann::json{{"source", e.source},
                        {"target", e.target},
                        {"total", e.total},
                        {"direct", e.direct},
                        {"indirect", e.indirect},
                        {"adjustment_set", e.adjustmentSet},
                        {"paths", paths},
                        {"partial", e.partial},
                        {"excluded_edges", e.excludedEdges}};
}

std::map<std::string, std::map<std::string, double>> allPairsTotalEffects(
    const CausalGraph& graph) {
  for (const auto& e : graph.edges)
    if (e.status == EdgeStatus::Directed && !e.coefficient)
      throw DataError("all_pairs: edge " + e.a + " -> " + e.b + " has no fitted coefficient");

  const std::vector<std::string> topo = graph.topologicalOrder();
  const auto children = graph.childrenOf();
  std::map<std::string, std::map<std::string, double>> out;
  for (const auto& source : graph.nodes) {
    std::map<std::string, double> shift;
    shift[source] = 1.0;
    for (const auto& node : topo) {
      auto it = shift.find(node);
      if (it == shift.end()) continue;
      for (const auto& c : children.at(node))
        shift[c] += it->second * *graph.findEdge(node, c)->coefficient;
    }
    shift.erase(source);
    out[source] = std::move(shift);
  }
  return out;
}

namespace {

std::set<std::string> reachableFrom(const std::map<std::string, std::vector<std::string>>& adj,
                                    const std::string& start, const std::string* avoid) {
  std::set<std::string> seen{start};
  std::deque<std::string> frontier{start};
  while (!frontier.empty()) {
    const std::string node = frontier.front();
    frontier.pop_front();
    for (const auto& c : adj.at(node)) {
      if (avoid && c == *avoid) continue;
      if (seen.insert(c).second) frontier.push_back(c);
    }
  }
  return seen;
}

}  // namespace

std::vector<std::string> confounders(const CausalGraph& graph, const std::string& source,
                                     const std::string& target) {
  requireNode(graph, source, "confounders");
  requireNode(graph, target, "confounders");
  const auto children = graph.childrenOf();
  std::vector<std::string> out;
  for (const auto& z : graph.nodes) {
    if (z == source || z == target) continue;
    const auto down = reachableFrom(children, z, nullptr);
    if (!down.count(source)) continue;
    const auto avoiding = reachableFrom(children, z, &source);
    if (avoiding.count(target)) out.push_back(z);
  }
  return out;
}

std::vector<std::string> mediators(const CausalGraph& graph, const std::string& source,
                                   const std::string& target) {
  requireNode(graph, source, "mediators");
  requireNode(graph, target, "mediators");
  const auto children = graph.childrenOf();
  const auto fromSource = reachableFrom(children, source, nullptr);
  std::vector<std::string> out;
  for (const auto& m : graph.nodes) {
    if (m == source || m == target || !fromSource.count(m)) continue;
    if (reachableFrom(children, m, nullptr).count(target)) out.push_back(m);
  }
  return out;
}

std::map<std::string, double> interventionalOracle(const SemSpec& spec,
                                                   const std::string& source, double delta,
                                                   int nSamples, std::uint64_t seed) {
  std::map<std::string, double> shifts;
  if (delta == 0.0) {
    for (const auto& n : spec.nodes) shifts[n] = 0.0;
    return shifts;
  }
  const Dataset base = simulate(spec, nSamples, seed);
  const Dataset shifted = simulateShifted(spec, nSamples, seed, source, delta);
  for (std::size_t k = 0; k < spec.nodes.size(); ++k) {
    const Eigen::Index c = static_cast<Eigen::Index>(k);
    const double diff = (shifted.omicsRaw.values.col(c) - base.omicsRaw.values.col(c)).mean();
    shifts[spec.nodes[k]] = diff / delta;
  }
  return shifts;
}

}  // namespace mrnet
