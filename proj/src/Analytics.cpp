#include "mrnet/Analytics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <set>

#include "mrnet/Errors.hpp"

namespace mrnet {

namespace {

constexpr std::size_t kPropagatePathCap = 100000;
constexpr std::size_t kQueryPathCap = 1000000;

void requireNode(const CausalGraph& g, const std::string& id, const std::string& op) {
  if (!g.hasNode(id)) throw DataError(op + ": unknown node '" + id + "'");
}

// Nearest-rank percentile of an integer sample.
int nearestRank(std::vector<int> v, double p) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const std::size_t rank =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(p * static_cast<double>(v.size()))));
  return v[std::min(rank, v.size()) - 1];
}

}  // namespace

std::string nodeRoleName(NodeRole r) {
  switch (r) {
    case NodeRole::Influential: return "influential";
    case NodeRole::Influenced: return "influenced";
    case NodeRole::Combined: return "combined";
    case NodeRole::Ordinary: return "ordinary";
  }
  throw InternalError("unreachable node role");
}

ProfileReport nodeProfiles(const CausalGraph& graph, const HubPolicy& policy) {
  ProfileReport report;
  const auto children = graph.childrenOf();
  const auto parents = graph.parentsOf();
  for (const auto& e : graph.edges)
    if (e.status != EdgeStatus::Directed)
      report.ignoredEdges.push_back(e.a + " -- " + e.b);

  // Longest directed path out of each node, in edges, over the DAG.
  std::map<std::string, int> longest;
  const std::vector<std::string> topo = graph.topologicalOrder();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    int best = 0;
    for (const auto& c : children.at(*it)) best = std::max(best, 1 + longest.at(c));
    longest[*it] = best;
  }

  std::vector<int> outs, ins;
  for (const auto& n : graph.nodes) {
    outs.push_back(static_cast<int>(children.at(n).size()));
    ins.push_back(static_cast<int>(parents.at(n).size()));
  }
  report.outThreshold = std::max(policy.minDegree, nearestRank(outs, policy.percentile));
  report.inThreshold = std::max(policy.minDegree, nearestRank(ins, policy.percentile));

  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    NodeProfile p;
    p.node = graph.nodes[i];
    p.outDegree = outs[i];
    p.inDegree = ins[i];
    p.maxBlockingStep = longest.at(p.node);
    const bool hubOut = p.outDegree >= report.outThreshold;
    const bool hubIn = p.inDegree >= report.inThreshold;
    p.role = hubOut && hubIn   ? NodeRole::Combined
             : hubOut          ? NodeRole::Influential
             : hubIn           ? NodeRole::Influenced
                               : NodeRole::Ordinary;
    report.profiles.push_back(std::move(p));
  }
  return report;
}

namespace {

// Maximal directed paths from `here` (every path ends at a sink). Returns
// false once the cap is hit.
bool walkMaximal(const std::map<std::string, std::vector<std::string>>& children,
                 std::vector<std::string>& stack, std::vector<PropagationPath>& out) {
  const auto& next = children.at(stack.back());
  if (next.empty()) {
    if (stack.size() >= 2) {
      if (out.size() >= kPropagatePathCap) return false;
      out.push_back({stack, static_cast<int>(stack.size()) - 1});
    }
    return true;
  }
  for (const auto& c : next) {
    stack.push_back(c);
    const bool ok = walkMaximal(children, stack, out);
    stack.pop_back();
    if (!ok) return false;
  }
  return true;
}

}  // namespace

PropagationReport propagate(const CausalGraph& graph, const std::string& source) {
  requireNode(graph, source, "propagate");
  PropagationReport report;
  report.source = source;

  const auto children = graph.childrenOf();
  std::set<std::string> seen{source};
  std::deque<std::string> frontier{source};
  while (!frontier.empty()) {
    const std::string n = frontier.front();
    frontier.pop_front();
    for (const auto& c : children.at(n))
      if (seen.insert(c).second) frontier.push_back(c);
  }
  seen.erase(source);
  report.influenced.assign(seen.begin(), seen.end());
  for (const auto& n : report.influenced)
    if (children.at(n).empty()) report.blockingNodes.push_back(n);

  std::vector<std::string> stack{source};
  report.truncated = !walkMaximal(children, stack, report.perPath);
  std::sort(report.perPath.begin(), report.perPath.end(),
            [](const PropagationPath& a, const PropagationPath& b) { return a.nodes < b.nodes; });
  return report;
}

namespace {

// Weighted modularity of an index partition, the plain definition.
double modularityOf(const Eigen::MatrixXd& w, const std::vector<int>& comm) {
  const double twoM = w.sum();
  if (twoM <= 0.0) return 0.0;
  const Eigen::VectorXd k = w.rowwise().sum();
  double q = 0.0;
  const int n = static_cast<int>(comm.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (comm[i] == comm[j]) q += w(i, j) - k(i) * k(j) / twoM;
  return q / twoM;
}

}  // namespace

ModulePartition detectModules(const CausalGraph& graph) {
  const int n = static_cast<int>(graph.nodes.size());
  std::map<std::string, int> index;
  for (int i = 0; i < n; ++i) index[graph.nodes[static_cast<std::size_t>(i)]] = i;

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : graph.edges) {
    const double weight = e.coefficient ? std::fabs(*e.coefficient) : 1.0;
    const int a = index.at(e.a), b = index.at(e.b);
    w(a, b) += weight;
    w(b, a) += weight;
  }

  std::vector<int> comm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) comm[static_cast<std::size_t>(i)] = i;

  // Greedy agglomeration: merge the label pair with the largest positive
  // modularity gain; first pair in lexicographic order wins ties.
  std::vector<int> best = comm;
  double bestQ = modularityOf(w, comm);
  for (;;) {
    std::set<int> labels(comm.begin(), comm.end());
    if (labels.size() <= 1) break;
    double topGain = 0.0;
    std::vector<int> topTrial;
    bool found = false;
    const double qNow = modularityOf(w, comm);
    for (auto ia = labels.begin(); ia != labels.end(); ++ia) {
      for (auto ib = std::next(ia); ib != labels.end(); ++ib) {
        std::vector<int> trial = comm;
        for (int& c : trial)
          if (c == *ia || c == *ib) c = std::min(*ia, *ib);
        const double gain = modularityOf(w, trial) - qNow;
        if (!found || gain > topGain + 1e-15) {
          topGain = gain;
          topTrial = std::move(trial);
          found = true;
        }
      }
    }
    if (!found || topGain <= 1e-15) break;
    comm = std::move(topTrial);
    const double q = modularityOf(w, comm);
    if (q > bestQ + 1e-15) {
      bestQ = q;
      best = comm;
    }
  }

  // Single-node refinement: move a node to an adjacent community while the
  // score improves; deterministic sweep order.
  comm = best;
  bool improved = true;
  while (improved) {
    improved = false;
    for (int v = 0; v < n; ++v) {
      std::set<int> targets;
      for (int u = 0; u < n; ++u)
        if (u != v && w(v, u) > 0.0 && comm[static_cast<std::size_t>(u)] != comm[static_cast<std::size_t>(v)])
          targets.insert(comm[static_cast<std::size_t>(u)]);
      const double qNow = modularityOf(w, comm);
      for (int t : targets) {
        std::vector<int> trial = comm;
        trial[static_cast<std::size_t>(v)] = t;
        if (modularityOf(w, trial) > qNow + 1e-12) {
          comm = std::move(trial);
          improved = true;
          break;
        }
      }
    }
  }

  ModulePartition part;
  part.quality = modularityOf(w, comm);
  std::map<int, std::vector<std::string>> groups;
  for (int i = 0; i < n; ++i)
    groups[comm[static_cast<std::size_t>(i)]].push_back(graph.nodes[static_cast<std::size_t>(i)]);
  for (auto& [label, members] : groups) {
    std::sort(members.begin(), members.end());
    part.modules.push_back(members);
  }
  std::sort(part.modules.begin(), part.modules.end());

  std::set<std::string> border;
  for (const auto& e : graph.edges) {
    if (comm[static_cast<std::size_t>(index.at(e.a))] == comm[static_cast<std::size_t>(index.at(e.b))])
      continue;
    border.insert(e.a);
    border.insert(e.b);
    part.crossEdges.push_back(e.status == EdgeStatus::Directed ? e.a + " -> " + e.b
                                                               : e.a + " -- " + e.b);
  }
  part.borderNodes.assign(border.begin(), border.end());
  std::sort(part.crossEdges.begin(), part.crossEdges.end());
  return part;
}

OutcomeAttachment attachOutcome(const CausalGraph& graph, const Dataset& data,
                                const LearnConfig& config, const AuditSink& audit) {
  if (!data.outcomeName || data.outcome.size() == 0)
    throw DataError("attach_outcome: the dataset has no outcome column");
  const std::string outcome = *data.outcomeName;
  if (graph.hasNode(outcome))
    throw DataError("attach_outcome: outcome name '" + outcome + "' collides with a graph node");
  for (const auto& node : graph.nodes)
    if (std::find(data.omics.features.begin(), data.omics.features.end(), node) ==
        data.omics.features.end())
      throw DataError("attach_outcome: graph node '" + node + "' missing from the dataset");

  // Augmented matrix: standardized omics plus the outcome as the last column.
  const Eigen::Index p = data.omics.values.cols();
  Eigen::MatrixXd cols(data.omics.values.rows(), p + 1);
  cols.leftCols(p) = data.omics.values;
  cols.col(p) = data.outcome;
  std::vector<std::string> names = data.omics.features;
  names.push_back(outcome);
  std::map<std::string, int> col;
  for (std::size_t i = 0; i < names.size(); ++i) col[names[i]] = static_cast<int>(i);
  const int yCol = static_cast<int>(p);

  OutcomeAttachment result;
  result.outcome = outcome;
  std::vector<std::string> candidates = graph.nodes;  // sorted already

  // PC-style pruning of candidate -> outcome edges against other candidates.
  for (int s = 0; s <= config.maxCondSize; ++s) {
    const std::vector<std::string> frozen = candidates;
    if (static_cast<int>(frozen.size()) - 1 < s) break;
    std::vector<std::string> removed;
    for (const auto& c : frozen) {
      if (std::find(candidates.begin(), candidates.end(), c) == candidates.end()) continue;
      std::vector<std::string> pool;
      for (const auto& o : frozen)
        if (o != c) pool.push_back(o);
      // enumerate size-s subsets of pool in lexicographic order
      std::vector<int> pick(static_cast<std::size_t>(s));
      bool gone = false;
      std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
        if (gone) return;
        if (depth == pick.size()) {
          std::vector<int> cond;
          std::vector<std::string> condNames;
          for (int idx : pick) {
            cond.push_back(col.at(pool[static_cast<std::size_t>(idx)]));
            condNames.push_back(pool[static_cast<std::size_t>(idx)]);
          }
          const CITestResult r = ciTest(cols, names, col.at(c), yCol, cond, config.alpha);
          if (audit) audit(r);
          if (r.independent) {
            gone = true;
            result.prunes.push_back({c, outcome, condNames, r.pValue});
          }
          return;
        }
        for (std::size_t i = start; i <= pool.size() - (pick.size() - depth); ++i) {
          pick[depth] = static_cast<int>(i);
          rec(i + 1, depth + 1);
          if (gone) return;
        }
      };
      if (s == 0) {
        const CITestResult r = ciTest(cols, names, col.at(c), yCol, {}, config.alpha);
        if (audit) audit(r);
        if (r.independent) {
          gone = true;
          result.prunes.push_back({c, outcome, {}, r.pValue});
        }
      } else if (pool.size() >= pick.size()) {
        rec(0, 0);
      }
      if (gone) removed.push_back(c);
    }
    for (const auto& c : removed)
      candidates.erase(std::remove(candidates.begin(), candidates.end(), c), candidates.end());
  }
  result.parents = candidates;

  // Sufficiency: every non-parent must be independent of the outcome given
  // the full parent set.
  std::vector<int> parentCols;
  for (const auto& pnode : result.parents) parentCols.push_back(col.at(pnode));
  for (const auto& z : graph.nodes) {
    if (std::find(result.parents.begin(), result.parents.end(), z) != result.parents.end())
      continue;
    const CITestResult r = ciTest(cols, names, col.at(z), yCol, parentCols, config.alpha);
    if (audit) audit(r);
    result.sufficiencyChecks.push_back(r);
    if (!r.independent) result.violations.push_back(z);
  }

  result.graph = graph;
  result.graph.nodes.push_back(outcome);
  std::sort(result.graph.nodes.begin(), result.graph.nodes.end());
  for (const auto& pnode : result.parents) {
    Edge e;
    e.a = pnode;
    e.b = outcome;
    e.status = EdgeStatus::Directed;
    result.graph.edges.push_back(std::move(e));
  }
  result.graph.sortCanonically();
  return result;
}

namespace {

void walkAvoiding(const std::map<std::string, std::vector<std::string>>& children,
                  const std::string& target, const std::string& excluded,
                  std::vector<std::string>& stack, std::vector<std::vector<std::string>>& out) {
  // By value: push_back below may reallocate the stack.
  const std::string here = stack.back();
  if (here == target) {
    if (out.size() >= kQueryPathCap)
      throw DataError("paths_avoiding: more than " + std::to_string(kQueryPathCap) +
                      " directed paths between the endpoints");
    out.push_back(stack);
    return;
  }
  for (const auto& c : children.at(here)) {
    if (c == excluded) continue;
    stack.push_back(c);
    walkAvoiding(children, target, excluded, stack, out);
    stack.pop_back();
  }
}

}  // namespace

std::vector<std::vector<std::string>> pathsAvoiding(const CausalGraph& graph,
                                                    const std::string& source,
                                                    const std::string& target,
                                                    const std::string& excluded) {
  requireNode(graph, source, "paths_avoiding");
  requireNode(graph, target, "paths_avoiding");
  requireNode(graph, excluded, "paths_avoiding");
  if (source == target || source == excluded || target == excluded)
    throw ConfigError("paths_avoiding: source, target, and excluded must be distinct");

  const auto children = graph.childrenOf();
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> stack{source};
  walkAvoiding(children, target, excluded, stack, out);
  std::sort(out.begin(), out.end());
  return out;
}

CorrelationNetwork correlationNetwork(const FeatureMatrix& omics, double threshold) {
  CorrelationNetwork net;
  net.nodes = omics.features;
  std::sort(net.nodes.begin(), net.nodes.end());

  std::vector<std::size_t> order(omics.features.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return omics.features[a] < omics.features[b];
  });

  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const Eigen::Index a = static_cast<Eigen::Index>(order[i]);
      const Eigen::Index b = static_cast<Eigen::Index>(order[j]);
      Eigen::VectorXd x = omics.values.col(a);
      Eigen::VectorXd y = omics.values.col(b);
      x.array() -= x.mean();
      y.array() -= y.mean();
      const double sx = x.norm(), sy = y.norm();
      double r = 0.0;
      if (sx > 0.0 && sy > 0.0) r = x.dot(y) / (sx * sy);
      r = std::clamp(r, -1.0, 1.0);
      if (std::fabs(r) >= threshold)
        net.edges.push_back({omics.features[order[i]], omics.features[order[j]], r});
    }
  }
  return net;
}

nlohmann::json profileReportToJson(const ProfileReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& p : r.profiles)
    rows.push_back({{"node", p.node},
                    {"out_degree", p.outDegree},
                    {"in_degree", p.inDegree},
                    {"max_blocking_step", p.maxBlockingStep},
                    {"role", nodeRoleName(p.role)}});
  return nlohmann::json{{"profiles", rows},
                        {"out_threshold", r.outThreshold},
                        {"in_threshold", r.inThreshold},
                        {"ignored_edges", r.ignoredEdges}};
}

nlohmann::json propagationToJson(const PropagationReport& r) {
  nlohmann::json paths = nlohmann::json::array();
  for (const auto& p : r.perPath)
    paths.push_back({{"path", p.nodes}, {"blocking_step", p.blockingStep}});
  return nlohmann::json{{"source", r.source},
                        {"influenced", r.influenced},
                        {"blocking_nodes", r.blockingNodes},
                        {"per_path", paths},
                        {"truncated", r.truncated}};
}

nlohmann::json modulesToJson(const ModulePartition& p) {
  return nlohmann::json{{"modules", p.modules},
                        {"border_nodes", p.borderNodes},
                        {"cross_edges", p.crossEdges},
                        {"quality", p.quality}};
}

nlohmann::json outcomeAttachmentToJson(const OutcomeAttachment& a) {
  nlohmann::json prunes = nlohmann::json::array();
  for (const auto& s : a.prunes)
    prunes.push_back({{"candidate", s.a},
                      {"outcome", s.b},
                      {"separating_set", s.separatingSet},
                      {"p_value", s.pValue}});
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : a.sufficiencyChecks) checks.push_back(ciResultToJson(c));
  return nlohmann::json{{"outcome", a.outcome},
                        {"parents", a.parents},
                        {"prunes", prunes},
                        {"sufficiency_checks", checks},
                        {"violations", a.violations}};
}

}  // namespace mrnet
