#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mrnet/Dataset.hpp"
#include "mrnet/Graph.hpp"
#include "mrnet/StructureLearner.hpp"

namespace mrnet {

enum class NodeRole { Influential, Influenced, Combined, Ordinary };

std::string nodeRoleName(NodeRole r);

struct NodeProfile {
  std::string node;
  int outDegree = 0;
  int inDegree = 0;
  int maxBlockingStep = 0;  // longest directed path out, counted in nodes influenced
  NodeRole role = NodeRole::Ordinary;
};

// Hub cutoff: degree >= max(minDegree, nearest-rank percentile of that
// degree's own distribution). Out- and in-thresholds are computed separately.
struct HubPolicy {
  int minDegree = 3;
  double percentile = 0.90;
};

struct ProfileReport {
  std::vector<NodeProfile> profiles;  // graph node order
  int outThreshold = 0;
  int inThreshold = 0;
  std::vector<std::string> ignoredEdges;  // undirected/conflicted, "A -- B"
};

// Degrees over directed edges only; blocking steps by longest-path dynamic
// programming over the DAG; roles from the hub policy.
ProfileReport nodeProfiles(const CausalGraph& graph, const HubPolicy& policy = {});

struct PropagationPath {
  std::vector<std::string> nodes;  // source ... sink
  int blockingStep = 0;            // nodes influenced along the path: size - 1
};

struct PropagationReport {
  std::string source;
  std::vector<std::string> influenced;      // exact reachability, source excluded
  std::vector<std::string> blockingNodes;   // influenced nodes with out-degree 0
  std::vector<PropagationPath> perPath;     // maximal paths, lexicographic
  bool truncated = false;                   // per-path list hit the cap
};

// Reachability is always exact; the per-path listing stops at 1e5 paths and
// sets `truncated` instead of failing.
PropagationReport propagate(const CausalGraph& graph, const std::string& source);

struct ModulePartition {
  std::vector<std::vector<std::string>> modules;  // each sorted; sorted by front
  std::vector<std::string> borderNodes;           // touch >= 2 modules
  std::vector<std::string> crossEdges;            // "A -> B" / "A -- B" across modules
  double quality = 0.0;                           // weighted modularity
};

// Deterministic greedy modularity agglomeration plus single-node refinement
// on the |coefficient|-weighted undirected projection (unit weight where a
// coefficient is missing). Quadratic in nodes; meant for tens of nodes.
ModulePartition detectModules(const CausalGraph& graph);

struct OutcomeAttachment {
  CausalGraph graph;                           // input + outcome node + parent edges
  std::string outcome;
  std::vector<std::string> parents;            // the sufficient set
  std::vector<SeparationRecord> prunes;        // candidates removed, with separators
  std::vector<CITestResult> sufficiencyChecks; // non-parent vs outcome given parents
  std::vector<std::string> violations;         // non-parents failing the check
};

// Adds the dataset's outcome as a terminal node: candidate parents are
// pruned PC-style against other candidates, survivors get directed edges
// into the outcome, and every non-parent is re-tested against the outcome
// given the full parent set.
OutcomeAttachment attachOutcome(const CausalGraph& graph, const Dataset& data,
                                const LearnConfig& config, const AuditSink& audit = {});

// All directed source -> target paths skipping `excluded`, lexicographic.
// Same 1e6 path cap and error as the effect queries.
std::vector<std::vector<std::string>> pathsAvoiding(const CausalGraph& graph,
                                                    const std::string& source,
                                                    const std::string& target,
                                                    const std::string& excluded);

struct CorrelationEdge {
  std::string a;  // a < b
  std::string b;
  double weight = 0.0;  // signed Pearson correlation
};

struct CorrelationNetwork {
  std::vector<std::string> nodes;
  std::vector<CorrelationEdge> edges;
};

// Baseline contrast to the causal graph: edge wherever |pearson| >= threshold.
CorrelationNetwork correlationNetwork(const FeatureMatrix& omics, double threshold);

nlohmann::json profileReportToJson(const ProfileReport& r);
nlohmann::json propagationToJson(const PropagationReport& r);
nlohmann::json modulesToJson(const ModulePartition& p);
nlohmann::json outcomeAttachmentToJson(const OutcomeAttachment& a);

}  // namespace mrnet
