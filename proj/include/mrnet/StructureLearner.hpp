#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mrnet/Dataset.hpp"
#include "mrnet/Graph.hpp"
#include "mrnet/IvEngine.hpp"

namespace mrnet {

struct LearnConfig {
  double alpha = 0.01;
  int maxCondSize = 3;
  int minVotes = 1;
  // When set, each edge's tests at a pruning level run at alpha/m, m being
  // the number of candidate conditioning sets enumerated for that edge at
  // that level: a family-wise guard against falsely retaining edges.
  bool bonferroniPerEdge = false;
};

struct SeparationRecord {
  std::string a;
  std::string b;
  std::vector<std::string> separatingSet;  // omic nodes only, never instruments
  double pValue = 0.0;
};

// Sink for every CI test performed, in execution order; used for the
// audit log. May be empty.
using AuditSink = std::function<void(const CITestResult&)>;

struct SkeletonResult {
  std::vector<std::pair<std::string, std::string>> edges;  // a < b
  std::vector<SeparationRecord> separations;
};

// PC-style pruning: start complete over the omic nodes, then for growing
// conditioning-set sizes s = 0..maxCondSize test each surviving edge against
// subsets of the current neighbors of either endpoint. Removals apply
// between levels; iteration is lexicographic in node ids and subsets, so the
// result is deterministic. Instruments never appear in conditioning sets:
// the search space is the omic node set by construction.
SkeletonResult learnSkeleton(const FeatureMatrix& omics, const LearnConfig& config,
                             const AuditSink& audit = {});

// Vote-based orientation of one skeleton edge: every instrument allocated to
// an endpoint that passes the validity filter is one vote for that endpoint
// as the cause. One-sided votes >= minVotes direct the edge; votes on both
// sides conflict it; no votes leave it undirected.
struct OrientationOutcome {
  EdgeStatus status = EdgeStatus::Undirected;
  bool forward = true;  // for Directed: true when the first endpoint is the cause
  int votesForward = 0;
  int votesReverse = 0;
  std::vector<OrientationEvidence> evidence;
};

OrientationOutcome orientPairwise(const std::string& a, const std::string& b,
                                  const FeatureMatrix& omics, const FeatureMatrix& ivScores,
                                  const Allocation& allocation, const LearnConfig& config,
                                  const AuditSink& audit = {});

// Decision table shared by orientPairwise; exposed for property tests.
EdgeStatus voteDecision(int votesForward, int votesReverse, int minVotes, bool& forward);

// Demotes the weakest-evidence directed edge of each remaining directed
// cycle to conflicted until the graph is acyclic, appending a RepairRecord
// per demotion. Evidence strength is the smallest margin over the edge's
// passing votes: min(|z_relevance| - z_crit, z_crit - |z_exclusion|) with
// z_crit the two-sided critical value at `alpha`. Ties break lexicographically.
void repairCycles(CausalGraph& g, double alpha);

// Full pipeline: skeleton, per-edge orientation, acyclicity repair.
// Separation records are returned through `separationsOut` when non-null.
CausalGraph learnNetwork(const FeatureMatrix& omics, const FeatureMatrix& ivScores,
                         const Allocation& allocation, const LearnConfig& config,
                         const AuditSink& audit = {},
                         std::vector<SeparationRecord>* separationsOut = nullptr);

}  // namespace mrnet
