#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrnet/Dataset.hpp"
#include "mrnet/Graph.hpp"
#include "mrnet/SynthSim.hpp"

namespace mrnet {

// A node whose parents were too collinear to fit (condition number of the
// standardized parent block above the threshold); its incoming coefficients
// are withheld.
struct FitIssue {
  std::string node;
  double conditionNumber = 0.0;
  std::string message;
};

struct FitResult {
  CausalGraph graph;  // input graph with coefficients on directed edges
  std::vector<FitIssue> issues;
};

// Least squares of each node on its directed-edge parents, on the raw
// (unstandardized) columns, intercept implicit via centering. Undirected and
// conflicted edges are never fitted.
FitResult fitCoefficients(const CausalGraph& graph, const FeatureMatrix& raw,
                          double conditionLimit = 1e10);

struct PathContribution {
  std::vector<std::string> nodes;  // source ... target
  double product = 0.0;
};

struct EffectEstimate {
  std::string source;
  std::string target;
  double total = 0.0;
  double direct = 0.0;    // coefficient of the source -> target edge, else 0
  double indirect = 0.0;  // total - direct, equals the length >= 2 path sum
  std::vector<std::string> adjustmentSet;  // parents of source
  std::vector<PathContribution> paths;     // lexicographic by node sequence
  bool partial = false;  // some source -> target route uses an excluded edge
  std::vector<std::string> excludedEdges;  // undirected/conflicted, "A -- B"
};

// Sum over all directed source -> target paths of the coefficient products.
// Requires every edge on such a path to carry a coefficient. Path count is
// capped at 1e6; beyond that is an error, never a silent truncation.
EffectEstimate totalEffect(const CausalGraph& graph, const std::string& source,
                           const std::string& target);

nlohmann::json effectEstimateToJson(const EffectEstimate& e);

// Total effects for every ordered node pair, via one dynamic-programming
// sweep per source (no path materialization, so no path cap).
// result[source][target]; absent pairs have total 0.
std::map<std::string, std::map<std::string, double>> allPairsTotalEffects(
    const CausalGraph& graph);

// Nodes with a directed path into `source` and a directed path into `target`
// that avoids `source`: the classic common-cause set.
std::vector<std::string> confounders(const CausalGraph& graph, const std::string& source,
                                     const std::string& target);

// Interior nodes of directed source -> target paths.
std::vector<std::string> mediators(const CausalGraph& graph, const std::string& source,
                                   const std::string& target);

// Ground-truth checker: paired simulations with shared draws, one with
// do(source += delta); per-node mean shift divided by delta. Exact for the
// linear SEM. delta = 0 returns all zeros.
std::map<std::string, double> interventionalOracle(const SemSpec& spec,
                                                   const std::string& source, double delta,
                                                   int nSamples, std::uint64_t seed);

}  // namespace mrnet
