#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrnet/CiEngine.hpp"

namespace mrnet {

enum class EdgeStatus { Directed, Undirected, Conflicted };

std::string edgeStatusName(EdgeStatus s);
EdgeStatus edgeStatusFromName(const std::string& name);

// One validity-filter evaluation: a vote for exposure -> (the other endpoint)
// when pass is true.
struct OrientationEvidence {
  std::string iv;
  std::string exposure;
  bool pass = false;
  CITestResult relevance;
  CITestResult exclusion;
};

// Directed edges run a -> b; undirected and conflicted edges keep a < b.
struct Edge {
  std::string a;
  std::string b;
  EdgeStatus status = EdgeStatus::Undirected;
  std::optional<double> coefficient;
  std::vector<OrientationEvidence> evidence;
  int votesForward = 0;  // votes for a -> b
  int votesReverse = 0;  // votes for b -> a

  bool touches(const std::string& x, const std::string& y) const {
    return (a == x && b == y) || (a == y && b == x);
  }
};

// A cycle-breaking demotion applied after orientation.
struct RepairRecord {
  std::string from;
  std::string to;
  double margin = 0.0;
  std::string note;
};

struct CausalGraph {
  std::vector<std::string> nodes;  // sorted lexicographically
  std::vector<Edge> edges;         // sorted by unordered endpoint pair
  std::vector<RepairRecord> repairs;

  bool hasNode(const std::string& id) const;
  const Edge* findEdge(const std::string& x, const std::string& y) const;
  Edge* findEdge(const std::string& x, const std::string& y);

  // Adjacency over directed edges only.
  std::map<std::string, std::vector<std::string>> childrenOf() const;
  std::map<std::string, std::vector<std::string>> parentsOf() const;

  // Kahn's algorithm with lexicographic tie-breaking; InternalError on a
  // cycle (the learner repairs cycles before handing a graph out).
  std::vector<std::string> topologicalOrder() const;

  void sortCanonically();
};

nlohmann::json ciResultToJson(const CITestResult& r);
CITestResult ciResultFromJson(const nlohmann::json& j);

nlohmann::json graphToJson(const CausalGraph& g);

// Parses and validates: unique nodes, known statuses, endpoints present, no
// self-loops, one edge per pair, acyclic directed subgraph. DataError on any
// violation.
CausalGraph graphFromJson(const nlohmann::json& j);

CausalGraph loadGraph(const std::string& path);

}  // namespace mrnet
