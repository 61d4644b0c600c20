#include "mrnet/Graph.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "mrnet/Errors.hpp"

namespace mrnet {

std::string edgeStatusName(EdgeStatus s) {
  switch (s) {
    case EdgeStatus::Directed: return "directed";
    case EdgeStatus::Undirected: return "undirected";
    case EdgeStatus::Conflicted: return "conflicted";
  }
  throw InternalError("unknown edge status");
}

EdgeStatus edgeStatusFromName(const std::string& name) {
  if (name == "directed") return EdgeStatus::Directed;
  if (name == "undirected") return EdgeStatus::Undirected;
  if (name == "conflicted") return EdgeStatus::Conflicted;
  throw DataError("unknown edge status '" + name + "'");
}

bool CausalGraph::hasNode(const std::string& id) const {
  return std::find(nodes.begin(), nodes.end(), id) != nodes.end();
}

const Edge* CausalGraph::findEdge(const std::string& x, const std::string& y) const {
  for (const auto& e : edges)
    if (e.touches(x, y)) return &e;
  return nullptr;
}

Edge* CausalGraph::findEdge(const std::string& x, const std::string& y) {
  for (auto& e : edges)
    if (e.touches(x, y)) return &e;
  return nullptr;
}

std::map<std::string, std::vector<std::string>> CausalGraph::childrenOf() const {
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& n : nodes) out[n];
  for (const auto& e : edges)
    if (e.status == EdgeStatus::Directed) out[e.a].push_back(e.b);
  for (auto& [k, v] : out) std::sort(v.begin(), v.end());
  return out;
}

std::map<std::string, std::vector<std::string>> CausalGraph::parentsOf() const {
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& n : nodes) out[n];
  for (const auto& e : edges)
    if (e.status == EdgeStatus::Directed) out[e.b].push_back(e.a);
  for (auto& [k, v] : out) std::sort(v.begin(), v.end());
  return out;
}

std::vector<std::string> CausalGraph::topologicalOrder() const {
  std::map<std::string, int> indeg;
  for (const auto& n : nodes) indeg[n] = 0;
  const auto children = childrenOf();
  for (const auto& e : edges)
    if (e.status == EdgeStatus::Directed) ++indeg[e.b];
  std::set<std::string> ready;
  for (const auto& [n, d] : indeg)
    if (d == 0) ready.insert(n);
  std::vector<std::string> order;
  while (!ready.empty()) {
    const std::string n = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(n);
    for (const auto& c : children.at(n))
      if (--indeg[c] == 0) ready.insert(c);
  }
  if (order.size() != nodes.size())
    throw InternalError("directed subgraph contains a cycle; repair failed");
  return order;
}

void CausalGraph::sortCanonically() {
  std::sort(nodes.begin(), nodes.end());
  for (auto& e : edges) {
    if (e.status != EdgeStatus::Directed && e.a > e.b) {
      std::swap(e.a, e.b);
      std::swap(e.votesForward, e.votesReverse);
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    const auto kx = std::minmax(x.a, x.b);
    const auto ky = std::minmax(y.a, y.b);
    return kx < ky;
  });
}

nlohmann::json ciResultToJson(const CITestResult& r) {
  return {{"x", r.x},
          {"y", r.y},
          {"cond_set", r.condSet},
          {"partial_corr", r.partialCorr},
          {"statistic", r.statistic},
          {"p_value", r.pValue},
          {"independent", r.independent},
          {"n_eff", r.nEff}};
}

CITestResult ciResultFromJson(const nlohmann::json& j) {
  CITestResult r;
  r.x = j.at("x").get<std::string>();
  r.y = j.at("y").get<std::string>();
  r.condSet = j.at("cond_set").get<std::vector<std::string>>();
  r.partialCorr = j.at("partial_corr").get<double>();
  r.statistic = j.at("statistic").get<double>();
  r.pValue = j.at("p_value").get<double>();
  r.independent = j.at("independent").get<bool>();
  r.nEff = j.at("n_eff").get<int>();
  return r;
}

namespace {

nlohmann::json evidenceToJson(const Edge& e) {
  nlohmann::json prov = nlohmann::json::array();
  for (const auto& ev : e.evidence) {
    prov.push_back({{"kind", "validity_filter"},
                    {"iv", ev.iv},
                    {"exposure", ev.exposure},
                    {"pass", ev.pass},
                    {"relevance", ciResultToJson(ev.relevance)},
                    {"exclusion", ciResultToJson(ev.exclusion)}});
  }
  prov.push_back({{"kind", "orientation_rule"},
                  {"votes_a_to_b", e.votesForward},
                  {"votes_b_to_a", e.votesReverse},
                  {"status", edgeStatusName(e.status)}});
  return prov;
}

}  // namespace

nlohmann::json graphToJson(const CausalGraph& g) {
  nlohmann::json out;
  out["nodes"] = g.nodes;
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : g.edges) {
    nlohmann::json je;
    je["a"] = e.a;
    je["b"] = e.b;
    je["status"] = edgeStatusName(e.status);
    if (e.coefficient)
      je["coefficient"] = *e.coefficient;
    else
      je["coefficient"] = nullptr;
    je["provenance"] = evidenceToJson(e);
    edges.push_back(std::move(je));
  }
  out["edges"] = std::move(edges);
  nlohmann::json repairs = nlohmann::json::array();
  for (const auto& r : g.repairs)
    repairs.push_back(
        {{"from", r.from}, {"to", r.to}, {"margin", r.margin}, {"note", r.note}});
  out["repairs"] = std::move(repairs);
  return out;
}

CausalGraph graphFromJson(const nlohmann::json& j) {
  CausalGraph g;
  if (!j.is_object() || !j.contains("nodes") || !j.contains("edges"))
    throw DataError("graph JSON: expected an object with 'nodes' and 'edges'");
  g.nodes = j.at("nodes").get<std::vector<std::string>>();
  std::set<std::string> nodeSet(g.nodes.begin(), g.nodes.end());
  if (nodeSet.size() != g.nodes.size()) throw DataError("graph JSON: duplicate node ids");
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& je : j.at("edges")) {
    Edge e;
    e.a = je.at("a").get<std::string>();
    e.b = je.at("b").get<std::string>();
    e.status = edgeStatusFromName(je.at("status").get<std::string>());
    if (e.a == e.b) throw DataError("graph JSON: self-loop on '" + e.a + "'");
    if (!nodeSet.count(e.a) || !nodeSet.count(e.b))
      throw DataError("graph JSON: edge endpoint not in node list: " + e.a + ", " + e.b);
    auto key = std::minmax(e.a, e.b);
    if (!pairs.insert(key).second)
      throw DataError("graph JSON: more than one edge between '" + key.first + "' and '" +
                      key.second + "'");
    if (je.contains("coefficient") && !je.at("coefficient").is_null())
      e.coefficient = je.at("coefficient").get<double>();
    if (je.contains("provenance")) {
      for (const auto& p : je.at("provenance")) {
        if (p.value("kind", "") == "validity_filter") {
          OrientationEvidence ev;
          ev.iv = p.at("iv").get<std::string>();
          ev.exposure = p.at("exposure").get<std::string>();
          ev.pass = p.at("pass").get<bool>();
          ev.relevance = ciResultFromJson(p.at("relevance"));
          ev.exclusion = ciResultFromJson(p.at("exclusion"));
          e.evidence.push_back(std::move(ev));
        } else if (p.value("kind", "") == "orientation_rule") {
          e.votesForward = p.at("votes_a_to_b").get<int>();
          e.votesReverse = p.at("votes_b_to_a").get<int>();
        }
      }
    }
    g.edges.push_back(std::move(e));
  }
  if (j.contains("repairs")) {
    for (const auto& r : j.at("repairs"))
      g.repairs.push_back({r.at("from").get<std::string>(), r.at("to").get<std::string>(),
                           r.at("margin").get<double>(), r.value("note", "")});
  }
  g.sortCanonically();
  try {
    g.topologicalOrder();
  } catch (const InternalError&) {
    throw DataError("graph JSON: directed subgraph contains a cycle");
  }
  return g;
}

CausalGraph loadGraph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open graph file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": invalid JSON: " + e.what());
  }
  return graphFromJson(j);
}

}  // namespace mrnet
