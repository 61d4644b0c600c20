#include "mrnet/SynthSim.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "mrnet/Errors.hpp"
#include "mrnet/Rng.hpp"

namespace mrnet {

namespace {

std::string paddedName(const std::string& prefix, int index, int count) {
  int width = 1;
  for (int c = count; c >= 10; c /= 10) ++width;
  width = std::max(width, 2);
  std::string digits = std::to_string(index + 1);
  return prefix + std::string(static_cast<std::size_t>(width) - std::min<std::size_t>(width, digits.size()), '0') + digits;
}

SemSpec buildSem(int nNodes, double expectedDegree, int nVariants, int ivsPerNode,
                 std::uint64_t seed, bool chain) {
  if (nNodes < 1) throw ConfigError("random_sem: n_nodes must be at least 1");
  if (nVariants < 1) throw ConfigError("random_sem: n_variants must be at least 1");
  if (ivsPerNode < 1) throw ConfigError("random_sem: ivs_per_node must be at least 1");
  if (static_cast<long long>(nNodes) * ivsPerNode > nVariants)
    throw ConfigError("random_sem: n_variants (" + std::to_string(nVariants) +
                      ") must cover n_nodes * ivs_per_node = " +
                      std::to_string(static_cast<long long>(nNodes) * ivsPerNode) +
                      " exclusive variants");
  const double p = nNodes > 1 ? expectedDegree / static_cast<double>(nNodes - 1) : 0.0;
  if (!chain && (p < 0.0 || p > 1.0))
    throw ConfigError("random_sem: expected_degree/(n_nodes-1) must lie in [0,1]");

  SemSpec spec;
  spec.seed = seed;
  for (int i = 0; i < nNodes; ++i) spec.nodes.push_back(paddedName("M", i, nNodes));

  Rng rng(seed);
  if (chain) {
    for (int i = 0; i + 1 < nNodes; ++i) {
      const double mag = rng.uniform(0.5, 1.5);
      const double sign = rng.uniform01() < 0.5 ? 1.0 : -1.0;
      spec.edges.push_back({spec.nodes[static_cast<std::size_t>(i)],
                            spec.nodes[static_cast<std::size_t>(i + 1)], sign * mag});
    }
  } else {
    std::vector<int> order(static_cast<std::size_t>(nNodes));
    for (int i = 0; i < nNodes; ++i) order[static_cast<std::size_t>(i)] = i;
    rng.shuffle(order);
    for (int a = 0; a < nNodes; ++a) {
      for (int b = a + 1; b < nNodes; ++b) {
        if (rng.uniform01() >= p) continue;
        const double mag = rng.uniform(0.5, 1.5);
        const double sign = rng.uniform01() < 0.5 ? 1.0 : -1.0;
        spec.edges.push_back({spec.nodes[static_cast<std::size_t>(order[static_cast<std::size_t>(a)])],
                              spec.nodes[static_cast<std::size_t>(order[static_cast<std::size_t>(b)])],
                              sign * mag});
      }
    }
    std::sort(spec.edges.begin(), spec.edges.end(), [](const SemEdge& x, const SemEdge& y) {
      return std::tie(x.from, x.to) < std::tie(y.from, y.to);
    });
  }

  for (int k = 0; k < nVariants; ++k) {
    VariantSpec v;
    v.id = paddedName("V", k, nVariants);
    v.maf = rng.uniform(0.1, 0.5);
    if (k < nNodes * ivsPerNode) {
      const int node = k / ivsPerNode;
      v.effects.push_back({spec.nodes[static_cast<std::size_t>(node)], rng.uniform(0.3, 0.8)});
    }
    spec.variants.push_back(std::move(v));
  }
  spec.validateAndOrder();
  return spec;
}

}  // namespace

double SemSpec::noiseFor(const std::string& node) const {
  auto it = noiseSd.find(node);
  return it == noiseSd.end() ? 1.0 : it->second;
}

std::vector<std::array<std::string, 3>> SemSpec::pleiotropyTriples() const {
  std::vector<std::array<std::string, 3>> out;
  for (const auto& v : variants)
    for (std::size_t i = 0; i < v.effects.size(); ++i)
      for (std::size_t j = i + 1; j < v.effects.size(); ++j)
        out.push_back({v.id, v.effects[i].node, v.effects[j].node});
  return out;
}

std::vector<std::string> SemSpec::validateAndOrder() const {
  std::set<std::string> nodeSet(nodes.begin(), nodes.end());
  if (nodeSet.size() != nodes.size()) throw ConfigError("sem spec: duplicate node ids");
  std::set<std::string> variantSet;
  for (const auto& v : variants) {
    if (!variantSet.insert(v.id).second)
      throw ConfigError("sem spec: duplicate variant id '" + v.id + "'");
    if (nodeSet.count(v.id)) throw ConfigError("sem spec: variant id '" + v.id + "' collides with a node");
    if (!(v.maf > 0.0 && v.maf <= 0.5))
      throw ConfigError("sem spec: maf for '" + v.id + "' must lie in (0, 0.5]");
    for (const auto& ef : v.effects)
      if (!nodeSet.count(ef.node))
        throw ConfigError("sem spec: variant '" + v.id + "' targets unknown node '" + ef.node + "'");
  }
  for (const auto& [node, sd] : noiseSd) {
    if (!nodeSet.count(node)) throw ConfigError("sem spec: noise_sd names unknown node '" + node + "'");
    if (!(sd > 0.0)) throw ConfigError("sem spec: noise_sd for '" + node + "' must be positive");
  }
  std::map<std::string, int> indeg;
  std::map<std::string, std::vector<std::string>> children;
  for (const auto& n : nodes) {
    indeg[n] = 0;
    children[n];
  }
  std::set<std::pair<std::string, std::string>> seenEdges;
  for (const auto& e : edges) {
    if (!nodeSet.count(e.from) || !nodeSet.count(e.to))
      throw ConfigError("sem spec: edge endpoint not in node list: " + e.from + " -> " + e.to);
    if (e.from == e.to) throw ConfigError("sem spec: self-loop on '" + e.from + "'");
    if (!seenEdges.insert({e.from, e.to}).second)
      throw ConfigError("sem spec: duplicate edge " + e.from + " -> " + e.to);
    children[e.from].push_back(e.to);
    ++indeg[e.to];
  }
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
  if (order.size() != nodes.size()) throw ConfigError("sem spec: edges contain a cycle");
  return order;
}

SemSpec randomSem(int nNodes, double expectedDegree, int nVariants, int ivsPerNode,
                  std::uint64_t seed) {
  return buildSem(nNodes, expectedDegree, nVariants, ivsPerNode, seed, false);
}

SemSpec chainSem(int nNodes, int nVariants, int ivsPerNode, std::uint64_t seed) {
  return buildSem(nNodes, 0.0, nVariants, ivsPerNode, seed, true);
}

namespace {

Dataset simulateCore(const SemSpec& spec, int nSamples, std::uint64_t seed,
                     const std::string* shiftNode, double delta) {
  if (nSamples < 10) throw ConfigError("simulate: n_samples must be at least 10");
  const std::vector<std::string> order = spec.validateAndOrder();
  const Eigen::Index n = nSamples;

  Dataset ds;
  for (int i = 0; i < nSamples; ++i) ds.genotype.samples.push_back(paddedName("S", i, nSamples));

  Rng root(seed);
  Rng genoRng = root.child(1);
  Rng noiseRng = root.child(2);

  const Eigen::Index nv = static_cast<Eigen::Index>(spec.variants.size());
  ds.genotype.values.resize(n, nv);
  for (Eigen::Index j = 0; j < nv; ++j) {
    ds.genotype.variants.push_back(spec.variants[static_cast<std::size_t>(j)].id);
    const double maf = spec.variants[static_cast<std::size_t>(j)].maf;
    for (Eigen::Index i = 0; i < n; ++i)
      ds.genotype.values(i, j) = static_cast<double>(genoRng.binomial2(maf));
  }

  std::map<std::string, Eigen::Index> nodeCol;
  for (std::size_t k = 0; k < spec.nodes.size(); ++k)
    nodeCol[spec.nodes[k]] = static_cast<Eigen::Index>(k);
  std::map<std::string, Eigen::Index> variantCol;
  for (Eigen::Index j = 0; j < nv; ++j)
    variantCol[spec.variants[static_cast<std::size_t>(j)].id] = j;

  Eigen::MatrixXd raw(n, static_cast<Eigen::Index>(spec.nodes.size()));
  for (const auto& node : order) {
    const Eigen::Index c = nodeCol.at(node);
    Eigen::VectorXd col(n);
    const double sd = spec.noiseFor(node);
    for (Eigen::Index i = 0; i < n; ++i) col(i) = noiseRng.normal(0.0, sd);
    for (const auto& e : spec.edges)
      if (e.to == node) col += e.coefficient * raw.col(nodeCol.at(e.from));
    for (const auto& v : spec.variants)
      for (const auto& ef : v.effects)
        if (ef.node == node) col += ef.beta * ds.genotype.values.col(variantCol.at(v.id));
    if (shiftNode && node == *shiftNode) col.array() += delta;
    raw.col(c) = col;
  }

  ds.omicsRaw.samples = ds.genotype.samples;
  ds.omicsRaw.features = spec.nodes;
  ds.omicsRaw.values = std::move(raw);
  ds.omics = standardize(ds.omicsRaw);
  return ds;
}

}  // namespace

Dataset simulate(const SemSpec& spec, int nSamples, std::uint64_t seed) {
  return simulateCore(spec, nSamples, seed, nullptr, 0.0);
}

Dataset simulateShifted(const SemSpec& spec, int nSamples, std::uint64_t seed,
                        const std::string& source, double delta) {
  bool known = false;
  for (const auto& n : spec.nodes) known = known || n == source;
  if (!known) throw ConfigError("simulate_shifted: unknown node '" + source + "'");
  return simulateCore(spec, nSamples, seed, &source, delta);
}

CausalGraph truthGraph(const SemSpec& spec) {
  CausalGraph g;
  g.nodes = spec.nodes;
  for (const auto& e : spec.edges) {
    Edge edge;
    edge.a = e.from;
    edge.b = e.to;
    edge.status = EdgeStatus::Directed;
    edge.coefficient = e.coefficient;
    g.edges.push_back(std::move(edge));
  }
  g.sortCanonically();
  return g;
}

RecoveryScore scoreRecovery(const SemSpec& truth, const CausalGraph& learned) {
  std::vector<std::string> truthNodes = truth.nodes;
  std::vector<std::string> learnedNodes = learned.nodes;
  std::sort(truthNodes.begin(), truthNodes.end());
  std::sort(learnedNodes.begin(), learnedNodes.end());
  if (truthNodes != learnedNodes)
    throw DataError("score_recovery: learned graph and truth disagree on the node universe");

  std::map<std::pair<std::string, std::string>, std::pair<std::string, std::string>> truthDir;
  for (const auto& e : truth.edges) truthDir[std::minmax(e.from, e.to)] = {e.from, e.to};

  std::set<std::pair<std::string, std::string>> learnedPairs;
  for (const auto& e : learned.edges) learnedPairs.insert(std::minmax(e.a, e.b));

  int tp = 0;
  for (const auto& pr : learnedPairs)
    if (truthDir.count(pr)) ++tp;

  RecoveryScore s;
  const std::size_t nl = learnedPairs.size(), nt = truthDir.size();
  s.skeletonPrecision = nl == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(nl);
  s.skeletonRecall = nt == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(nt);
  s.skeletonF1 = (s.skeletonPrecision + s.skeletonRecall) > 0.0
                     ? 2.0 * s.skeletonPrecision * s.skeletonRecall /
                           (s.skeletonPrecision + s.skeletonRecall)
                     : 0.0;

  int emitted = 0, correct = 0;
  for (const auto& e : learned.edges) {
    if (e.status != EdgeStatus::Directed) continue;
    auto it = truthDir.find(std::minmax(e.a, e.b));
    if (it == truthDir.end()) continue;
    ++emitted;
    if (it->second == std::make_pair(e.a, e.b)) ++correct;
  }
  s.orientationAccuracy =
      emitted == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(emitted);

  // SHD: one operation per pair present on exactly one side, plus one per
  // shared pair whose orientation pattern differs (conflicted ~ undirected).
  int shd = 0;
  std::set<std::pair<std::string, std::string>> all;
  for (const auto& [pr, dir] : truthDir) all.insert(pr);
  for (const auto& pr : learnedPairs) all.insert(pr);
  for (const auto& pr : all) {
    const bool inTruth = truthDir.count(pr) > 0;
    const bool inLearned = learnedPairs.count(pr) > 0;
    if (inTruth != inLearned) {
      ++shd;
      continue;
    }
    const Edge* e = learned.findEdge(pr.first, pr.second);
    if (e->status != EdgeStatus::Directed ||
        truthDir.at(pr) != std::make_pair(e->a, e->b))
      ++shd;
  }
  s.shd = shd;
  return s;
}

nlohmann::json recoveryToJson(const RecoveryScore& s) {
  return {{"skeleton_precision", s.skeletonPrecision},
          {"skeleton_recall", s.skeletonRecall},
          {"skeleton_f1", s.skeletonF1},
          {"orientation_accuracy", s.orientationAccuracy},
          {"shd", s.shd}};
}

nlohmann::json semSpecToJson(const SemSpec& spec) {
  nlohmann::json out;
  out["nodes"] = spec.nodes;
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : spec.edges)
    edges.push_back({{"from", e.from}, {"to", e.to}, {"coefficient", e.coefficient}});
  out["edges"] = std::move(edges);
  out["noise_sd"] = spec.noiseSd;
  nlohmann::json variants = nlohmann::json::array();
  for (const auto& v : spec.variants) {
    nlohmann::json effects = nlohmann::json::array();
    for (const auto& ef : v.effects) effects.push_back({{"node", ef.node}, {"beta", ef.beta}});
    variants.push_back({{"id", v.id}, {"maf", v.maf}, {"effects", std::move(effects)}});
  }
  out["variants"] = std::move(variants);
  nlohmann::json triples = nlohmann::json::array();
  for (const auto& t : spec.pleiotropyTriples()) triples.push_back({t[0], t[1], t[2]});
  out["pleiotropy_triples"] = std::move(triples);
  out["seed"] = spec.seed;
  return out;
}

SemSpec semSpecFromJson(const nlohmann::json& j) {
  SemSpec spec;
  spec.nodes = j.at("nodes").get<std::vector<std::string>>();
  for (const auto& e : j.at("edges"))
    spec.edges.push_back({e.at("from").get<std::string>(), e.at("to").get<std::string>(),
                          e.at("coefficient").get<double>()});
  if (j.contains("noise_sd"))
    spec.noiseSd = j.at("noise_sd").get<std::map<std::string, double>>();
  for (const auto& v : j.at("variants")) {
    VariantSpec vs;
    vs.id = v.at("id").get<std::string>();
    vs.maf = v.at("maf").get<double>();
    for (const auto& ef : v.at("effects"))
      vs.effects.push_back({ef.at("node").get<std::string>(), ef.at("beta").get<double>()});
    spec.variants.push_back(std::move(vs));
  }
  spec.seed = j.at("seed").get<std::uint64_t>();
  spec.validateAndOrder();
  return spec;
}

SemSpec loadSemSpec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open sem spec: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": invalid JSON: " + e.what());
  }
  try {
    return semSpecFromJson(j);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": invalid sem spec: " + e.what());
  }
}

}  // namespace mrnet
