// mrnet: causal-network discovery from genotype-anchored omics.
// Subcommands: simulate, ivgen, learn, effects, analyze, score, export.
// Exit codes: 0 success, 1 data/config error, 2 internal invariant violation.
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mrnet/Analytics.hpp"
#include "mrnet/Csv.hpp"
#include "mrnet/Dataset.hpp"
#include "mrnet/Effects.hpp"
#include "mrnet/Errors.hpp"
#include "mrnet/Graph.hpp"
#include "mrnet/GraphExport.hpp"
#include "mrnet/IvEngine.hpp"
#include "mrnet/Manifest.hpp"
#include "mrnet/RunConfig.hpp"
#include "mrnet/StructureLearner.hpp"
#include "mrnet/SynthSim.hpp"
#include "mrnet/Version.hpp"

namespace {

using namespace mrnet;
using nlohmann::json;

FeatureMatrix loadFeatureCsv(const std::string& path) {
  const CsvTable table = readCsv(path);
  if (table.header.empty() || table.header[0] != "sample_id")
    throw DataError(path + ": first column must be sample_id");
  FeatureMatrix m;
  m.features.assign(table.header.begin() + 1, table.header.end());
  m.values.resize(static_cast<Eigen::Index>(table.rows.size()),
                  static_cast<Eigen::Index>(m.features.size()));
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    m.samples.push_back(table.rows[i][0]);
    for (std::size_t j = 0; j < m.features.size(); ++j)
      m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          parseDoubleCell(table.rows[i][j + 1], path, i + 2, m.features[j]);
  }
  return m;
}

// Omics-only dataset with a designated outcome column, for outcome
// attachment. The genotype block stays empty.
Dataset loadOmicsWithOutcome(const std::string& path, const std::string& outcomeName) {
  const FeatureMatrix raw = loadFeatureCsv(path);
  auto it = std::find(raw.features.begin(), raw.features.end(), outcomeName);
  if (it == raw.features.end())
    throw DataError(path + ": outcome column '" + outcomeName + "' not found");
  const Eigen::Index idx = static_cast<Eigen::Index>(it - raw.features.begin());

  Dataset ds;
  ds.outcomeName = outcomeName;
  ds.outcomeRaw = raw.values.col(idx);
  ds.omicsRaw.samples = raw.samples;
  ds.omicsRaw.values.resize(raw.values.rows(), raw.values.cols() - 1);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < raw.values.cols(); ++j) {
    if (j == idx) continue;
    ds.omicsRaw.features.push_back(raw.features[static_cast<std::size_t>(j)]);
    ds.omicsRaw.values.col(k++) = raw.values.col(j);
  }
  const double mean = ds.outcomeRaw.mean();
  const double sd = std::sqrt((ds.outcomeRaw.array() - mean).square().sum() /
                              static_cast<double>(ds.outcomeRaw.size() - 1));
  if (!(sd > 0.0))
    throw DataError(path + ": outcome column '" + outcomeName + "' has zero variance");
  ds.outcome = (ds.outcomeRaw.array() - mean) / sd;
  ds.omics = standardize(ds.omicsRaw);
  return ds;
}

void ensureDir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory '" + dir + "': " + ec.message());
}

void writeJsonAtomic(const std::string& path, const json& j) {
  writeFileAtomic(path, j.dump(2) + "\n");
}

void requireSameSamples(const FeatureMatrix& a, const std::string& aPath, const FeatureMatrix& b,
                        const std::string& bPath) {
  if (a.samples == b.samples) return;
  throw DataError(aPath + " and " + bPath +
                  " must carry identical sample ids in identical order");
}

LearnConfig learnConfigOf(const RunConfig& rc) {
  LearnConfig lc;
  lc.alpha = rc.alpha;
  lc.maxCondSize = rc.maxCondSize;
  lc.minVotes = rc.minVotes;
  lc.bonferroniPerEdge = rc.bonferroniPerEdge;
  return lc;
}

// ---- subcommand bodies -------------------------------------------------

void runSimulate(const RunConfig& rc, int nodes, double degree, int variants, int ivsPerNode,
                 int samples, bool chain, const std::string& outDir) {
  const int nv = variants > 0 ? variants : nodes * ivsPerNode;
  const SemSpec spec = chain ? chainSem(nodes, nv, ivsPerNode, rc.seed)
                             : randomSem(nodes, degree, nv, ivsPerNode, rc.seed);
  const Dataset ds = simulate(spec, samples, rc.seed);

  ensureDir(outDir);
  writeFileAtomic(outDir + "/genotype.csv", genotypeCsv(ds.genotype));
  writeFileAtomic(outDir + "/omics.csv", featureCsv(ds.omicsRaw));
  writeJsonAtomic(outDir + "/truth.json", semSpecToJson(spec));

  json cfg = runConfigToJson(rc);
  cfg["nodes"] = nodes;
  cfg["degree"] = degree;
  cfg["variants"] = nv;
  cfg["ivs_per_node"] = ivsPerNode;
  cfg["samples"] = samples;
  cfg["chain"] = chain;
  writeManifest(outDir, buildManifest("simulate", cfg, {},
                                      {"genotype.csv", "omics.csv", "truth.json"}));
  std::cout << "simulate: " << spec.nodes.size() << " nodes, " << spec.edges.size()
            << " edges, " << spec.variants.size() << " variants, " << samples
            << " samples -> " << outDir << "\n";
}

void runIvgen(const RunConfig& rc, const std::string& genotypePath, const std::string& omicsPath,
              const std::string& outDir) {
  const Dataset ds = loadDataset(genotypePath, omicsPath);
  for (const auto& s : ds.drops.droppedSamples)
    std::cerr << "warning: sample '" << s << "' outside the id intersection, dropped\n";
  for (const auto& v : ds.drops.droppedVariants)
    std::cerr << "warning: variant '" << v << "' constant after imputation, dropped\n";

  const InstrumentSet ivs = generateIvs(ds.genotype, rc.maxIvs, rc.minExplainedVariance);
  const Allocation alloc = allocate(ivs, ds.omics, rc.fThreshold, rc.maxPerComponent);

  ensureDir(outDir);
  writeFileAtomic(outDir + "/iv_scores.csv", featureCsv(ivs.scoreMatrix()));

  json byComponent = json::object();
  for (const auto& [component, entries] : alloc.byComponent) {
    json list = json::array();
    for (const auto& e : entries)
      list.push_back({{"iv", e.iv}, {"f_statistic", e.fStatistic}, {"r_squared", e.rSquared}});
    byComponent[component] = list;
  }
  json loadings = json::object();
  for (std::size_t j = 0; j < ivs.ivIds.size(); ++j) {
    json column = json::array();
    for (Eigen::Index i = 0; i < ivs.loadings.rows(); ++i)
      column.push_back(ivs.loadings(i, static_cast<Eigen::Index>(j)));
    loadings[ivs.ivIds[j]] = column;
  }
  writeJsonAtomic(outDir + "/allocation.json",
                  json{{"by_component", byComponent},
                       {"uncovered", alloc.uncovered},
                       {"iv_ids", ivs.ivIds},
                       {"variant_ids", ivs.variantIds},
                       {"explained_variance", ivs.explainedVariance},
                       {"eigenvalues", ivs.eigenvalues},
                       {"loadings", loadings}});

  writeManifest(outDir,
                buildManifest("ivgen", runConfigToJson(rc),
                              {{"genotype", genotypePath}, {"omics", omicsPath}},
                              {"iv_scores.csv", "allocation.json"}));
  std::cout << "ivgen: " << ivs.ivIds.size() << " instruments, " << alloc.byComponent.size()
            << "/" << ds.omics.features.size() << " components covered -> " << outDir << "\n";
}

void runLearn(const RunConfig& rc, const std::string& datasetPath, const std::string& ivsPath,
              const std::string& outDir) {
  const FeatureMatrix omicsRaw = loadFeatureCsv(datasetPath);
  const FeatureMatrix omics = standardize(omicsRaw);
  const FeatureMatrix ivScores = loadFeatureCsv(ivsPath);
  requireSameSamples(omics, datasetPath, ivScores, ivsPath);

  const Allocation alloc = allocate(ivScores, omics, rc.fThreshold, rc.maxPerComponent);
  for (const auto& u : alloc.uncovered)
    std::cerr << "warning: component '" << u
              << "' has no instrument above the F threshold; its edges can only be "
                 "oriented from the other side\n";

  std::ostringstream audit;
  const AuditSink sink = [&](const CITestResult& r) { audit << ciResultToJson(r).dump() << "\n"; };
  std::vector<SeparationRecord> separations;
  const CausalGraph graph =
      learnNetwork(omics, ivScores, alloc, learnConfigOf(rc), sink, &separations);

  ensureDir(outDir);
  writeJsonAtomic(outDir + "/graph.json", graphToJson(graph));
  json seps = json::array();
  for (const auto& s : separations)
    seps.push_back({{"a", s.a}, {"b", s.b}, {"separating_set", s.separatingSet},
                    {"p_value", s.pValue}});
  writeJsonAtomic(outDir + "/separations.json", seps);
  writeFileAtomic(outDir + "/audit.jsonl", audit.str());

  writeManifest(outDir, buildManifest("learn", runConfigToJson(rc),
                                      {{"dataset", datasetPath}, {"ivs", ivsPath}},
                                      {"graph.json", "separations.json", "audit.jsonl"}));

  int directed = 0, undirected = 0, conflicted = 0;
  for (const auto& e : graph.edges) {
    if (e.status == EdgeStatus::Directed) ++directed;
    if (e.status == EdgeStatus::Undirected) ++undirected;
    if (e.status == EdgeStatus::Conflicted) ++conflicted;
  }
  std::cout << "learn: " << graph.nodes.size() << " nodes, " << directed << " directed / "
            << undirected << " undirected / " << conflicted << " conflicted edges, "
            << graph.repairs.size() << " repairs -> " << outDir << "\n";
}

void runEffects(const RunConfig& rc, const std::string& graphPath, const std::string& datasetPath,
                const std::string& source, const std::string& target, bool allPairs,
                const std::string& outDir) {
  const CausalGraph graph = loadGraph(graphPath);
  const FeatureMatrix raw = loadFeatureCsv(datasetPath);
  const FitResult fit = fitCoefficients(graph, raw);
  for (const auto& issue : fit.issues) std::cerr << "warning: " << issue.message << "\n";

  if (allPairs) {
    const auto totals = allPairsTotalEffects(fit.graph);
    std::ostringstream csv;
    csv << "source";
    for (const auto& n : fit.graph.nodes) csv << ',' << n;
    csv << '\n';
    for (const auto& s : fit.graph.nodes) {
      csv << s;
      for (const auto& t : fit.graph.nodes) {
        double v = s == t ? 1.0 : 0.0;  // identity path: a do-shift moves the node itself
        const auto& row = totals.at(s);
        const auto itv = row.find(t);
        if (itv != row.end()) v = itv->second;
        csv << ',' << formatDouble(v);
      }
      csv << '\n';
    }
    ensureDir(outDir);
    writeFileAtomic(outDir + "/total_effects.csv", csv.str());
    writeManifest(outDir, buildManifest("effects", runConfigToJson(rc),
                                        {{"graph", graphPath}, {"dataset", datasetPath}},
                                        {"total_effects.csv"}));
    std::cout << "effects: total-effect matrix over " << fit.graph.nodes.size()
              << " nodes -> " << outDir << "/total_effects.csv\n";
    return;
  }

  const EffectEstimate est = totalEffect(fit.graph, source, target);
  json j = effectEstimateToJson(est);
  if (!fit.issues.empty()) {
    json issues = json::array();
    for (const auto& issue : fit.issues) issues.push_back(issue.message);
    j["fit_issues"] = issues;
  }
  std::cout << j.dump(2) << "\n";
  if (!outDir.empty()) {
    ensureDir(outDir);
    writeJsonAtomic(outDir + "/effect.json", j);
    writeManifest(outDir, buildManifest("effects", runConfigToJson(rc),
                                        {{"graph", graphPath}, {"dataset", datasetPath}},
                                        {"effect.json"}));
  }
}

void runAnalyze(const RunConfig& rc, const std::string& graphPath,
                const std::string& datasetPath, const std::string& propagateNode,
                bool modulesFlag, const std::string& outcomeName, const std::string& outDir) {
  const CausalGraph graph = loadGraph(graphPath);
  ensureDir(outDir);
  std::vector<std::string> outputs;

  HubPolicy policy;
  policy.minDegree = rc.hubMinDegree;
  policy.percentile = rc.hubPercentile;
  const ProfileReport report = nodeProfiles(graph, policy);
  for (const auto& e : report.ignoredEdges)
    std::cerr << "warning: edge " << e << " is not directed; ignored in degree metrics\n";
  std::ostringstream csv;
  csv << "node,out_degree,in_degree,max_blocking_step,role\n";
  for (const auto& p : report.profiles)
    csv << p.node << ',' << p.outDegree << ',' << p.inDegree << ',' << p.maxBlockingStep << ','
        << nodeRoleName(p.role) << '\n';
  writeFileAtomic(outDir + "/node_profiles.csv", csv.str());
  outputs.push_back("node_profiles.csv");

  writeFileAtomic(outDir + "/graph.dot", toDot(graph));
  writeFileAtomic(outDir + "/graph.graphml", toGraphml(graph));
  outputs.push_back("graph.dot");
  outputs.push_back("graph.graphml");

  if (!propagateNode.empty()) {
    const PropagationReport prop = propagate(graph, propagateNode);
    if (prop.truncated)
      std::cerr << "warning: per-path listing truncated at the cap; reachability stays exact\n";
    writeJsonAtomic(outDir + "/propagation.json", propagationToJson(prop));
    outputs.push_back("propagation.json");
  }

  if (modulesFlag) {
    writeJsonAtomic(outDir + "/modules.json", modulesToJson(detectModules(graph)));
    outputs.push_back("modules.json");
  }

  if (!outcomeName.empty()) {
    if (datasetPath.empty())
      throw ConfigError("analyze: --outcome requires --dataset for the CI tests");
    const Dataset ds = loadOmicsWithOutcome(datasetPath, outcomeName);
    const OutcomeAttachment attach = attachOutcome(graph, ds, learnConfigOf(rc));
    for (const auto& v : attach.violations)
      std::cerr << "warning: '" << v
                << "' stays dependent on the outcome given the parent set\n";
    json j = outcomeAttachmentToJson(attach);
    j["graph"] = graphToJson(attach.graph);
    writeJsonAtomic(outDir + "/outcome_attachment.json", j);
    outputs.push_back("outcome_attachment.json");
  }

  std::map<std::string, std::string> inputs{{"graph", graphPath}};
  if (!datasetPath.empty()) inputs["dataset"] = datasetPath;
  writeManifest(outDir, buildManifest("analyze", runConfigToJson(rc), inputs, outputs));
  std::cout << "analyze: hub thresholds out >= " << report.outThreshold << ", in >= "
            << report.inThreshold << "; wrote " << outputs.size() << " files -> " << outDir
            << "\n";
}

void runScore(const std::string& truthPath, const std::string& graphPath) {
  const SemSpec truth = loadSemSpec(truthPath);
  const CausalGraph learned = loadGraph(graphPath);
  std::cout << recoveryToJson(scoreRecovery(truth, learned)).dump(2) << "\n";
}

void runExport(const std::string& graphPath, const std::string& format,
               const std::string& outPath) {
  const CausalGraph graph = loadGraph(graphPath);
  std::string content;
  if (format == "dot") {
    content = toDot(graph);
  } else if (format == "graphml") {
    content = toGraphml(graph);
  } else if (format == "json") {
    content = graphToJson(graph).dump(2) + "\n";
  } else {
    throw ConfigError("export: unknown format '" + format + "' (expected dot|graphml|json)");
  }
  if (outPath.empty())
    std::cout << content;
  else
    writeFileAtomic(outPath, content);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"causal-network discovery from genotype-anchored omics"};
  app.set_version_flag("--version", std::string("mrnet ") + kVersion);
  app.require_subcommand(1);

  // Every subcommand accepts --config (flat key=value file) and --threads;
  // explicit flags override file values.
  struct Common {
    std::string configPath;
    int threads = 0;
    RunConfig resolve(CLI::App* sub) const {
      RunConfig rc = configPath.empty() ? RunConfig{} : parseConfigFile(configPath);
      if (threads > 0) rc.threads = threads;
      (void)sub;
      return rc;
    }
  };

  auto addCommon = [](CLI::App* sub, Common& c) {
    sub->add_option("--config", c.configPath, "flat key=value config file");
    sub->add_option("--threads", c.threads, "worker cap (single worker used)");
  };

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate a ground-truth SEM and sample it");
  Common simCommon;
  int simNodes = 0, simVariants = 0, simIvsPerNode = 3, simSamples = 0;
  double simDegree = 2.0;
  std::uint64_t simSeed = 0;
  bool simChain = false;
  std::string simOut;
  sim->add_option("--nodes", simNodes, "number of omic nodes")->required();
  sim->add_option("--degree", simDegree, "expected degree of the random DAG");
  sim->add_option("--variants", simVariants, "genetic variants (default nodes * ivs-per-node)");
  sim->add_option("--ivs-per-node", simIvsPerNode, "exclusive variants per node");
  sim->add_option("--samples", simSamples, "sample count")->required();
  sim->add_option("--seed", simSeed, "root seed");
  sim->add_flag("--chain", simChain, "fixed chain M1 -> M2 -> ... instead of a random DAG");
  sim->add_option("--out", simOut, "output directory")->required();
  addCommon(sim, simCommon);
  sim->callback([&] {
    RunConfig rc = simCommon.resolve(sim);
    if (sim->count("--seed")) rc.seed = simSeed;
    runSimulate(rc, simNodes, simDegree, simVariants, simIvsPerNode, simSamples, simChain,
                simOut);
  });

  // ivgen
  auto* ivg = app.add_subcommand("ivgen", "derive instruments from the genotype matrix");
  Common ivgCommon;
  std::string ivgGenotype, ivgOmics, ivgOut;
  int ivgMaxIvs = 0, ivgMaxPerComponent = 0;
  double ivgFThreshold = -1.0, ivgMinEv = -1.0;
  ivg->add_option("--genotype", ivgGenotype, "genotype CSV")->required();
  ivg->add_option("--omics", ivgOmics, "omics CSV")->required();
  ivg->add_option("--max-ivs", ivgMaxIvs, "instrument cap");
  ivg->add_option("--f-threshold", ivgFThreshold, "minimum F statistic for allocation");
  ivg->add_option("--min-explained-variance", ivgMinEv, "per-component variance floor");
  ivg->add_option("--max-per-component", ivgMaxPerComponent, "instruments kept per component");
  ivg->add_option("--out", ivgOut, "output directory")->required();
  addCommon(ivg, ivgCommon);
  ivg->callback([&] {
    RunConfig rc = ivgCommon.resolve(ivg);
    if (ivg->count("--max-ivs")) rc.maxIvs = ivgMaxIvs;
    if (ivg->count("--f-threshold")) rc.fThreshold = ivgFThreshold;
    if (ivg->count("--min-explained-variance")) rc.minExplainedVariance = ivgMinEv;
    if (ivg->count("--max-per-component")) rc.maxPerComponent = ivgMaxPerComponent;
    runIvgen(rc, ivgGenotype, ivgOmics, ivgOut);
  });

  // learn
  auto* lrn = app.add_subcommand("learn", "learn the causal network");
  Common lrnCommon;
  std::string lrnDataset, lrnIvs, lrnOut;
  double lrnAlpha = -1.0, lrnFThreshold = -1.0;
  int lrnMaxCond = -1, lrnMinVotes = 0, lrnMaxPerComponent = 0;
  bool lrnBonferroni = false;
  lrn->add_option("--dataset", lrnDataset, "omics CSV")->required();
  lrn->add_option("--ivs", lrnIvs, "instrument score CSV from ivgen")->required();
  lrn->add_option("--alpha", lrnAlpha, "CI test level");
  lrn->add_option("--max-cond-size", lrnMaxCond, "largest conditioning set");
  lrn->add_option("--f-threshold", lrnFThreshold, "minimum F statistic for allocation");
  lrn->add_option("--max-per-component", lrnMaxPerComponent, "instruments kept per component");
  lrn->add_option("--min-votes", lrnMinVotes, "votes needed to direct an edge");
  lrn->add_flag("--bonferroni-per-edge", lrnBonferroni, "divide alpha by the per-edge test count");
  lrn->add_option("--out", lrnOut, "output directory")->required();
  addCommon(lrn, lrnCommon);
  lrn->callback([&] {
    RunConfig rc = lrnCommon.resolve(lrn);
    if (lrn->count("--alpha")) rc.alpha = lrnAlpha;
    if (lrn->count("--max-cond-size")) rc.maxCondSize = lrnMaxCond;
    if (lrn->count("--f-threshold")) rc.fThreshold = lrnFThreshold;
    if (lrn->count("--max-per-component")) rc.maxPerComponent = lrnMaxPerComponent;
    if (lrn->count("--min-votes")) rc.minVotes = lrnMinVotes;
    if (lrn->count("--bonferroni-per-edge")) rc.bonferroniPerEdge = lrnBonferroni;
    runLearn(rc, lrnDataset, lrnIvs, lrnOut);
  });

  // effects
  auto* eff = app.add_subcommand("effects", "fit coefficients and query effects");
  Common effCommon;
  std::string effGraph, effDataset, effSource, effTarget, effOut;
  bool effAllPairs = false;
  eff->add_option("--graph", effGraph, "graph JSON")->required();
  eff->add_option("--dataset", effDataset, "omics CSV (raw scale)")->required();
  eff->add_option("--source", effSource, "source node");
  eff->add_option("--target", effTarget, "target node");
  eff->add_flag("--all-pairs", effAllPairs, "write the full total-effect matrix");
  eff->add_option("--out", effOut, "output directory (default: current directory for --all-pairs)");
  addCommon(eff, effCommon);
  eff->callback([&] {
    RunConfig rc = effCommon.resolve(eff);
    const bool pair = !effSource.empty() || !effTarget.empty();
    if (effAllPairs == pair)
      throw ConfigError("effects: pass either --source with --target, or --all-pairs");
    if (pair && (effSource.empty() || effTarget.empty()))
      throw ConfigError("effects: --source and --target go together");
    runEffects(rc, effGraph, effDataset, effSource, effTarget, effAllPairs,
               effAllPairs && effOut.empty() ? std::string(".") : effOut);
  });

  // analyze
  auto* ana = app.add_subcommand("analyze", "network analytics and exports");
  Common anaCommon;
  std::string anaGraph, anaDataset, anaPropagate, anaOutcome, anaOut = ".";
  bool anaModules = false;
  double anaAlpha = -1.0, anaHubPercentile = -1.0;
  int anaMaxCond = -1, anaHubMinDegree = 0;
  ana->add_option("--graph", anaGraph, "graph JSON")->required();
  ana->add_option("--dataset", anaDataset, "omics CSV (needed for --outcome)");
  ana->add_option("--propagate", anaPropagate, "propagation report for this node");
  ana->add_flag("--modules", anaModules, "module partition");
  ana->add_option("--outcome", anaOutcome, "attach this outcome column");
  ana->add_option("--alpha", anaAlpha, "CI test level for --outcome");
  ana->add_option("--max-cond-size", anaMaxCond, "largest conditioning set for --outcome");
  ana->add_option("--hub-min-degree", anaHubMinDegree, "hub degree floor");
  ana->add_option("--hub-percentile", anaHubPercentile, "hub percentile cut");
  ana->add_option("--out", anaOut, "output directory (default: current directory)");
  addCommon(ana, anaCommon);
  ana->callback([&] {
    RunConfig rc = anaCommon.resolve(ana);
    if (ana->count("--alpha")) rc.alpha = anaAlpha;
    if (ana->count("--max-cond-size")) rc.maxCondSize = anaMaxCond;
    if (ana->count("--hub-min-degree")) rc.hubMinDegree = anaHubMinDegree;
    if (ana->count("--hub-percentile")) rc.hubPercentile = anaHubPercentile;
    runAnalyze(rc, anaGraph, anaDataset, anaPropagate, anaModules, anaOutcome, anaOut);
  });

  // score
  auto* sco = app.add_subcommand("score", "recovery metrics against a truth spec");
  std::string scoTruth, scoGraph;
  sco->add_option("--truth", scoTruth, "truth spec JSON")->required();
  sco->add_option("--graph", scoGraph, "learned graph JSON")->required();
  sco->callback([&] { runScore(scoTruth, scoGraph); });

  // export
  auto* exp = app.add_subcommand("export", "serialize a graph");
  std::string expGraph, expFormat, expOut;
  exp->add_option("--graph", expGraph, "graph JSON")->required();
  exp->add_option("--format", expFormat, "dot|graphml|json")->required();
  exp->add_option("--out", expOut, "output file (default: stdout)");
  exp->callback([&] { runExport(expGraph, expFormat, expOut); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
