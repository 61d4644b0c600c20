#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "mrnet/Dataset.hpp"
#include "mrnet/Errors.hpp"
#include "mrnet/Graph.hpp"
#include "mrnet/IvEngine.hpp"
#include "mrnet/Rng.hpp"
#include "mrnet/StructureLearner.hpp"

using namespace mrnet;

namespace {

struct ChainFixture {
  FeatureMatrix omics;     // standardized A -> B -> C
  FeatureMatrix ivScores;  // one variant per node: G1 -> A, G2 -> B, G3 -> C
  Allocation alloc;
};

ChainFixture makeChain(int n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd g(n, 3), m(n, 3);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < 3; ++j) g(i, j) = rng.binomial2(0.3);
    m(i, 0) = 0.8 * g(i, 0) + rng.normal();
    m(i, 1) = 0.7 * m(i, 0) + 0.8 * g(i, 1) + rng.normal();
    m(i, 2) = 0.7 * m(i, 1) + 0.8 * g(i, 2) + rng.normal();
  }
  ChainFixture fx;
  fx.omics.features = {"A", "B", "C"};
  fx.omics.values = m;
  fx.omics = standardize(fx.omics);
  fx.ivScores.features = {"G1", "G2", "G3"};
  fx.ivScores.values = g;
  fx.alloc = allocate(fx.ivScores, fx.omics, 10.0, 3);
  return fx;
}

Edge directedEdge(const std::string& a, const std::string& b, double zRel, double zExcl) {
  Edge e;
  e.a = a;
  e.b = b;
  e.status = EdgeStatus::Directed;
  e.votesForward = 1;
  OrientationEvidence ev;
  ev.iv = "G_" + a;
  ev.exposure = a;
  ev.pass = true;
  ev.relevance.statistic = zRel;
  ev.exclusion.statistic = zExcl;
  e.evidence.push_back(ev);
  return e;
}

}  // namespace

TEST_CASE("skeleton of a chain drops the transitive edge with the right separator") {
  const ChainFixture fx = makeChain(2000, 101);
  LearnConfig cfg;
  cfg.alpha = 0.01;
  cfg.maxCondSize = 3;

  int tests = 0;
  bool firstMarginal = true;
  const SkeletonResult sk = learnSkeleton(fx.omics, cfg, [&](const CITestResult& r) {
    if (tests == 0) firstMarginal = r.condSet.empty();
    ++tests;
  });

  using Pair = std::pair<std::string, std::string>;
  REQUIRE(sk.edges == std::vector<Pair>{{"A", "B"}, {"B", "C"}});
  REQUIRE(sk.separations.size() == 1);
  CHECK(sk.separations[0].a == "A");
  CHECK(sk.separations[0].b == "C");
  CHECK(sk.separations[0].separatingSet == std::vector<std::string>{"B"});
  CHECK(sk.separations[0].pValue > cfg.alpha);
  CHECK(tests >= 4);  // three level-0 tests plus at least one conditional
  CHECK(firstMarginal);
}

TEST_CASE("maxCondSize 0 keeps the marginally dependent transitive edge") {
  const ChainFixture fx = makeChain(2000, 102);
  LearnConfig cfg;
  cfg.alpha = 0.01;
  cfg.maxCondSize = 0;
  const SkeletonResult sk = learnSkeleton(fx.omics, cfg);
  CHECK(sk.edges.size() == 3);  // complete: A-C survives without conditioning
  CHECK(sk.separations.empty());
}

TEST_CASE("skeleton learning is deterministic") {
  const ChainFixture fx = makeChain(1200, 103);
  LearnConfig cfg;
  const SkeletonResult a = learnSkeleton(fx.omics, cfg);
  const SkeletonResult b = learnSkeleton(fx.omics, cfg);
  CHECK(a.edges == b.edges);
  REQUIRE(a.separations.size() == b.separations.size());
  for (std::size_t i = 0; i < a.separations.size(); ++i) {
    CHECK(a.separations[i].a == b.separations[i].a);
    CHECK(a.separations[i].separatingSet == b.separations[i].separatingSet);
    CHECK(a.separations[i].pValue == b.separations[i].pValue);  // bitwise
  }
}

TEST_CASE("the per-edge bonferroni guard still separates a strong chain") {
  const ChainFixture fx = makeChain(2000, 104);
  LearnConfig cfg;
  cfg.bonferroniPerEdge = true;
  const SkeletonResult sk = learnSkeleton(fx.omics, cfg);
  using Pair = std::pair<std::string, std::string>;
  CHECK(sk.edges == std::vector<Pair>{{"A", "B"}, {"B", "C"}});
}

TEST_CASE("skeleton config is validated") {
  const ChainFixture fx = makeChain(100, 105);
  LearnConfig bad;
  bad.alpha = 0.0;
  CHECK_THROWS_AS(learnSkeleton(fx.omics, bad), ConfigError);
  bad.alpha = 1.0;
  CHECK_THROWS_AS(learnSkeleton(fx.omics, bad), ConfigError);
  bad.alpha = 0.01;
  bad.maxCondSize = -1;
  CHECK_THROWS_AS(learnSkeleton(fx.omics, bad), ConfigError);
}

TEST_CASE("vote decision table") {
  bool fwd = false;
  CHECK(voteDecision(0, 0, 1, fwd) == EdgeStatus::Undirected);
  CHECK(voteDecision(1, 0, 1, fwd) == EdgeStatus::Directed);
  CHECK(fwd);
  CHECK(voteDecision(0, 2, 1, fwd) == EdgeStatus::Directed);
  CHECK_FALSE(fwd);
  CHECK(voteDecision(1, 1, 1, fwd) == EdgeStatus::Conflicted);
  CHECK(voteDecision(1, 0, 2, fwd) == EdgeStatus::Undirected);  // below minVotes
  CHECK(voteDecision(2, 0, 2, fwd) == EdgeStatus::Directed);
  CHECK(fwd);
  CHECK(voteDecision(2, 1, 2, fwd) == EdgeStatus::Conflicted);  // any opposition conflicts
}

TEST_CASE("pairwise orientation votes with the instrument of the true cause") {
  const ChainFixture fx = makeChain(3000, 106);
  LearnConfig cfg;
  cfg.alpha = 0.01;

  int audited = 0;
  const OrientationOutcome out = orientPairwise("A", "B", fx.omics, fx.ivScores, fx.alloc, cfg,
                                                [&](const CITestResult&) { ++audited; });
  CHECK(out.status == EdgeStatus::Directed);
  CHECK(out.forward);
  CHECK(out.votesForward >= 1);
  CHECK(out.votesReverse == 0);
  CHECK(audited >= 2);  // at least relevance + exclusion for one instrument
  REQUIRE_FALSE(out.evidence.empty());
  bool sawPassingForward = false;
  for (const OrientationEvidence& ev : out.evidence) {
    if (ev.exposure == "A" && ev.pass) sawPassingForward = true;
    if (ev.exposure == "B") CHECK_FALSE(ev.pass);  // reverse votes must all fail
  }
  CHECK(sawPassingForward);
}

TEST_CASE("pairwise orientation without instruments stays undirected") {
  const ChainFixture fx = makeChain(500, 107);
  const Allocation empty;
  LearnConfig cfg;
  const OrientationOutcome out = orientPairwise("A", "B", fx.omics, fx.ivScores, empty, cfg);
  CHECK(out.status == EdgeStatus::Undirected);
  CHECK(out.votesForward == 0);
  CHECK(out.votesReverse == 0);
  CHECK(out.evidence.empty());
}

TEST_CASE("learnNetwork recovers the chain end to end") {
  const ChainFixture fx = makeChain(3000, 108);
  LearnConfig cfg;
  cfg.alpha = 0.01;

  std::vector<SeparationRecord> seps;
  const CausalGraph g = learnNetwork(fx.omics, fx.ivScores, fx.alloc, cfg, {}, &seps);

  CHECK(g.nodes == std::vector<std::string>{"A", "B", "C"});
  REQUIRE(g.edges.size() == 2);
  const Edge* ab = g.findEdge("A", "B");
  REQUIRE(ab != nullptr);
  CHECK(ab->status == EdgeStatus::Directed);
  CHECK(ab->a == "A");
  const Edge* bc = g.findEdge("B", "C");
  REQUIRE(bc != nullptr);
  CHECK(bc->status == EdgeStatus::Directed);
  CHECK(bc->a == "B");
  CHECK(g.findEdge("A", "C") == nullptr);
  REQUIRE(seps.size() == 1);
  CHECK(seps[0].separatingSet == std::vector<std::string>{"B"});
  CHECK(g.repairs.empty());
  CHECK(g.topologicalOrder() == std::vector<std::string>{"A", "B", "C"});
}

TEST_CASE("learned graphs survive a JSON round trip") {
  const ChainFixture fx = makeChain(2000, 109);
  LearnConfig cfg;
  const CausalGraph g = learnNetwork(fx.omics, fx.ivScores, fx.alloc, cfg);
  const CausalGraph back = graphFromJson(graphToJson(g));
  CHECK(back.nodes == g.nodes);
  REQUIRE(back.edges.size() == g.edges.size());
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    CHECK(back.edges[i].a == g.edges[i].a);
    CHECK(back.edges[i].b == g.edges[i].b);
    CHECK(back.edges[i].status == g.edges[i].status);
    CHECK(back.edges[i].votesForward == g.edges[i].votesForward);
    CHECK(back.edges[i].votesReverse == g.edges[i].votesReverse);
    CHECK(back.edges[i].evidence.size() == g.edges[i].evidence.size());
  }
}

TEST_CASE("cycle repair demotes the weakest-evidence edge") {
  // z_crit at alpha 0.05 is ~1.96; margins: A->B 1.96, B->C 0.96, C->A 1.04.
  CausalGraph g;
  g.nodes = {"A", "B", "C"};
  g.edges.push_back(directedEdge("A", "B", 10.0, 0.0));
  g.edges.push_back(directedEdge("B", "C", 5.0, 1.0));
  g.edges.push_back(directedEdge("C", "A", 3.0, 0.5));
  g.sortCanonically();
  CHECK_THROWS_AS(g.topologicalOrder(), InternalError);

  repairCycles(g, 0.05);
  REQUIRE(g.repairs.size() == 1);
  CHECK(g.repairs[0].from == "B");
  CHECK(g.repairs[0].to == "C");
  CHECK(g.repairs[0].margin == doctest::Approx(0.96).epsilon(1e-2));
  const Edge* bc = g.findEdge("B", "C");
  REQUIRE(bc != nullptr);
  CHECK(bc->status == EdgeStatus::Conflicted);
  CHECK_NOTHROW(g.topologicalOrder());
}

TEST_CASE("cycle repair breaks margin ties lexicographically") {
  CausalGraph g;
  g.nodes = {"A", "B", "C"};
  g.edges.push_back(directedEdge("A", "B", 5.0, 1.0));
  g.edges.push_back(directedEdge("B", "C", 5.0, 1.0));
  g.edges.push_back(directedEdge("C", "A", 5.0, 1.0));
  g.sortCanonically();

  repairCycles(g, 0.05);
  REQUIRE(g.repairs.size() == 1);
  CHECK(g.repairs[0].from == "A");
  CHECK(g.repairs[0].to == "B");
  CHECK_NOTHROW(g.topologicalOrder());
}

TEST_CASE("an evidence-free edge counts as unbounded strength during repair") {
  CausalGraph g;
  g.nodes = {"A", "B", "C"};
  Edge noEvidence;
  noEvidence.a = "A";
  noEvidence.b = "B";
  noEvidence.status = EdgeStatus::Directed;
  g.edges.push_back(noEvidence);  // margin +inf: never the weakest
  g.edges.push_back(directedEdge("B", "C", 5.0, 1.0));
  g.edges.push_back(directedEdge("C", "A", 4.0, 1.5));
  g.sortCanonically();

  repairCycles(g, 0.05);
  REQUIRE(g.repairs.size() == 1);
  CHECK(g.repairs[0].from == "C");  // margin 0.46 vs B->C's 0.96
  CHECK(g.repairs[0].to == "A");
  CHECK(g.findEdge("A", "B")->status == EdgeStatus::Directed);
}

TEST_CASE("repair leaves acyclic graphs untouched") {
  CausalGraph g;
  g.nodes = {"A", "B", "C"};
  g.edges.push_back(directedEdge("A", "B", 5.0, 1.0));
  g.edges.push_back(directedEdge("B", "C", 5.0, 1.0));
  g.sortCanonically();
  repairCycles(g, 0.05);
  CHECK(g.repairs.empty());
  CHECK(g.edges[0].status == EdgeStatus::Directed);
  CHECK(g.edges[1].status == EdgeStatus::Directed);
}
