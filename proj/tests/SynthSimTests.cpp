#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "mrnet/Errors.hpp"
#include "mrnet/SynthSim.hpp"

using namespace mrnet;

namespace {

SemSpec tinyChain() {
  SemSpec spec;
  spec.nodes = {"A", "B", "C"};
  spec.edges = {{"A", "B", 0.9}, {"B", "C", -0.7}};
  VariantSpec v;
  v.id = "V1";
  v.maf = 0.3;
  v.effects = {{"A", 0.5}};
  spec.variants.push_back(v);
  return spec;
}

CausalGraph nodesOnly(const std::vector<std::string>& nodes) {
  CausalGraph g;
  g.nodes = nodes;
  g.sortCanonically();
  return g;
}

Edge plainEdge(const std::string& a, const std::string& b, EdgeStatus status) {
  Edge e;
  e.a = a;
  e.b = b;
  e.status = status;
  return e;
}

}  // namespace

TEST_CASE("randomSem draws the documented shape") {
  const SemSpec spec = randomSem(8, 2.0, 20, 2, 501);
  REQUIRE(spec.nodes.size() == 8);
  CHECK(spec.nodes.front() == "M01");
  CHECK(spec.nodes.back() == "M08");
  REQUIRE(spec.variants.size() == 20);
  CHECK(spec.variants.front().id == "V01");
  CHECK(spec.variants.back().id == "V20");

  for (std::size_t k = 0; k < spec.variants.size(); ++k) {
    const VariantSpec& v = spec.variants[k];
    CHECK(v.maf >= 0.1);
    CHECK(v.maf <= 0.5);
    if (k < 16) {
      REQUIRE(v.effects.size() == 1);  // exclusive instrument
      CHECK(v.effects[0].node == spec.nodes[k / 2]);
      CHECK(v.effects[0].beta >= 0.3);
      CHECK(v.effects[0].beta <= 0.8);
    } else {
      CHECK(v.effects.empty());  // surplus variants are inert background
    }
  }
  for (const auto& e : spec.edges) {
    CHECK(std::fabs(e.coefficient) >= 0.5);
    CHECK(std::fabs(e.coefficient) <= 1.5);
  }
  CHECK(spec.pleiotropyTriples().empty());
  CHECK_NOTHROW(spec.validateAndOrder());

  // bit-identical regeneration
  CHECK(semSpecToJson(randomSem(8, 2.0, 20, 2, 501)).dump() == semSpecToJson(spec).dump());
  CHECK(semSpecToJson(randomSem(8, 2.0, 20, 2, 502)).dump() != semSpecToJson(spec).dump());
}

TEST_CASE("randomSem validates its arguments") {
  CHECK_THROWS_AS(randomSem(0, 2.0, 10, 1, 1), ConfigError);
  CHECK_THROWS_AS(randomSem(5, 2.0, 4, 1, 1), ConfigError);   // variants cannot cover nodes
  CHECK_THROWS_AS(randomSem(5, 2.0, 10, 0, 1), ConfigError);
  CHECK_THROWS_AS(randomSem(5, 10.0, 10, 1, 1), ConfigError);  // edge probability above 1
}

TEST_CASE("chainSem is the fixed forward path") {
  const SemSpec spec = chainSem(5, 5, 1, 502);
  REQUIRE(spec.edges.size() == 4);
  for (std::size_t i = 0; i < spec.edges.size(); ++i) {
    CHECK(spec.edges[i].from == spec.nodes[i]);
    CHECK(spec.edges[i].to == spec.nodes[i + 1]);
    CHECK(std::fabs(spec.edges[i].coefficient) >= 0.5);
    CHECK(std::fabs(spec.edges[i].coefficient) <= 1.5);
  }
}

TEST_CASE("simulate is deterministic, integral in genotype, standardized in omics") {
  const SemSpec spec = chainSem(4, 4, 1, 503);
  const Dataset d1 = simulate(spec, 500, 504);
  const Dataset d2 = simulate(spec, 500, 504);
  CHECK(featureCsv(d1.omicsRaw) == featureCsv(d2.omicsRaw));
  CHECK(genotypeCsv(d1.genotype) == genotypeCsv(d2.genotype));
  CHECK(featureCsv(simulate(spec, 500, 505).omicsRaw) != featureCsv(d1.omicsRaw));

  CHECK(d1.genotype.samples.front() == "S001");
  CHECK(d1.genotype.samples.back() == "S500");
  for (Eigen::Index j = 0; j < d1.genotype.values.cols(); ++j)
    for (Eigen::Index i = 0; i < d1.genotype.values.rows(); ++i) {
      const double v = d1.genotype.values(i, j);
      CHECK((v == 0.0 || v == 1.0 || v == 2.0));
    }

  for (Eigen::Index j = 0; j < d1.omics.values.cols(); ++j) {
    CHECK(std::fabs(d1.omics.values.col(j).mean()) < 1e-12);
    const double var = d1.omics.values.col(j).squaredNorm() / 499.0;
    CHECK(var == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK((d1.omicsRaw.values - d1.omics.values).cwiseAbs().maxCoeff() > 0.01);
  CHECK_FALSE(d1.outcomeName.has_value());
}

TEST_CASE("simulate rejects tiny sample counts") {
  CHECK_THROWS_AS(simulate(tinyChain(), 9, 1), ConfigError);
}

TEST_CASE("simulateShifted moves the source and its descendants only") {
  const SemSpec spec = tinyChain();
  const Dataset base = simulate(spec, 100, 506);
  const Dataset shifted = simulateShifted(spec, 100, 506, "B", 1.5);

  CHECK(genotypeCsv(base.genotype) == genotypeCsv(shifted.genotype));
  for (int i = 0; i < 100; ++i) {
    CHECK(shifted.omicsRaw.values(i, 0) == base.omicsRaw.values(i, 0));  // A untouched
    CHECK(shifted.omicsRaw.values(i, 1) - base.omicsRaw.values(i, 1) ==
          doctest::Approx(1.5).epsilon(1e-12));
    CHECK(shifted.omicsRaw.values(i, 2) - base.omicsRaw.values(i, 2) ==
          doctest::Approx(-0.7 * 1.5).epsilon(1e-12));
  }
  CHECK_THROWS_AS(simulateShifted(spec, 100, 506, "Z", 1.0), ConfigError);
}

TEST_CASE("truthGraph mirrors the spec edges") {
  const SemSpec spec = randomSem(6, 2.0, 6, 1, 507);
  const CausalGraph g = truthGraph(spec);
  CHECK(g.nodes == spec.nodes);  // already sorted M01..M06
  REQUIRE(g.edges.size() == spec.edges.size());
  for (const auto& e : spec.edges) {
    const Edge* ge = g.findEdge(e.from, e.to);
    REQUIRE(ge != nullptr);
    CHECK(ge->status == EdgeStatus::Directed);
    CHECK(ge->a == e.from);
    REQUIRE(ge->coefficient.has_value());
    CHECK(*ge->coefficient == e.coefficient);
  }
}

TEST_CASE("recovery scoring on hand-built comparisons") {
  SemSpec truth;
  truth.nodes = {"A", "B", "C"};
  truth.edges = {{"A", "B", 1.0}, {"B", "C", 1.0}};

  SUBCASE("perfect recovery") {
    const RecoveryScore s = scoreRecovery(truth, truthGraph(truth));
    CHECK(s.skeletonPrecision == 1.0);
    CHECK(s.skeletonRecall == 1.0);
    CHECK(s.skeletonF1 == 1.0);
    CHECK(s.orientationAccuracy == 1.0);
    CHECK(s.shd == 0);
  }

  SUBCASE("empty learned graph") {
    const RecoveryScore s = scoreRecovery(truth, nodesOnly(truth.nodes));
    CHECK(s.skeletonPrecision == 1.0);  // vacuous
    CHECK(s.skeletonRecall == 0.0);
    CHECK(s.skeletonF1 == 0.0);
    CHECK(s.orientationAccuracy == 0.0);
    CHECK(s.shd == 2);
  }

  SUBCASE("reversed orientation") {
    CausalGraph learned = nodesOnly(truth.nodes);
    learned.edges.push_back(plainEdge("B", "A", EdgeStatus::Directed));
    learned.edges.push_back(plainEdge("B", "C", EdgeStatus::Directed));
    learned.sortCanonically();
    const RecoveryScore s = scoreRecovery(truth, learned);
    CHECK(s.skeletonF1 == 1.0);
    CHECK(s.orientationAccuracy == 0.5);
    CHECK(s.shd == 1);  // one reversal
  }

  SUBCASE("conflicted counts as undirected") {
    CausalGraph learned = nodesOnly(truth.nodes);
    learned.edges.push_back(plainEdge("A", "B", EdgeStatus::Conflicted));
    learned.edges.push_back(plainEdge("B", "C", EdgeStatus::Directed));
    learned.sortCanonically();
    const RecoveryScore s = scoreRecovery(truth, learned);
    CHECK(s.skeletonF1 == 1.0);
    CHECK(s.orientationAccuracy == 1.0);  // only the directed edge is judged
    CHECK(s.shd == 1);                    // the conflicted pair still needs orienting
  }

  SUBCASE("spurious extra edge") {
    CausalGraph learned = truthGraph(truth);
    learned.edges.push_back(plainEdge("A", "C", EdgeStatus::Directed));
    learned.sortCanonically();
    const RecoveryScore s = scoreRecovery(truth, learned);
    CHECK(s.skeletonPrecision == doctest::Approx(2.0 / 3.0));
    CHECK(s.skeletonRecall == 1.0);
    CHECK(s.shd == 1);
  }

  SUBCASE("node universe mismatch") {
    CHECK_THROWS_AS(scoreRecovery(truth, nodesOnly({"A", "B"})), DataError);
  }
}

TEST_CASE("sem specs survive a JSON round trip") {
  SemSpec spec = randomSem(6, 2.0, 12, 2, 508);
  spec.noiseSd["M03"] = 2.0;

  const SemSpec back = semSpecFromJson(semSpecToJson(spec));
  CHECK(back.nodes == spec.nodes);
  CHECK(back.seed == spec.seed);
  CHECK(back.noiseSd == spec.noiseSd);
  REQUIRE(back.edges.size() == spec.edges.size());
  for (std::size_t i = 0; i < spec.edges.size(); ++i) {
    CHECK(back.edges[i].from == spec.edges[i].from);
    CHECK(back.edges[i].to == spec.edges[i].to);
    CHECK(back.edges[i].coefficient == spec.edges[i].coefficient);
  }
  REQUIRE(back.variants.size() == spec.variants.size());
  for (std::size_t i = 0; i < spec.variants.size(); ++i) {
    CHECK(back.variants[i].id == spec.variants[i].id);
    CHECK(back.variants[i].maf == spec.variants[i].maf);
    CHECK(back.variants[i].effects.size() == spec.variants[i].effects.size());
  }
}

TEST_CASE("pleiotropic variants are surfaced as triples") {
  SemSpec spec = tinyChain();
  spec.variants[0].effects.push_back({"C", 0.4});  // V1 now hits A and C
  const auto triples = spec.pleiotropyTriples();
  REQUIRE(triples.size() == 1);
  CHECK(triples[0][0] == "V1");
  CHECK(triples[0][1] == "A");
  CHECK(triples[0][2] == "C");
  const nlohmann::json j = semSpecToJson(spec);
  CHECK(j.at("pleiotropy_triples").size() == 1);
}

TEST_CASE("sem spec validation rejects malformed structures") {
  SemSpec dupNode = tinyChain();
  dupNode.nodes.push_back("A");
  CHECK_THROWS_AS(dupNode.validateAndOrder(), ConfigError);

  SemSpec badMaf = tinyChain();
  badMaf.variants[0].maf = 0.6;
  CHECK_THROWS_AS(badMaf.validateAndOrder(), ConfigError);

  SemSpec badTarget = tinyChain();
  badTarget.variants[0].effects[0].node = "Z";
  CHECK_THROWS_AS(badTarget.validateAndOrder(), ConfigError);

  SemSpec cyclic = tinyChain();
  cyclic.edges.push_back({"C", "A", 0.5});
  CHECK_THROWS_AS(cyclic.validateAndOrder(), ConfigError);

  SemSpec selfLoop = tinyChain();
  selfLoop.edges.push_back({"A", "A", 0.5});
  CHECK_THROWS_AS(selfLoop.validateAndOrder(), ConfigError);

  SemSpec dupEdge = tinyChain();
  dupEdge.edges.push_back({"A", "B", 0.1});
  CHECK_THROWS_AS(dupEdge.validateAndOrder(), ConfigError);

  SemSpec badNoise = tinyChain();
  badNoise.noiseSd["Z"] = 1.0;
  CHECK_THROWS_AS(badNoise.validateAndOrder(), ConfigError);
  badNoise.noiseSd.clear();
  badNoise.noiseSd["A"] = 0.0;
  CHECK_THROWS_AS(badNoise.validateAndOrder(), ConfigError);

  SemSpec variantClash = tinyChain();
  variantClash.variants[0].id = "A";
  CHECK_THROWS_AS(variantClash.validateAndOrder(), ConfigError);
}

TEST_CASE("noise defaults to unit standard deviation") {
  SemSpec spec = tinyChain();
  CHECK(spec.noiseFor("A") == 1.0);
  spec.noiseSd["A"] = 2.5;
  CHECK(spec.noiseFor("A") == 2.5);
  CHECK(spec.validateAndOrder() == std::vector<std::string>{"A", "B", "C"});
}
