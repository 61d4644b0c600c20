#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "Oracles.hpp"
#include "mrnet/Effects.hpp"
#include "mrnet/Errors.hpp"
#include "mrnet/Rng.hpp"
#include "mrnet/SynthSim.hpp"

using namespace mrnet;

namespace {

struct Coef {
  std::string a;
  std::string b;
  double value;
};

CausalGraph makeDag(const std::vector<std::string>& nodes, const std::vector<Coef>& edges) {
  CausalGraph g;
  g.nodes = nodes;
  for (const auto& c : edges) {
    Edge e;
    e.a = c.a;
    e.b = c.b;
    e.status = EdgeStatus::Directed;
    e.coefficient = c.value;
    g.edges.push_back(std::move(e));
  }
  g.sortCanonically();
  return g;
}

FeatureMatrix rawMatrix(const std::vector<std::string>& names, const Eigen::MatrixXd& values) {
  FeatureMatrix m;
  m.features = names;
  m.values = values;
  return m;
}

}  // namespace

TEST_CASE("fitCoefficients recovers a single-parent slope") {
  const int n = 500;
  Rng rng(201);
  Eigen::MatrixXd data(n, 2);
  for (int i = 0; i < n; ++i) {
    data(i, 0) = rng.normal();
    data(i, 1) = 2.0 * data(i, 0) + rng.normal(0.0, 0.3);
  }
  const CausalGraph g = makeDag({"A", "B"}, {{"A", "B", 0.0}});
  const FitResult fit = fitCoefficients(g, rawMatrix({"A", "B"}, data));
  CHECK(fit.issues.empty());
  const Edge* e = fit.graph.findEdge("A", "B");
  REQUIRE(e != nullptr);
  REQUIRE(e->coefficient.has_value());
  CHECK(*e->coefficient == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("fitCoefficients separates joint parents") {
  const int n = 800;
  Rng rng(202);
  Eigen::MatrixXd data(n, 3);  // A, C, B with B = 2A + 3C
  for (int i = 0; i < n; ++i) {
    data(i, 0) = rng.normal();
    data(i, 1) = rng.normal();
    data(i, 2) = 2.0 * data(i, 0) + 3.0 * data(i, 1) + rng.normal(0.0, 0.5);
  }
  const CausalGraph g = makeDag({"A", "B", "C"}, {{"A", "B", 0.0}, {"C", "B", 0.0}});
  const FitResult fit = fitCoefficients(g, rawMatrix({"A", "C", "B"}, data));
  CHECK(fit.issues.empty());
  CHECK(*fit.graph.findEdge("A", "B")->coefficient == doctest::Approx(2.0).epsilon(0.05));
  CHECK(*fit.graph.findEdge("C", "B")->coefficient == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("non-directed edges are never fitted") {
  const int n = 300;
  Rng rng(203);
  Eigen::MatrixXd data(n, 2);
  for (int i = 0; i < n; ++i) {
    data(i, 0) = rng.normal();
    data(i, 1) = data(i, 0) + rng.normal();
  }
  CausalGraph g;
  g.nodes = {"A", "B"};
  Edge e;
  e.a = "A";
  e.b = "B";
  e.status = EdgeStatus::Undirected;
  g.edges.push_back(e);
  const FitResult fit = fitCoefficients(g, rawMatrix({"A", "B"}, data));
  CHECK_FALSE(fit.graph.findEdge("A", "B")->coefficient.has_value());
}

TEST_CASE("collinear parents are withheld with a fit issue") {
  const int n = 200;
  Rng rng(204);
  Eigen::MatrixXd data(n, 3);  // A, A2 (copy), B
  for (int i = 0; i < n; ++i) {
    data(i, 0) = rng.normal();
    data(i, 1) = data(i, 0);
    data(i, 2) = 3.0 * data(i, 0) + rng.normal();
  }
  const CausalGraph g = makeDag({"A", "A2", "B"}, {{"A", "B", 0.0}, {"A2", "B", 0.0}});
  const FitResult fit = fitCoefficients(g, rawMatrix({"A", "A2", "B"}, data));
  REQUIRE(fit.issues.size() == 1);
  CHECK(fit.issues[0].node == "B");
  CHECK(fit.issues[0].conditionNumber > 1e10);
  CHECK_FALSE(fit.graph.findEdge("A", "B")->coefficient.has_value());
  CHECK_FALSE(fit.graph.findEdge("A2", "B")->coefficient.has_value());
}

TEST_CASE("fitCoefficients needs more rows than parents") {
  Eigen::MatrixXd data = Eigen::MatrixXd::Random(3, 3);
  const CausalGraph g = makeDag({"A", "B", "C"}, {{"A", "C", 0.0}, {"B", "C", 0.0}});
  CHECK_THROWS_AS(fitCoefficients(g, rawMatrix({"A", "B", "C"}, data)), DataError);
}

TEST_CASE("chain total effect is the coefficient product") {
  const CausalGraph g = makeDag({"A", "B", "C"}, {{"A", "B", 2.0}, {"B", "C", 3.0}});
  const EffectEstimate est = totalEffect(g, "A", "C");
  CHECK(est.total == doctest::Approx(6.0));
  CHECK(est.direct == 0.0);
  CHECK(est.indirect == doctest::Approx(6.0));
  REQUIRE(est.paths.size() == 1);
  CHECK(est.paths[0].nodes == std::vector<std::string>{"A", "B", "C"});
  CHECK(est.paths[0].product == doctest::Approx(6.0));
  CHECK(est.adjustmentSet.empty());
  CHECK_FALSE(est.partial);
  CHECK(est.excludedEdges.empty());
}

TEST_CASE("diamond total effect splits into direct and indirect") {
  const CausalGraph g =
      makeDag({"A", "B", "C"}, {{"A", "B", 2.0}, {"B", "C", 3.0}, {"A", "C", 1.5}});
  const EffectEstimate est = totalEffect(g, "A", "C");
  CHECK(est.total == doctest::Approx(7.5));
  CHECK(est.direct == doctest::Approx(1.5));
  CHECK(est.indirect == doctest::Approx(6.0));
  REQUIRE(est.paths.size() == 2);
  CHECK(est.paths[0].nodes == std::vector<std::string>{"A", "B", "C"});
  CHECK(est.paths[1].nodes == std::vector<std::string>{"A", "C"});

  const nlohmann::json j = effectEstimateToJson(est);
  CHECK(j.at("total").get<double>() == doctest::Approx(7.5));
  CHECK(j.at("direct").get<double>() == doctest::Approx(1.5));
  CHECK(j.at("paths").size() == 2);
  CHECK_FALSE(j.at("partial").get<bool>());
}

TEST_CASE("adjustment set lists the source's parents") {
  const CausalGraph g = makeDag({"A", "B", "D"}, {{"D", "A", 1.0}, {"A", "B", 2.0}});
  const EffectEstimate est = totalEffect(g, "A", "B");
  CHECK(est.adjustmentSet == std::vector<std::string>{"D"});
}

TEST_CASE("disconnected pairs have zero effect and no paths") {
  const CausalGraph g = makeDag({"A", "B", "C"}, {{"A", "B", 2.0}});
  const EffectEstimate est = totalEffect(g, "C", "A");
  CHECK(est.total == 0.0);
  CHECK(est.paths.empty());
  CHECK_FALSE(est.partial);
}

TEST_CASE("totalEffect validates its endpoints") {
  const CausalGraph g = makeDag({"A", "B"}, {{"A", "B", 2.0}});
  CHECK_THROWS_AS(totalEffect(g, "A", "A"), ConfigError);
  CHECK_THROWS_AS(totalEffect(g, "A", "Z"), DataError);
  CHECK_THROWS_AS(totalEffect(g, "Z", "B"), DataError);
}

TEST_CASE("an unfitted edge on a walked route is an error") {
  CausalGraph g = makeDag({"A", "B"}, {{"A", "B", 2.0}});
  g.findEdge("A", "B")->coefficient.reset();
  CHECK_THROWS_AS(totalEffect(g, "A", "B"), DataError);
}

TEST_CASE("routes through excluded edges set the partial flag") {
  CausalGraph g = makeDag({"A", "B", "C"}, {{"A", "B", 2.0}});
  Edge u;
  u.a = "B";
  u.b = "C";
  u.status = EdgeStatus::Undirected;
  g.edges.push_back(u);
  g.sortCanonically();

  const EffectEstimate est = totalEffect(g, "A", "C");
  CHECK(est.total == 0.0);
  CHECK(est.partial);
  CHECK(est.excludedEdges == std::vector<std::string>{"B -- C"});

  // The same edge elsewhere in the graph does not flag an untouched pair.
  const EffectEstimate clean = totalEffect(g, "A", "B");
  CHECK_FALSE(clean.partial);
  CHECK(clean.excludedEdges == std::vector<std::string>{"B -- C"});
}

TEST_CASE("all-pairs totals match the per-pair estimator") {
  const SemSpec spec = randomSem(6, 2.5, 6, 1, 211);
  const CausalGraph g = truthGraph(spec);
  const auto all = allPairsTotalEffects(g);
  for (const auto& s : g.nodes) {
    REQUIRE(all.count(s) == 1);
    CHECK(all.at(s).count(s) == 0);  // no self entry
    for (const auto& t : g.nodes) {
      if (s == t) continue;
      const double viaMap = all.at(s).count(t) ? all.at(s).at(t) : 0.0;
      CHECK(viaMap == doctest::Approx(totalEffect(g, s, t).total).epsilon(1e-9));
    }
  }

  CausalGraph unfitted = g;
  unfitted.edges[0].coefficient.reset();
  CHECK_THROWS_AS(allPairsTotalEffects(unfitted), DataError);
}

TEST_CASE("confounders and mediators on the standard shapes") {
  const CausalGraph fork = makeDag({"A", "B", "C"}, {{"C", "A", 1.0}, {"C", "B", 1.0}});
  CHECK(confounders(fork, "A", "B") == std::vector<std::string>{"C"});
  CHECK(mediators(fork, "A", "B").empty());

  const CausalGraph chain = makeDag({"A", "B", "C"}, {{"A", "B", 1.0}, {"B", "C", 1.0}});
  CHECK(confounders(chain, "A", "C").empty());
  CHECK(mediators(chain, "A", "C") == std::vector<std::string>{"B"});
  CHECK(confounders(chain, "B", "C").empty());  // A reaches C only through B

  const CausalGraph diamond = makeDag(
      {"A", "B", "C", "D"},
      {{"A", "B", 1.0}, {"A", "C", 1.0}, {"B", "D", 1.0}, {"C", "D", 1.0}});
  CHECK(confounders(diamond, "B", "C") == std::vector<std::string>{"A"});
  CHECK(mediators(diamond, "A", "D") == std::vector<std::string>{"B", "C"});
}

TEST_CASE("confounders and mediators match brute enumeration on random dags") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const SemSpec spec = randomSem(6, 2.5, 6, 1, 300 + seed);
    const CausalGraph g = truthGraph(spec);

    std::map<std::string, int> idx;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) idx[g.nodes[i]] = static_cast<int>(i);
    oracles::BruteGraph brute(static_cast<int>(g.nodes.size()));
    for (const auto& e : g.edges) brute.addEdge(idx.at(e.a), idx.at(e.b));

    for (const auto& s : g.nodes) {
      for (const auto& t : g.nodes) {
        if (s == t) continue;
        std::vector<std::string> expectConf, expectMed;
        for (int z : oracles::bruteConfounders(brute, idx.at(s), idx.at(t)))
          expectConf.push_back(g.nodes[static_cast<std::size_t>(z)]);
        for (int z : oracles::bruteMediators(brute, idx.at(s), idx.at(t)))
          expectMed.push_back(g.nodes[static_cast<std::size_t>(z)]);
        CHECK(confounders(g, s, t) == expectConf);
        CHECK(mediators(g, s, t) == expectMed);
      }
    }
  }
}

TEST_CASE("the interventional oracle is exact on a linear chain") {
  SemSpec spec;
  spec.nodes = {"M1", "M2", "M3"};
  spec.edges = {{"M1", "M2", 2.0}, {"M2", "M3", 3.0}};

  const auto shifts = interventionalOracle(spec, "M1", 0.7, 200, 7);
  CHECK(shifts.at("M1") == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(shifts.at("M2") == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(shifts.at("M3") == doctest::Approx(6.0).epsilon(1e-9));

  const auto sink = interventionalOracle(spec, "M3", 0.7, 200, 7);
  CHECK(sink.at("M1") == 0.0);
  CHECK(sink.at("M2") == 0.0);
  CHECK(sink.at("M3") == doctest::Approx(1.0).epsilon(1e-9));

  const auto zero = interventionalOracle(spec, "M1", 0.0, 200, 7);
  for (const auto& [node, v] : zero) CHECK(v == 0.0);

  CHECK_THROWS_AS(interventionalOracle(spec, "M9", 1.0, 200, 7), ConfigError);
}

TEST_CASE("fitted totals agree with the interventional oracle") {
  const SemSpec spec = chainSem(4, 4, 1, 221);
  const Dataset ds = simulate(spec, 4000, 222);
  const FitResult fit = fitCoefficients(truthGraph(spec), ds.omicsRaw);
  REQUIRE(fit.issues.empty());

  const auto oracle = interventionalOracle(spec, "M01", 1.0, 4000, 223);
  const EffectEstimate est = totalEffect(fit.graph, "M01", "M04");
  const double truthTotal = oracle.at("M04");
  CHECK(std::fabs(est.total - truthTotal) <= 0.1 * std::max(std::fabs(truthTotal), 0.1));
}
