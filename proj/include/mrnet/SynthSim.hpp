#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrnet/Dataset.hpp"
#include "mrnet/Graph.hpp"

namespace mrnet {

struct SemEdge {
  std::string from;
  std::string to;
  double coefficient = 0.0;
};

struct VariantEffect {
  std::string node;
  double beta = 0.0;
};

// A variant with more than one effect entry is deliberately pleiotropic.
struct VariantSpec {
  std::string id;
  double maf = 0.0;  // minor allele frequency, in (0, 0.5]
  std::vector<VariantEffect> effects;
};

// Ground-truth linear-Gaussian SEM: omic nodes driven by parents, exclusive
// genetic variants, and unit-variance noise unless overridden.
struct SemSpec {
  std::vector<std::string> nodes;
  std::vector<SemEdge> edges;
  std::map<std::string, double> noiseSd;  // nodes absent here use 1.0
  std::vector<VariantSpec> variants;
  std::uint64_t seed = 0;

  double noiseFor(const std::string& node) const;
  std::vector<std::array<std::string, 3>> pleiotropyTriples() const;

  // Acyclicity, id uniqueness, maf range, positive noise. ConfigError on
  // violation. Returns a deterministic topological order.
  std::vector<std::string> validateAndOrder() const;
};

// Random DAG over a shuffled topological order: each forward pair is an edge
// with probability expectedDegree/(nNodes-1); coefficients uniform on
// +-[0.5, 1.5]; each node gets ivsPerNode exclusive variants with beta
// uniform on [0.3, 0.8]; all mafs uniform on [0.1, 0.5]. Surplus variants
// beyond nNodes*ivsPerNode are inert background.
SemSpec randomSem(int nNodes, double expectedDegree, int nVariants, int ivsPerNode,
                  std::uint64_t seed);

// Same variant scheme over the fixed path M1 -> M2 -> ... -> Mn.
SemSpec chainSem(int nNodes, int nVariants, int ivsPerNode, std::uint64_t seed);

// Draws variants ~ Binomial(2, maf) and node columns in topological order.
// Deterministic in (spec, seed). The returned Dataset carries raw and
// standardized omics; no outcome column.
Dataset simulate(const SemSpec& spec, int nSamples, std::uint64_t seed);

// Identical draws to simulate(); after generating `source`, delta is added
// before it feeds its children (a do-shift). With a shared seed the paired
// runs difference to exact linear propagation.
Dataset simulateShifted(const SemSpec& spec, int nSamples, std::uint64_t seed,
                        const std::string& source, double delta);

// The ground-truth DAG as a CausalGraph (all edges directed, coefficients
// from the spec).
CausalGraph truthGraph(const SemSpec& spec);

struct RecoveryScore {
  double skeletonPrecision = 0.0;
  double skeletonRecall = 0.0;
  double skeletonF1 = 0.0;
  double orientationAccuracy = 0.0;  // over directed edges whose pair is in truth
  int shd = 0;
};

// Skeleton metrics over unordered pairs; orientation accuracy over learned
// directed edges whose pair exists in truth (0.0 when none); SHD counts
// insertions, deletions, and reversals with conflicted treated as
// undirected. Node universes must match.
RecoveryScore scoreRecovery(const SemSpec& truth, const CausalGraph& learned);

nlohmann::json recoveryToJson(const RecoveryScore& s);

nlohmann::json semSpecToJson(const SemSpec& spec);
SemSpec semSpecFromJson(const nlohmann::json& j);
SemSpec loadSemSpec(const std::string& path);

}  // namespace mrnet
