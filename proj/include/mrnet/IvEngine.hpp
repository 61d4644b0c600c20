#pragma once

#include <Eigen/Dense>

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mrnet/CiEngine.hpp"
#include "mrnet/Dataset.hpp"

namespace mrnet {

// Principal-component instruments extracted from the genotype matrix.
// Score columns are standardized and pairwise orthogonal (|corr| <= 1e-8,
// asserted at construction); explained variance is non-increasing.
struct InstrumentSet {
  std::vector<std::string> ivIds;
  std::vector<std::string> sampleIds;
  std::vector<std::string> variantIds;
  Eigen::MatrixXd scores;                  // n_samples x n_ivs
  Eigen::MatrixXd loadings;                // n_variants x n_ivs
  std::vector<double> explainedVariance;   // fraction of total variance
  std::vector<double> eigenvalues;         // correlation-matrix eigenvalues

  FeatureMatrix scoreMatrix() const;
};

struct AllocationEntry {
  std::string iv;
  double fStatistic = 0.0;
  double rSquared = 0.0;
};

// Per-component instrument lists, sorted by F-statistic descending.
// Components with no qualifying instrument end up in `uncovered`.
struct Allocation {
  std::map<std::string, std::vector<AllocationEntry>> byComponent;
  std::vector<std::string> uncovered;
};

// Correlation-matrix PCA of the genotype: columns centered and scaled, then
// eigendecomposed. Components are returned in descending-eigenvalue order,
// truncated at maxIvs, at individual explained variance below
// minExplainedVariance, and at numerically zero eigenvalues. Loadings follow
// the deterministic sign convention that each column's largest-magnitude
// entry is positive.
InstrumentSet generateIvs(const GenotypeMatrix& genotype, int maxIvs, double minExplainedVariance);

// Simple-regression strength of an instrument for a component: r_squared is
// the squared Pearson correlation, f = r2/(1-r2) * (n-2), capped at 1e12 for
// a perfect fit.
std::pair<double, double> instrumentStrength(const Eigen::VectorXd& iv,
                                             const Eigen::VectorXd& component);

// For each omic component, the up-to-maxPerComponent strongest instruments
// with f >= fThreshold. Ties break on instrument id.
Allocation allocate(const FeatureMatrix& ivScores, const FeatureMatrix& omics, double fThreshold,
                    int maxPerComponent);
Allocation allocate(const InstrumentSet& ivs, const FeatureMatrix& omics, double fThreshold,
                    int maxPerComponent);

// The per-edge admissibility check for an instrument of `exposure` when
// testing exposure -> response: the instrument must be marginally dependent
// on the exposure and conditionally independent of the response given the
// exposure. Both test records are returned for provenance.
struct ValidityResult {
  bool pass = false;
  CITestResult relevance;   // iv vs exposure, marginal
  CITestResult exclusion;   // iv vs response given exposure
};

ValidityResult validityFilter(const Eigen::VectorXd& iv, const std::string& ivId,
                              const Eigen::VectorXd& exposure, const std::string& exposureId,
                              const Eigen::VectorXd& response, const std::string& responseId,
                              double alpha);

}  // namespace mrnet
