#include "mrnet/IvEngine.hpp"

#include <algorithm>
#include <cmath>

#include "mrnet/Errors.hpp"

namespace mrnet {

namespace {

constexpr double kOrthogonalityTol = 1e-8;
constexpr double kFCap = 1e12;

std::string ivName(std::size_t k) { return "IV" + std::to_string(k + 1); }

void assertOrthogonal(const Eigen::MatrixXd& scores) {
  const Eigen::Index n = scores.rows();
  for (Eigen::Index a = 0; a < scores.cols(); ++a)
    for (Eigen::Index b = a + 1; b < scores.cols(); ++b) {
      const double r = scores.col(a).dot(scores.col(b)) / static_cast<double>(n - 1);
      if (std::fabs(r) > kOrthogonalityTol)
        throw InternalError("instrument scores lost orthogonality: |corr| = " +
                            std::to_string(std::fabs(r)));
    }
}

double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::Index n = a.size();
  const Eigen::ArrayXd ca = a.array() - a.mean();
  const Eigen::ArrayXd cb = b.array() - b.mean();
  const double na = std::sqrt(ca.square().sum());
  const double nb = std::sqrt(cb.square().sum());
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp((ca * cb).sum() / (na * nb), -1.0, 1.0);
}

}  // namespace

FeatureMatrix InstrumentSet::scoreMatrix() const {
  FeatureMatrix m;
  m.samples = sampleIds;
  m.features = ivIds;
  m.values = scores;
  return m;
}

InstrumentSet generateIvs(const GenotypeMatrix& genotype, int maxIvs, double minExplainedVariance) {
  const Eigen::Index n = genotype.values.rows();
  const Eigen::Index p = genotype.values.cols();
  if (maxIvs < 1) throw ConfigError("generate_ivs: max_ivs must be at least 1");
  if (maxIvs > std::min<Eigen::Index>(n - 1, p))
    throw ConfigError("generate_ivs: max_ivs " + std::to_string(maxIvs) +
                      " exceeds min(n_samples - 1, n_variants) = " +
                      std::to_string(std::min<Eigen::Index>(n - 1, p)));
  if (minExplainedVariance < 0.0 || minExplainedVariance > 1.0)
    throw ConfigError("generate_ivs: min_explained_variance must lie in [0,1]");
  if (p < 1) throw DataError("generate_ivs: genotype has no variants");
  if (n < 3) throw DataError("generate_ivs: need at least 3 samples");

  // Center and scale: correlation-matrix PCA. Zero-variance columns must
  // have been filtered at load.
  Eigen::MatrixXd z(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double mean = genotype.values.col(j).mean();
    const double sd = std::sqrt((genotype.values.col(j).array() - mean).square().sum() /
                                static_cast<double>(n - 1));
    if (sd == 0.0)
      throw DataError("generate_ivs: variant '" + genotype.variants[static_cast<std::size_t>(j)] +
                      "' has zero variance; filter before decomposition");
    z.col(j) = (genotype.values.col(j).array() - mean) / sd;
  }

  const Eigen::MatrixXd corr = z.transpose() * z / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(corr);
  if (solver.info() != Eigen::Success)
    throw InternalError("generate_ivs: eigendecomposition failed to converge");

  // Eigen returns ascending order; walk from the back.
  const Eigen::VectorXd lambdaAsc = solver.eigenvalues();
  const Eigen::MatrixXd vecsAsc = solver.eigenvectors();
  const double lambdaMax = std::max(lambdaAsc(p - 1), 0.0);
  const double rankTol = 1e-10 * std::max(lambdaMax, 1.0);
  const double total = static_cast<double>(p);  // trace of a correlation matrix

  InstrumentSet set;
  set.sampleIds = genotype.samples;
  set.variantIds = genotype.variants;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = p - 1; k >= 0; --k) {
    const double lambda = lambdaAsc(k);
    if (lambda <= rankTol) break;
    if (lambda / total < minExplainedVariance) break;
    keep.push_back(k);
    if (static_cast<int>(keep.size()) >= maxIvs) break;
  }
  if (keep.empty())
    throw DataError("generate_ivs: no component clears min_explained_variance = " +
                    std::to_string(minExplainedVariance));

  const Eigen::Index m = static_cast<Eigen::Index>(keep.size());
  set.scores.resize(n, m);
  set.loadings.resize(p, m);
  for (Eigen::Index c = 0; c < m; ++c) {
    const Eigen::Index k = keep[static_cast<std::size_t>(c)];
    Eigen::VectorXd v = vecsAsc.col(k);
    // Sign convention: the largest-magnitude loading entry is positive.
    Eigen::Index argmax = 0;
    v.cwiseAbs().maxCoeff(&argmax);
    if (v(argmax) < 0.0) v = -v;
    Eigen::VectorXd score = z * v;
    const double mean = score.mean();
    const double sd =
        std::sqrt((score.array() - mean).square().sum() / static_cast<double>(n - 1));
    if (sd == 0.0) throw InternalError("generate_ivs: retained component has zero score variance");
    set.loadings.col(c) = v;
    set.scores.col(c) = (score.array() - mean) / sd;
    set.eigenvalues.push_back(lambdaAsc(k));
    set.explainedVariance.push_back(lambdaAsc(k) / total);
    set.ivIds.push_back(ivName(static_cast<std::size_t>(c)));
  }
  assertOrthogonal(set.scores);
  return set;
}

std::pair<double, double> instrumentStrength(const Eigen::VectorXd& iv,
                                             const Eigen::VectorXd& component) {
  const Eigen::Index n = iv.size();
  if (n != component.size()) throw DataError("instrument_strength: sample counts differ");
  if (n < 3) throw DataError("instrument_strength: need at least 3 samples");
  const double r = pearson(iv, component);
  const double r2 = r * r;
  if (r2 >= 1.0 - 1e-12) return {kFCap, 1.0};
  const double f = r2 / (1.0 - r2) * static_cast<double>(n - 2);
  return {std::min(f, kFCap), r2};
}

Allocation allocate(const FeatureMatrix& ivScores, const FeatureMatrix& omics, double fThreshold,
                    int maxPerComponent) {
  if (maxPerComponent < 1) throw ConfigError("allocate: max_per_component must be at least 1");
  if (fThreshold < 0.0) throw ConfigError("allocate: f_threshold must be non-negative");
  if (ivScores.values.rows() != omics.values.rows())
    throw DataError("allocate: instrument and omic sample counts differ");
  Allocation out;
  for (Eigen::Index j = 0; j < omics.values.cols(); ++j) {
    const std::string& comp = omics.features[static_cast<std::size_t>(j)];
    std::vector<AllocationEntry> entries;
    for (Eigen::Index k = 0; k < ivScores.values.cols(); ++k) {
      const auto [f, r2] = instrumentStrength(ivScores.values.col(k), omics.values.col(j));
      if (f >= fThreshold)
        entries.push_back({ivScores.features[static_cast<std::size_t>(k)], f, r2});
    }
    std::sort(entries.begin(), entries.end(), [](const AllocationEntry& a, const AllocationEntry& b) {
      if (a.fStatistic != b.fStatistic) return a.fStatistic > b.fStatistic;
      return a.iv < b.iv;
    });
    if (static_cast<int>(entries.size()) > maxPerComponent)
      entries.resize(static_cast<std::size_t>(maxPerComponent));
    if (entries.empty())
      out.uncovered.push_back(comp);
    else
      out.byComponent[comp] = std::move(entries);
  }
  return out;
}

Allocation allocate(const InstrumentSet& ivs, const FeatureMatrix& omics, double fThreshold,
                    int maxPerComponent) {
  return allocate(ivs.scoreMatrix(), omics, fThreshold, maxPerComponent);
}

ValidityResult validityFilter(const Eigen::VectorXd& iv, const std::string& ivId,
                              const Eigen::VectorXd& exposure, const std::string& exposureId,
                              const Eigen::VectorXd& response, const std::string& responseId,
                              double alpha) {
  const Eigen::Index n = iv.size();
  Eigen::MatrixXd cols(n, 3);
  cols.col(0) = iv;
  cols.col(1) = exposure;
  cols.col(2) = response;
  const std::vector<std::string> names{ivId, exposureId, responseId};
  ValidityResult out;
  out.relevance = ciTest(cols, names, 0, 1, {}, alpha);
  out.exclusion = ciTest(cols, names, 0, 2, {1}, alpha);
  out.pass = !out.relevance.independent && out.exclusion.independent;
  return out;
}

}  // namespace mrnet
