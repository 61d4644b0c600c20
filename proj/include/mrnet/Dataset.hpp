#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace mrnet {

// Allele counts in {0,1,2}; missing values exist only transiently during
// loading and are imputed before the matrix is constructed.
struct GenotypeMatrix {
  std::vector<std::string> samples;
  std::vector<std::string> variants;
  Eigen::MatrixXd values;  // n_samples x n_variants
};

struct FeatureMatrix {
  std::vector<std::string> samples;
  std::vector<std::string> features;
  Eigen::MatrixXd values;  // n_samples x n_features
};

struct DropReport {
  std::vector<std::string> droppedSamples;   // outside the sample-id intersection
  std::vector<std::string> droppedVariants;  // zero variance after imputation
};

// Sample-aligned genotype and omics. `omics` holds standardized columns
// (mean 0, sd 1); `omicsRaw` preserves the values as loaded, which is what
// coefficient fitting and effect arithmetic operate on (correlation-based
// tests are scale-invariant, effect sizes are not).
struct Dataset {
  GenotypeMatrix genotype;
  FeatureMatrix omics;
  FeatureMatrix omicsRaw;
  std::optional<std::string> outcomeName;
  Eigen::VectorXd outcome;     // standardized; empty when no outcome column
  Eigen::VectorXd outcomeRaw;  // as loaded
  DropReport drops;
};

// Column-wise z-score with the n-1 (sample) standard deviation.
// Idempotent within 1e-9. A zero-variance column raises DataError naming it.
FeatureMatrix standardize(const FeatureMatrix& m);

// Loads two CSV files (header row, first column sample_id), inner-joins on
// sample id keeping the genotype file's row order, imputes missing genotype
// cells to the per-variant mean rounded into {0,1,2}, drops zero-variance
// variants into the drop report, and standardizes omic columns. When
// outcomeColumn is given, that omics column is pulled out of the feature set
// and kept as the designated outcome.
Dataset loadDataset(const std::string& genotypePath, const std::string& omicsPath,
                    const std::optional<std::string>& outcomeColumn = std::nullopt);

// Serializes the genotype (integers) and raw omics (%.17g) back to CSV,
// atomically. Reloading reproduces both matrices bit for bit.
std::string genotypeCsv(const GenotypeMatrix& g);
std::string featureCsv(const FeatureMatrix& m);

}  // namespace mrnet
