#include "mrnet/Dataset.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>

#include "mrnet/Csv.hpp"
#include "mrnet/Errors.hpp"

namespace mrnet {

namespace {

constexpr std::size_t kMinOverlap = 10;

void requireUnique(const std::vector<std::string>& ids, const std::string& what,
                   const std::string& path) {
  std::set<std::string> seen;
  for (const auto& id : ids)
    if (!seen.insert(id).second) throw DataError(path + ": duplicate " + what + " '" + id + "'");
}

double sampleSd(const Eigen::VectorXd& col, double mean) {
  const Eigen::Index n = col.size();
  if (n < 2) return 0.0;
  return std::sqrt((col.array() - mean).square().sum() / static_cast<double>(n - 1));
}

}  // namespace

FeatureMatrix standardize(const FeatureMatrix& m) {
  FeatureMatrix out = m;
  const Eigen::Index n = m.values.rows();
  if (n < 2) throw DataError("standardize: need at least 2 samples");
  for (Eigen::Index j = 0; j < m.values.cols(); ++j) {
    const double mean = m.values.col(j).mean();
    const double sd = sampleSd(m.values.col(j), mean);
    if (sd == 0.0 || !std::isfinite(1.0 / sd))
      throw DataError("standardize: column '" + m.features[static_cast<std::size_t>(j)] +
                      "' has zero variance");
    out.values.col(j) = (m.values.col(j).array() - mean) / sd;
    if (!out.values.col(j).allFinite())
      throw DataError("standardize: column '" + m.features[static_cast<std::size_t>(j)] +
                      "' produced non-finite values");
  }
  return out;
}

Dataset loadDataset(const std::string& genotypePath, const std::string& omicsPath,
                    const std::optional<std::string>& outcomeColumn) {
  const CsvTable geno = readCsv(genotypePath);
  const CsvTable omic = readCsv(omicsPath);

  std::vector<std::string> genoSamples, omicSamples;
  genoSamples.reserve(geno.rows.size());
  for (const auto& r : geno.rows) genoSamples.push_back(r[0]);
  omicSamples.reserve(omic.rows.size());
  for (const auto& r : omic.rows) omicSamples.push_back(r[0]);
  requireUnique(genoSamples, "sample id", genotypePath);
  requireUnique(omicSamples, "sample id", omicsPath);
  requireUnique({geno.header.begin() + 1, geno.header.end()}, "variant id", genotypePath);
  requireUnique({omic.header.begin() + 1, omic.header.end()}, "feature id", omicsPath);

  std::unordered_map<std::string, std::size_t> omicRowOf;
  for (std::size_t i = 0; i < omicSamples.size(); ++i) omicRowOf[omicSamples[i]] = i;

  // Inner join keeping the genotype file's row order.
  std::vector<std::size_t> genoRows, omicRows;
  std::set<std::string> kept;
  for (std::size_t i = 0; i < genoSamples.size(); ++i) {
    auto it = omicRowOf.find(genoSamples[i]);
    if (it == omicRowOf.end()) continue;
    genoRows.push_back(i);
    omicRows.push_back(it->second);
    kept.insert(genoSamples[i]);
  }
  if (genoRows.size() < kMinOverlap)
    throw DataError("alignment: only " + std::to_string(genoRows.size()) +
                    " samples shared between " + genotypePath + " and " + omicsPath +
                    " (need at least " + std::to_string(kMinOverlap) + ")");

  Dataset ds;
  for (const auto& s : genoSamples)
    if (!kept.count(s)) ds.drops.droppedSamples.push_back(s);
  for (const auto& s : omicSamples)
    if (!kept.count(s)) ds.drops.droppedSamples.push_back(s);
  std::sort(ds.drops.droppedSamples.begin(), ds.drops.droppedSamples.end());

  const std::size_t n = genoRows.size();
  for (std::size_t k = 0; k < n; ++k) ds.genotype.samples.push_back(genoSamples[genoRows[k]]);

  // Genotype: parse {0,1,2} with empty = missing, impute to the rounded
  // per-variant mean, then drop zero-variance variants.
  const std::size_t nVariantsIn = geno.header.size() - 1;
  std::vector<std::vector<double>> cols;
  for (std::size_t j = 0; j < nVariantsIn; ++j) {
    const std::string& name = geno.header[j + 1];
    std::vector<double> col(n);
    std::vector<std::size_t> missing;
    double sum = 0.0;
    std::size_t present = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const std::string& cell = geno.rows[genoRows[k]][j + 1];
      if (cell.empty()) {
        missing.push_back(k);
        continue;
      }
      const double v = parseDoubleCell(cell, genotypePath, genoRows[k] + 2, name);
      if (v != 0.0 && v != 1.0 && v != 2.0)
        throw DataError(genotypePath + ": line " + std::to_string(genoRows[k] + 2) +
                        ", column '" + name + "': allele count must be 0, 1, or 2, got '" +
                        cell + "'");
      col[k] = v;
      sum += v;
      ++present;
    }
    if (present == 0) {
      ds.drops.droppedVariants.push_back(name);
      continue;
    }
    const double imputed =
        std::clamp<double>(std::llround(sum / static_cast<double>(present)), 0.0, 2.0);
    for (std::size_t k : missing) col[k] = imputed;
    bool constant = true;
    for (std::size_t k = 0; k < n && constant; ++k) constant = col[k] == col[0];
    if (constant) {
      ds.drops.droppedVariants.push_back(name);
      continue;
    }
    ds.genotype.variants.push_back(name);
    cols.push_back(std::move(col));
  }
  ds.genotype.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t k = 0; k < n; ++k)
      ds.genotype.values(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = cols[j][k];

  // Omics: every cell must parse; missing is an error, not imputed.
  std::vector<std::string> featureNames{omic.header.begin() + 1, omic.header.end()};
  Eigen::Index outcomeIdx = -1;
  if (outcomeColumn) {
    auto it = std::find(featureNames.begin(), featureNames.end(), *outcomeColumn);
    if (it == featureNames.end())
      throw DataError(omicsPath + ": outcome column '" + *outcomeColumn + "' not found");
    outcomeIdx = static_cast<Eigen::Index>(it - featureNames.begin());
  }
  Eigen::MatrixXd raw(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(featureNames.size()));
  for (std::size_t k = 0; k < n; ++k) {
    const auto& row = omic.rows[omicRows[k]];
    for (std::size_t j = 0; j < featureNames.size(); ++j)
      raw(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) =
          parseDoubleCell(row[j + 1], omicsPath, omicRows[k] + 2, featureNames[j]);
  }

  ds.omicsRaw.samples = ds.genotype.samples;
  if (outcomeIdx >= 0) {
    ds.outcomeName = *outcomeColumn;
    ds.outcomeRaw = raw.col(outcomeIdx);
    Eigen::MatrixXd rest(raw.rows(), raw.cols() - 1);
    std::vector<std::string> restNames;
    Eigen::Index c = 0;
    for (Eigen::Index j = 0; j < raw.cols(); ++j) {
      if (j == outcomeIdx) continue;
      rest.col(c++) = raw.col(j);
      restNames.push_back(featureNames[static_cast<std::size_t>(j)]);
    }
    ds.omicsRaw.features = std::move(restNames);
    ds.omicsRaw.values = std::move(rest);
    const double mean = ds.outcomeRaw.mean();
    const double sd = sampleSd(ds.outcomeRaw, mean);
    if (sd == 0.0 || !std::isfinite(1.0 / sd))
      throw DataError(omicsPath + ": outcome column '" + *outcomeColumn + "' has zero variance");
    ds.outcome = (ds.outcomeRaw.array() - mean) / sd;
  } else {
    ds.omicsRaw.features = std::move(featureNames);
    ds.omicsRaw.values = std::move(raw);
  }
  ds.omics = standardize(ds.omicsRaw);
  return ds;
}

std::string genotypeCsv(const GenotypeMatrix& g) {
  std::ostringstream out;
  out << "sample_id";
  for (const auto& v : g.variants) out << ',' << v;
  out << '\n';
  for (std::size_t i = 0; i < g.samples.size(); ++i) {
    out << g.samples[i];
    for (Eigen::Index j = 0; j < g.values.cols(); ++j)
      out << ',' << static_cast<long long>(g.values(static_cast<Eigen::Index>(i), j));
    out << '\n';
  }
  return out.str();
}

std::string featureCsv(const FeatureMatrix& m) {
  std::ostringstream out;
  out << "sample_id";
  for (const auto& f : m.features) out << ',' << f;
  out << '\n';
  for (std::size_t i = 0; i < m.samples.size(); ++i) {
    out << m.samples[i];
    for (Eigen::Index j = 0; j < m.values.cols(); ++j)
      out << ',' << formatDouble(m.values(static_cast<Eigen::Index>(i), j));
    out << '\n';
  }
  return out.str();
}

}  // namespace mrnet
