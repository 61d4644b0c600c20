#include "mrnet/CiEngine.hpp"

#include <algorithm>
#include <cmath>

#include "mrnet/Errors.hpp"
#include "mrnet/Rng.hpp"

namespace mrnet {

namespace {

constexpr double kCorrClamp = 1.0 - 1e-12;
constexpr double kZeroResidualSd = 1e-12;

void checkDof(Eigen::Index n, std::size_t condSize) {
  if (n - static_cast<Eigen::Index>(condSize) - 3 < 1)
    throw DataError("CI test: " + std::to_string(n) + " samples cannot support a conditioning set of size " +
                    std::to_string(condSize) + " (need n - |S| - 3 >= 1)");
}

// Residuals of column c after regression on [1, cols[cond]]. The QR
// factorization is shared by the caller when both columns use the same
// conditioning set.
struct Residualizer {
  Eigen::MatrixXd design;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;

  Residualizer(const Eigen::MatrixXd& cols, const std::vector<int>& cond) {
    const Eigen::Index n = cols.rows();
    design.resize(n, 1 + static_cast<Eigen::Index>(cond.size()));
    design.col(0).setOnes();
    for (std::size_t k = 0; k < cond.size(); ++k) design.col(1 + static_cast<Eigen::Index>(k)) = cols.col(cond[k]);
    qr.compute(design);
    if (qr.rank() < design.cols())
      throw DataError("CI test: conditioning design matrix is rank-deficient (" +
                      std::to_string(qr.rank()) + " of " + std::to_string(design.cols()) +
                      " columns independent); shrink the conditioning set");
  }

  Eigen::VectorXd residual(const Eigen::VectorXd& c) const { return c - design * qr.solve(c); }
};

double residualCorrelation(Eigen::VectorXd rx, Eigen::VectorXd ry) {
  const Eigen::Index n = rx.size();
  rx.array() -= rx.mean();
  ry.array() -= ry.mean();
  const double denom = static_cast<double>(n - 1);
  const double sx = std::sqrt(rx.squaredNorm() / denom);
  const double sy = std::sqrt(ry.squaredNorm() / denom);
  if (sx <= kZeroResidualSd || sy <= kZeroResidualSd) return 0.0;
  const double r = rx.dot(ry) / (denom * sx * sy);
  return std::clamp(r, -1.0, 1.0);
}

}  // namespace

double partialCorrelation(const Eigen::MatrixXd& cols, int x, int y, const std::vector<int>& cond) {
  if (x == y) throw DataError("CI test: x and y must differ");
  for (int c : cond)
    if (c == x || c == y) throw DataError("CI test: conditioning set contains x or y");
  checkDof(cols.rows(), cond.size());
  if (cond.empty()) return residualCorrelation(cols.col(x), cols.col(y));
  const Residualizer res(cols, cond);
  return residualCorrelation(res.residual(cols.col(x)), res.residual(cols.col(y)));
}

CITestResult fisherZTest(double r, int n, int sSize, double alpha) {
  if (alpha <= 0.0 || alpha >= 1.0) throw ConfigError("fisher z: alpha must lie in (0,1)");
  const int nEff = n - sSize - 3;
  if (nEff < 1)
    throw DataError("fisher z: n - |S| - 3 = " + std::to_string(nEff) + " < 1");
  CITestResult out;
  out.nEff = nEff;
  out.partialCorr = std::clamp(r, -1.0, 1.0);
  const double clamped = std::clamp(r, -kCorrClamp, kCorrClamp);
  out.statistic = std::sqrt(static_cast<double>(nEff)) * std::atanh(clamped);
  if (std::fabs(r) >= kCorrClamp) {
    out.pValue = 0.0;
    out.independent = false;
    return out;
  }
  out.pValue = std::erfc(std::fabs(out.statistic) / std::sqrt(2.0));
  out.independent = out.pValue > alpha;
  return out;
}

CITestResult ciTest(const Eigen::MatrixXd& cols, const std::vector<std::string>& names, int x,
                    int y, const std::vector<int>& cond, double alpha) {
  const double r = partialCorrelation(cols, x, y, cond);
  CITestResult out = fisherZTest(r, static_cast<int>(cols.rows()), static_cast<int>(cond.size()), alpha);
  out.x = names[static_cast<std::size_t>(x)];
  out.y = names[static_cast<std::size_t>(y)];
  for (int c : cond) out.condSet.push_back(names[static_cast<std::size_t>(c)]);
  return out;
}

CITestResult permutationCiTest(const Eigen::MatrixXd& cols, const std::vector<std::string>& names,
                               int x, int y, const std::vector<int>& cond, int nPerm,
                               std::uint64_t seed, double alpha) {
  if (nPerm < 200) throw ConfigError("permutation CI test: n_perm must be at least 200");
  if (alpha <= 0.0 || alpha >= 1.0) throw ConfigError("permutation CI test: alpha must lie in (0,1)");
  if (x == y) throw DataError("CI test: x and y must differ");
  for (int c : cond)
    if (c == x || c == y) throw DataError("CI test: conditioning set contains x or y");
  const Eigen::Index n = cols.rows();
  checkDof(n, cond.size());

  Eigen::VectorXd rx, ry;
  if (cond.empty()) {
    rx = cols.col(x);
    ry = cols.col(y);
  } else {
    const Residualizer res(cols, cond);
    rx = res.residual(cols.col(x));
    ry = res.residual(cols.col(y));
  }
  const double observed = residualCorrelation(rx, ry);

  // Unit-normalize once so each permuted correlation is a plain dot product.
  rx.array() -= rx.mean();
  ry.array() -= ry.mean();
  const double nx = rx.norm(), ny = ry.norm();
  int hits = 0;
  if (nx > 0.0 && ny > 0.0) {
    rx /= nx;
    ry /= ny;
    std::vector<double> px(rx.data(), rx.data() + n);
    Rng rng(seed);
    const double threshold = std::fabs(observed) - 1e-15;
    for (int p = 0; p < nPerm; ++p) {
      rng.shuffle(px);
      double dot = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) dot += px[static_cast<std::size_t>(i)] * ry[i];
      if (std::fabs(dot) >= threshold) ++hits;
    }
  } else {
    hits = nPerm;  // no variation left: every permutation ties the observed 0
  }

  CITestResult out;
  out.x = names[static_cast<std::size_t>(x)];
  out.y = names[static_cast<std::size_t>(y)];
  for (int c : cond) out.condSet.push_back(names[static_cast<std::size_t>(c)]);
  out.partialCorr = observed;
  out.statistic = observed;
  out.nEff = static_cast<int>(n) - static_cast<int>(cond.size()) - 3;
  out.pValue = (1.0 + hits) / (1.0 + nPerm);
  out.independent = out.pValue > alpha;
  return out;
}

}  // namespace mrnet
