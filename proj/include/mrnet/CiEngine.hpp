#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace mrnet {

struct CITestResult {
  std::string x;
  std::string y;
  std::vector<std::string> condSet;
  double partialCorr = 0.0;
  double statistic = 0.0;
  double pValue = 1.0;
  bool independent = true;
  int nEff = 0;  // n - |condSet| - 3
};

// Correlation of the residuals of columns x and y after least-squares
// regression on the conditioning columns (plain Pearson for an empty set).
// QR-based; a rank-deficient conditioning design raises DataError, as does a
// degrees-of-freedom violation (n - |cond| - 3 < 1). A residual with no
// numerical variation left yields 0.
double partialCorrelation(const Eigen::MatrixXd& cols, int x, int y, const std::vector<int>& cond);

// Fisher z transform of a partial correlation: statistic
// sqrt(n - sSize - 3) * atanh(r), two-sided normal p-value,
// independent <=> p > alpha. |r| at or beyond 1 - 1e-12 short-circuits to
// p = 0, dependent, with the statistic evaluated at the clamp point.
CITestResult fisherZTest(double r, int n, int sSize, double alpha);

// Convenience: partial correlation + Fisher z in one call, with names filled
// in from `names` for audit logs.
CITestResult ciTest(const Eigen::MatrixXd& cols, const std::vector<std::string>& names, int x,
                    int y, const std::vector<int>& cond, double alpha);

// Distribution-free check of the same hypothesis: permutes x's residuals
// nPerm times (nPerm >= 200) and reports
// p = (1 + #{|r_perm| >= |r_obs|}) / (1 + nPerm). Deterministic given seed.
CITestResult permutationCiTest(const Eigen::MatrixXd& cols, const std::vector<std::string>& names,
                               int x, int y, const std::vector<int>& cond, int nPerm,
                               std::uint64_t seed, double alpha);

}  // namespace mrnet
