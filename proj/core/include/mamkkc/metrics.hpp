#pragma once

#include <vector>

namespace mamkkc {

// External clustering measures against ground truth; each lies in [0, 1].
struct MetricReport {
  double acc = 0.0;
  double nmi = 0.0;
  double purity = 0.0;
};

// Fraction of samples matched under the best one-to-one assignment of
// predicted clusters to truth classes (rectangular assignment on the
// contingency matrix), so relabelings score identically.
double accuracy(const std::vector<int>& pred, const std::vector<int>& truth);

// I(pred; truth) / sqrt(H(pred) H(truth)) with natural-log entropies.
// Both partitions trivial -> 1.0; exactly one trivial -> 0.0.
double nmi(const std::vector<int>& pred, const std::vector<int>& truth);

// Majority-class count per predicted cluster, averaged over samples.
double purity(const std::vector<int>& pred, const std::vector<int>& truth);

MetricReport evaluate(const std::vector<int>& pred, const std::vector<int>& truth);

// Two-sided p-value of the paired t statistic on d = x - y with n-1 degrees
// of freedom, via the regularized incomplete beta function. Conventions:
// d identically zero -> 1.0; zero spread with nonzero mean -> 0.0.
double paired_t_test(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace mamkkc
