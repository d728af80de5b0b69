#include "mamkkc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mamkkc/errors.hpp"

namespace mamkkc {

namespace {

void check_labels(const std::vector<int>& pred, const std::vector<int>& truth) {
  if (pred.size() != truth.size())
    throw InputError("label vectors must have equal length");
  if (pred.empty()) throw InputError("label vectors must be non-empty");
  for (int v : pred)
    if (v < 0) throw InputError("negative cluster id");
  for (int v : truth)
    if (v < 0) throw InputError("negative class id");
}

std::vector<std::vector<double>> contingency(const std::vector<int>& pred,
                                             const std::vector<int>& truth,
                                             int& kp, int& kt) {
  kp = *std::max_element(pred.begin(), pred.end()) + 1;
  kt = *std::max_element(truth.begin(), truth.end()) + 1;
  std::vector<std::vector<double>> table(
      static_cast<std::size_t>(kp), std::vector<double>(static_cast<std::size_t>(kt), 0.0));
  for (std::size_t i = 0; i < pred.size(); ++i)
    table[static_cast<std::size_t>(pred[i])][static_cast<std::size_t>(truth[i])] += 1.0;
  return table;
}

// Shortest-augmenting-path assignment (Jonker-Volgenant style) on a square
// cost matrix, minimizing. Returns the total cost; `row_of_col[j]` is the
// row matched to column j.
double solve_assignment(const std::vector<std::vector<double>>& cost,
                        std::vector<int>& row_of_col) {
  const int n = static_cast<int>(cost.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      int j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost[static_cast<std::size_t>(i0 - 1)][static_cast<std::size_t>(j - 1)] -
                           u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  row_of_col.assign(static_cast<std::size_t>(n), -1);
  double total = 0.0;
  for (int j = 1; j <= n; ++j) {
    row_of_col[static_cast<std::size_t>(j - 1)] = p[static_cast<std::size_t>(j)] - 1;
    total += cost[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)]
                 [static_cast<std::size_t>(j - 1)];
  }
  return total;
}

double entropy(const std::vector<double>& counts, double n) {
  double h = 0.0;
  for (double c : counts) {
    if (c <= 0.0) continue;
    const double p = c / n;
    h -= p * std::log(p);
  }
  return h;
}

// Continued-fraction evaluation for the regularized incomplete beta
// function (Lentz's method).
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

double reg_inc_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log(1.0 - x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

}  // namespace

double accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
  check_labels(pred, truth);
  int kp = 0, kt = 0;
  const auto table = contingency(pred, truth, kp, kt);
  const int s = std::max(kp, kt);
  // pad to square, costs are negated counts so minimization maximizes the
  // matched mass
  std::vector<std::vector<double>> cost(static_cast<std::size_t>(s),
                                        std::vector<double>(static_cast<std::size_t>(s), 0.0));
  for (int i = 0; i < kp; ++i)
    for (int j = 0; j < kt; ++j)
      cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          -table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  std::vector<int> row_of_col;
  const double matched = -solve_assignment(cost, row_of_col);
  return matched / static_cast<double>(pred.size());
}

double nmi(const std::vector<int>& pred, const std::vector<int>& truth) {
  check_labels(pred, truth);
  int kp = 0, kt = 0;
  const auto table = contingency(pred, truth, kp, kt);
  const double n = static_cast<double>(pred.size());

  std::vector<double> row(static_cast<std::size_t>(kp), 0.0);
  std::vector<double> col(static_cast<std::size_t>(kt), 0.0);
  for (int i = 0; i < kp; ++i)
    for (int j = 0; j < kt; ++j) {
      row[static_cast<std::size_t>(i)] += table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      col[static_cast<std::size_t>(j)] += table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  const double hp = entropy(row, n);
  const double ht = entropy(col, n);
  if (hp == 0.0 && ht == 0.0) return 1.0;  // both trivial, identical partitions
  if (hp == 0.0 || ht == 0.0) return 0.0;

  double mi = 0.0;
  for (int i = 0; i < kp; ++i)
    for (int j = 0; j < kt; ++j) {
      const double c = table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (c <= 0.0) continue;
      mi += (c / n) * std::log(n * c / (row[static_cast<std::size_t>(i)] *
                                        col[static_cast<std::size_t>(j)]));
    }
  return std::clamp(mi / std::sqrt(hp * ht), 0.0, 1.0);
}

double purity(const std::vector<int>& pred, const std::vector<int>& truth) {
  check_labels(pred, truth);
  int kp = 0, kt = 0;
  const auto table = contingency(pred, truth, kp, kt);
  double majority = 0.0;
  for (int i = 0; i < kp; ++i)
    majority += *std::max_element(table[static_cast<std::size_t>(i)].begin(),
                                  table[static_cast<std::size_t>(i)].end());
  return majority / static_cast<double>(pred.size());
}

MetricReport evaluate(const std::vector<int>& pred, const std::vector<int>& truth) {
  return {accuracy(pred, truth), nmi(pred, truth), purity(pred, truth)};
}

double paired_t_test(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InputError("paired_t_test: unequal lengths");
  const std::size_t n = x.size();
  if (n < 2) throw InputError("paired_t_test: need at least 2 pairs");

  double mean = 0.0;
  bool all_zero = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - y[i];
    if (d != 0.0) all_zero = false;
    mean += d;
  }
  if (all_zero) return 1.0;
  mean /= static_cast<double>(n);

  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = (x[i] - y[i]) - mean;
    ss += d * d;
  }
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (sd == 0.0) return 0.0;  // constant nonzero shift

  const double t = mean / (sd / std::sqrt(static_cast<double>(n)));
  const double df = static_cast<double>(n - 1);
  // two-sided p = I_{df/(df+t^2)}(df/2, 1/2)
  const double p = reg_inc_beta(0.5 * df, 0.5, df / (df + t * t));
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace mamkkc
