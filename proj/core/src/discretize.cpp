#include "mamkkc/discretize.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "mamkkc/errors.hpp"
#include "mamkkc/rng.hpp"

namespace mamkkc {

namespace {

Eigen::Index count_distinct_rows(const Eigen::MatrixXd& x) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(x.rows()));
  std::iota(order.begin(), order.end(), 0);
  auto less = [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (x(a, j) != x(b, j)) return x(a, j) < x(b, j);
    }
    return false;
  };
  std::sort(order.begin(), order.end(), less);
  Eigen::Index distinct = x.rows() > 0 ? 1 : 0;
  for (std::size_t i = 1; i < order.size(); ++i)
    if (less(order[i - 1], order[i])) ++distinct;
  return distinct;
}

Eigen::MatrixXd kmeanspp_init(const Eigen::MatrixXd& x, int clusters, SplitMix64& rng) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd centers(clusters, x.cols());
  centers.row(0) = x.row(static_cast<Eigen::Index>(rng.next_below(static_cast<std::uint64_t>(n))));
  Eigen::VectorXd d2 = (x.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int k = 1; k < clusters; ++k) {
    const double total = d2.sum();
    Eigen::Index pick = n - 1;
    if (total > 0.0) {
      const double u = rng.next_double() * total;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += d2(i);
        if (acc >= u) {
          pick = i;
          break;
        }
      }
    } else {
      // all remaining mass at already-chosen centers
      pick = static_cast<Eigen::Index>(rng.next_below(static_cast<std::uint64_t>(n)));
    }
    centers.row(k) = x.row(pick);
    d2 = d2.cwiseMin((x.rowwise() - centers.row(k)).rowwise().squaredNorm());
  }
  return centers;
}

struct LloydRun {
  std::vector<int> labels;
  double wcss = 0.0;
};

LloydRun lloyd(const Eigen::MatrixXd& x, int clusters, int max_iter, SplitMix64& rng) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd centers = kmeanspp_init(x, clusters, rng);
  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  std::vector<int> counts(static_cast<std::size_t>(clusters), 0);

  for (int iter = 0; iter < max_iter; ++iter) {
    const std::vector<int> prev = labels;

    // assignment, ties to the lower center index
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = (x.row(i) - centers.row(0)).squaredNorm();
      for (int k = 1; k < clusters; ++k) {
        const double d = (x.row(i) - centers.row(k)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
      labels[static_cast<std::size_t>(i)] = best;
    }

    std::fill(counts.begin(), counts.end(), 0);
    for (int l : labels) ++counts[static_cast<std::size_t>(l)];

    // empty-cluster repair: move the farthest point out of the largest
    // cluster
    for (int k = 0; k < clusters; ++k) {
      if (counts[static_cast<std::size_t>(k)] > 0) continue;
      int largest = 0;
      for (int q = 1; q < clusters; ++q)
        if (counts[static_cast<std::size_t>(q)] > counts[static_cast<std::size_t>(largest)])
          largest = q;
      if (counts[static_cast<std::size_t>(largest)] < 2) continue;  // nothing to steal
      Eigen::RowVectorXd centroid = Eigen::RowVectorXd::Zero(x.cols());
      for (Eigen::Index i = 0; i < n; ++i)
        if (labels[static_cast<std::size_t>(i)] == largest) centroid += x.row(i);
      centroid /= counts[static_cast<std::size_t>(largest)];
      Eigen::Index farthest = -1;
      double far_d = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (labels[static_cast<std::size_t>(i)] != largest) continue;
        const double d = (x.row(i) - centroid).squaredNorm();
        if (d > far_d) {
          far_d = d;
          farthest = i;
        }
      }
      labels[static_cast<std::size_t>(farthest)] = k;
      --counts[static_cast<std::size_t>(largest)];
      counts[static_cast<std::size_t>(k)] = 1;
    }

    // center update; empty clusters keep their previous center
    for (int k = 0; k < clusters; ++k) {
      if (counts[static_cast<std::size_t>(k)] == 0) continue;
      Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(x.cols());
      for (Eigen::Index i = 0; i < n; ++i)
        if (labels[static_cast<std::size_t>(i)] == k) mean += x.row(i);
      centers.row(k) = mean / counts[static_cast<std::size_t>(k)];
    }

    if (labels == prev) break;
  }

  LloydRun run;
  run.labels = labels;
  for (Eigen::Index i = 0; i < n; ++i)
    run.wcss += (x.row(i) - centers.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
  return run;
}

}  // namespace

KMeansResult kmeans_rows(const Partition& partition, int clusters,
                         const KMeansOptions& options) {
  if (clusters < 2) throw InputError("kmeans_rows: clusters must be >= 2");
  if (options.restarts < 1) throw InputError("kmeans_rows: restarts must be >= 1");
  if (partition.y.rows() < 1) throw InputError("kmeans_rows: empty partition");

  Eigen::MatrixXd x = partition.y;
  if (options.normalize_rows) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double norm = x.row(i).norm();
      if (norm > 0.0) x.row(i) /= norm;
    }
  }

  KMeansResult result;
  result.degenerate = count_distinct_rows(x) < clusters;

  double best_wcss = std::numeric_limits<double>::infinity();
  for (int r = 0; r < options.restarts; ++r) {
    SplitMix64 rng(mix_seed(options.seed, static_cast<std::uint64_t>(r)));
    LloydRun run = lloyd(x, clusters, options.max_iter, rng);
    if (run.wcss < best_wcss) {
      best_wcss = run.wcss;
      result.labels = std::move(run.labels);
    }
  }
  result.wcss = best_wcss;
  return result;
}

}  // namespace mamkkc
