#pragma once

#include <cstdint>
#include <vector>

#include "mamkkc/solver.hpp"

namespace mamkkc {

struct KMeansOptions {
  int restarts = 10;
  std::uint64_t seed = 0;
  int max_iter = 100;
  bool normalize_rows = false;  // scale each row to unit norm first
};

struct KMeansResult {
  std::vector<int> labels;   // cluster ids in {0, ..., c-1}
  double wcss = 0.0;         // within-cluster sum of squares of the kept run
  bool degenerate = false;   // fewer distinct rows than clusters
};

// Lloyd iterations with k-means++ seeding on the rows of the partition
// matrix, `restarts` independent seedings (seeds derived from
// options.seed), keeping the lowest-WCSS labeling. Empty clusters are
// repaired by moving the farthest point out of the largest cluster.
KMeansResult kmeans_rows(const Partition& partition, int clusters,
                         const KMeansOptions& options = {});

}  // namespace mamkkc
