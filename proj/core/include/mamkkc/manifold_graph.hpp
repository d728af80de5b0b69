#pragma once

#include <Eigen/Core>

#include "mamkkc/kernel_bank.hpp"

namespace mamkkc {

// Binary symmetric adjacency of a tau-nearest-neighbor graph, no self loops.
struct NeighborGraph {
  Eigen::MatrixXd adjacency;
  int tau = 0;
};

// L = D - G with D the diagonal degree matrix of G.
struct Laplacian {
  Eigen::MatrixXd values;
};

// j is a directed neighbor of i iff K_ij is among the tau largest
// off-diagonal entries of row i (ties broken by lower index). The returned
// adjacency is the union symmetrization of the directed picks.
NeighborGraph knn_graph(const KernelMatrix& kernel, int tau);

Laplacian laplacian(const NeighborGraph& graph);

}  // namespace mamkkc
