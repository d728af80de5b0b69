#include "mamkkc/manifold_graph.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "mamkkc/errors.hpp"

namespace mamkkc {

NeighborGraph knn_graph(const KernelMatrix& kernel, int tau) {
  const Eigen::Index n = kernel.values.rows();
  if (kernel.values.cols() != n) throw InputError("knn_graph: kernel must be square");
  if (tau < 1 || tau > n - 1)
    throw InputError("knn_graph: tau must lie in [1, n-1], got " + std::to_string(tau));

  Eigen::MatrixXd directed = Eigen::MatrixXd::Zero(n, n);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n) - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    order.clear();
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) order.push_back(j);
    const auto& row = kernel.values;
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      if (row(i, a) != row(i, b)) return row(i, a) > row(i, b);
      return a < b;  // ties to the lower index
    });
    for (int k = 0; k < tau; ++k) directed(i, order[static_cast<std::size_t>(k)]) = 1.0;
  }

  NeighborGraph g;
  g.tau = tau;
  g.adjacency = directed.cwiseMax(directed.transpose());  // union symmetrization
  return g;
}

Laplacian laplacian(const NeighborGraph& graph) {
  const Eigen::VectorXd degree = graph.adjacency.rowwise().sum();
  Laplacian l;
  l.values = -graph.adjacency;
  l.values.diagonal() += degree;
  return l;
}

}  // namespace mamkkc
