#include "mamkkc/solver.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "mamkkc/errors.hpp"
#include "mamkkc/rng.hpp"

namespace mamkkc {

double objective(const Eigen::MatrixXd& combined, const Partition& partition) {
  const Eigen::Index n = combined.rows();
  if (combined.cols() != n) throw InputError("objective: matrix must be square");
  if (partition.y.rows() != n)
    throw InputError("objective: partition row count does not match");
  // tr(Y^T N Y) = sum_ij Y_ij (N Y)_ij
  return combined.trace() - partition.y.cwiseProduct(combined * partition.y).sum();
}

Partition update_partition(const Eigen::MatrixXd& combined, int clusters) {
  const Eigen::Index n = combined.rows();
  if (combined.cols() != n) throw InputError("update_partition: matrix must be square");
  if (clusters < 2 || clusters > n)
    throw InputError("update_partition: clusters must lie in [2, n]");
  if (!combined.allFinite())
    throw NumericalError("update_partition: non-finite combined kernel");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(combined);
  if (es.info() != Eigen::Success)
    throw NumericalError("update_partition: eigendecomposition failed");

  // eigenvalues come out ascending; take the top c in descending order
  Partition p;
  p.y.resize(n, clusters);
  for (int k = 0; k < clusters; ++k) p.y.col(k) = es.eigenvectors().col(n - 1 - k);

  // deterministic sign: largest-magnitude entry positive, ties to the
  // lower row index
  for (int k = 0; k < clusters; ++k) {
    Eigen::Index arg = 0;
    double best = std::abs(p.y(0, k));
    for (Eigen::Index i = 1; i < n; ++i) {
      const double v = std::abs(p.y(i, k));
      if (v > best) {
        best = v;
        arg = i;
      }
    }
    if (p.y(arg, k) < 0.0) p.y.col(k) = -p.y.col(k);
  }
  return p;
}

KernelWeights update_weights(const std::vector<AdaptiveKernel>& deformed,
                             const Partition& partition) {
  if (deformed.empty()) throw InputError("update_weights: no kernels");
  const auto m = static_cast<Eigen::Index>(deformed.size());
  Eigen::VectorXd residual(m);
  for (Eigen::Index p = 0; p < m; ++p) {
    const Eigen::MatrixXd& k = deformed[static_cast<std::size_t>(p)].values;
    if (k.rows() != partition.y.rows())
      throw InputError("update_weights: kernel/partition dimension mismatch");
    const double a = k.trace() - partition.y.cwiseProduct(k * partition.y).sum();
    residual(p) = std::max(a, 1e-12);
  }
  const Eigen::VectorXd inv = residual.cwiseInverse();
  return {inv / inv.sum()};
}

SolverState fit(const std::vector<AdaptiveKernel>& deformed, int clusters,
                const FitOptions& options) {
  if (deformed.empty()) throw InputError("fit: no kernels");
  const Eigen::Index n = deformed.front().values.rows();
  for (const auto& k : deformed)
    if (k.values.rows() != n || k.values.cols() != n)
      throw InputError("fit: kernels must share one square dimension");
  if (options.max_iter < 1) throw InputError("fit: max_iter must be >= 1");

  const auto m = static_cast<Eigen::Index>(deformed.size());
  SolverState state;
  state.weights.w = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));

  Eigen::MatrixXd combined = combine(deformed, state.weights.w);
  if (options.initial_partition) {
    const Eigen::MatrixXd& y0 = *options.initial_partition;
    if (y0.rows() != n || y0.cols() != clusters)
      throw InputError("fit: initial partition has the wrong shape");
    const double ortho =
        (y0.transpose() * y0 - Eigen::MatrixXd::Identity(clusters, clusters))
            .cwiseAbs()
            .maxCoeff();
    if (ortho > 1e-6)
      throw InputError("fit: initial partition is not column-orthonormal");
    state.partition.y = y0;
  } else {
    state.partition = update_partition(combined, clusters);
  }

  double prev = objective(combined, state.partition);
  state.objective_trace.push_back(prev);

  for (int it = 1; it <= options.max_iter; ++it) {
    if (!options.fixed_uniform_weights)
      state.weights = update_weights(deformed, state.partition);
    combined = combine(deformed, state.weights.w);
    state.partition = update_partition(combined, clusters);
    const double value = objective(combined, state.partition);

    if (value > prev + 1e-9 * std::max(1.0, std::abs(prev)))
      throw NumericalError("fit: objective increased from " +
                           std::to_string(prev) + " to " + std::to_string(value));

    state.objective_trace.push_back(value);
    state.iterations = it;
    const bool settled = std::abs(value - prev) <= options.tol * std::max(1.0, std::abs(prev));
    prev = value;
    if (settled) {
      state.converged = true;
      break;
    }
  }
  return state;
}

Partition random_orthonormal_partition(int n, int clusters, std::uint64_t seed) {
  if (clusters < 1 || clusters > n)
    throw InputError("random_orthonormal_partition: clusters must lie in [1, n]");
  SplitMix64 rng(seed);
  Eigen::MatrixXd g(n, clusters);
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = rng.next_normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Partition p;
  p.y = qr.householderQ() * Eigen::MatrixXd::Identity(n, clusters);
  return p;
}

}  // namespace mamkkc
