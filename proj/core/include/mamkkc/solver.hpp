#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "mamkkc/adaptive_kernel.hpp"

namespace mamkkc {

// Kernel weights on the probability simplex: w >= 0, sum_p w_p = 1.
struct KernelWeights {
  Eigen::VectorXd w;
};

// Scaled partition matrix: n x c with orthonormal columns (Y^T Y = I).
struct Partition {
  Eigen::MatrixXd y;
};

struct SolverState {
  KernelWeights weights;
  Partition partition;
  // objective_trace[0] is the objective of the initial (uniform-weight)
  // state; one more entry is appended per iteration. Non-increasing.
  std::vector<double> objective_trace;
  int iterations = 0;
  bool converged = false;
};

struct FitOptions {
  int max_iter = 20;
  double tol = 1e-6;
  // keep w = 1/m throughout (uniform-combination baseline, partition
  // updates only)
  bool fixed_uniform_weights = false;
  // start from this partition instead of the top-c eigenvectors of the
  // uniform combination (randomized-restart mode)
  std::optional<Eigen::MatrixXd> initial_partition;
};

// tr(N) - tr(Y^T N Y): the kernel k-means relaxation objective.
// Nonnegative for PSD N since I - Y Y^T is an orthogonal projection.
double objective(const Eigen::MatrixXd& combined, const Partition& partition);

// Orthonormal eigenvectors of the c largest eigenvalues of `combined`, in
// descending eigenvalue order. Each column is flipped so its
// largest-magnitude entry (ties to the lower row index) is positive.
Partition update_partition(const Eigen::MatrixXd& combined, int clusters);

// Closed-form simplex minimizer of sum_p A_pp w_p^2 where
// A_pp = tr(K_p) - tr(Y^T K_p Y), clamped below at 1e-12:
//   w_p = A_pp^{-1} / sum_q A_qq^{-1}.
KernelWeights update_weights(const std::vector<AdaptiveKernel>& deformed,
                             const Partition& partition);

inline Eigen::MatrixXd combine(const std::vector<AdaptiveKernel>& kernels,
                               const KernelWeights& weights) {
  return combine(kernels, weights.w);
}

// Alternating minimization on the deformed kernels: weight update, then
// partition update, until the relative objective change drops to tol or
// max_iter is reached. Deterministic unless an initial partition is given.
SolverState fit(const std::vector<AdaptiveKernel>& deformed, int clusters,
                const FitOptions& options = {});

// Random column-orthonormal matrix (QR of a Gaussian draw).
Partition random_orthonormal_partition(int n, int clusters, std::uint64_t seed);

}  // namespace mamkkc
