#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "mamkkc/kernel_bank.hpp"
#include "mamkkc/manifold_graph.hpp"

namespace mamkkc {

// A base kernel warped toward smoothness along its neighbor graph:
// K - lambda K (I + lambda L K)^{-1} L K, symmetrized, with the spectrum
// floored at zero. lambda = 0 leaves the kernel untouched.
struct AdaptiveKernel {
  Eigen::MatrixXd values;
  double lambda = 0.0;
  std::string source;
};

// Diagnostics from a deform call; only populated for lambda > 0.
struct DeformStats {
  double pre_repair_min_eig = 0.0;
  double pre_repair_max_eig = 0.0;
  bool repaired = false;
  int sweeps = 0;
};

AdaptiveKernel deform(const KernelMatrix& kernel, const Laplacian& lap,
                      double lambda, DeformStats* stats = nullptr);

// Wrap a base kernel unchanged (lambda = 0), for undeformed pipelines.
AdaptiveKernel adaptive_from_base(const KernelMatrix& kernel);

// sum_p w_p^2 K_p. Weights are squared, so the combination is quadratic,
// not convex, in w; `weights` need not lie on the simplex here.
Eigen::MatrixXd combine(const std::vector<AdaptiveKernel>& kernels,
                        const Eigen::VectorXd& weights);

}  // namespace mamkkc
