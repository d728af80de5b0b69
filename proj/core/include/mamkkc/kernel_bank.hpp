#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace mamkkc {

// Dense symmetric similarity matrix. Normalized kernels have a unit
// diagonal and off-diagonal entries in [-1, 1].
struct KernelMatrix {
  Eigen::MatrixXd values;
  std::string name;
};

struct KernelBankOptions {
  bool scale_features = true;  // per-dimension min-max scaling to [0, 1]
};

// Per-dimension min-max scaling to [0, 1]; constant dimensions map to 0.
Eigen::MatrixXd min_max_scale(const Eigen::MatrixXd& features);

// Raw (unnormalized) kernels on the rows of `features`.
// gaussian:   exp(-|x - y|^2 / (2 sigma^2))
// polynomial: (a + x.y)^b
// linear:     x.y
KernelMatrix gaussian_kernel(const Eigen::MatrixXd& features, double sigma);
KernelMatrix polynomial_kernel(const Eigen::MatrixXd& features, double a, double b);
KernelMatrix linear_kernel(const Eigen::MatrixXd& features);

// Cosine normalization K_ij / sqrt(K_ii K_jj). Requires an exactly
// symmetric input with strictly positive diagonal; the result has a unit
// diagonal and off-diagonal entries clamped to [-1, 1].
KernelMatrix normalize_kernel(const Eigen::MatrixXd& raw, std::string name = "kernel");

// The 12-kernel candidate bank: 7 Gaussians with sigma = t * d_max
// (d_max = largest pairwise distance) for t in {0.01, 0.05, 0.1, 1, 10, 50,
// 100}, 4 polynomials (a + x.y)^b for a in {0, 1} and b in {2, 4}, and the
// linear kernel; every kernel is normalized.
std::vector<KernelMatrix> build_kernel_bank(const Eigen::MatrixXd& features,
                                            const KernelBankOptions& options = {});

// Load precomputed kernels: each file is parsed, symmetrized ((K+K^T)/2)
// and normalized. All files must hold square matrices of one common size.
std::vector<KernelMatrix> load_kernels(const std::vector<std::string>& paths);

}  // namespace mamkkc
