#pragma once

// Deterministic random instance generators shared by the unit and
// acceptance suites.

#include <Eigen/Core>
#include <vector>

#include "mamkkc/adaptive_kernel.hpp"
#include "mamkkc/kernel_bank.hpp"
#include "mamkkc/manifold_graph.hpp"
#include "mamkkc/rng.hpp"

namespace testx {

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols,
                                     mamkkc::SplitMix64& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.next_normal();
  return m;
}

// Normalized PSD kernel: Gram matrix of random features plus a small ridge.
inline mamkkc::KernelMatrix random_psd_kernel(Eigen::Index n, mamkkc::SplitMix64& rng) {
  const Eigen::Index d = n / 2 + 2;
  const Eigen::MatrixXd x = random_matrix(n, d, rng);
  Eigen::MatrixXd raw = x * x.transpose();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) raw(j, i) = raw(i, j);
  raw.diagonal().array() += 1e-3;
  return mamkkc::normalize_kernel(raw, "random");
}

inline std::vector<mamkkc::KernelMatrix> random_bank(Eigen::Index n, int m,
                                                     mamkkc::SplitMix64& rng) {
  std::vector<mamkkc::KernelMatrix> bank;
  for (int p = 0; p < m; ++p) bank.push_back(random_psd_kernel(n, rng));
  return bank;
}

inline mamkkc::Laplacian random_knn_laplacian(const mamkkc::KernelMatrix& kernel,
                                              mamkkc::SplitMix64& rng) {
  const auto n = kernel.values.rows();
  const int tau = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - 1)));
  return mamkkc::laplacian(mamkkc::knn_graph(kernel, tau));
}

struct Blobs {
  Eigen::MatrixXd features;
  std::vector<int> labels;
};

// Gaussian blobs with unit within-blob standard deviation.
inline Blobs make_blobs(const std::vector<Eigen::Vector2d>& centers, int per_blob,
                        std::uint64_t seed) {
  mamkkc::SplitMix64 rng(seed);
  Blobs b;
  b.features.resize(static_cast<Eigen::Index>(centers.size()) * per_blob, 2);
  Eigen::Index row = 0;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    for (int i = 0; i < per_blob; ++i, ++row) {
      b.features(row, 0) = centers[c](0) + rng.next_normal();
      b.features(row, 1) = centers[c](1) + rng.next_normal();
      b.labels.push_back(static_cast<int>(c));
    }
  }
  return b;
}

// Random point on the probability simplex.
inline Eigen::VectorXd random_simplex_point(Eigen::Index m, mamkkc::SplitMix64& rng) {
  Eigen::VectorXd w(m);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    w(i) = -std::log(1.0 - rng.next_double() + 1e-300);
    sum += w(i);
  }
  return w / sum;
}

}  // namespace testx
