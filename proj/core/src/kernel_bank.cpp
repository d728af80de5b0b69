#include "mamkkc/kernel_bank.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "mamkkc/errors.hpp"
#include "mamkkc/io.hpp"

namespace mamkkc {

namespace {

void validate_features(const Eigen::MatrixXd& features) {
  if (features.rows() < 2) throw InputError("need at least 2 samples");
  if (features.cols() < 1) throw InputError("need at least 1 feature");
  if (!features.allFinite()) throw InputError("features contain non-finite entries");
}

// Gram matrix X X^T with the upper triangle mirrored so the result is
// exactly symmetric (GEMM does not guarantee bitwise symmetry).
Eigen::MatrixXd gram(const Eigen::MatrixXd& features) {
  Eigen::MatrixXd g = features * features.transpose();
  const Eigen::Index n = g.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) g(j, i) = g(i, j);
  return g;
}

// Squared pairwise distances |x_i|^2 + |x_j|^2 - 2 x_i.x_j, clamped at 0.
Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& features) {
  const Eigen::VectorXd sq = features.rowwise().squaredNorm();
  Eigen::MatrixXd g = gram(features);
  const Eigen::Index n = g.rows();
  Eigen::MatrixXd d2(n, n);
  d2.setZero();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = std::max(0.0, sq(i) + sq(j) - 2.0 * g(i, j));
      d2(i, j) = v;
      d2(j, i) = v;
    }
  return d2;
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

Eigen::MatrixXd min_max_scale(const Eigen::MatrixXd& features) {
  Eigen::MatrixXd scaled(features.rows(), features.cols());
  for (Eigen::Index j = 0; j < features.cols(); ++j) {
    const double lo = features.col(j).minCoeff();
    const double hi = features.col(j).maxCoeff();
    if (hi > lo)
      scaled.col(j) = (features.col(j).array() - lo) / (hi - lo);
    else
      scaled.col(j).setZero();
  }
  return scaled;
}

KernelMatrix gaussian_kernel(const Eigen::MatrixXd& features, double sigma) {
  validate_features(features);
  if (!(sigma > 0.0)) throw InputError("gaussian kernel requires sigma > 0");
  const Eigen::MatrixXd d2 = squared_distances(features);
  KernelMatrix k;
  k.values = (-d2.array() / (2.0 * sigma * sigma)).exp().matrix();
  k.name = "gaussian_s" + format_value(sigma);
  return k;
}

KernelMatrix polynomial_kernel(const Eigen::MatrixXd& features, double a, double b) {
  validate_features(features);
  KernelMatrix k;
  k.values = (gram(features).array() + a).pow(b).matrix();
  k.name = "poly_a" + format_value(a) + "_b" + format_value(b);
  return k;
}

KernelMatrix linear_kernel(const Eigen::MatrixXd& features) {
  validate_features(features);
  return {gram(features), "linear"};
}

KernelMatrix normalize_kernel(const Eigen::MatrixXd& raw, std::string name) {
  const Eigen::Index n = raw.rows();
  if (n != raw.cols()) throw InputError("kernel must be square: " + name);
  if (raw != raw.transpose()) throw InputError("kernel must be symmetric: " + name);
  Eigen::VectorXd inv_d(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(raw(i, i) > 0.0))
      throw InputError("non-positive kernel diagonal at sample " +
                       std::to_string(i) + ": " + name);
    inv_d(i) = 1.0 / std::sqrt(raw(i, i));
  }
  KernelMatrix k;
  k.values.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k.values(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      // clamp: cosine normalization can overshoot [-1, 1] by rounding
      const double v = std::clamp(raw(i, j) * (inv_d(i) * inv_d(j)), -1.0, 1.0);
      k.values(i, j) = v;
      k.values(j, i) = v;
    }
  }
  if (!k.values.allFinite()) throw NumericalError("normalization produced non-finite entries: " + name);
  k.name = std::move(name);
  return k;
}

std::vector<KernelMatrix> build_kernel_bank(const Eigen::MatrixXd& features,
                                            const KernelBankOptions& options) {
  validate_features(features);
  const Eigen::MatrixXd x = options.scale_features ? min_max_scale(features) : features;

  for (Eigen::Index i = 0; i < x.rows(); ++i)
    if (x.row(i).squaredNorm() == 0.0)
      throw InputError("degenerate input: sample " + std::to_string(i) +
                       " is all zeros, polynomial and linear kernels have no "
                       "positive diagonal");

  const double d_max = std::sqrt(squared_distances(x).maxCoeff());
  if (d_max == 0.0)
    throw InputError("degenerate input: all pairwise distances are zero");

  std::vector<KernelMatrix> bank;
  bank.reserve(12);
  for (double t : {0.01, 0.05, 0.1, 1.0, 10.0, 50.0, 100.0}) {
    KernelMatrix k = gaussian_kernel(x, t * d_max);
    bank.push_back(normalize_kernel(k.values, "gaussian_t" + format_value(t)));
  }
  for (double a : {0.0, 1.0})
    for (double b : {2.0, 4.0}) {
      KernelMatrix k = polynomial_kernel(x, a, b);
      bank.push_back(normalize_kernel(k.values, k.name));
    }
  bank.push_back(normalize_kernel(linear_kernel(x).values, "linear"));
  return bank;
}

std::vector<KernelMatrix> load_kernels(const std::vector<std::string>& paths) {
  if (paths.empty()) throw InputError("no kernel files given");
  std::vector<KernelMatrix> bank;
  bank.reserve(paths.size());
  Eigen::Index n = -1;
  for (const auto& path : paths) {
    Eigen::MatrixXd m = read_dense_matrix(path);
    if (m.rows() != m.cols())
      throw InputError("kernel file is not square: " + path);
    if (n < 0) n = m.rows();
    if (m.rows() != n)
      throw InputError("kernel size mismatch: " + path + " is " +
                       std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                       ", expected " + std::to_string(n));
    const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    bank.push_back(normalize_kernel(sym, std::filesystem::path(path).filename().string()));
  }
  return bank;
}

}  // namespace mamkkc
