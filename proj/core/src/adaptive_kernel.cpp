#include "mamkkc/adaptive_kernel.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "mamkkc/errors.hpp"

namespace mamkkc {

namespace {

// Relative floor for the repaired spectrum. Slightly above zero so that
// weighted combinations of repaired kernels keep a nonnegative computed
// spectrum as well.
constexpr double kPsdFloor = 1e-12;

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

}  // namespace

AdaptiveKernel deform(const KernelMatrix& kernel, const Laplacian& lap,
                      double lambda, DeformStats* stats) {
  const Eigen::Index n = kernel.values.rows();
  if (kernel.values.cols() != n) throw InputError("deform: kernel must be square");
  if (lap.values.rows() != n || lap.values.cols() != n)
    throw InputError("deform: kernel and Laplacian dimensions differ");
  if (lambda < 0.0) throw InputError("deform: lambda must be >= 0");
  if (stats) *stats = DeformStats{};

  const Eigen::MatrixXd& k = kernel.values;
  if (lambda == 0.0 || lap.values.isZero(0.0)) {
    if (stats) {
      stats->pre_repair_min_eig = std::numeric_limits<double>::quiet_NaN();
      stats->pre_repair_max_eig = std::numeric_limits<double>::quiet_NaN();
    }
    return {symmetrized(k), lambda, kernel.name};
  }

  // K - lambda K (I + lambda L K)^{-1} L K. Scaling the graph term inside
  // the inverse as well keeps the deformed matrix a valid kernel (positive
  // semidefinite) for every lambda >= 0, and agrees with the plain
  // (I + L K)^{-1} form at lambda = 1.
  const Eigen::MatrixXd lk = lap.values * k;
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) + lambda * lk;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const Eigen::MatrixXd x = lu.solve(lk);
  if (!x.allFinite())
    throw NumericalError("deform: (I + L K) solve produced non-finite values");
  const double residual = (a * x - lk).cwiseAbs().maxCoeff();
  const double scale =
      a.cwiseAbs().maxCoeff() * x.cwiseAbs().maxCoeff() + lk.cwiseAbs().maxCoeff() + 1.0;
  if (residual > 1e-8 * scale)
    throw NumericalError("deform: (I + L K) is numerically singular");

  Eigen::MatrixXd s = symmetrized(k - lambda * (k * x));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  if (es.info() != Eigen::Success)
    throw NumericalError("deform: eigendecomposition failed");
  double min_eig = es.eigenvalues().minCoeff();
  double max_eig = es.eigenvalues().maxCoeff();
  if (stats) {
    stats->pre_repair_min_eig = min_eig;
    stats->pre_repair_max_eig = max_eig;
  }

  int sweeps = 0;
  while (min_eig < 0.5 * kPsdFloor * std::max(1.0, max_eig)) {
    if (sweeps >= 5)
      throw NumericalError("deform: spectrum repair did not converge");
    const double floor = kPsdFloor * std::max(1.0, max_eig);
    const Eigen::VectorXd d = es.eigenvalues().cwiseMax(floor);
    s = symmetrized(es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose());
    es.compute(s);
    if (es.info() != Eigen::Success)
      throw NumericalError("deform: eigendecomposition failed during repair");
    min_eig = es.eigenvalues().minCoeff();
    max_eig = es.eigenvalues().maxCoeff();
    ++sweeps;
  }
  if (stats) {
    stats->repaired = sweeps > 0;
    stats->sweeps = sweeps;
  }
  return {std::move(s), lambda, kernel.name};
}

AdaptiveKernel adaptive_from_base(const KernelMatrix& kernel) {
  return {kernel.values, 0.0, kernel.name};
}

Eigen::MatrixXd combine(const std::vector<AdaptiveKernel>& kernels,
                        const Eigen::VectorXd& weights) {
  if (kernels.empty()) throw InputError("combine: no kernels");
  if (weights.size() != static_cast<Eigen::Index>(kernels.size()))
    throw InputError("combine: weight count does not match kernel count");
  const Eigen::Index n = kernels.front().values.rows();
  Eigen::MatrixXd combined = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t p = 0; p < kernels.size(); ++p) {
    const auto& k = kernels[p].values;
    if (k.rows() != n || k.cols() != n)
      throw InputError("combine: kernel dimension mismatch at index " + std::to_string(p));
    const double w = weights(static_cast<Eigen::Index>(p));
    combined.noalias() += (w * w) * k;
  }
  return combined;
}

}  // namespace mamkkc
