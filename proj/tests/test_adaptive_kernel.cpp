#include <doctest.h>

#include <Eigen/Dense>

#include "mamkkc/adaptive_kernel.hpp"
#include "mamkkc/errors.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace mamkkc;

namespace {

Laplacian two_node_edge() {
  Laplacian l;
  l.values.resize(2, 2);
  l.values << 1.0, -1.0, -1.0, 1.0;
  return l;
}

}  // namespace

TEST_CASE("deform with lambda 0 is the identity map") {
  SplitMix64 rng(31);
  const auto k = testx::random_psd_kernel(9, rng);
  const auto l = testx::random_knn_laplacian(k, rng);
  const AdaptiveKernel out = deform(k, l, 0.0);
  CHECK(out.values == k.values);  // bit-identical
  CHECK(out.lambda == 0.0);
}

TEST_CASE("deform with an empty graph is the identity map") {
  SplitMix64 rng(32);
  const auto k = testx::random_psd_kernel(7, rng);
  Laplacian zero;
  zero.values = Eigen::MatrixXd::Zero(7, 7);
  CHECK(deform(k, zero, 1.5).values == k.values);
}

TEST_CASE("deform hand case: identity kernel on a single edge") {
  KernelMatrix k{Eigen::MatrixXd::Identity(2, 2), "id"};
  const Laplacian l = two_node_edge();
  const AdaptiveKernel out = deform(k, l, 1.0);

  Eigen::MatrixXd expected(2, 2);
  expected << 2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0;
  CHECK((out.values - expected).cwiseAbs().maxCoeff() <= 1e-12);

  // oracle: closed-form 2x2 inverse of (I + L K) = [[2,-1],[-1,2]]
  Eigen::MatrixXd inv(2, 2);
  const double det = 2.0 * 2.0 - 1.0;
  inv << 2.0 / det, 1.0 / det, 1.0 / det, 2.0 / det;
  const Eigen::MatrixXd reference =
      k.values - 1.0 * k.values * inv * l.values * k.values;
  CHECK((out.values - reference).cwiseAbs().maxCoeff() <= 1e-12);

  // eigenvalues 1 and 1/3 confirm positive semidefiniteness
  const auto eigs = oracle::jacobi_eigenvalues(out.values);
  CHECK(eigs[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eigs[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("deform validates parameters") {
  SplitMix64 rng(33);
  const auto k = testx::random_psd_kernel(5, rng);
  const auto l = testx::random_knn_laplacian(k, rng);
  CHECK_THROWS_AS(deform(k, l, -0.1), InputError);

  Laplacian wrong;
  wrong.values = Eigen::MatrixXd::Zero(4, 4);
  CHECK_THROWS_AS(deform(k, wrong, 1.0), InputError);
}

TEST_CASE("deformed kernels are symmetric PSD across the lambda grid") {
  SplitMix64 rng(34);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 5 + static_cast<Eigen::Index>(rng.next_below(26));
    const auto k = testx::random_psd_kernel(n, rng);
    const auto l = testx::random_knn_laplacian(k, rng);
    const double lambda = 1.0 + 0.1 * static_cast<double>(rng.next_below(11));

    DeformStats stats;
    const AdaptiveKernel out = deform(k, l, lambda, &stats);
    CHECK(out.values == out.values.transpose());
    CHECK(stats.pre_repair_min_eig >= -1e-6 * std::max(1.0, stats.pre_repair_max_eig));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.values);
    CHECK(es.eigenvalues().minCoeff() >= 0.0);
  }
}

TEST_CASE("deform commutes with simultaneous permutation") {
  SplitMix64 rng(35);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index n = 6 + static_cast<Eigen::Index>(rng.next_below(6));
    const auto k = testx::random_psd_kernel(n, rng);
    const auto l = testx::random_knn_laplacian(k, rng);

    // random permutation matrix
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    for (Eigen::Index i = n - 1; i > 0; --i)
      std::swap(perm[static_cast<std::size_t>(i)],
                perm[rng.next_below(static_cast<std::uint64_t>(i + 1))]);
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) p(i, perm[static_cast<std::size_t>(i)]) = 1.0;

    KernelMatrix kp{p * k.values * p.transpose(), "perm"};
    Laplacian lp{p * l.values * p.transpose()};
    const Eigen::MatrixXd direct = deform(kp, lp, 1.3).values;
    const Eigen::MatrixXd conjugated = p * deform(k, l, 1.3).values * p.transpose();
    CHECK((direct - conjugated).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("combine examples") {
  SplitMix64 rng(36);
  const auto k = testx::random_psd_kernel(6, rng);

  // single kernel, unit weight: unchanged
  std::vector<AdaptiveKernel> one{adaptive_from_base(k)};
  Eigen::VectorXd w1(1);
  w1 << 1.0;
  CHECK(combine(one, w1) == k.values);

  // two identical kernels with weight 1/2 each: squared weights halve it
  std::vector<AdaptiveKernel> two{adaptive_from_base(k), adaptive_from_base(k)};
  Eigen::VectorXd w2(2);
  w2 << 0.5, 0.5;
  CHECK(combine(two, w2) == (0.5 * k.values).eval());

  // I and 2I at weight 1/2: 0.25 I + 0.5 I
  std::vector<AdaptiveKernel> scaled{
      {Eigen::MatrixXd::Identity(2, 2), 0.0, "a"},
      {2.0 * Eigen::MatrixXd::Identity(2, 2), 0.0, "b"}};
  CHECK(combine(scaled, w2) == (0.75 * Eigen::MatrixXd::Identity(2, 2)).eval());

  Eigen::VectorXd wrong(3);
  wrong.setConstant(1.0);
  CHECK_THROWS_AS(combine(two, wrong), InputError);
}

TEST_CASE("combine is homogeneous of degree 2 in the weights") {
  SplitMix64 rng(37);
  const auto bank = testx::random_bank(7, 3, rng);
  std::vector<AdaptiveKernel> kernels;
  for (const auto& k : bank) kernels.push_back(adaptive_from_base(k));
  Eigen::VectorXd w(3);
  w << 0.2, 1.3, 0.7;  // unconstrained weights
  const Eigen::MatrixXd once = combine(kernels, w);
  const Eigen::MatrixXd doubled = combine(kernels, (2.0 * w).eval());
  CHECK(doubled == (4.0 * once).eval());
}
