#pragma once

// Independent reference implementations used only by tests. These must not
// share code paths with the library: the eigensolver is a hand-rolled
// cyclic Jacobi iteration, the simplex QP is projected gradient descent,
// the t CDF is Simpson quadrature, and the matchers are exhaustive.

#include <Eigen/Core>
#include <vector>

namespace oracle {

// Cyclic Jacobi eigenvalue iteration for symmetric matrices; returns all
// eigenvalues in descending order.
std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a, int max_sweeps = 100);

// Sum of the k largest eigenvalues per the Jacobi iteration.
double top_k_eigenvalue_sum(const Eigen::MatrixXd& a, int k);

// Euclidean projection onto the probability simplex.
Eigen::VectorXd project_to_simplex(Eigen::VectorXd v);

// Projected gradient descent for min w^T diag(a) w on the simplex.
Eigen::VectorXd simplex_qp(const Eigen::VectorXd& a_diag, int iterations = 20000);

// P(T <= t) for Student's t with df degrees of freedom, via Simpson
// quadrature of the density.
double t_cdf(double t, int df);

// Two-sided p-value from the quadrature CDF.
double t_test_p(double t, int df);

// Exhaustive best-relabeling accuracy (alphabets up to ~8 ids).
double accuracy_exhaustive(const std::vector<int>& pred, const std::vector<int>& truth);

// Direct contingency-table recomputations, written independently of the
// library's metric code.
double nmi_direct(const std::vector<int>& pred, const std::vector<int>& truth);
double purity_direct(const std::vector<int>& pred, const std::vector<int>& truth);

// Best within-cluster sum of squares over all c^n assignments (tiny n).
double best_wcss_exhaustive(const Eigen::MatrixXd& rows, int clusters);

// WCSS of a given labeling.
double wcss_of_labels(const Eigen::MatrixXd& rows, const std::vector<int>& labels,
                      int clusters);

// Scalar-formula Gaussian kernel entry exp(-|x-y|^2 / (2 sigma^2)).
double gaussian_entry(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double sigma);

// Brute-force directed-then-union kNN adjacency from a similarity matrix.
Eigen::MatrixXd knn_adjacency(const Eigen::MatrixXd& similarity, int tau);

// sum over undirected edges (i,j) of (x_i - x_j)^2.
double laplacian_quadratic_via_edges(const Eigen::MatrixXd& adjacency,
                                     const Eigen::VectorXd& x);

}  // namespace oracle
