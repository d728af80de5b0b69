#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace mamkkc {

// Comma-separated features, one sample per row. A non-numeric first row is
// treated as a header and skipped.
Eigen::MatrixXd read_feature_csv(const std::string& path);

// One label token per line; tokens are mapped to contiguous ids in order of
// first appearance.
std::vector<int> read_labels(const std::string& path);

// Whitespace- or comma-separated dense matrix, one row per line.
Eigen::MatrixXd read_dense_matrix(const std::string& path);

// Regular files in `dir`, sorted by path for a deterministic kernel order.
std::vector<std::string> list_kernel_files(const std::string& dir);

}  // namespace mamkkc
