#include "mamkkc/io.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <unordered_map>

#include "mamkkc/errors.hpp"

namespace mamkkc {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& token, double& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::vector<std::string> split(const std::string& line, bool comma_only) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char ch : line) {
    const bool sep = ch == ',' || (!comma_only && (ch == ' ' || ch == '\t'));
    if (sep) {
      std::string t = trim(cur);
      if (!t.empty() || ch == ',') tokens.push_back(std::move(t));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  std::string t = trim(cur);
  if (!t.empty()) tokens.push_back(std::move(t));
  // drop empty tokens produced by stray separators
  tokens.erase(std::remove_if(tokens.begin(), tokens.end(),
                              [](const std::string& s) { return s.empty(); }),
               tokens.end());
  return tokens;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

Eigen::MatrixXd rows_to_matrix(const std::vector<std::vector<double>>& rows,
                               const std::string& path) {
  if (rows.empty()) throw InputError("no data rows in " + path);
  const auto cols = rows.front().size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols)
      throw InputError("ragged row " + std::to_string(i + 1) + " in " + path);
    for (std::size_t j = 0; j < cols; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

}  // namespace

Eigen::MatrixXd read_feature_csv(const std::string& path) {
  const auto lines = read_lines(path);
  std::vector<std::vector<double>> rows;
  bool first_content_line = true;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::string line = trim(lines[li]);
    if (line.empty()) continue;
    const auto tokens = split(line, /*comma_only=*/true);
    if (tokens.empty()) continue;
    std::vector<double> row(tokens.size());
    bool ok = true;
    for (std::size_t j = 0; j < tokens.size(); ++j)
      if (!parse_double(tokens[j], row[j])) {
        ok = false;
        break;
      }
    if (!ok) {
      if (first_content_line) {  // header row
        first_content_line = false;
        continue;
      }
      throw InputError("unparseable entry on line " + std::to_string(li + 1) +
                       " of " + path);
    }
    first_content_line = false;
    rows.push_back(std::move(row));
  }
  return rows_to_matrix(rows, path);
}

std::vector<int> read_labels(const std::string& path) {
  const auto lines = read_lines(path);
  std::vector<int> labels;
  std::unordered_map<std::string, int> ids;
  for (const auto& raw : lines) {
    const std::string token = trim(raw);
    if (token.empty()) continue;
    auto [it, inserted] = ids.emplace(token, static_cast<int>(ids.size()));
    labels.push_back(it->second);
  }
  if (labels.empty()) throw InputError("no labels in " + path);
  return labels;
}

Eigen::MatrixXd read_dense_matrix(const std::string& path) {
  const auto lines = read_lines(path);
  std::vector<std::vector<double>> rows;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::string line = trim(lines[li]);
    if (line.empty()) continue;
    const auto tokens = split(line, /*comma_only=*/false);
    if (tokens.empty()) continue;
    std::vector<double> row(tokens.size());
    for (std::size_t j = 0; j < tokens.size(); ++j)
      if (!parse_double(tokens[j], row[j]))
        throw InputError("unparseable entry '" + tokens[j] + "' on line " +
                         std::to_string(li + 1) + " of " + path);
    rows.push_back(std::move(row));
  }
  return rows_to_matrix(rows, path);
}

std::vector<std::string> list_kernel_files(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec))
    throw InputError("not a directory: " + dir);
  std::vector<std::string> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) paths.push_back(entry.path().string());
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) throw InputError("no kernel files in " + dir);
  return paths;
}

}  // namespace mamkkc
