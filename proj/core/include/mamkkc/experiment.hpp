#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mamkkc/discretize.hpp"
#include "mamkkc/kernel_bank.hpp"
#include "mamkkc/metrics.hpp"
#include "mamkkc/solver.hpp"

namespace mamkkc {

// {1.0, 1.1, ..., 2.0}
std::vector<double> default_lambda_grid();

// "a:b:step" ranges (inclusive) or comma-separated value lists.
std::vector<double> parse_lambda_grid(const std::string& text);

struct RunConfig {
  std::string data_path;    // feature CSV; mutually exclusive with kernel_dir
  std::string kernel_dir;   // directory of precomputed kernel matrices
  std::string labels_path;  // optional ground-truth labels
  std::string out_dir;
  int clusters = 2;
  int tau = 5;
  std::vector<double> lambda_grid = default_lambda_grid();
  int restarts = 50;
  std::uint64_t seed = 0;
  int kmeans_restarts = 10;
  bool scale_features = true;
  bool normalize_rows = false;
  bool random_init = false;  // draw a random orthonormal partition per restart
  bool trace = false;        // write per-lambda convergence traces
};

enum class BaselineMode { single_kernel, uniform_mkkm };

struct RestartRecord {
  double lambda = 0.0;
  std::string kernel;  // kernel name in single-kernel baselines, else empty
  int restart = 0;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  std::optional<MetricReport> metrics;
  Eigen::VectorXd weights;
};

struct MetricSummary {
  double mean = 0.0;
  double stddev = 0.0;   // sample standard deviation over restarts
  double best = 0.0;     // value at the best-by-objective restart
  double p_value = 1.0;  // paired t-test against the best-mean group
};

// One lambda value (or one kernel, for the single-kernel baseline).
struct GroupSummary {
  double lambda = 0.0;
  std::string kernel;
  int best_restart = 0;  // lowest objective, ties to the lower restart index
  double best_objective = 0.0;
  int best_iterations = 0;
  bool best_converged = false;
  Eigen::VectorXd best_weights;
  std::vector<double> best_trace;
  std::optional<MetricReport> best_metrics;
  std::optional<MetricSummary> acc, nmi, purity;
};

struct TopLine {
  double value = 0.0;
  double lambda = 0.0;
  std::string kernel;
};

struct ExperimentReport {
  Eigen::Index n = 0;
  int m = 0;  // kernels per group
  int c = 0;
  std::vector<std::string> kernel_names;
  bool has_labels = false;
  std::vector<RestartRecord> records;
  std::vector<GroupSummary> groups;
  // per-metric maximum of the best-by-objective records across groups
  std::optional<TopLine> best_obj_acc, best_obj_nmi, best_obj_purity;
  // per-metric best group mean across groups
  std::optional<TopLine> best_mean_acc, best_mean_nmi, best_mean_purity;
};

// Full protocol: per lambda, deform every kernel once, then run `restarts`
// rounds of fit + k-means discretization with seeds derived from
// (seed, lambda index, restart). Deterministic for a fixed config.
ExperimentReport run_experiment(const std::vector<KernelMatrix>& bank,
                                const std::vector<int>* labels,
                                const RunConfig& config);
ExperimentReport run_experiment(const Eigen::MatrixXd& features,
                                const std::vector<int>* labels,
                                const RunConfig& config);
// Loads features/kernels (and labels if configured) from the config paths.
ExperimentReport run_experiment(const RunConfig& config);

// single_kernel: one group per base kernel, no deformation, best kernel
// picked by objective. uniform_mkkm: fixed uniform weights on the raw bank,
// partition updates only.
ExperimentReport run_baseline(const std::vector<KernelMatrix>& bank,
                              const std::vector<int>* labels,
                              const RunConfig& config, BaselineMode mode);
ExperimentReport run_baseline(const RunConfig& config, BaselineMode mode);

// `iteration,objective` CSV rows, one per trace entry.
void emit_convergence_trace(const SolverState& state, const std::string& path);

// `lambda,mean_acc,std_acc,best_acc` CSV rows, one per group; requires a
// report with labels. best_acc is the best-by-objective restart's accuracy.
void emit_lambda_sweep(const ExperimentReport& report, const std::string& path);

// Writes records.csv, records.jsonl, summary.csv, weights.csv into
// config.out_dir, plus sweep.csv when labels are present and
// trace_<lambda>.csv per group when config.trace is set.
void write_report_files(const ExperimentReport& report, const RunConfig& config);

// Human-readable run summary.
void print_summary(const ExperimentReport& report, std::ostream& os);

}  // namespace mamkkc
