#include "mamkkc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "mamkkc/adaptive_kernel.hpp"
#include "mamkkc/errors.hpp"
#include "mamkkc/io.hpp"
#include "mamkkc/rng.hpp"

namespace mamkkc {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

double snap(double v) { return std::round(v * 1e9) / 1e9; }

void validate_config(const RunConfig& config) {
  if (config.clusters < 2) throw InputError("clusters must be >= 2");
  if (config.restarts < 1) throw InputError("restarts must be >= 1");
  if (config.kmeans_restarts < 1) throw InputError("kmeans restarts must be >= 1");
  if (config.lambda_grid.empty()) throw InputError("invalid lambda grid: empty");
  for (double v : config.lambda_grid)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw InputError("invalid lambda grid: values must be finite and >= 0");
}

struct Group {
  double lambda = 0.0;
  std::string kernel_label;
  std::vector<AdaptiveKernel> deformed;
  bool fixed_uniform = false;
};

std::uint64_t restart_seed(const RunConfig& config, std::size_t group_index, int restart) {
  return mix_seed(mix_seed(config.seed, group_index), static_cast<std::uint64_t>(restart));
}

ExperimentReport run_groups(const std::vector<Group>& groups,
                            const std::vector<int>* labels,
                            const RunConfig& config,
                            std::vector<std::string> kernel_names) {
  ExperimentReport report;
  report.n = groups.front().deformed.front().values.rows();
  report.m = static_cast<int>(groups.front().deformed.size());
  report.c = config.clusters;
  report.kernel_names = std::move(kernel_names);
  report.has_labels = labels != nullptr;

  // per-group metric vectors for the paired tests
  std::vector<std::vector<double>> acc_vec(groups.size()), nmi_vec(groups.size()),
      pur_vec(groups.size());

  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const Group& group = groups[gi];

    FitOptions fit_options;
    fit_options.fixed_uniform_weights = group.fixed_uniform;

    // the solver is deterministic, so without random initialization one fit
    // serves every restart and only the discretization seed varies
    SolverState shared_state;
    if (!config.random_init) shared_state = fit(group.deformed, config.clusters, fit_options);

    GroupSummary summary;
    summary.lambda = group.lambda;
    summary.kernel = group.kernel_label;

    SolverState best_state;
    bool have_best = false;

    for (int r = 0; r < config.restarts; ++r) {
      SolverState state;
      if (config.random_init) {
        FitOptions opt = fit_options;
        opt.initial_partition =
            random_orthonormal_partition(static_cast<int>(report.n), config.clusters,
                                         mix_seed(restart_seed(config, gi, r), 0x5eedULL))
                .y;
        state = fit(group.deformed, config.clusters, opt);
      } else {
        state = shared_state;
      }

      KMeansOptions km;
      km.restarts = config.kmeans_restarts;
      km.seed = restart_seed(config, gi, r);
      km.normalize_rows = config.normalize_rows;
      const KMeansResult km_result = kmeans_rows(state.partition, config.clusters, km);

      RestartRecord record;
      record.lambda = group.lambda;
      record.kernel = group.kernel_label;
      record.restart = r;
      record.objective = state.objective_trace.back();
      record.iterations = state.iterations;
      record.converged = state.converged;
      record.weights = state.weights.w;
      if (labels) {
        record.metrics = evaluate(km_result.labels, *labels);
        acc_vec[gi].push_back(record.metrics->acc);
        nmi_vec[gi].push_back(record.metrics->nmi);
        pur_vec[gi].push_back(record.metrics->purity);
      }

      if (!have_best || record.objective < summary.best_objective) {
        have_best = true;
        summary.best_restart = r;
        summary.best_objective = record.objective;
        summary.best_iterations = record.iterations;
        summary.best_converged = record.converged;
        summary.best_metrics = record.metrics;
        best_state = state;
      }
      report.records.push_back(std::move(record));
    }

    summary.best_weights = best_state.weights.w;
    summary.best_trace = best_state.objective_trace;

    if (labels) {
      auto summarize = [&](const std::vector<double>& xs, double best_value) {
        MetricSummary ms;
        double mean = 0.0;
        for (double v : xs) mean += v;
        mean /= static_cast<double>(xs.size());
        double ss = 0.0;
        for (double v : xs) ss += (v - mean) * (v - mean);
        ms.mean = mean;
        ms.stddev = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
        ms.best = best_value;
        return ms;
      };
      summary.acc = summarize(acc_vec[gi], summary.best_metrics->acc);
      summary.nmi = summarize(nmi_vec[gi], summary.best_metrics->nmi);
      summary.purity = summarize(pur_vec[gi], summary.best_metrics->purity);
    }
    report.groups.push_back(std::move(summary));
  }

  if (labels) {
    auto pick_best_mean = [&](auto member) {
      std::size_t best = 0;
      for (std::size_t gi = 1; gi < report.groups.size(); ++gi)
        if ((report.groups[gi].*member)->mean > (report.groups[best].*member)->mean)
          best = gi;
      return best;
    };
    const std::size_t ba = pick_best_mean(&GroupSummary::acc);
    const std::size_t bn = pick_best_mean(&GroupSummary::nmi);
    const std::size_t bp = pick_best_mean(&GroupSummary::purity);

    // a single restart carries no paired evidence; keep the p = 1 convention
    const bool testable = config.restarts >= 2;
    for (std::size_t gi = 0; gi < report.groups.size(); ++gi) {
      report.groups[gi].acc->p_value = testable ? paired_t_test(acc_vec[gi], acc_vec[ba]) : 1.0;
      report.groups[gi].nmi->p_value = testable ? paired_t_test(nmi_vec[gi], nmi_vec[bn]) : 1.0;
      report.groups[gi].purity->p_value =
          testable ? paired_t_test(pur_vec[gi], pur_vec[bp]) : 1.0;
    }

    auto top_mean = [&](std::size_t gi, auto member) {
      return TopLine{(report.groups[gi].*member)->mean, report.groups[gi].lambda,
                     report.groups[gi].kernel};
    };
    report.best_mean_acc = top_mean(ba, &GroupSummary::acc);
    report.best_mean_nmi = top_mean(bn, &GroupSummary::nmi);
    report.best_mean_purity = top_mean(bp, &GroupSummary::purity);

    auto pick_best_obj = [&](auto value_of) {
      std::size_t best = 0;
      for (std::size_t gi = 1; gi < report.groups.size(); ++gi)
        if (value_of(*report.groups[gi].best_metrics) >
            value_of(*report.groups[best].best_metrics))
          best = gi;
      return TopLine{value_of(*report.groups[best].best_metrics),
                     report.groups[best].lambda, report.groups[best].kernel};
    };
    report.best_obj_acc = pick_best_obj([](const MetricReport& m) { return m.acc; });
    report.best_obj_nmi = pick_best_obj([](const MetricReport& m) { return m.nmi; });
    report.best_obj_purity = pick_best_obj([](const MetricReport& m) { return m.purity; });
  }
  return report;
}

void validate_bank(const std::vector<KernelMatrix>& bank, const std::vector<int>* labels,
                   const RunConfig& config) {
  if (bank.empty()) throw InputError("empty kernel bank");
  const Eigen::Index n = bank.front().values.rows();
  for (const auto& k : bank)
    if (k.values.rows() != n || k.values.cols() != n)
      throw InputError("kernel bank dimensions differ");
  if (config.clusters > n)
    throw InputError("clusters exceed the sample count");
  if (labels && static_cast<Eigen::Index>(labels->size()) != n)
    throw InputError("label count (" + std::to_string(labels->size()) +
                     ") does not match sample count (" + std::to_string(n) + ")");
}

}  // namespace

std::vector<double> default_lambda_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(snap(1.0 + 0.1 * i));
  return grid;
}

std::vector<double> parse_lambda_grid(const std::string& text) {
  std::vector<double> grid;
  auto parse_one = [&](const std::string& tok) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw InputError("invalid lambda grid token: '" + tok + "'");
    }
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
      if (ch == ':') {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(ch);
      }
    }
    parts.push_back(cur);
    if (parts.size() != 3) throw InputError("lambda range must be a:b:step");
    const double a = parse_one(parts[0]);
    const double b = parse_one(parts[1]);
    const double step = parse_one(parts[2]);
    if (!(step > 0.0)) throw InputError("lambda range step must be > 0");
    if (b < a) throw InputError("lambda range end must be >= start");
    const int count = static_cast<int>(std::floor((b - a) / step + 1e-9)) + 1;
    for (int i = 0; i < count; ++i) grid.push_back(snap(a + i * step));
  } else {
    std::string cur;
    for (char ch : text + ",") {
      if (ch == ',') {
        if (!cur.empty()) grid.push_back(snap(parse_one(cur)));
        cur.clear();
      } else if (!std::isspace(static_cast<unsigned char>(ch))) {
        cur.push_back(ch);
      }
    }
  }
  if (grid.empty()) throw InputError("invalid lambda grid: empty");
  return grid;
}

ExperimentReport run_experiment(const std::vector<KernelMatrix>& bank,
                                const std::vector<int>* labels,
                                const RunConfig& config) {
  validate_config(config);
  validate_bank(bank, labels, config);

  // graphs and Laplacians do not depend on lambda: build them once
  std::vector<Laplacian> laplacians;
  laplacians.reserve(bank.size());
  for (const auto& kernel : bank)
    laplacians.push_back(laplacian(knn_graph(kernel, config.tau)));

  std::vector<Group> groups;
  groups.reserve(config.lambda_grid.size());
  for (double lambda : config.lambda_grid) {
    Group group;
    group.lambda = lambda;
    group.deformed.reserve(bank.size());
    for (std::size_t p = 0; p < bank.size(); ++p)
      group.deformed.push_back(deform(bank[p], laplacians[p], lambda));
    groups.push_back(std::move(group));
  }

  std::vector<std::string> names;
  for (const auto& k : bank) names.push_back(k.name);
  return run_groups(groups, labels, config, std::move(names));
}

ExperimentReport run_experiment(const Eigen::MatrixXd& features,
                                const std::vector<int>* labels,
                                const RunConfig& config) {
  KernelBankOptions options;
  options.scale_features = config.scale_features;
  return run_experiment(build_kernel_bank(features, options), labels, config);
}

ExperimentReport run_experiment(const RunConfig& config) {
  const bool have_data = !config.data_path.empty();
  const bool have_kernels = !config.kernel_dir.empty();
  if (have_data == have_kernels)
    throw InputError("exactly one of --data and --kernel-dir is required");

  std::optional<std::vector<int>> labels;
  if (!config.labels_path.empty()) labels = read_labels(config.labels_path);
  const std::vector<int>* labels_ptr = labels ? &*labels : nullptr;

  if (have_kernels) {
    const auto bank = load_kernels(list_kernel_files(config.kernel_dir));
    return run_experiment(bank, labels_ptr, config);
  }
  return run_experiment(read_feature_csv(config.data_path), labels_ptr, config);
}

ExperimentReport run_baseline(const std::vector<KernelMatrix>& bank,
                              const std::vector<int>* labels,
                              const RunConfig& config, BaselineMode mode) {
  validate_config(config);
  validate_bank(bank, labels, config);

  std::vector<Group> groups;
  std::vector<std::string> names;
  for (const auto& k : bank) names.push_back(k.name);

  if (mode == BaselineMode::single_kernel) {
    for (const auto& kernel : bank) {
      Group group;
      group.kernel_label = kernel.name;
      group.deformed.push_back(adaptive_from_base(kernel));
      groups.push_back(std::move(group));
    }
  } else {
    Group group;
    group.kernel_label = "uniform";
    for (const auto& kernel : bank) group.deformed.push_back(adaptive_from_base(kernel));
    group.fixed_uniform = true;
    groups.push_back(std::move(group));
  }
  return run_groups(groups, labels, config, std::move(names));
}

ExperimentReport run_baseline(const RunConfig& config, BaselineMode mode) {
  const bool have_data = !config.data_path.empty();
  const bool have_kernels = !config.kernel_dir.empty();
  if (have_data == have_kernels)
    throw InputError("exactly one of --data and --kernel-dir is required");

  std::optional<std::vector<int>> labels;
  if (!config.labels_path.empty()) labels = read_labels(config.labels_path);
  const std::vector<int>* labels_ptr = labels ? &*labels : nullptr;

  if (have_kernels)
    return run_baseline(load_kernels(list_kernel_files(config.kernel_dir)), labels_ptr,
                        config, mode);
  KernelBankOptions options;
  options.scale_features = config.scale_features;
  return run_baseline(build_kernel_bank(read_feature_csv(config.data_path), options),
                      labels_ptr, config, mode);
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write file: " + path);
  return out;
}

void emit_trace_rows(const std::vector<double>& trace, const std::string& path) {
  if (trace.empty()) throw InputError("empty objective trace, nothing to write");
  auto out = open_out(path);
  out << "iteration,objective\n";
  for (std::size_t i = 0; i < trace.size(); ++i)
    out << i << "," << fmt(trace[i]) << "\n";
}

void write_records_csv(const ExperimentReport& report, const std::string& path) {
  auto out = open_out(path);
  out << "lambda,kernel,restart,objective,iterations,converged";
  if (report.has_labels) out << ",acc,nmi,purity";
  for (int p = 0; p < report.m; ++p) out << ",w" << p;
  out << "\n";
  for (const auto& rec : report.records) {
    out << fmt_short(rec.lambda) << "," << rec.kernel << "," << rec.restart << ","
        << fmt(rec.objective) << "," << rec.iterations << "," << (rec.converged ? 1 : 0);
    if (report.has_labels)
      out << "," << fmt(rec.metrics->acc) << "," << fmt(rec.metrics->nmi) << ","
          << fmt(rec.metrics->purity);
    for (Eigen::Index p = 0; p < rec.weights.size(); ++p) out << "," << fmt(rec.weights(p));
    out << "\n";
  }
}

void write_records_jsonl(const ExperimentReport& report, const std::string& path) {
  auto out = open_out(path);
  for (const auto& rec : report.records) {
    nlohmann::json j;
    j["lambda"] = rec.lambda;
    if (!rec.kernel.empty()) j["kernel"] = rec.kernel;
    j["restart"] = rec.restart;
    j["objective"] = rec.objective;
    j["iterations"] = rec.iterations;
    j["converged"] = rec.converged;
    if (rec.metrics) {
      j["acc"] = rec.metrics->acc;
      j["nmi"] = rec.metrics->nmi;
      j["purity"] = rec.metrics->purity;
    }
    j["weights"] = std::vector<double>(rec.weights.data(),
                                       rec.weights.data() + rec.weights.size());
    out << j.dump() << "\n";
  }
}

void write_summary_csv(const ExperimentReport& report, const std::string& path) {
  auto out = open_out(path);
  out << "lambda,kernel,best_restart,best_objective,best_iterations,best_converged";
  if (report.has_labels)
    out << ",best_acc,best_nmi,best_purity"
        << ",mean_acc,std_acc,p_acc,mean_nmi,std_nmi,p_nmi,mean_purity,std_purity,p_purity";
  out << "\n";
  for (const auto& g : report.groups) {
    out << fmt_short(g.lambda) << "," << g.kernel << "," << g.best_restart << ","
        << fmt(g.best_objective) << "," << g.best_iterations << ","
        << (g.best_converged ? 1 : 0);
    if (report.has_labels) {
      out << "," << fmt(g.best_metrics->acc) << "," << fmt(g.best_metrics->nmi) << ","
          << fmt(g.best_metrics->purity);
      out << "," << fmt(g.acc->mean) << "," << fmt(g.acc->stddev) << ","
          << fmt(g.acc->p_value);
      out << "," << fmt(g.nmi->mean) << "," << fmt(g.nmi->stddev) << ","
          << fmt(g.nmi->p_value);
      out << "," << fmt(g.purity->mean) << "," << fmt(g.purity->stddev) << ","
          << fmt(g.purity->p_value);
    }
    out << "\n";
  }
}

void write_weights_csv(const ExperimentReport& report, const std::string& path) {
  auto out = open_out(path);
  out << "lambda,kernel";
  for (int p = 0; p < report.m; ++p) out << ",w" << p;
  out << "\n";
  for (const auto& g : report.groups) {
    out << fmt_short(g.lambda) << "," << g.kernel;
    for (Eigen::Index p = 0; p < g.best_weights.size(); ++p)
      out << "," << fmt(g.best_weights(p));
    out << "\n";
  }
}

}  // namespace

void emit_convergence_trace(const SolverState& state, const std::string& path) {
  emit_trace_rows(state.objective_trace, path);
}

void emit_lambda_sweep(const ExperimentReport& report, const std::string& path) {
  if (!report.has_labels)
    throw InputError("lambda sweep requires metrics: run with labels");
  if (report.groups.empty()) throw InputError("empty report");
  auto out = open_out(path);
  out << "lambda,mean_acc,std_acc,best_acc\n";
  for (const auto& g : report.groups)
    out << fmt_short(g.lambda) << "," << fmt(g.acc->mean) << "," << fmt(g.acc->stddev)
        << "," << fmt(g.best_metrics->acc) << "\n";
}

void write_report_files(const ExperimentReport& report, const RunConfig& config) {
  namespace fs = std::filesystem;
  if (config.out_dir.empty()) throw InputError("output directory not set");
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) throw InputError("cannot create output directory: " + config.out_dir);
  const fs::path out(config.out_dir);

  write_records_csv(report, (out / "records.csv").string());
  write_records_jsonl(report, (out / "records.jsonl").string());
  write_summary_csv(report, (out / "summary.csv").string());
  write_weights_csv(report, (out / "weights.csv").string());
  if (report.has_labels) emit_lambda_sweep(report, (out / "sweep.csv").string());
  if (config.trace) {
    for (const auto& g : report.groups) {
      std::string name = "trace_" + std::string(fmt_short(g.lambda));
      if (!g.kernel.empty()) name += "_" + g.kernel;
      emit_trace_rows(g.best_trace, (out / (name + ".csv")).string());
    }
  }
}

void print_summary(const ExperimentReport& report, std::ostream& os) {
  char line[256];
  os << "n=" << report.n << " kernels_per_group=" << report.m << " clusters=" << report.c
     << " groups=" << report.groups.size() << " restarts_per_group="
     << (report.groups.empty() ? 0
                               : static_cast<int>(report.records.size() / report.groups.size()))
     << "\n";
  if (report.has_labels) {
    os << "group            best_obj        iters  acc_best  nmi_best  pur_best  "
          "acc_mean+/-std (p)\n";
  } else {
    os << "group            best_obj        iters\n";
  }
  for (const auto& g : report.groups) {
    std::string label = g.kernel.empty() ? "lambda=" + std::string(fmt_short(g.lambda))
                                         : g.kernel;
    if (label.size() > 16) label = label.substr(0, 16);
    if (report.has_labels) {
      std::snprintf(line, sizeof(line),
                    "%-16s %-15.8g %-6d %-9.4f %-9.4f %-9.4f %.4f+/-%.4f (%.3g)\n",
                    label.c_str(), g.best_objective, g.best_iterations,
                    g.best_metrics->acc, g.best_metrics->nmi, g.best_metrics->purity,
                    g.acc->mean, g.acc->stddev, g.acc->p_value);
    } else {
      std::snprintf(line, sizeof(line), "%-16s %-15.8g %-6d\n", label.c_str(),
                    g.best_objective, g.best_iterations);
    }
    os << line;
  }
  if (report.has_labels) {
    auto where = [](const TopLine& t) {
      return t.kernel.empty() ? "lambda=" + std::string(fmt_short(t.lambda)) : t.kernel;
    };
    std::snprintf(line, sizeof(line),
                  "best-by-objective: ACC %.4f (%s)  NMI %.4f (%s)  Purity %.4f (%s)\n",
                  report.best_obj_acc->value, where(*report.best_obj_acc).c_str(),
                  report.best_obj_nmi->value, where(*report.best_obj_nmi).c_str(),
                  report.best_obj_purity->value, where(*report.best_obj_purity).c_str());
    os << line;
    std::snprintf(line, sizeof(line),
                  "best mean:         ACC %.4f (%s)  NMI %.4f (%s)  Purity %.4f (%s)\n",
                  report.best_mean_acc->value, where(*report.best_mean_acc).c_str(),
                  report.best_mean_nmi->value, where(*report.best_mean_nmi).c_str(),
                  report.best_mean_purity->value, where(*report.best_mean_purity).c_str());
    os << line;
  }
}

}  // namespace mamkkc
