// Copyright 2026 The cutstock-ising Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Experiment protocol: build the model, run a multi-read solver, decode every
// read, accept reads whose layout is geometrically feasible, recount their
// cuts classically and aggregate. Reads are ranked by recounted cuts rather
// than raw energy: the simplified energy weights a horizontal cut by
// sigma + sigma_t but a vertical cut by sigma, so the two orders can differ.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cutstock/annealer.hpp"
#include "cutstock/instance.hpp"
#include "cutstock/layout.hpp"
#include "cutstock/oracle.hpp"
#include "cutstock/qubo_model.hpp"
#include "cutstock/rng.hpp"
#include "json.hpp"

namespace cutstock {

struct SolverSpec {
  enum class Kind { sa, tabu };
  Kind kind = Kind::sa;
  std::optional<std::size_t> sweeps;  // overrides the default schedule's sweeps
  TabuParams tabu;
  unsigned threads = 1;

  std::string id() const { return kind == Kind::sa ? "sa" : "tabu"; }
};

struct BenchRecord {
  std::string name;
  std::optional<int> best_value;
  double acceptance_rate = 0.0;  // percent
  std::optional<double> mean;
  std::optional<double> variance;
  std::optional<double> sd;
  std::optional<int> optimum;
  std::optional<double> error_rate;  // percent, 1 decimal
  int high_width = 0;
  std::size_t num_reads = 0;
  std::size_t accepted = 0;
  std::uint64_t seed = 0;
  std::string solver;
  std::chrono::duration<double> wall_time{0};
};

// (best - opt) / opt * 100 rounded to one decimal; empty when opt < 1.
inline std::optional<double> error_rate(int best, int opt) {
  if (opt < 1) return std::nullopt;
  const double raw = 100.0 * static_cast<double>(best - opt) / static_cast<double>(opt);
  return std::round(raw * 10.0) / 10.0;
}

struct ReadOutcome {
  bool accepted = false;
  int cuts = 0;  // valid when accepted
};

inline std::vector<ReadOutcome> evaluate_reads(const SampleSet& samples, const QuboModel& model,
                                               const Instance& inst) {
  std::vector<ReadOutcome> out;
  out.reserve(samples.reads.size());
  for (const Sample& s : samples.reads) {
    auto [layout, report] = decode(s.assignment, model, inst);
    ReadOutcome o;
    o.accepted = report.feasible();
    if (o.accepted) o.cuts = count_cuts(layout, inst, model.config.kind).total;
    out.push_back(o);
  }
  return out;
}

// Fills the aggregate fields of `record` from per-read outcomes. Statistics
// are population statistics over accepted reads.
inline void aggregate(BenchRecord& record, const std::vector<ReadOutcome>& outcomes) {
  record.num_reads = outcomes.size();
  std::vector<int> cuts;
  for (const ReadOutcome& o : outcomes) {
    if (o.accepted) cuts.push_back(o.cuts);
  }
  record.accepted = cuts.size();
  record.acceptance_rate =
      outcomes.empty() ? 0.0
                       : 100.0 * static_cast<double>(cuts.size()) / static_cast<double>(outcomes.size());
  record.best_value.reset();
  record.mean.reset();
  record.variance.reset();
  record.sd.reset();
  if (!cuts.empty()) {
    // Integer sums keep the statistics independent of read order.
    long long sum = 0;
    long long sum_sq = 0;
    for (int c : cuts) {
      sum += c;
      sum_sq += static_cast<long long>(c) * c;
    }
    const double n = static_cast<double>(cuts.size());
    const double mean = static_cast<double>(sum) / n;
    const double var = std::max(0.0, static_cast<double>(sum_sq) / n - mean * mean);
    record.best_value = *std::min_element(cuts.begin(), cuts.end());
    record.mean = mean;
    record.variance = var;
    record.sd = std::sqrt(var);
  }
  record.error_rate.reset();
  if (record.optimum && record.best_value) {
    record.error_rate = error_rate(*record.best_value, *record.optimum);
  }
}

inline SampleSet run_solver(const QuboModel& model, const SolverSpec& solver,
                            std::size_t num_reads, std::uint64_t seed) {
  SolverOptions options;
  options.threads = solver.threads;
  if (solver.kind == SolverSpec::Kind::sa) {
    AnnealSchedule schedule = default_schedule(model.matrix);
    if (solver.sweeps) schedule.sweeps = *solver.sweeps;
    return solve_sa(model.matrix, schedule, num_reads, seed, options);
  }
  return solve_tabu(model.matrix, solver.tabu.max_iters, solver.tabu.tenure, num_reads, seed,
                    options);
}

inline BenchRecord run_experiment(const Instance& inst, const ModelConfig& cfg,
                                  const SolverSpec& solver, std::size_t num_reads,
                                  std::uint64_t seed, std::optional<int> optimum = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  const QuboModel model = assemble(inst, cfg);
  const SampleSet samples = run_solver(model, solver, num_reads, seed);
  BenchRecord record;
  record.name = inst.name;
  record.high_width = high_width_count(inst);
  record.seed = seed;
  record.solver = solver.id();
  record.optimum = optimum;
  aggregate(record, evaluate_reads(samples, model, inst));
  record.wall_time = std::chrono::steady_clock::now() - t0;
  return record;
}

struct SuiteOptions {
  ModelKind kind = ModelKind::simplified;
  PenaltyParams params;
  bool trim_lengths = true;
  std::optional<int> num_bins;
  std::optional<int> steps_per_bin;
  SolverSpec solver;
  std::size_t num_reads = 1000;
  std::uint64_t seed = 0;
  // Instances with at most this many pieces get an exact optimum from the
  // oracle unless one is supplied in `optima`.
  int oracle_max_pieces = 0;
  std::uint64_t oracle_budget = 100'000'000;
  std::map<std::string, int> optima;
};

inline ModelConfig suite_config(const Instance& inst, const SuiteOptions& o) {
  ModelConfig cfg = default_config(inst, o.kind, o.params, o.trim_lengths);
  if (o.num_bins) cfg.num_bins = *o.num_bins;
  if (o.steps_per_bin) cfg.steps_per_bin = *o.steps_per_bin;
  return cfg;
}

// Runs every instance in name order; each gets a seed derived from the suite
// seed and its name.
inline std::vector<BenchRecord> run_suite(std::vector<Instance> instances,
                                          const SuiteOptions& options) {
  std::stable_sort(instances.begin(), instances.end(),
                   [](const Instance& a, const Instance& b) { return a.name < b.name; });
  std::vector<BenchRecord> records;
  for (const Instance& inst : instances) {
    const ModelConfig cfg = suite_config(inst, options);
    std::optional<int> optimum;
    if (const auto it = options.optima.find(inst.name); it != options.optima.end()) {
      optimum = it->second;
    } else if (inst.num_pieces() <= options.oracle_max_pieces) {
      ExactOptions eo;
      eo.node_budget = options.oracle_budget;
      eo.max_pieces = options.oracle_max_pieces;
      const OptimalResult r = solve_exact(inst, options.kind, cfg, eo);
      if (r.proven) optimum = r.optimum;
    }
    const std::uint64_t seed = derive_seed(options.seed, stable_hash(inst.name));
    records.push_back(
        run_experiment(inst, cfg, options.solver, options.num_reads, seed, optimum));
  }
  return records;
}

struct CorrelationReport {
  std::vector<std::pair<double, double>> points;  // (high_width, acceptance_rate)
  std::optional<double> slope;
  std::optional<double> intercept;
  bool degenerate = false;  // fewer than two distinct x values
};

// Ordinary least squares of acceptance rate on high-width count.
inline CorrelationReport correlation_report(const std::vector<BenchRecord>& records) {
  CorrelationReport r;
  for (const BenchRecord& b : records) {
    r.points.emplace_back(static_cast<double>(b.high_width), b.acceptance_rate);
  }
  const double n = static_cast<double>(r.points.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& [x, y] : r.points) {
    mx += x;
    my += y;
  }
  if (r.points.empty()) {
    r.degenerate = true;
    return r;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [x, y] : r.points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0.0) {
    r.degenerate = true;
    return r;
  }
  r.slope = sxy / sxx;
  r.intercept = my - *r.slope * mx;
  return r;
}

namespace detail {

inline std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string s = buf;
  if (s == "-0" || s.rfind("-0.", 0) == 0) {
    // Avoid "-0.000" from tiny negative rounding.
    if (std::strtod(s.c_str(), nullptr) == 0.0) s.erase(0, 1);
  }
  return s;
}

template <class T>
std::string opt_fixed(const std::optional<T>& v, int digits) {
  return v ? fixed(static_cast<double>(*v), digits) : std::string();
}

}  // namespace detail

inline std::string records_to_csv(const std::vector<BenchRecord>& records) {
  std::string out = "no,best,acc_rate,avg,var,sd,opt,err_rate,high_width\n";
  std::size_t no = 0;
  for (const BenchRecord& r : records) {
    out += std::to_string(++no) + ",";
    out += (r.best_value ? std::to_string(*r.best_value) : std::string()) + ",";
    out += detail::fixed(r.acceptance_rate, 1) + ",";
    out += detail::opt_fixed(r.mean, 3) + ",";
    out += detail::opt_fixed(r.variance, 3) + ",";
    out += detail::opt_fixed(r.sd, 3) + ",";
    out += (r.optimum ? std::to_string(*r.optimum) : std::string()) + ",";
    out += detail::opt_fixed(r.error_rate, 1) + ",";
    out += std::to_string(r.high_width) + "\n";
  }
  return out;
}

inline nlohmann::ordered_json records_to_json(const std::vector<BenchRecord>& records) {
  const auto opt = [](const auto& v) -> nlohmann::ordered_json {
    if (v) return *v;
    return nullptr;
  };
  nlohmann::ordered_json doc;
  auto rows = nlohmann::ordered_json::array();
  std::size_t no = 0;
  for (const BenchRecord& r : records) {
    nlohmann::ordered_json j;
    j["no"] = ++no;
    j["name"] = r.name;
    j["best"] = opt(r.best_value);
    j["acc_rate"] = r.acceptance_rate;
    j["avg"] = opt(r.mean);
    j["var"] = opt(r.variance);
    j["sd"] = opt(r.sd);
    j["opt"] = opt(r.optimum);
    j["err_rate"] = opt(r.error_rate);
    j["high_width"] = r.high_width;
    j["num_reads"] = r.num_reads;
    j["accepted"] = r.accepted;
    j["seed"] = r.seed;
    j["solver"] = r.solver;
    rows.push_back(std::move(j));
  }
  doc["records"] = std::move(rows);
  const CorrelationReport c = correlation_report(records);
  doc["correlation"] = {{"slope", opt(c.slope)}, {"intercept", opt(c.intercept)},
                        {"degenerate", c.degenerate}};
  return doc;
}

// Scatter of acceptance rate against high-width count with the fitted line.
inline std::string correlation_svg(const CorrelationReport& report) {
  constexpr double kW = 640.0;
  constexpr double kH = 480.0;
  constexpr double kMargin = 60.0;
  double x_max = 1.0;
  for (const auto& p : report.points) x_max = std::max(x_max, p.first);
  x_max = std::ceil(x_max);
  const double y_max = 100.0;
  const auto sx = [&](double x) { return kMargin + x / x_max * (kW - 2 * kMargin); };
  const auto sy = [&](double y) { return kH - kMargin - y / y_max * (kH - 2 * kMargin); };
  using detail::fixed;
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
         "viewBox=\"0 0 640 480\">\n";
  svg += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  svg += "<line x1=\"" + fixed(sx(0), 2) + "\" y1=\"" + fixed(sy(0), 2) + "\" x2=\"" +
         fixed(sx(x_max), 2) + "\" y2=\"" + fixed(sy(0), 2) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + fixed(sx(0), 2) + "\" y1=\"" + fixed(sy(0), 2) + "\" x2=\"" +
         fixed(sx(0), 2) + "\" y2=\"" + fixed(sy(y_max), 2) + "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= static_cast<int>(x_max); ++t) {
    svg += "<text x=\"" + fixed(sx(t), 2) + "\" y=\"" + fixed(sy(0) + 18, 2) +
           "\" font-size=\"12\" text-anchor=\"middle\">" + std::to_string(t) + "</text>\n";
  }
  for (int t = 0; t <= 100; t += 20) {
    svg += "<text x=\"" + fixed(sx(0) - 8, 2) + "\" y=\"" + fixed(sy(t) + 4, 2) +
           "\" font-size=\"12\" text-anchor=\"end\">" + std::to_string(t) + "</text>\n";
  }
  svg += "<text x=\"320\" y=\"470\" font-size=\"14\" text-anchor=\"middle\">"
         "number of high-width items</text>\n";
  svg += "<text x=\"16\" y=\"240\" font-size=\"14\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 16 240)\">acceptance rate [%]</text>\n";
  for (const auto& [x, y] : report.points) {
    svg += "<circle cx=\"" + fixed(sx(x), 2) + "\" cy=\"" + fixed(sy(y), 2) +
           "\" r=\"4\" fill=\"steelblue\"/>\n";
  }
  if (report.slope && report.intercept) {
    const double y0 = *report.intercept;
    const double y1 = *report.intercept + *report.slope * x_max;
    svg += "<line x1=\"" + fixed(sx(0), 2) + "\" y1=\"" + fixed(sy(y0), 2) + "\" x2=\"" +
           fixed(sx(x_max), 2) + "\" y2=\"" + fixed(sy(y1), 2) +
           "\" stroke=\"firebrick\" stroke-dasharray=\"6 4\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace cutstock
