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

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cutstock/cutstock.hpp"

namespace fs = std::filesystem;

namespace cutstock::cli {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    write_text_file(path, content);
  }
}

Instance load_instance(const std::string& path) {
  return parse_instance(read_file(path), fs::path(path).stem().string());
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  std::random_device rd;
  const std::uint64_t drawn = (static_cast<std::uint64_t>(rd()) << 32) | rd();
  std::cerr << "seed: " << drawn << "\n";
  return drawn;
}

struct ModelFlags {
  std::string model = "simplified";
  std::string params_path;
  int bins = 0;
  int steps = 0;
  bool no_trim = false;
  bool keep_sht = false;
};

void add_model_flags(CLI::App* app, ModelFlags& f) {
  app->add_option("--model", f.model, "Ising model variant")
      ->check(CLI::IsMember({"full", "simplified"}))
      ->capture_default_str();
  app->add_option("--params", f.params_path,
                  "Penalty parameter file (key=value); missing keys keep defaults")
      ->check(CLI::ExistingFile);
  app->add_option("--bins", f.bins, "Number of bins I (0: ceil(area / bin area) + 1)")
      ->capture_default_str();
  app->add_option("--steps", f.steps, "Steps per bin J (0: Bin_H)")->capture_default_str();
  app->add_flag("--no-trim", f.no_trim,
                "Use every length 1..max height instead of the heights present");
  app->add_flag("--keep-sht", f.keep_sht, "Keep the sht spins in the simplified model");
}

struct Resolved {
  PenaltyParams params;
  ModelKind kind = ModelKind::simplified;
};

Resolved resolve_model(const ModelFlags& f) {
  Resolved r;
  r.kind = parse_model_kind(f.model);
  if (!f.params_path.empty()) r.params = parse_params(read_file(f.params_path)).params;
  if (r.kind == ModelKind::full && uses_untuned_full_defaults(r.params)) {
    std::cerr << "note: full model uses untuned default penalties for lambda_h, mu_h, "
                 "lambda_l, sigma_l\n";
  }
  return r;
}

ModelConfig make_config(const Instance& inst, const ModelFlags& f, const Resolved& r) {
  ModelConfig cfg = default_config(inst, r.kind, r.params, !f.no_trim);
  if (f.bins > 0) cfg.num_bins = f.bins;
  if (f.steps > 0) cfg.steps_per_bin = f.steps;
  cfg.keep_sht = f.keep_sht;
  validate_config(inst, cfg);
  return cfg;
}

std::string bitstring(const Assignment& x) {
  std::string s;
  s.reserve(x.size());
  for (std::uint8_t b : x) s.push_back(b ? '1' : '0');
  return s;
}

Assignment parse_bitstring(const std::string& text) {
  Assignment x;
  for (char c : text) {
    if (c == '0' || c == '1') {
      x.push_back(static_cast<std::uint8_t>(c - '0'));
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      throw ParseError(std::string("assignment: unexpected character '") + c + "'");
    }
  }
  return x;
}

std::map<std::string, int> load_optima(const std::string& path) {
  std::map<std::string, int> out;
  std::istringstream in(read_file(path));
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string name;
    long long value = 0;
    if (!(fields >> name)) continue;
    std::string rest;
    if (!(fields >> value) || (fields >> rest) || value < 0) {
      throw ParseError("optima line " + std::to_string(line_no) + ": expected '<name> <cuts>'");
    }
    out[name] = static_cast<int>(value);
  }
  return out;
}

std::vector<Instance> load_instance_dir(const std::string& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().filename().string().rfind('.', 0) == 0) continue;
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw std::runtime_error("no instance files in '" + dir + "'");
  std::vector<Instance> out;
  for (const fs::path& p : files) out.push_back(load_instance(p.string()));
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Ising-model cutting stock toolkit: build, solve and benchmark QUBO models."};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a random instance");
  std::optional<std::uint64_t> gen_seed;
  int gen_pieces = 20;
  int gen_w = 10;
  int gen_h = 10;
  int gen_high = -1;
  std::string gen_out;
  gen->add_option("--seed", gen_seed, "Random seed (default: drawn and printed)");
  gen->add_option("--pieces", gen_pieces, "Number of pieces K")->capture_default_str();
  gen->add_option("--bin-w", gen_w, "Bin width")->capture_default_str();
  gen->add_option("--bin-h", gen_h, "Bin height")->capture_default_str();
  gen->add_option("--high-width", gen_high,
                  "Exact number of pieces wider than half the bin (-1: unconstrained)")
      ->capture_default_str();
  gen->add_option("-o,--out", gen_out, "Output file (default: stdout)");

  // build
  auto* build = app.add_subcommand("build", "Emit the QUBO of an instance in wire format");
  std::string build_in;
  std::string build_out;
  ModelFlags build_flags;
  build->add_option("instance", build_in, "Instance file")->required()->check(CLI::ExistingFile);
  add_model_flags(build, build_flags);
  build->add_option("-o,--out", build_out, "Output file (default: stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "Sample the QUBO and decode the best read");
  std::string solve_in;
  std::string solve_out;
  ModelFlags solve_flags;
  std::string solver_name = "sa";
  std::size_t solve_reads = 100;
  std::optional<std::uint64_t> solve_seed;
  std::optional<std::size_t> solve_sweeps;
  TabuParams solve_tabu;
  unsigned solve_jobs = 1;
  solve->add_option("instance", solve_in, "Instance file")->required()->check(CLI::ExistingFile);
  add_model_flags(solve, solve_flags);
  solve->add_option("--solver", solver_name, "Sampler")
      ->check(CLI::IsMember({"sa", "tabu"}))
      ->capture_default_str();
  solve->add_option("--reads", solve_reads, "Independent reads")->capture_default_str();
  solve->add_option("--seed", solve_seed, "Random seed (default: drawn and printed)");
  solve->add_option("--sweeps", solve_sweeps, "SA sweeps per read (default: 1000)");
  solve->add_option("--tabu-iters", solve_tabu.max_iters, "Tabu iterations per read")
      ->capture_default_str();
  solve->add_option("--tenure", solve_tabu.tenure, "Tabu tenure")->capture_default_str();
  solve->add_option("--jobs", solve_jobs, "Worker threads")->capture_default_str();
  solve->add_option("-o,--out", solve_out, "Output JSON file (default: stdout)");

  // exact
  auto* exact = app.add_subcommand("exact", "Compute the exact minimum cut count");
  std::string exact_in;
  std::string exact_witness;
  ModelFlags exact_flags;
  ExactOptions exact_opts;
  exact->add_option("instance", exact_in, "Instance file")->required()->check(CLI::ExistingFile);
  add_model_flags(exact, exact_flags);
  exact->add_option("--budget", exact_opts.node_budget, "Search node budget")
      ->capture_default_str();
  exact->add_option("--max-pieces", exact_opts.max_pieces, "Refuse larger instances")
      ->capture_default_str();
  exact->add_option("--witness", exact_witness, "Write the optimal layout as JSON");

  // validate
  auto* validate = app.add_subcommand("validate", "Decode a saved assignment and report violations");
  std::string val_in;
  std::string val_assignment;
  ModelFlags val_flags;
  validate->add_option("instance", val_in, "Instance file")->required()->check(CLI::ExistingFile);
  validate->add_option("assignment", val_assignment, "File holding a 0/1 bitstring")
      ->required()
      ->check(CLI::ExistingFile);
  add_model_flags(validate, val_flags);

  // bench
  auto* bench = app.add_subcommand("bench", "Run the experiment over a directory of instances");
  std::string bench_dir;
  ModelFlags bench_flags;
  std::string bench_solver = "sa";
  std::size_t bench_reads = 1000;
  std::optional<std::uint64_t> bench_seed;
  std::optional<std::size_t> bench_sweeps;
  TabuParams bench_tabu;
  unsigned bench_jobs = 1;
  std::string bench_out;
  std::string bench_json;
  std::string bench_plot;
  std::string bench_optima;
  int bench_oracle_pieces = 0;
  std::uint64_t bench_oracle_budget = 100'000'000;
  bench->add_option("--instances", bench_dir, "Directory of instance files")
      ->required()
      ->check(CLI::ExistingDirectory);
  add_model_flags(bench, bench_flags);
  bench->add_option("--solver", bench_solver, "Sampler")
      ->check(CLI::IsMember({"sa", "tabu"}))
      ->capture_default_str();
  bench->add_option("--reads", bench_reads, "Reads per instance")->capture_default_str();
  bench->add_option("--seed", bench_seed, "Random seed (default: drawn and printed)");
  bench->add_option("--sweeps", bench_sweeps, "SA sweeps per read (default: 1000)");
  bench->add_option("--tabu-iters", bench_tabu.max_iters, "Tabu iterations per read")
      ->capture_default_str();
  bench->add_option("--tenure", bench_tabu.tenure, "Tabu tenure")->capture_default_str();
  bench->add_option("--jobs", bench_jobs, "Worker threads")->capture_default_str();
  bench->add_option("--out", bench_out, "CSV output file (default: stdout)");
  bench->add_option("--json", bench_json, "JSON output file");
  bench->add_option("--plot", bench_plot, "SVG scatter of acceptance rate vs high-width count");
  bench->add_option("--optima", bench_optima, "File of '<name> <cuts>' known optima")
      ->check(CLI::ExistingFile);
  bench->add_option("--oracle-max-pieces", bench_oracle_pieces,
                    "Solve instances up to this size exactly for the error rate")
      ->capture_default_str();
  bench->add_option("--oracle-budget", bench_oracle_budget, "Oracle node budget")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    throw UsageError(e.what());
  }

  if (gen->parsed()) {
    const std::uint64_t seed = resolve_seed(gen_seed);
    const Instance inst =
        gen_high < 0 ? generate_instance(seed, gen_pieces, gen_w, gen_h)
                     : generate_instance_with_high_width(seed, gen_pieces, gen_w, gen_h, gen_high);
    emit(gen_out, serialize_instance(inst));
  } else if (build->parsed()) {
    const Instance inst = load_instance(build_in);
    const Resolved r = resolve_model(build_flags);
    const QuboModel model = assemble(inst, make_config(inst, build_flags, r));
    emit(build_out, export_qubo(model.matrix));
  } else if (solve->parsed()) {
    const Instance inst = load_instance(solve_in);
    const Resolved r = resolve_model(solve_flags);
    const QuboModel model = assemble(inst, make_config(inst, solve_flags, r));
    SolverSpec spec;
    spec.kind = solver_name == "sa" ? SolverSpec::Kind::sa : SolverSpec::Kind::tabu;
    spec.sweeps = solve_sweeps;
    spec.tabu = solve_tabu;
    spec.threads = solve_jobs;
    const std::uint64_t seed = resolve_seed(solve_seed);
    const SampleSet samples = run_solver(model, spec, solve_reads, seed);
    const std::vector<ReadOutcome> outcomes = evaluate_reads(samples, model, inst);
    BenchRecord record;
    aggregate(record, outcomes);
    // Report the feasible read with the fewest cuts, else the lowest energy.
    std::size_t pick = 0;
    bool have_feasible = false;
    for (std::size_t t = 0; t < outcomes.size(); ++t) {
      const auto better = [&] {
        if (outcomes[t].accepted != have_feasible) return outcomes[t].accepted;
        if (have_feasible && outcomes[t].cuts != outcomes[pick].cuts) {
          return outcomes[t].cuts < outcomes[pick].cuts;
        }
        return samples.reads[t].energy < samples.reads[pick].energy;
      };
      if (t == 0 || better()) {
        pick = t;
        have_feasible = outcomes[t].accepted;
      }
    }
    const Sample& best = samples.reads[pick];
    const auto [layout, report] = decode(best.assignment, model, inst);
    nlohmann::ordered_json doc;
    doc["instance"] = inst.name;
    doc["model"] = to_string(r.kind);
    doc["solver"] = spec.id();
    doc["seed"] = seed;
    doc["reads"] = solve_reads;
    doc["accepted"] = record.accepted;
    doc["acc_rate"] = record.acceptance_rate;
    doc["read"] = best.read_index;
    doc["energy"] = best.energy;
    doc["assignment"] = bitstring(best.assignment);
    doc["violations"] = violation_report_to_json(report);
    if (report.feasible()) {
      const CutReport cuts = count_cuts(layout, inst, r.kind);
      doc["layout"] = layout_to_json(layout, inst, &cuts);
    } else {
      doc["layout"] = layout_to_json(layout, inst, nullptr);
    }
    emit(solve_out, doc.dump(2) + "\n");
  } else if (exact->parsed()) {
    const Instance inst = load_instance(exact_in);
    const Resolved r = resolve_model(exact_flags);
    const ModelConfig cfg = make_config(inst, exact_flags, r);
    const OptimalResult result = solve_exact(inst, r.kind, cfg, exact_opts);
    if (result.optimum) {
      std::cout << "optimum " << *result.optimum << "\n";
    } else {
      std::cout << "optimum none\n";
    }
    std::cout << "proven " << (result.proven ? "yes" : "no") << "\n";
    std::cout << "nodes " << result.nodes_explored << "\n";
    if (!exact_witness.empty() && result.optimum) {
      const CutReport cuts = count_cuts(result.witness, inst, r.kind);
      write_text_file(exact_witness, layout_to_json(result.witness, inst, &cuts).dump(2) + "\n");
    }
    if (!result.proven) return kExitRuntime;
  } else if (validate->parsed()) {
    const Instance inst = load_instance(val_in);
    const Resolved r = resolve_model(val_flags);
    const QuboModel model = assemble(inst, make_config(inst, val_flags, r));
    const Assignment x = parse_bitstring(read_file(val_assignment));
    if (x.size() != model.num_vars()) {
      throw ParseError("assignment has " + std::to_string(x.size()) + " bits, model has " +
                       std::to_string(model.num_vars()));
    }
    const auto [layout, report] = decode(x, model, inst);
    nlohmann::ordered_json doc = violation_report_to_json(report);
    doc["energy"] = energy(model, x);
    if (report.feasible()) {
      const CutReport cuts = count_cuts(layout, inst, r.kind);
      doc["cuts"] = cut_report_to_json(cuts);
    }
    std::cout << doc.dump(2) << "\n";
  } else if (bench->parsed()) {
    const Resolved r = resolve_model(bench_flags);
    SuiteOptions o;
    o.kind = r.kind;
    o.params = r.params;
    o.trim_lengths = !bench_flags.no_trim;
    if (bench_flags.bins > 0) o.num_bins = bench_flags.bins;
    if (bench_flags.steps > 0) o.steps_per_bin = bench_flags.steps;
    o.solver.kind = bench_solver == "sa" ? SolverSpec::Kind::sa : SolverSpec::Kind::tabu;
    o.solver.sweeps = bench_sweeps;
    o.solver.tabu = bench_tabu;
    o.solver.threads = bench_jobs;
    o.num_reads = bench_reads;
    o.seed = resolve_seed(bench_seed);
    o.oracle_max_pieces = bench_oracle_pieces;
    o.oracle_budget = bench_oracle_budget;
    if (!bench_optima.empty()) o.optima = load_optima(bench_optima);
    const std::vector<BenchRecord> records = run_suite(load_instance_dir(bench_dir), o);
    emit(bench_out, records_to_csv(records));
    if (!bench_json.empty()) write_text_file(bench_json, records_to_json(records).dump(2) + "\n");
    if (!bench_plot.empty()) {
      write_text_file(bench_plot, correlation_svg(correlation_report(records)));
    }
  }
  return kExitOk;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

}  // namespace
}  // namespace cutstock::cli

int main(int argc, char** argv) {
  using namespace cutstock::cli;
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "error: " << one_line(e.what()) << "\n";
    return kExitUsage;
  } catch (const cutstock::ParseError& e) {
    std::cerr << "error: " << one_line(e.what()) << "\n";
    return kExitUsage;
  } catch (const cutstock::ValidationError& e) {
    std::cerr << "error: " << one_line(e.what()) << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << one_line(e.what()) << "\n";
    return kExitRuntime;
  }
}
