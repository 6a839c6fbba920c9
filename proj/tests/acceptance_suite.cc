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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cutstock/cutstock.hpp"
#include "test_support.hpp"

namespace cutstock::acceptance {
namespace {

using Clock = std::chrono::steady_clock;

constexpr int kClosedFormLayouts = 1000;
constexpr int kClosedFormMaxPieces = 10;
constexpr double kClosedFormSeconds = 10.0;
constexpr int kCrosscheckLayouts = 200;
constexpr double kCrosscheckSeconds = 10.0;
constexpr int kTinyInstances = 10;
constexpr std::size_t kTinyMaxVars = 20;
constexpr double kExhaustiveSeconds = 60.0;
constexpr std::size_t kSanityMaxVars = 18;
constexpr std::size_t kSanityReads = 50;
constexpr std::uint64_t kSanitySeed = 2024;
constexpr double kSanitySeconds = 60.0;
constexpr double kErrorRateTolerance = 0.05;
constexpr std::size_t kProtocolReads = 1000;
constexpr std::uint64_t kProtocolSeed = 42;
constexpr double kProtocolSeconds = 600.0;
constexpr double kProtocolMinAcceptance = 1.0;
constexpr int kCorrelationInstances = 10;
constexpr std::size_t kCorrelationReads = 100;
constexpr std::uint64_t kCorrelationSeed = 7;
constexpr int kMutations = 500;

const std::filesystem::path kOutDir = "acceptance_out";

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

unsigned parallel_jobs() { return std::max(2U, std::thread::hardware_concurrency()); }

// 1. Closed-form energy identity on the simplified model.
Outcome closed_form_identity() {
  const auto t0 = Clock::now();
  Rng rng(derive_seed(1, 0));
  int checked = 0;
  int mismatches = 0;
  std::uint64_t seed = 0;
  while (checked < kClosedFormLayouts) {
    const int k = 1 + static_cast<int>(seed % kClosedFormMaxPieces);
    const int w = 3 + static_cast<int>(seed % 8);
    const int h = 3 + static_cast<int>((seed / 8) % 8);
    const Instance inst = generate_instance(seed++, k, w, h);
    const ModelConfig cfg = default_config(inst, ModelKind::simplified);
    const QuboModel model = assemble(inst, cfg);
    const auto layout = testing::random_feasible_layout(rng, inst, cfg);
    if (!layout) continue;
    const Coeff e = energy(model, encode(*layout, model, inst));
    if (e != testing::simplified_closed_form(*layout, inst, cfg)) ++mismatches;
    ++checked;
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < kClosedFormSeconds,
          std::to_string(checked) + " layouts, " + std::to_string(mismatches) + " mismatches, " +
              fmt("%.2f s", secs)};
}

// 2. Cut terms of the full model agree with the classical count.
Outcome cut_energy_agreement() {
  const auto t0 = Clock::now();
  Rng rng(derive_seed(2, 0));
  int checked = 0;
  int mismatches = 0;
  std::uint64_t seed = 1000;
  while (checked < kCrosscheckLayouts) {
    const int k = 1 + static_cast<int>(seed % 8);
    const int w = 4 + static_cast<int>(seed % 4);
    const int h = 4 + static_cast<int>(seed % 3);
    const Instance inst = generate_instance(seed++, k, w, h);
    const ModelConfig cfg = default_config(inst, ModelKind::full);
    const QuboModel model = assemble(inst, cfg);
    const auto layout = testing::random_feasible_layout(rng, inst, cfg);
    if (!layout) continue;
    const Assignment x = encode(*layout, model, inst);
    const Coeff sigma = cfg.params.sigma;
    const Coeff hcut = energy(component_model(inst, cfg, Hamiltonian::hcut), x);
    const Coeff wcut = energy(component_model(inst, cfg, Hamiltonian::wcut), x);
    const CutReport cuts = count_cuts(*layout, inst, ModelKind::full);
    if (hcut != sigma * cuts.horizontal || wcut != sigma * cuts.vertical) ++mismatches;
    ++checked;
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < kCrosscheckSeconds,
          std::to_string(checked) + " layouts, " + std::to_string(mismatches) + " mismatches, " +
              fmt("%.2f s", secs)};
}

struct TinyCase {
  Instance inst;
  ModelConfig cfg;
  QuboModel model;
};

// Seeded suite of tiny simplified models, each with at most 20 variables.
std::vector<TinyCase> tiny_suite() {
  std::vector<TinyCase> out;
  for (std::uint64_t seed = 0; static_cast<int>(out.size()) < kTinyInstances; ++seed) {
    const int k = 1 + static_cast<int>(seed % 4);
    const int w = 2 + static_cast<int>((seed / 4) % 3);
    const int h = 2 + static_cast<int>((seed / 12) % 3);
    Instance inst = generate_instance(9000 + seed, k, w, h);
    ModelConfig cfg = default_config(inst, ModelKind::simplified);
    cfg.num_bins = 1;
    for (cfg.steps_per_bin = k; cfg.steps_per_bin >= 1; --cfg.steps_per_bin) {
      if (SpinLayout::make(inst, cfg).total_vars() <= kTinyMaxVars) break;
    }
    if (cfg.steps_per_bin < 1) continue;
    QuboModel model = assemble(inst, cfg);
    out.push_back({std::move(inst), cfg, std::move(model)});
  }
  return out;
}

std::optional<int> enumerate_min_cuts(const TinyCase& c) {
  const std::size_t n = c.model.num_vars();
  Assignment x(n, 0);
  std::optional<int> best;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    for (std::size_t u = 0; u < n; ++u) x[u] = static_cast<std::uint8_t>((mask >> u) & 1U);
    const auto [layout, report] = decode(x, c.model, c.inst);
    if (!report.feasible()) continue;
    const int cuts = count_cuts(layout, c.inst, ModelKind::simplified).total;
    if (!best || cuts < *best) best = cuts;
  }
  return best;
}

// 3. Exhaustive enumeration agrees with the exact oracle.
Outcome exhaustive_ground_state(const std::vector<TinyCase>& suite) {
  const auto t0 = Clock::now();
  int agree = 0;
  std::string first_bad;
  for (const TinyCase& c : suite) {
    const auto enumerated = enumerate_min_cuts(c);
    const OptimalResult exact = solve_exact(c.inst, ModelKind::simplified, c.cfg);
    if (exact.proven && exact.optimum == enumerated) {
      ++agree;
    } else if (first_bad.empty()) {
      first_bad = ", first mismatch " + c.inst.name;
    }
  }
  const double secs = seconds_since(t0);
  return {agree == static_cast<int>(suite.size()) && secs < kExhaustiveSeconds,
          std::to_string(agree) + "/" + std::to_string(suite.size()) + " agree" + first_bad +
              ", " + fmt("%.2f s", secs)};
}

// Minimum SA energy per suite model with at most 18 variables, as text.
std::string sanity_result(const std::vector<TinyCase>& suite, unsigned jobs) {
  std::ostringstream out;
  for (const TinyCase& c : suite) {
    if (c.model.num_vars() > kSanityMaxVars) continue;
    SolverOptions opts;
    opts.threads = jobs;
    const SampleSet s = solve_sa(c.model.matrix, default_schedule(c.model.matrix), kSanityReads,
                                 kSanitySeed, opts);
    out << c.inst.name << " " << c.model.num_vars();
    for (const Sample& r : s.reads) out << " " << r.energy;
    out << "\n";
  }
  return out.str();
}

// 4. SA reaches the enumerated ground-state energy.
Outcome solver_sanity(const std::vector<TinyCase>& suite) {
  const auto t0 = Clock::now();
  int models = 0;
  int hits = 0;
  for (const TinyCase& c : suite) {
    if (c.model.num_vars() > kSanityMaxVars) continue;
    ++models;
    const Coeff ground = testing::brute_force_min_energy(c.model.matrix);
    const SampleSet s = solve_sa(c.model.matrix, default_schedule(c.model.matrix), kSanityReads,
                                 kSanitySeed);
    if (s.lowest().energy == ground) ++hits;
  }
  const double secs = seconds_since(t0);
  return {models > 0 && hits == models && secs < kSanitySeconds,
          std::to_string(hits) + "/" + std::to_string(models) + " models at ground state, " +
              fmt("%.2f s", secs)};
}

// 5. Error-rate endpoints.
Outcome error_rate_fixture() {
  const auto a = error_rate(34, 27);
  const auto b = error_rate(32, 32);
  const bool ok = a && b && std::abs(*a - 25.9) <= kErrorRateTolerance &&
                  std::abs(*b - 0.0) <= kErrorRateTolerance;
  return {ok, "(34,27) -> " + (a ? fmt("%.1f", *a) : std::string("none")) + "%, (32,32) -> " +
                  (b ? fmt("%.1f", *b) : std::string("none")) + "%"};
}

struct SuiteFiles {
  std::string csv;
  std::string json;
  std::string svg;
};

SuiteFiles suite_files(const std::vector<BenchRecord>& records) {
  return {records_to_csv(records), records_to_json(records).dump(2) + "\n",
          correlation_svg(correlation_report(records))};
}

std::vector<Instance> protocol_instances() {
  Instance inst = generate_instance(kProtocolSeed, 20, 10, 10);
  return {inst};
}

SuiteOptions protocol_options(unsigned jobs) {
  SuiteOptions o;
  o.kind = ModelKind::simplified;
  o.num_reads = kProtocolReads;
  o.seed = kProtocolSeed;
  o.solver.threads = jobs;
  return o;
}

// 6. Protocol-scale run.
Outcome protocol_run(SuiteFiles& files) {
  const auto t0 = Clock::now();
  const auto records = run_suite(protocol_instances(), protocol_options(1));
  const double secs = seconds_since(t0);
  files = suite_files(records);
  const BenchRecord& r = records.front();
  return {secs < kProtocolSeconds && r.acceptance_rate >= kProtocolMinAcceptance,
          "acceptance " + fmt("%.1f%%", r.acceptance_rate) + ", best " +
              (r.best_value ? std::to_string(*r.best_value) : std::string("none")) + ", " +
              fmt("%.1f s", secs)};
}

std::vector<Instance> correlation_instances() {
  std::vector<Instance> out;
  for (int i = 0; i < kCorrelationInstances; ++i) {
    const int hw = (i * 8 + 4) / 9;  // spans 0..8
    out.push_back(generate_instance_with_high_width(100 + static_cast<std::uint64_t>(i), 20, 10,
                                                    10, hw));
  }
  return out;
}

SuiteOptions correlation_options(unsigned jobs) {
  SuiteOptions o;
  o.kind = ModelKind::simplified;
  o.num_reads = kCorrelationReads;
  o.seed = kCorrelationSeed;
  o.solver.threads = jobs;
  return o;
}

// 7. Acceptance rate falls with the number of high-width pieces.
Outcome correlation_study(SuiteFiles& files) {
  const auto t0 = Clock::now();
  const auto records = run_suite(correlation_instances(), correlation_options(1));
  files = suite_files(records);
  const CorrelationReport c = correlation_report(records);
  int lo = 1 << 30;
  int hi = -1;
  for (const BenchRecord& r : records) {
    lo = std::min(lo, r.high_width);
    hi = std::max(hi, r.high_width);
  }
  const bool ok = !c.degenerate && c.slope && *c.slope < 0.0 && lo == 0 && hi == 8;
  return {ok, "high-width " + std::to_string(lo) + ".." + std::to_string(hi) + ", slope " +
                  (c.slope ? fmt("%.3f", *c.slope) : std::string("none")) + ", " +
                  fmt("%.1f s", seconds_since(t0))};
}

// 8. Systematic single mutations of feasible encodings are all detected.
Outcome feasibility_detection() {
  Rng rng(derive_seed(8, 0));
  enum Kind { kDuplicate, kMissing, kWidth, kHeight, kKinds };
  const char* names[kKinds] = {"duplicate", "missing", "width", "height"};
  int made[kKinds] = {0, 0, 0, 0};
  int detected[kKinds] = {0, 0, 0, 0};
  const int per_kind = kMutations / kKinds;
  std::uint64_t seed = 5000;
  while (std::min({made[0], made[1], made[2], made[3]}) < per_kind) {
    const int k = 3 + static_cast<int>(seed % 6);
    const Instance inst = generate_instance(seed++, k, 6, 6);
    ModelConfig cfg = default_config(inst, ModelKind::full);
    cfg.steps_per_bin = 4;
    const QuboModel model = assemble(inst, cfg);
    const auto layout = testing::random_feasible_layout(rng, inst, cfg);
    if (!layout) continue;
    const Assignment base = encode(*layout, model, inst);
    const SpinLayout& L = model.layout;
    // Locate every placed piece.
    std::vector<std::pair<int, int>> where(static_cast<std::size_t>(k));
    for (int i = 0; i < L.num_bins(); ++i) {
      for (int j = 0; j < L.steps_per_bin(); ++j) {
        for (int id : layout->bins[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) {
          where[static_cast<std::size_t>(id - 1)] = {i, j};
        }
      }
    }
    const auto record = [&](Kind kind, const Assignment& x) {
      if (made[kind] >= per_kind) return;
      ++made[kind];
      if (!decode(x, model, inst).second.geometric.empty()) ++detected[kind];
    };
    const int p = static_cast<int>(uniform_int(rng, 0, k - 1));
    const auto [pi, pj] = where[static_cast<std::size_t>(p)];
    {
      const int i = static_cast<int>(uniform_int(rng, 0, L.num_bins() - 1));
      const int j = static_cast<int>(uniform_int(rng, 0, L.steps_per_bin() - 1));
      if (i != pi || j != pj) {
        Assignment x = base;
        x[L.s(i, j, p)] = 1;
        record(kDuplicate, x);
      }
    }
    {
      Assignment x = base;
      x[L.s(pi, pj, p)] = 0;
      record(kMissing, x);
    }
    // Move piece p to a step it overflows, by width or by bin height.
    for (int i = 0; i < L.num_bins(); ++i) {
      for (int j = 0; j < L.steps_per_bin(); ++j) {
        if (i == pi && j == pj) continue;
        Layout moved = *layout;
        auto& from = moved.bins[static_cast<std::size_t>(pi)][static_cast<std::size_t>(pj)];
        from.erase(std::find(from.begin(), from.end(), p + 1));
        moved.bins[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].push_back(p + 1);
        const auto& step = moved.bins[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        const bool too_wide = detail::step_width(inst, step) > inst.bin_w;
        const bool too_tall =
            detail::bin_height(inst, moved.bins[static_cast<std::size_t>(i)]) > inst.bin_h;
        if (too_wide == too_tall) continue;
        Assignment x = base;
        x[L.s(pi, pj, p)] = 0;
        x[L.s(i, j, p)] = 1;
        record(too_wide ? kWidth : kHeight, x);
      }
    }
  }
  int total = 0;
  int total_detected = 0;
  std::string detail;
  for (int t = 0; t < kKinds; ++t) {
    total += made[t];
    total_detected += detected[t];
    detail += std::string(t ? ", " : "") + names[t] + " " + std::to_string(detected[t]) + "/" +
              std::to_string(made[t]);
  }
  return {total >= kMutations && total_detected == total,
          std::to_string(total_detected) + "/" + std::to_string(total) + " detected (" + detail +
              ")"};
}

void save(const std::string& name, const std::string& content) {
  write_text_file((kOutDir / name).string(), content);
}

// 9. Repeated runs with the same seeds give byte-identical files for any
// number of worker threads.
Outcome determinism(const std::vector<TinyCase>& suite, const SuiteFiles& protocol,
                    const SuiteFiles& correlation) {
  const auto t0 = Clock::now();
  const unsigned jobs = parallel_jobs();
  const std::string sanity1 = sanity_result(suite, 1);
  save("sanity.txt", sanity1);
  save("protocol.csv", protocol.csv);
  save("protocol.json", protocol.json);
  save("correlation.csv", correlation.csv);
  save("correlation.json", correlation.json);
  save("correlation.svg", correlation.svg);

  int same = 0;
  int total = 0;
  const auto compare = [&](const std::string& a, const std::string& b) {
    ++total;
    if (a == b) ++same;
  };
  compare(sanity1, sanity_result(suite, jobs));
  const SuiteFiles p2 = suite_files(run_suite(protocol_instances(), protocol_options(jobs)));
  compare(protocol.csv, p2.csv);
  compare(protocol.json, p2.json);
  const SuiteFiles c2 = suite_files(run_suite(correlation_instances(), correlation_options(jobs)));
  compare(correlation.csv, c2.csv);
  compare(correlation.json, c2.json);
  compare(correlation.svg, c2.svg);
  return {same == total, std::to_string(same) + "/" + std::to_string(total) +
                             " files identical (jobs 1 vs " + std::to_string(jobs) + "), " +
                             fmt("%.1f s", seconds_since(t0))};
}

int run() {
  std::filesystem::create_directories(kOutDir);
  int failures = 0;
  const auto report = [&](int id, const char* title, const Outcome& o) {
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", id, title,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  };
  const auto guarded = [](const std::function<Outcome()>& f) {
    try {
      return f();
    } catch (const std::exception& e) {
      return Outcome{false, std::string("exception: ") + e.what()};
    }
  };
  const std::vector<TinyCase> suite = tiny_suite();
  SuiteFiles protocol;
  SuiteFiles correlation;
  report(1, "closed-form energy", guarded(closed_form_identity));
  report(2, "cut/energy agreement", guarded(cut_energy_agreement));
  report(3, "exhaustive ground state", guarded([&] { return exhaustive_ground_state(suite); }));
  report(4, "solver sanity", guarded([&] { return solver_sanity(suite); }));
  report(5, "error-rate fixture", guarded(error_rate_fixture));
  report(6, "protocol-scale run", guarded([&] { return protocol_run(protocol); }));
  report(7, "correlation study", guarded([&] { return correlation_study(correlation); }));
  report(8, "feasibility detection", guarded(feasibility_detection));
  report(9, "determinism",
         guarded([&] { return determinism(suite, protocol, correlation); }));
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace cutstock::acceptance

int main() { return cutstock::acceptance::run(); }
