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

// Multi-read QUBO minimizers: single-flip Metropolis simulated annealing and
// steepest-descent tabu search. Both keep integer local fields
//
//   f_u = c_uu + sum_{v != u} c_uv x_v,   delta(flip u) = (1 - 2 x_u) f_u
//
// and update neighbors on every accepted flip. Each read draws its random
// stream from (seed, read_index), so results do not depend on the number of
// worker threads.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <vector>

#include "cutstock/qubo_model.hpp"
#include "cutstock/rng.hpp"

namespace cutstock {

struct AnnealSchedule {
  std::size_t sweeps = 1000;
  double beta_start = 0.1;
  double beta_end = 10.0;

  // Geometric interpolation between beta_start and beta_end.
  double beta_at(std::size_t sweep) const {
    if (sweeps <= 1) return beta_end;
    const double t = static_cast<double>(sweep) / static_cast<double>(sweeps - 1);
    return beta_start * std::pow(beta_end / beta_start, t);
  }
};

struct Sample {
  Assignment assignment;
  Coeff energy = 0;
  std::size_t read_index = 0;
};

struct SampleSet {
  std::vector<Sample> reads;  // ordered by read_index
  std::size_t num_reads = 0;
  std::uint64_t seed = 0;
  std::chrono::duration<double> wall_time{0};

  const Sample& lowest() const {
    if (reads.empty()) throw std::logic_error("empty sample set");
    return *std::min_element(reads.begin(), reads.end(), [](const Sample& a, const Sample& b) {
      return a.energy < b.energy;
    });
  }
};

struct SolverOptions {
  unsigned threads = 1;
  // Called after every sweep (SA) or iteration (tabu) with the current and
  // best energies of the read. Invoked from worker threads.
  std::function<void(std::size_t read, std::size_t step, Coeff current, Coeff best)> observer;
};

// Rule: beta_start = 1 / max|c|, beta_end = 10 / min nonzero |c|, 1000 sweeps.
inline AnnealSchedule default_schedule(const QuboMatrix& q) {
  if (q.empty()) throw std::invalid_argument("default_schedule: model has no terms");
  Coeff largest = 0;
  Coeff smallest = std::numeric_limits<Coeff>::max();
  for (const auto& [key, c] : q.terms()) {
    const Coeff a = c < 0 ? -c : c;
    if (a == 0) continue;
    largest = std::max(largest, a);
    smallest = std::min(smallest, a);
  }
  AnnealSchedule s;
  s.sweeps = 1000;
  s.beta_start = std::clamp(1.0 / static_cast<double>(largest), 1e-12, 1e6);
  s.beta_end = std::clamp(10.0 / static_cast<double>(smallest), 1e-12, 1e6);
  if (!(s.beta_start < s.beta_end)) s.beta_end = s.beta_start * 10.0;
  return s;
}

namespace detail {

// Compressed adjacency of the off-diagonal couplings.
struct Adjacency {
  std::vector<Coeff> linear;
  std::vector<std::size_t> start;
  std::vector<VarIndex> neighbor;
  std::vector<Coeff> weight;

  explicit Adjacency(const QuboMatrix& q) : linear(q.num_vars(), 0), start(q.num_vars() + 1, 0) {
    for (const auto& [key, c] : q.terms()) {
      if (key.first == key.second) {
        linear[key.first] += c;
      } else {
        ++start[key.first + 1];
        ++start[key.second + 1];
      }
    }
    std::partial_sum(start.begin(), start.end(), start.begin());
    neighbor.resize(start.back());
    weight.resize(start.back());
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (const auto& [key, c] : q.terms()) {
      if (key.first == key.second) continue;
      neighbor[fill[key.first]] = key.second;
      weight[fill[key.first]++] = c;
      neighbor[fill[key.second]] = key.first;
      weight[fill[key.second]++] = c;
    }
  }

  std::size_t size() const { return linear.size(); }
};

// Current assignment with maintained local fields and energy.
struct FlipState {
  const Adjacency* adj;
  Assignment x;
  std::vector<Coeff> field;
  Coeff energy;

  FlipState(const Adjacency& a, Assignment start, Coeff offset)
      : adj(&a), x(std::move(start)), field(a.linear), energy(offset) {
    for (std::size_t u = 0; u < x.size(); ++u) {
      if (!x[u]) continue;
      energy += a.linear[u];
      for (std::size_t e = a.start[u]; e < a.start[u + 1]; ++e) {
        field[a.neighbor[e]] += a.weight[e];
        // Each pair is seen from both ends; count it once.
        if (a.neighbor[e] > u && x[a.neighbor[e]]) energy += a.weight[e];
      }
    }
  }

  Coeff delta(std::size_t u) const { return x[u] ? -field[u] : field[u]; }

  void flip(std::size_t u) {
    energy += delta(u);
    x[u] ^= 1;
    const Coeff sign = x[u] ? 1 : -1;
    for (std::size_t e = adj->start[u]; e < adj->start[u + 1]; ++e) {
      field[adj->neighbor[e]] += sign * adj->weight[e];
    }
  }
};

inline Assignment random_assignment(Rng& rng, std::size_t n) {
  Assignment x(n);
  std::uint64_t bits = 0;
  for (std::size_t u = 0; u < n; ++u) {
    if (u % 64 == 0) bits = rng();
    x[u] = static_cast<std::uint8_t>(bits & 1U);
    bits >>= 1;
  }
  return x;
}

template <class ReadFn>
SampleSet run_reads(const QuboMatrix& q, std::size_t num_reads, std::uint64_t seed,
                    unsigned threads, ReadFn&& read_fn) {
  const auto t0 = std::chrono::steady_clock::now();
  SampleSet out;
  out.num_reads = num_reads;
  out.seed = seed;
  out.reads.resize(num_reads);
  const unsigned workers =
      static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(threads, num_reads)));
  const auto work = [&](unsigned w) {
    for (std::size_t r = w; r < num_reads; r += workers) {
      Sample& s = out.reads[r];
      s.read_index = r;
      s.assignment = read_fn(r);
      s.energy = energy(q, s.assignment);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  out.wall_time = std::chrono::steady_clock::now() - t0;
  return out;
}

}  // namespace detail

inline SampleSet solve_sa(const QuboMatrix& q, const AnnealSchedule& schedule,
                          std::size_t num_reads, std::uint64_t seed,
                          const SolverOptions& options = {}) {
  if (num_reads < 1) throw std::invalid_argument("solve_sa: num_reads must be >= 1");
  if (q.num_vars() == 0) throw std::invalid_argument("solve_sa: model has no variables");
  if (schedule.sweeps < 1 || !(schedule.beta_start > 0) ||
      !(schedule.beta_start < schedule.beta_end)) {
    throw std::invalid_argument("solve_sa: invalid schedule");
  }
  const detail::Adjacency adj(q);
  const std::size_t n = adj.size();
  return detail::run_reads(q, num_reads, seed, options.threads, [&](std::size_t read) {
    Rng rng = make_stream(seed, read);
    detail::FlipState state(adj, detail::random_assignment(rng, n), q.offset());
    Assignment best = state.x;
    Coeff best_energy = state.energy;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t sweep = 0; sweep < schedule.sweeps; ++sweep) {
      for (std::size_t a = n - 1; a > 0; --a) {
        std::swap(order[a], order[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(a)))]);
      }
      const double beta = schedule.beta_at(sweep);
      for (std::size_t u : order) {
        const Coeff d = state.delta(u);
        if (d <= 0) {
          state.flip(u);
          continue;
        }
        const double exponent = beta * static_cast<double>(d);
        if (exponent > 50.0) continue;
        if (uniform_real(rng) < std::exp(-exponent)) state.flip(u);
      }
      if (state.energy < best_energy) {
        best_energy = state.energy;
        best = state.x;
      }
      if (options.observer) options.observer(read, sweep, state.energy, best_energy);
    }
    return best;
  });
}

struct TabuParams {
  std::size_t max_iters = 5000;
  std::size_t tenure = 10;
};

// One read per restart. Each restart starts from a random assignment and
// takes the best non-tabu single flip (or a tabu flip that beats the
// restart's incumbent). With tenure 0 the search stops at the first local
// minimum, i.e. plain greedy descent.
inline SampleSet solve_tabu(const QuboMatrix& q, std::size_t max_iters, std::size_t tenure,
                            std::size_t num_restarts, std::uint64_t seed,
                            const SolverOptions& options = {}) {
  if (num_restarts < 1) throw std::invalid_argument("solve_tabu: num_restarts must be >= 1");
  if (q.num_vars() == 0) throw std::invalid_argument("solve_tabu: model has no variables");
  const detail::Adjacency adj(q);
  const std::size_t n = adj.size();
  return detail::run_reads(q, num_restarts, seed, options.threads, [&](std::size_t read) {
    Rng rng = make_stream(seed, read);
    detail::FlipState state(adj, detail::random_assignment(rng, n), q.offset());
    Assignment best = state.x;
    Coeff best_energy = state.energy;
    std::vector<std::size_t> tabu_until(n, 0);
    for (std::size_t iter = 1; iter <= max_iters; ++iter) {
      std::size_t chosen = n;
      Coeff chosen_delta = std::numeric_limits<Coeff>::max();
      std::size_t ties = 0;
      for (std::size_t u = 0; u < n; ++u) {
        const Coeff d = state.delta(u);
        const bool tabu = tabu_until[u] >= iter;
        if (tabu && state.energy + d >= best_energy) continue;
        if (d < chosen_delta) {
          chosen = u;
          chosen_delta = d;
          ties = 1;
        } else if (d == chosen_delta) {
          // Reservoir sampling over equally good moves.
          ++ties;
          if (uniform_int(rng, 1, static_cast<std::int64_t>(ties)) == 1) chosen = u;
        }
      }
      if (chosen == n) break;
      if (tenure == 0 && chosen_delta >= 0) break;
      state.flip(chosen);
      tabu_until[chosen] = iter + tenure;
      if (state.energy < best_energy) {
        best_energy = state.energy;
        best = state.x;
      }
      if (options.observer) options.observer(read, iter, state.energy, best_energy);
    }
    return best;
  });
}

}  // namespace cutstock
