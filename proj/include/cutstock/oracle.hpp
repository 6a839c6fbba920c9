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

// Exact minimum number of cuts for small instances by depth-first
// branch-and-bound.
//
// Pieces are taken in decreasing-area order and each is put either into an
// existing step or into a new step (in an existing bin or the next unopened
// bin). New steps and bins are only ever appended, so every set partition of
// the pieces into steps is generated once; identical pieces are additionally
// forced into non-decreasing step positions.
//
// The simplified model has no horizontal omission and no height limit, so
// its objective is a sum over steps and bins play no role: the search only
// partitions pieces into at most num_bins * steps_per_bin width-feasible
// steps.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "cutstock/instance.hpp"
#include "cutstock/layout.hpp"
#include "cutstock/qubo_model.hpp"

namespace cutstock {

struct OptimalResult {
  std::optional<int> optimum;  // empty if no feasible layout fits the config
  Layout witness;
  std::uint64_t nodes_explored = 0;
  bool proven = false;  // search completed within the node budget
};

struct ExactOptions {
  std::uint64_t node_budget = 100'000'000;
  int max_pieces = 12;
};

namespace detail {

struct SearchStep {
  int bin = 0;
  int width = 0;
  int height = 0;
  std::vector<int> pieces;
  std::vector<int> heights;  // distinct, unsorted
};

struct SearchState {
  ModelKind kind = ModelKind::simplified;
  int bin_w = 0;
  int bin_h = 0;
  int max_bins = 0;
  int steps_per_bin = 0;
  std::vector<SearchStep> steps;
  std::vector<int> bin_stacked;  // per opened bin (full model)
  std::vector<int> bin_steps;

  int max_steps() const { return max_bins * steps_per_bin; }
};

// Admissible bound on the final cost of any completion.
//  - an existing step ends with n + d - f >= n + d - 1, or n + d when its gap
//    can no longer be closed by the narrowest remaining piece;
//  - every remaining piece adds at least one (to n of its step);
//  - each bin can save at most one horizontal cut, and only once.
inline int state_lower_bound(const SearchState& st, int remaining, int min_remaining_width) {
  int bound = remaining;
  for (const SearchStep& s : st.steps) {
    const int gap = st.bin_w - s.width;
    const bool may_fill = gap == 0 || (remaining > 0 && min_remaining_width <= gap);
    bound += static_cast<int>(s.pieces.size()) + static_cast<int>(s.heights.size()) -
             (may_fill ? 1 : 0);
  }
  if (st.kind == ModelKind::full) {
    int full_now = 0;
    int open_not_full = 0;
    for (std::size_t b = 0; b < st.bin_stacked.size(); ++b) {
      if (st.bin_stacked[b] == st.bin_h) {
        ++full_now;
      } else {
        ++open_not_full;
      }
    }
    const int unopened = st.max_bins - static_cast<int>(st.bin_stacked.size());
    bound -= full_now + std::min(remaining, open_not_full + unopened);
  }
  return std::max(bound, 0);
}

inline int state_cost(const SearchState& st) {
  int cost = 0;
  for (const SearchStep& s : st.steps) {
    cost += static_cast<int>(s.pieces.size()) + static_cast<int>(s.heights.size()) -
            (s.width == st.bin_w ? 1 : 0);
  }
  if (st.kind == ModelKind::full) {
    for (int stacked : st.bin_stacked) cost -= stacked == st.bin_h ? 1 : 0;
  }
  return cost;
}

inline void add_height(SearchStep& s, int h) {
  if (std::find(s.heights.begin(), s.heights.end(), h) == s.heights.end()) s.heights.push_back(h);
}

inline SearchState state_from_layout(const Layout& partial, const Instance& inst,
                                     ModelKind kind, const ModelConfig& cfg) {
  SearchState st;
  st.kind = kind;
  st.bin_w = inst.bin_w;
  st.bin_h = inst.bin_h;
  st.max_bins = cfg.num_bins;
  st.steps_per_bin = cfg.steps_per_bin;
  for (std::size_t i = 0; i < partial.bins.size(); ++i) {
    int stacked = 0;
    int used = 0;
    for (const Step& step : partial.bins[i]) {
      if (step.empty()) continue;
      SearchStep s;
      s.bin = static_cast<int>(i);
      for (int id : step) {
        const Piece& p = piece_of(inst, id);
        s.pieces.push_back(id);
        s.width += p.width;
        s.height = std::max(s.height, p.height);
        add_height(s, p.height);
      }
      stacked += s.height;
      ++used;
      st.steps.push_back(std::move(s));
    }
    if (kind == ModelKind::full && used > 0) {
      st.bin_stacked.push_back(stacked);
      st.bin_steps.push_back(used);
    }
  }
  return st;
}

class BranchAndBound {
 public:
  BranchAndBound(const Instance& inst, ModelKind kind, const ModelConfig& cfg,
                 std::uint64_t budget)
      : inst_(inst), cfg_(cfg), budget_(budget) {
    state_.kind = kind;
    state_.bin_w = inst.bin_w;
    state_.bin_h = inst.bin_h;
    state_.max_bins = cfg.num_bins;
    state_.steps_per_bin = cfg.steps_per_bin;
    order_.resize(inst.pieces.size());
    std::iota(order_.begin(), order_.end(), 1);
    std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
      const Piece& pa = piece_of(inst, a);
      const Piece& pb = piece_of(inst, b);
      if (pa.area() != pb.area()) return pa.area() > pb.area();
      if (pa.height != pb.height) return pa.height > pb.height;
      return pa.width > pb.width;
    });
    suffix_min_width_.assign(order_.size() + 1, std::numeric_limits<int>::max());
    for (std::size_t t = order_.size(); t-- > 0;) {
      suffix_min_width_[t] =
          std::min(suffix_min_width_[t + 1], piece_of(inst, order_[t]).width);
    }
    step_of_.assign(order_.size(), -1);
  }

  OptimalResult run() {
    search(0);
    OptimalResult r;
    r.nodes_explored = nodes_;
    r.proven = !exhausted_;
    if (best_ < std::numeric_limits<int>::max()) {
      r.optimum = best_;
      r.witness = best_layout_;
    }
    return r;
  }

 private:
  bool same_piece(std::size_t t) const {
    if (t == 0) return false;
    const Piece& a = piece_of(inst_, order_[t]);
    const Piece& b = piece_of(inst_, order_[t - 1]);
    return a.height == b.height && a.width == b.width;
  }

  void record_leaf() {
    const int cost = state_cost(state_);
    if (cost >= best_) return;
    best_ = cost;
    best_layout_ = Layout::empty(cfg_.num_bins, cfg_.steps_per_bin);
    std::vector<int> used(static_cast<std::size_t>(cfg_.num_bins), 0);
    for (std::size_t t = 0; t < state_.steps.size(); ++t) {
      const SearchStep& s = state_.steps[t];
      int bin = s.bin;
      int pos = 0;
      if (state_.kind == ModelKind::simplified) {
        bin = static_cast<int>(t) / cfg_.steps_per_bin;
        pos = static_cast<int>(t) % cfg_.steps_per_bin;
      } else {
        pos = used[static_cast<std::size_t>(bin)]++;
      }
      Step step = s.pieces;
      std::sort(step.begin(), step.end());
      best_layout_.bins[static_cast<std::size_t>(bin)][static_cast<std::size_t>(pos)] = std::move(step);
    }
  }

  void search(std::size_t t) {
    if (exhausted_) return;
    if (++nodes_ > budget_) {
      exhausted_ = true;
      return;
    }
    const int remaining = static_cast<int>(order_.size() - t);
    if (state_lower_bound(state_, remaining, suffix_min_width_[t]) >= best_) return;
    if (t == order_.size()) {
      record_leaf();
      return;
    }
    const int id = order_[t];
    const Piece& p = piece_of(inst_, id);
    const int first_step = same_piece(t) ? step_of_[t - 1] : 0;
    const bool full = state_.kind == ModelKind::full;

    // Existing steps.
    for (int si = first_step; si < static_cast<int>(state_.steps.size()); ++si) {
      SearchStep& s = state_.steps[static_cast<std::size_t>(si)];
      if (s.width + p.width > inst_.bin_w) continue;
      const int grow = std::max(0, p.height - s.height);
      if (full && state_.bin_stacked[static_cast<std::size_t>(s.bin)] + grow > inst_.bin_h) continue;
      const int old_height = s.height;
      const std::size_t old_distinct = s.heights.size();
      s.pieces.push_back(id);
      s.width += p.width;
      s.height = std::max(s.height, p.height);
      add_height(s, p.height);
      if (full) state_.bin_stacked[static_cast<std::size_t>(s.bin)] += grow;
      step_of_[t] = si;
      search(t + 1);
      SearchStep& back = state_.steps[static_cast<std::size_t>(si)];
      back.pieces.pop_back();
      back.width -= p.width;
      back.height = old_height;
      back.heights.resize(old_distinct);
      if (full) state_.bin_stacked[static_cast<std::size_t>(back.bin)] -= grow;
      if (exhausted_) return;
    }

    // New step.
    const auto open_step = [&](int bin) {
      SearchStep s;
      s.bin = bin;
      s.width = p.width;
      s.height = p.height;
      s.pieces.push_back(id);
      s.heights.push_back(p.height);
      state_.steps.push_back(std::move(s));
      step_of_[t] = static_cast<int>(state_.steps.size()) - 1;
      search(t + 1);
      state_.steps.pop_back();
    };
    if (!full) {
      if (static_cast<int>(state_.steps.size()) < state_.max_steps()) open_step(-1);
      return;
    }
    if (p.height > inst_.bin_h) return;
    for (std::size_t b = 0; b < state_.bin_stacked.size() && !exhausted_; ++b) {
      if (state_.bin_steps[b] >= cfg_.steps_per_bin) continue;
      if (state_.bin_stacked[b] + p.height > inst_.bin_h) continue;
      state_.bin_stacked[b] += p.height;
      ++state_.bin_steps[b];
      open_step(static_cast<int>(b));
      state_.bin_stacked[b] -= p.height;
      --state_.bin_steps[b];
    }
    if (!exhausted_ && static_cast<int>(state_.bin_stacked.size()) < cfg_.num_bins) {
      state_.bin_stacked.push_back(p.height);
      state_.bin_steps.push_back(1);
      open_step(static_cast<int>(state_.bin_stacked.size()) - 1);
      state_.bin_stacked.pop_back();
      state_.bin_steps.pop_back();
    }
  }

  const Instance& inst_;
  const ModelConfig& cfg_;
  std::uint64_t budget_;
  SearchState state_;
  std::vector<int> order_;
  std::vector<int> suffix_min_width_;
  std::vector<int> step_of_;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
  int best_ = std::numeric_limits<int>::max();
  Layout best_layout_;
};

}  // namespace detail

// Admissible lower bound on the cut count of any feasible completion of a
// partial layout with the given pieces still unplaced.
inline int lower_bound(const Layout& partial, std::span<const int> remaining,
                       const Instance& inst, ModelKind kind, const ModelConfig& cfg) {
  const detail::SearchState st = detail::state_from_layout(partial, inst, kind, cfg);
  int min_width = std::numeric_limits<int>::max();
  for (int id : remaining) min_width = std::min(min_width, detail::piece_of(inst, id).width);
  return detail::state_lower_bound(st, static_cast<int>(remaining.size()), min_width);
}

inline OptimalResult solve_exact(const Instance& inst, ModelKind kind, const ModelConfig& cfg,
                                 const ExactOptions& options = {}) {
  validate_instance(inst);
  if (inst.num_pieces() > options.max_pieces) {
    throw std::invalid_argument("solve_exact: " + std::to_string(inst.num_pieces()) +
                                " pieces exceeds the cap of " +
                                std::to_string(options.max_pieces));
  }
  if (cfg.num_bins < 1 || cfg.steps_per_bin < 1) {
    throw std::invalid_argument("solve_exact: num_bins and steps_per_bin must be >= 1");
  }
  detail::BranchAndBound search(inst, kind, cfg, options.node_budget);
  return search.run();
}

}  // namespace cutstock
