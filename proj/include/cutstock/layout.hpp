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

// Step layouts: the classical view of a solution. A bin holds a stack of
// steps; each step is a single row of pieces whose height is the tallest
// piece in it. Cuts are counted directly from the layout:
//
//   vertical   = pieces in the step, minus one when the step fills Bin_W
//   horizontal = distinct piece heights in the step; in the full model one
//                is saved per bin whose step heights sum exactly to Bin_H

#include <algorithm>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cutstock/instance.hpp"
#include "cutstock/qubo_model.hpp"
#include "json.hpp"

namespace cutstock {

using Step = std::vector<int>;  // piece ids, ascending

struct Layout {
  std::vector<std::vector<Step>> bins;

  static Layout empty(int num_bins, int steps_per_bin) {
    Layout l;
    l.bins.assign(static_cast<std::size_t>(num_bins),
                  std::vector<Step>(static_cast<std::size_t>(steps_per_bin)));
    return l;
  }

  friend bool operator==(const Layout&, const Layout&) = default;
};

struct Violation {
  // Condition number of the violated placement rule (3: containment, 5: each
  // piece exactly once), or 0 for an auxiliary-spin inconsistency.
  int condition = 0;
  std::string tag;
  int bin = -1;
  int step = -1;
  int piece = -1;
  std::string description;
};

struct ViolationReport {
  std::vector<Violation> geometric;
  std::vector<Violation> auxiliary;

  // Feasibility is judged on geometric violations only.
  bool feasible() const { return geometric.empty(); }
  bool empty() const { return geometric.empty() && auxiliary.empty(); }
};

struct BinCuts {
  int horizontal = 0;
  int vertical = 0;
  friend bool operator==(const BinCuts&, const BinCuts&) = default;
};

struct CutReport {
  int horizontal = 0;
  int vertical = 0;
  int total = 0;
  std::vector<BinCuts> per_bin;
  friend bool operator==(const CutReport&, const CutReport&) = default;
};

namespace detail {

inline const Piece& piece_of(const Instance& inst, int id) {
  return inst.pieces[static_cast<std::size_t>(id - 1)];
}

inline int step_width(const Instance& inst, const Step& step) {
  int w = 0;
  for (int id : step) w += piece_of(inst, id).width;
  return w;
}

inline int step_height(const Instance& inst, const Step& step) {
  int h = 0;
  for (int id : step) h = std::max(h, piece_of(inst, id).height);
  return h;
}

inline int bin_height(const Instance& inst, const std::vector<Step>& bin) {
  int h = 0;
  for (const Step& s : bin) h += step_height(inst, s);
  return h;
}

inline int distinct_heights(const Instance& inst, const Step& step) {
  std::set<int> seen;
  for (int id : step) seen.insert(piece_of(inst, id).height);
  return static_cast<int>(seen.size());
}

}  // namespace detail

// Geometric checks: every piece exactly once, step widths within Bin_W and,
// for the full model, stacked step heights within Bin_H.
inline std::vector<Violation> check_layout(const Layout& layout, const Instance& inst,
                                           ModelKind kind) {
  std::vector<Violation> out;
  std::vector<int> count(inst.pieces.size(), 0);
  for (std::size_t i = 0; i < layout.bins.size(); ++i) {
    for (std::size_t j = 0; j < layout.bins[i].size(); ++j) {
      for (int id : layout.bins[i][j]) {
        if (id < 1 || id > inst.num_pieces()) {
          out.push_back({5, "unknown-piece", static_cast<int>(i), static_cast<int>(j), id,
                         "piece id " + std::to_string(id) + " does not exist"});
          continue;
        }
        ++count[static_cast<std::size_t>(id - 1)];
      }
    }
  }
  for (std::size_t k = 0; k < count.size(); ++k) {
    if (count[k] != 1) {
      out.push_back({5, "allocation", -1, -1, static_cast<int>(k) + 1,
                     "piece " + std::to_string(k + 1) + " allocated " +
                         std::to_string(count[k]) + " times"});
    }
  }
  for (std::size_t i = 0; i < layout.bins.size(); ++i) {
    int stacked = 0;
    for (std::size_t j = 0; j < layout.bins[i].size(); ++j) {
      const Step& step = layout.bins[i][j];
      int w = 0;
      int h = 0;
      for (int id : step) {
        if (id < 1 || id > inst.num_pieces()) continue;
        w += detail::piece_of(inst, id).width;
        h = std::max(h, detail::piece_of(inst, id).height);
      }
      stacked += h;
      if (w > inst.bin_w) {
        out.push_back({3, "width-overflow", static_cast<int>(i), static_cast<int>(j), -1,
                       "step width " + std::to_string(w) + " exceeds bin width " +
                           std::to_string(inst.bin_w)});
      }
    }
    if (kind == ModelKind::full && stacked > inst.bin_h) {
      out.push_back({3, "height-overflow", static_cast<int>(i), -1, -1,
                     "stacked height " + std::to_string(stacked) + " exceeds bin height " +
                         std::to_string(inst.bin_h)});
    }
  }
  return out;
}

// Reads the layout from the s spins and audits every family against it.
inline std::pair<Layout, ViolationReport> decode(std::span<const std::uint8_t> x,
                                                 const QuboModel& model,
                                                 const Instance& inst) {
  if (x.size() != model.num_vars()) {
    throw std::invalid_argument("assignment length " + std::to_string(x.size()) +
                                " != num_vars " + std::to_string(model.num_vars()));
  }
  const SpinLayout& L = model.layout;
  const auto& lengths = model.config.length_values;
  Layout layout = Layout::empty(L.num_bins(), L.steps_per_bin());
  for (int i = 0; i < L.num_bins(); ++i) {
    for (int j = 0; j < L.steps_per_bin(); ++j) {
      for (int k = 0; k < L.num_pieces(); ++k) {
        if (x[L.s(i, j, k)]) layout.bins[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].push_back(k + 1);
      }
    }
  }

  ViolationReport report;
  report.geometric = check_layout(layout, inst, model.config.kind);

  const auto aux = [&](const char* tag, int i, int j, std::string what) {
    report.auxiliary.push_back({0, tag, i, j, -1, std::move(what)});
  };
  // Returns the index of the single set spin in [first(0), first(count-1)], or
  // -1 if zero or several are set.
  const auto one_hot = [&](auto index_of, int count) {
    int found = -1;
    for (int v = 0; v < count; ++v) {
      if (!x[index_of(v)]) continue;
      if (found >= 0) return -2;
      found = v;
    }
    return found;
  };

  for (int i = 0; i < L.num_bins(); ++i) {
    int stacked = 0;
    for (int j = 0; j < L.steps_per_bin(); ++j) {
      const Step& step = layout.bins[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      const int width = detail::step_width(inst, step);
      const int height = detail::step_height(inst, step);
      stacked += height;

      const int sw = one_hot([&](int l) { return L.sw(i, j, l); }, inst.bin_w + 1);
      if (sw != width) {
        aux("aux-sw", i, j,
            "sw encodes " + (sw < 0 ? std::string("no single width") : std::to_string(sw)) +
                ", step width is " + std::to_string(width));
      }
      for (int n = 0; n < L.num_lengths(); ++n) {
        const int len = lengths[static_cast<std::size_t>(n)];
        const bool present = std::any_of(step.begin(), step.end(), [&](int id) {
          return detail::piece_of(inst, id).height == len;
        });
        if (static_cast<bool>(x[L.shc(i, j, n)]) != present) {
          aux("aux-shc", i, j,
              "shc for length " + std::to_string(len) + " is " +
                  std::to_string(x[L.shc(i, j, n)]) + ", expected " +
                  std::to_string(present ? 1 : 0));
        }
      }
      if (L.has_sh()) {
        const int sh = one_hot([&](int m) { return L.sh(i, j, m); }, inst.bin_h + 1);
        if (sh != height) {
          aux("aux-sh", i, j,
              "sh encodes " + (sh < 0 ? std::string("no single length") : std::to_string(sh)) +
                  ", longest piece is " + std::to_string(height));
        }
      }
    }
    if (L.has_sht() && model.config.kind == ModelKind::full) {
      const int sht = one_hot([&](int p) { return L.sht(i, p); }, inst.bin_h + 1);
      if (sht != stacked) {
        aux("aux-sht", i, -1,
            "sht encodes " + (sht < 0 ? std::string("no single height") : std::to_string(sht)) +
                ", stacked height is " + std::to_string(stacked));
      }
    }
  }
  return {std::move(layout), std::move(report)};
}

// Consistent assignment for a feasible layout. The layout may use fewer bins
// or steps than the model provides; missing ones are treated as empty.
inline Assignment encode(const Layout& layout, const QuboModel& model, const Instance& inst) {
  const SpinLayout& L = model.layout;
  if (static_cast<int>(layout.bins.size()) > L.num_bins()) {
    throw std::invalid_argument("layout uses more bins than the model provides");
  }
  for (const auto& bin : layout.bins) {
    if (static_cast<int>(bin.size()) > L.steps_per_bin()) {
      throw std::invalid_argument("layout uses more steps than the model provides");
    }
  }
  const auto problems = check_layout(layout, inst, model.config.kind);
  if (!problems.empty()) {
    throw std::invalid_argument("cannot encode infeasible layout: " + problems.front().description);
  }
  Assignment x(model.num_vars(), 0);
  const Step kEmpty;
  for (int i = 0; i < L.num_bins(); ++i) {
    int stacked = 0;
    for (int j = 0; j < L.steps_per_bin(); ++j) {
      const bool in_layout = i < static_cast<int>(layout.bins.size()) &&
                             j < static_cast<int>(layout.bins[static_cast<std::size_t>(i)].size());
      const Step& step =
          in_layout ? layout.bins[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] : kEmpty;
      for (int id : step) x[L.s(i, j, id - 1)] = 1;
      x[L.sw(i, j, detail::step_width(inst, step))] = 1;
      for (int id : step) {
        const int pos = detail::length_position(model.config, detail::piece_of(inst, id).height);
        x[L.shc(i, j, pos)] = 1;
      }
      const int height = detail::step_height(inst, step);
      stacked += height;
      if (L.has_sh()) x[L.sh(i, j, height)] = 1;
    }
    if (L.has_sht() && stacked <= inst.bin_h) x[L.sht(i, stacked)] = 1;
  }
  return x;
}

inline CutReport count_cuts(const Layout& layout, const Instance& inst, ModelKind kind) {
  const auto problems = check_layout(layout, inst, kind);
  if (!problems.empty()) {
    throw std::invalid_argument("cannot count cuts of infeasible layout: " +
                                problems.front().description);
  }
  CutReport report;
  for (const auto& bin : layout.bins) {
    BinCuts cuts;
    bool nonempty = false;
    for (const Step& step : bin) {
      if (step.empty()) continue;
      nonempty = true;
      const bool fills_width = detail::step_width(inst, step) == inst.bin_w;
      cuts.vertical += static_cast<int>(step.size()) - (fills_width ? 1 : 0);
      cuts.horizontal += detail::distinct_heights(inst, step);
    }
    if (kind == ModelKind::full && nonempty && detail::bin_height(inst, bin) == inst.bin_h) {
      cuts.horizontal -= 1;
    }
    report.horizontal += cuts.horizontal;
    report.vertical += cuts.vertical;
    report.per_bin.push_back(cuts);
  }
  report.total = report.horizontal + report.vertical;
  return report;
}

// Checks that the Hcut and Wcut Hamiltonians, evaluated on encode(layout) and
// divided by sigma, reproduce the classical horizontal and vertical counts.
inline bool cut_energy_crosscheck(const Layout& layout, const QuboModel& model,
                                  const Instance& inst) {
  const QuboModel hcut = component_model(inst, model.config, Hamiltonian::hcut);
  const QuboModel wcut = component_model(inst, model.config, Hamiltonian::wcut);
  const Assignment x = encode(layout, model, inst);
  const CutReport cuts = count_cuts(layout, inst, model.config.kind);
  const Coeff sigma = model.config.params.sigma;
  const Coeff eh = energy(hcut, x);
  const Coeff ew = energy(wcut, x);
  return eh % sigma == 0 && ew % sigma == 0 && eh / sigma == cuts.horizontal &&
         ew / sigma == cuts.vertical;
}

// Canonical form: pieces ascending within steps. Bin and step positions are
// kept since they map to spin indices.
inline Layout canonical(Layout layout) {
  for (auto& bin : layout.bins) {
    for (Step& step : bin) std::sort(step.begin(), step.end());
  }
  return layout;
}

inline nlohmann::ordered_json cut_report_to_json(const CutReport& cuts) {
  nlohmann::ordered_json j;
  j["horizontal"] = cuts.horizontal;
  j["vertical"] = cuts.vertical;
  j["total"] = cuts.total;
  auto per_bin = nlohmann::ordered_json::array();
  for (const BinCuts& b : cuts.per_bin) {
    per_bin.push_back({{"horizontal", b.horizontal}, {"vertical", b.vertical}});
  }
  j["per_bin"] = std::move(per_bin);
  return j;
}

inline nlohmann::ordered_json violation_report_to_json(const ViolationReport& report) {
  const auto list = [](const std::vector<Violation>& vs) {
    auto arr = nlohmann::ordered_json::array();
    for (const Violation& v : vs) {
      nlohmann::ordered_json j;
      j["condition"] = v.condition;
      j["tag"] = v.tag;
      j["bin"] = v.bin;
      j["step"] = v.step;
      j["piece"] = v.piece;
      j["description"] = v.description;
      arr.push_back(std::move(j));
    }
    return arr;
  };
  nlohmann::ordered_json doc;
  doc["feasible"] = report.feasible();
  doc["geometric"] = list(report.geometric);
  doc["auxiliary"] = list(report.auxiliary);
  return doc;
}

// Layout document. Steps carry their piece ids plus derived geometry
// (y offset of the step, x offset of each piece) for reporting.
inline nlohmann::ordered_json layout_to_json(const Layout& layout, const Instance& inst,
                                             const CutReport* cuts = nullptr) {
  nlohmann::ordered_json doc;
  doc["instance"] = inst.name;
  doc["bin_w"] = inst.bin_w;
  doc["bin_h"] = inst.bin_h;
  auto bins = nlohmann::ordered_json::array();
  for (const auto& bin : layout.bins) {
    auto steps = nlohmann::ordered_json::array();
    int y = 0;
    for (const Step& step : bin) {
      nlohmann::ordered_json s;
      s["pieces"] = step;
      std::vector<int> xs;
      int x = 0;
      for (int id : step) {
        xs.push_back(x);
        x += detail::piece_of(inst, id).width;
      }
      const int h = detail::step_height(inst, step);
      s["x"] = xs;
      s["y"] = y;
      s["width"] = x;
      s["height"] = h;
      y += h;
      steps.push_back(std::move(s));
    }
    bins.push_back({{"steps", std::move(steps)}});
  }
  doc["bins"] = std::move(bins);
  if (cuts != nullptr) doc["cuts"] = cut_report_to_json(*cuts);
  return doc;
}

}  // namespace cutstock
