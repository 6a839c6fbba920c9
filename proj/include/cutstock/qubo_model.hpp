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

// QUBO formulation of the two-dimensional cutting stock problem that
// minimizes the number of cuts.
//
// Five spin families (all binary, 0-based indices below):
//   s[i][j][k]    piece k is placed in step j of bin i
//   sw[i][j][l]   total width of step j of bin i is l          (l = 0..Bin_W)
//   shc[i][j][n]  a piece of length n is placed in step j      (n in lengths)
//   sh[i][j][m]   longest piece in step j has length m         (m = 0..Bin_H)
//   sht[i][p]     sum of step heights of bin i is p            (p = 0..Bin_H)
//
// The full model uses all five families and seven Hamiltonians. The
// simplified model treats the bin height as unbounded and keeps only s, sw
// and shc with Hcut + Wcut + A + W + Htype.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cutstock/errors.hpp"
#include "cutstock/instance.hpp"

namespace cutstock {

using VarIndex = std::uint32_t;
using Coeff = std::int64_t;
using Assignment = std::vector<std::uint8_t>;

enum class ModelKind { full, simplified };

inline const char* to_string(ModelKind kind) {
  return kind == ModelKind::full ? "full" : "simplified";
}

inline ModelKind parse_model_kind(const std::string& text) {
  if (text == "full") return ModelKind::full;
  if (text == "simplified") return ModelKind::simplified;
  throw std::invalid_argument("unknown model kind '" + text + "'");
}

// Hamiltonian weights. The first five defaults are the tuned values used for
// the 10x10 / K=20 benchmark; lambda_h, mu_h, lambda_l and sigma_l only
// matter for the full model and mirror their horizontal counterparts
// (untuned).
struct PenaltyParams {
  Coeff sigma = 1000;
  Coeff sigma_t = 5000;
  Coeff lambda_a = 500000;
  Coeff lambda_w = 500000;
  Coeff mu_w = 10000;
  Coeff lambda_h = 500000;
  Coeff mu_h = 10000;
  Coeff lambda_l = 500000;
  Coeff sigma_l = 1000;

  friend bool operator==(const PenaltyParams&, const PenaltyParams&) = default;
};

inline bool uses_untuned_full_defaults(const PenaltyParams& p) {
  const PenaltyParams d;
  return p.lambda_h == d.lambda_h || p.mu_h == d.mu_h || p.lambda_l == d.lambda_l ||
         p.sigma_l == d.sigma_l;
}

inline void validate_params(const PenaltyParams& p) {
  const Coeff all[] = {p.sigma,  p.sigma_t,  p.lambda_a, p.lambda_w, p.mu_w,
                       p.lambda_h, p.mu_h, p.lambda_l, p.sigma_l};
  for (Coeff c : all) {
    if (c < 0) throw ValidationError("penalty parameters must be nonnegative");
  }
  if (p.sigma < 1) throw ValidationError("sigma must be >= 1");
}

struct ModelConfig {
  int num_bins = 1;        // I
  int steps_per_bin = 1;   // J_max
  std::vector<int> length_values;  // admissible piece lengths n, ascending
  ModelKind kind = ModelKind::simplified;
  PenaltyParams params;
  // Simplified model only: also instantiate sht spins and the top-edge
  // omission term of Hcut. Off by default since the bin height is unbounded.
  bool keep_sht = false;

  bool has_sh() const { return kind == ModelKind::full; }
  bool has_sht() const { return kind == ModelKind::full || keep_sht; }
};

// Default configuration: I = ceil(total area / bin area) + 1, J_max = Bin_H,
// lengths trimmed to the heights present in the instance unless `trim` is
// false (then 1..Bin_H for the full model, 1..max height for simplified).
inline ModelConfig default_config(const Instance& inst, ModelKind kind,
                                  const PenaltyParams& params = {}, bool trim = true) {
  ModelConfig cfg;
  const long long bin_area = static_cast<long long>(inst.bin_w) * inst.bin_h;
  cfg.num_bins = static_cast<int>((inst.total_area() + bin_area - 1) / bin_area) + 1;
  cfg.steps_per_bin = inst.bin_h;
  cfg.kind = kind;
  cfg.params = params;
  if (trim) {
    cfg.length_values = inst.distinct_heights();
  } else {
    const int top = kind == ModelKind::full ? inst.bin_h : inst.max_height();
    for (int n = 1; n <= top; ++n) cfg.length_values.push_back(n);
  }
  return cfg;
}

inline void validate_config(const Instance& inst, const ModelConfig& cfg) {
  validate_instance(inst);
  validate_params(cfg.params);
  if (cfg.num_bins < 1) throw BuildError("num_bins must be >= 1");
  if (cfg.steps_per_bin < 1) throw BuildError("steps_per_bin must be >= 1");
  if (cfg.length_values.empty()) throw BuildError("length_values is empty");
  if (!std::is_sorted(cfg.length_values.begin(), cfg.length_values.end()) ||
      std::adjacent_find(cfg.length_values.begin(), cfg.length_values.end()) !=
          cfg.length_values.end()) {
    throw BuildError("length_values must be strictly ascending");
  }
  const int top = cfg.kind == ModelKind::full ? inst.bin_h : inst.max_height();
  if (cfg.length_values.front() < 1 || cfg.length_values.back() > top) {
    throw BuildError("length_values must lie in 1.." + std::to_string(top));
  }
  if (cfg.kind == ModelKind::full && inst.max_height() > inst.bin_h) {
    throw BuildError("full model: piece height " + std::to_string(inst.max_height()) +
                     " exceeds bin height " + std::to_string(inst.bin_h));
  }
  for (const Piece& p : inst.pieces) {
    if (!std::binary_search(cfg.length_values.begin(), cfg.length_values.end(),
                            p.height)) {
      throw BuildError("piece " + std::to_string(p.id) + " height " +
                       std::to_string(p.height) + " missing from length_values");
    }
  }
}

enum class SpinFamily { s, sw, shc, sh, sht };

inline const char* to_string(SpinFamily f) {
  switch (f) {
    case SpinFamily::s: return "s";
    case SpinFamily::sw: return "sw";
    case SpinFamily::shc: return "shc";
    case SpinFamily::sh: return "sh";
    case SpinFamily::sht: return "sht";
  }
  return "?";
}

// Flat variable indexing. Families are laid out contiguously in the order
// s, sw, shc, sh, sht; each family is row-major in (i, j, last subscript).
class SpinLayout {
 public:
  struct VariableRef {
    SpinFamily family;
    int bin;
    int step;   // -1 for sht
    int value;  // k (0-based), l, length position, m or p
  };

  SpinLayout() = default;

  SpinLayout(int bins, int steps, int pieces, int bin_w, int bin_h, int num_lengths,
             bool with_sh, bool with_sht)
      : bins_(bins), steps_(steps), pieces_(pieces), bin_w_(bin_w), bin_h_(bin_h),
        num_lengths_(num_lengths), with_sh_(with_sh), with_sht_(with_sht) {
    const std::uint64_t slots = checked_mul(bins, steps);
    std::uint64_t next = 0;
    s_base_ = next;
    next = checked_add(next, checked_mul(slots, pieces));
    sw_base_ = next;
    next = checked_add(next, checked_mul(slots, static_cast<std::uint64_t>(bin_w) + 1));
    shc_base_ = next;
    next = checked_add(next, checked_mul(slots, num_lengths));
    sh_base_ = next;
    if (with_sh) next = checked_add(next, checked_mul(slots, static_cast<std::uint64_t>(bin_h) + 1));
    sht_base_ = next;
    if (with_sht) {
      next = checked_add(next, checked_mul(bins, static_cast<std::uint64_t>(bin_h) + 1));
    }
    if (next > std::numeric_limits<VarIndex>::max()) {
      throw BuildError("model has too many variables (" + std::to_string(next) + ")");
    }
    total_ = next;
  }

  static SpinLayout make(const Instance& inst, const ModelConfig& cfg) {
    return SpinLayout(cfg.num_bins, cfg.steps_per_bin, inst.num_pieces(), inst.bin_w,
                      inst.bin_h, static_cast<int>(cfg.length_values.size()),
                      cfg.has_sh(), cfg.has_sht());
  }

  VarIndex s(int i, int j, int k) const {
    return at(s_base_, slot(i, j) * pieces_ + k);
  }
  VarIndex sw(int i, int j, int l) const {
    return at(sw_base_, slot(i, j) * (bin_w_ + 1) + l);
  }
  VarIndex shc(int i, int j, int length_pos) const {
    return at(shc_base_, slot(i, j) * num_lengths_ + length_pos);
  }
  VarIndex sh(int i, int j, int m) const {
    return at(sh_base_, slot(i, j) * (bin_h_ + 1) + m);
  }
  VarIndex sht(int i, int p) const {
    return at(sht_base_, static_cast<std::uint64_t>(i) * (bin_h_ + 1) + p);
  }

  VariableRef describe(VarIndex v) const {
    const std::uint64_t x = v;
    const auto split = [&](std::uint64_t base, std::uint64_t width, SpinFamily f) {
      const std::uint64_t r = x - base;
      const std::uint64_t sl = r / width;
      return VariableRef{f, static_cast<int>(sl / steps_), static_cast<int>(sl % steps_),
                         static_cast<int>(r % width)};
    };
    if (x >= total_) throw std::out_of_range("variable index out of range");
    if (x < sw_base_) return split(s_base_, pieces_, SpinFamily::s);
    if (x < shc_base_) return split(sw_base_, bin_w_ + 1, SpinFamily::sw);
    if (x < sh_base_) return split(shc_base_, num_lengths_, SpinFamily::shc);
    if (x < sht_base_) return split(sh_base_, bin_h_ + 1, SpinFamily::sh);
    const std::uint64_t r = x - sht_base_;
    return VariableRef{SpinFamily::sht, static_cast<int>(r / (bin_h_ + 1)), -1,
                       static_cast<int>(r % (bin_h_ + 1))};
  }

  std::size_t family_size(SpinFamily f) const {
    switch (f) {
      case SpinFamily::s: return sw_base_ - s_base_;
      case SpinFamily::sw: return shc_base_ - sw_base_;
      case SpinFamily::shc: return sh_base_ - shc_base_;
      case SpinFamily::sh: return sht_base_ - sh_base_;
      case SpinFamily::sht: return total_ - sht_base_;
    }
    return 0;
  }

  std::size_t total_vars() const { return total_; }
  int num_bins() const { return bins_; }
  int steps_per_bin() const { return steps_; }
  int num_pieces() const { return pieces_; }
  int bin_w() const { return bin_w_; }
  int bin_h() const { return bin_h_; }
  int num_lengths() const { return num_lengths_; }
  bool has_sh() const { return with_sh_; }
  bool has_sht() const { return with_sht_; }

 private:
  static std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
      throw BuildError("variable index arithmetic overflow");
    }
    return a * b;
  }
  static std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    if (a + b < a) throw BuildError("variable index arithmetic overflow");
    return a + b;
  }
  std::uint64_t slot(int i, int j) const {
    return static_cast<std::uint64_t>(i) * steps_ + j;
  }
  static VarIndex at(std::uint64_t base, std::uint64_t offset) {
    return static_cast<VarIndex>(base + offset);
  }

  int bins_ = 0;
  int steps_ = 0;
  int pieces_ = 0;
  int bin_w_ = 0;
  int bin_h_ = 0;
  int num_lengths_ = 0;
  bool with_sh_ = false;
  bool with_sht_ = false;
  std::uint64_t s_base_ = 0;
  std::uint64_t sw_base_ = 0;
  std::uint64_t shc_base_ = 0;
  std::uint64_t sh_base_ = 0;
  std::uint64_t sht_base_ = 0;
  std::uint64_t total_ = 0;
};

// Sparse upper-triangular QUBO: energy(x) = offset + sum_{u<=v} c_uv x_u x_v.
// Keys with u == v hold linear coefficients.
class QuboMatrix {
 public:
  using Key = std::pair<VarIndex, VarIndex>;
  using TermMap = std::map<Key, Coeff>;

  QuboMatrix() = default;
  explicit QuboMatrix(std::size_t num_vars) : num_vars_(num_vars) {}

  void add(VarIndex u, VarIndex v, Coeff c) {
    if (u > v) std::swap(u, v);
    if (v >= num_vars_) throw std::out_of_range("QUBO term index out of range");
    if (c != 0) terms_[{u, v}] += c;
  }
  void add_linear(VarIndex u, Coeff c) { add(u, u, c); }
  void add_offset(Coeff c) { offset_ += c; }

  // Inserts a coefficient for a key that must not already exist.
  bool insert_unique(VarIndex u, VarIndex v, Coeff c) {
    if (u > v) std::swap(u, v);
    if (v >= num_vars_) throw std::out_of_range("QUBO term index out of range");
    return terms_.emplace(Key{u, v}, c).second;
  }

  void prune_zeros() { std::erase_if(terms_, [](const auto& kv) { return kv.second == 0; }); }

  Coeff coefficient(VarIndex u, VarIndex v) const {
    if (u > v) std::swap(u, v);
    const auto it = terms_.find({u, v});
    return it == terms_.end() ? 0 : it->second;
  }

  void merge(const QuboMatrix& other) {
    if (other.num_vars_ != num_vars_) throw std::invalid_argument("QUBO size mismatch");
    for (const auto& [key, c] : other.terms_) add(key.first, key.second, c);
    offset_ += other.offset_;
  }

  std::size_t num_vars() const { return num_vars_; }
  const TermMap& terms() const { return terms_; }
  Coeff offset() const { return offset_; }
  bool empty() const { return terms_.empty(); }

  friend bool operator==(const QuboMatrix&, const QuboMatrix&) = default;

 private:
  std::size_t num_vars_ = 0;
  TermMap terms_;
  Coeff offset_ = 0;
};

inline Coeff energy(const QuboMatrix& q, std::span<const std::uint8_t> x) {
  if (x.size() != q.num_vars()) {
    throw std::invalid_argument("assignment length " + std::to_string(x.size()) +
                                " != num_vars " + std::to_string(q.num_vars()));
  }
  Coeff e = q.offset();
  for (const auto& [key, c] : q.terms()) {
    if (x[key.first] && x[key.second]) e += c;
  }
  return e;
}

// (constant + sum_u a_u x_u); used to expand squared penalties.
struct LinearForm {
  Coeff constant = 0;
  std::vector<std::pair<VarIndex, Coeff>> terms;

  void add(VarIndex u, Coeff a) {
    if (a != 0) terms.emplace_back(u, a);
  }
};

// Adds weight * form^2 using x^2 = x.
inline void add_weighted_square(QuboMatrix& q, Coeff weight, LinearForm form) {
  if (weight == 0) return;
  auto& t = form.terms;
  std::sort(t.begin(), t.end());
  std::size_t out = 0;
  for (std::size_t a = 0; a < t.size(); ++a) {
    if (out > 0 && t[out - 1].first == t[a].first) {
      t[out - 1].second += t[a].second;
    } else {
      t[out++] = t[a];
    }
  }
  t.resize(out);
  const Coeff c0 = form.constant;
  q.add_offset(weight * c0 * c0);
  for (std::size_t a = 0; a < t.size(); ++a) {
    const auto [u, au] = t[a];
    q.add_linear(u, weight * (au * au + 2 * c0 * au));
    for (std::size_t b = a + 1; b < t.size(); ++b) {
      q.add(u, t[b].first, 2 * weight * au * t[b].second);
    }
  }
}

struct QuboModel {
  QuboMatrix matrix;
  SpinLayout layout;
  ModelConfig config;

  std::size_t num_vars() const { return matrix.num_vars(); }
};

inline Coeff energy(const QuboModel& model, std::span<const std::uint8_t> x) {
  return energy(model.matrix, x);
}

// Model with a validated layout and no terms; the builders below add to it.
inline QuboModel empty_model(const Instance& inst, const ModelConfig& cfg) {
  validate_config(inst, cfg);
  QuboModel model;
  model.layout = SpinLayout::make(inst, cfg);
  model.matrix = QuboMatrix(model.layout.total_vars());
  model.config = cfg;
  return model;
}

namespace detail {

inline int length_position(const ModelConfig& cfg, int length) {
  const auto it =
      std::lower_bound(cfg.length_values.begin(), cfg.length_values.end(), length);
  if (it == cfg.length_values.end() || *it != length) return -1;
  return static_cast<int>(it - cfg.length_values.begin());
}

}  // namespace detail

// Horizontal cuts: sigma per (step, length type), minus one per bin whose
// step heights sum to Bin_H (only when sht spins exist).
inline void build_h_hcut(QuboModel& model, const Instance& inst) {
  const auto& L = model.layout;
  const Coeff sigma = model.config.params.sigma;
  for (int i = 0; i < L.num_bins(); ++i) {
    for (int j = 0; j < L.steps_per_bin(); ++j) {
      for (int n = 0; n < L.num_lengths(); ++n) model.matrix.add_linear(L.shc(i, j, n), sigma);
    }
    if (L.has_sht()) {
      model.matrix.add_linear(L.sht(i, inst.bin_h), -sigma);
      model.matrix.add(L.sht(i, inst.bin_h), L.sht(i, 0), sigma);
    }
  }
}

// Vertical cuts: sigma per placed piece, minus one per step whose width sum is
// exactly Bin_W.
inline void build_h_wcut(QuboModel& model, const Instance& inst) {
  const auto& L = model.layout;
  const Coeff sigma = model.config.params.sigma;
  for (int i = 0; i < L.num_bins(); ++i) {
    for (int j = 0; j < L.steps_per_bin(); ++j) {
      for (int k = 0; k < L.num_pieces(); ++k) model.matrix.add_linear(L.s(i, j, k), sigma);
      model.matrix.add_linear(L.sw(i, j, inst.bin_w), -sigma);
      model.matrix.add(L.sw(i, j, inst.bin_w), L.sw(i, j, 0), sigma);
    }
  }
}

// Each piece placed exactly once.
inline void build_h_a(QuboModel& model, const Instance&) {
  const auto& L = model.layout;
  for (int k = 0; k < L.num_pieces(); ++k) {
    LinearForm form;
    form.constant = -1;
    for (int i = 0; i < L.num_bins(); ++i) {
      for (int j = 0; j < L.steps_per_bin(); ++j) form.add(L.s(i, j, k), 1);
    }
    add_weighted_square(model.matrix, model.config.params.lambda_a, std::move(form));
  }
}

// Vertical containment (full model): sht one-hot per bin, and its index equal
// to the sum of the per-step longest lengths.
inline void build_h_h(QuboModel& model, const Instance& inst) {
  if (model.config.kind != ModelKind::full) {
    throw BuildError("H_H requires the full model");
  }
  const auto& L = model.layout;
  const auto& p = model.config.params;
  for (int i = 0; i < L.num_bins(); ++i) {
    LinearForm onehot;
    onehot.constant = 1;
    LinearForm balance;
    for (int h = 0; h <= inst.bin_h; ++h) {
      onehot.add(L.sht(i, h), -1);
      balance.add(L.sht(i, h), h);
    }
    for (int j = 0; j < L.steps_per_bin(); ++j) {
      for (int m = 0; m <= inst.bin_h; ++m) balance.add(L.sh(i, j, m), -m);
    }
    add_weighted_square(model.matrix, p.lambda_h, std::move(onehot));
    add_weighted_square(model.matrix, p.mu_h, std::move(balance));
  }
}

// Horizontal containment: sw one-hot per step, and its index equal to the
// total width placed in the step.
inline void build_h_w(QuboModel& model, const Instance& inst) {
  const auto& L = model.layout;
  const auto& p = model.config.params;
  for (int i = 0; i < L.num_bins(); ++i) {
    for (int j = 0; j < L.steps_per_bin(); ++j) {
      LinearForm onehot;
      onehot.constant = 1;
      LinearForm balance;
      for (int l = 0; l <= inst.bin_w; ++l) {
        onehot.add(L.sw(i, j, l), -1);
        balance.add(L.sw(i, j, l), l);
      }
      for (int k = 0; k < L.num_pieces(); ++k) {
        balance.add(L.s(i, j, k), -inst.pieces[static_cast<std::size_t>(k)].width);
      }
      add_weighted_square(model.matrix, p.lambda_w, std::move(onehot));
      add_weighted_square(model.matrix, p.mu_w, std::move(balance));
    }
  }
}

// Length-type indicator: -sigma_t (1 - shc_n)(1 - 2 sum_{h_k = n} s_k).
inline void build_h_htype(QuboModel& model, const Instance& inst) {
  const auto& L = model.layout;
  const auto& lengths = model.config.length_values;
  const Coeff st = model.config.params.sigma_t;
  for (int i = 0; i < L.num_bins(); ++i) {
    for (int j = 0; j < L.steps_per_bin(); ++j) {
      for (int n = 0; n < L.num_lengths(); ++n) {
        const VarIndex c = L.shc(i, j, n);
        model.matrix.add_offset(-st);
        model.matrix.add_linear(c, st);
        for (int k = 0; k < L.num_pieces(); ++k) {
          if (inst.pieces[static_cast<std::size_t>(k)].height != lengths[static_cast<std::size_t>(n)]) {
            continue;
          }
          model.matrix.add_linear(L.s(i, j, k), 2 * st);
          model.matrix.add(L.s(i, j, k), c, -2 * st);
        }
      }
    }
  }
}

// Longest-length indicator (full model): sh one-hot per step, rewarded by
// n * shc_n * sh_n so the one-hot settles on the largest present length.
inline void build_h_hlongest(QuboModel& model, const Instance& inst) {
  if (model.config.kind != ModelKind::full) {
    throw BuildError("H_Hlongest requires the full model");
  }
  const auto& L = model.layout;
  const auto& p = model.config.params;
  const auto& lengths = model.config.length_values;
  for (int i = 0; i < L.num_bins(); ++i) {
    for (int j = 0; j < L.steps_per_bin(); ++j) {
      LinearForm onehot;
      onehot.constant = 1;
      for (int m = 0; m <= inst.bin_h; ++m) onehot.add(L.sh(i, j, m), -1);
      add_weighted_square(model.matrix, p.lambda_l, std::move(onehot));
      for (int n = 0; n < L.num_lengths(); ++n) {
        const int len = lengths[static_cast<std::size_t>(n)];
        model.matrix.add(L.shc(i, j, n), L.sh(i, j, len), -p.sigma_l * len);
      }
    }
  }
}

enum class Hamiltonian { hcut, wcut, a, h, w, hlongest, htype };

inline void build_component(QuboModel& model, const Instance& inst, Hamiltonian h) {
  switch (h) {
    case Hamiltonian::hcut: build_h_hcut(model, inst); break;
    case Hamiltonian::wcut: build_h_wcut(model, inst); break;
    case Hamiltonian::a: build_h_a(model, inst); break;
    case Hamiltonian::h: build_h_h(model, inst); break;
    case Hamiltonian::w: build_h_w(model, inst); break;
    case Hamiltonian::hlongest: build_h_hlongest(model, inst); break;
    case Hamiltonian::htype: build_h_htype(model, inst); break;
  }
  model.matrix.prune_zeros();
}

// Model holding a single Hamiltonian; used to inspect individual terms.
inline QuboModel component_model(const Instance& inst, const ModelConfig& cfg,
                                 Hamiltonian h) {
  QuboModel model = empty_model(inst, cfg);
  build_component(model, inst, h);
  return model;
}

inline std::vector<Hamiltonian> hamiltonians_for(ModelKind kind) {
  if (kind == ModelKind::full) {
    return {Hamiltonian::hcut, Hamiltonian::wcut, Hamiltonian::a,       Hamiltonian::h,
            Hamiltonian::w,    Hamiltonian::hlongest, Hamiltonian::htype};
  }
  return {Hamiltonian::hcut, Hamiltonian::wcut, Hamiltonian::a, Hamiltonian::w,
          Hamiltonian::htype};
}

inline QuboModel assemble(const Instance& inst, const ModelConfig& cfg) {
  QuboModel model = empty_model(inst, cfg);
  for (Hamiltonian h : hamiltonians_for(cfg.kind)) build_component(model, inst, h);
  return model;
}

}  // namespace cutstock
