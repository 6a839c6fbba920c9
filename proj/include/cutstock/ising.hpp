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

// Ising view of a QUBO. With x = (s + 1) / 2 and s in {-1, +1}:
//
//   E(s) = offset + sum_{i<j} J_ij s_i s_j - sum_i h_i s_i
//
// Fields, couplings and offset are stored multiplied by kScale = 4 so that
// every value is an exact integer for integer QUBO coefficients.

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cutstock/qubo_model.hpp"

namespace cutstock {

struct IsingModel {
  static constexpr Coeff kScale = 4;

  std::size_t num_spins = 0;
  std::vector<Coeff> fields;             // kScale * h_i
  std::map<std::pair<VarIndex, VarIndex>, Coeff> couplings;  // kScale * J_ij, i < j
  Coeff offset = 0;                      // kScale * constant
};

inline IsingModel to_ising(const QuboMatrix& q) {
  IsingModel m;
  m.num_spins = q.num_vars();
  m.fields.assign(q.num_vars(), 0);
  // 4E = 4*off + sum_u 2c_uu (1 + s_u) + sum_{u<v} c_uv (1 + s_u + s_v + s_u s_v)
  Coeff offset = IsingModel::kScale * q.offset();
  for (const auto& [key, c] : q.terms()) {
    const auto [u, v] = key;
    if (u == v) {
      offset += 2 * c;
      m.fields[u] -= 2 * c;
    } else {
      offset += c;
      m.fields[u] -= c;
      m.fields[v] -= c;
      m.couplings[{u, v}] += c;
    }
  }
  m.offset = offset;
  return m;
}

// Returns kScale * E(s).
inline Coeff ising_energy_scaled(const IsingModel& m, std::span<const std::int8_t> spins) {
  if (spins.size() != m.num_spins) throw std::invalid_argument("spin vector length mismatch");
  Coeff e = m.offset;
  for (std::size_t i = 0; i < m.num_spins; ++i) e -= m.fields[i] * spins[i];
  for (const auto& [key, j] : m.couplings) e += j * spins[key.first] * spins[key.second];
  return e;
}

inline double ising_energy(const IsingModel& m, std::span<const std::int8_t> spins) {
  return static_cast<double>(ising_energy_scaled(m, spins)) /
         static_cast<double>(IsingModel::kScale);
}

inline std::vector<std::int8_t> to_spins(std::span<const std::uint8_t> x) {
  std::vector<std::int8_t> s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = x[i] ? 1 : -1;
  return s;
}

}  // namespace cutstock
