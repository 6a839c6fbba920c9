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

// QUBO wire format:
//
//   num_vars num_terms offset
//   u v coeff              (num_terms lines, u <= v, sorted by (u, v))

#include <sstream>
#include <string>
#include <string_view>

#include "cutstock/errors.hpp"
#include "cutstock/qubo_model.hpp"

namespace cutstock {

inline std::string export_qubo(const QuboMatrix& q) {
  std::ostringstream out;
  out << q.num_vars() << ' ' << q.terms().size() << ' ' << q.offset() << '\n';
  for (const auto& [key, c] : q.terms()) {
    out << key.first << ' ' << key.second << ' ' << c << '\n';
  }
  return out.str();
}

inline QuboMatrix import_qubo(std::string_view text) {
  std::istringstream in{std::string(text)};
  long long num_vars = -1;
  long long num_terms = -1;
  Coeff offset = 0;
  if (!(in >> num_vars >> num_terms >> offset) || num_vars < 0 || num_terms < 0) {
    throw ParseError("QUBO header must be 'num_vars num_terms offset'");
  }
  QuboMatrix q(static_cast<std::size_t>(num_vars));
  q.add_offset(offset);
  for (long long t = 0; t < num_terms; ++t) {
    long long u = -1;
    long long v = -1;
    Coeff c = 0;
    if (!(in >> u >> v >> c)) {
      throw ParseError("QUBO term " + std::to_string(t + 1) + " is malformed or missing");
    }
    if (u < 0 || v < u || v >= num_vars) {
      throw ParseError("QUBO term " + std::to_string(t + 1) + " has invalid indices " +
                       std::to_string(u) + " " + std::to_string(v));
    }
    if (!q.insert_unique(static_cast<VarIndex>(u), static_cast<VarIndex>(v), c)) {
      throw ParseError("duplicate QUBO term " + std::to_string(u) + " " + std::to_string(v));
    }
  }
  std::string extra;
  if (in >> extra) throw ParseError("unexpected trailing data in QUBO file");
  return q;
}

}  // namespace cutstock
