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

// Problem instances for the two-dimensional cutting stock problem with setup
// cost: a rectangular base material (bin) and a list of rectangular pieces.
//
// Canonical text format:
//
//   # name: example          (optional; any other '#' line is a comment)
//   K Bin_W Bin_H
//   h_1 w_1
//   ...
//   h_K w_K
//
// Pieces are never rotated, so height and width are kept distinct.

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cutstock/errors.hpp"
#include "cutstock/rng.hpp"

namespace cutstock {

struct Piece {
  int id = 0;  // 1-based
  int height = 0;
  int width = 0;

  int area() const { return height * width; }
  friend bool operator==(const Piece&, const Piece&) = default;
};

struct Instance {
  int bin_h = 0;
  int bin_w = 0;
  std::vector<Piece> pieces;
  std::string name;

  int num_pieces() const { return static_cast<int>(pieces.size()); }

  int max_height() const {
    int best = 0;
    for (const Piece& p : pieces) best = std::max(best, p.height);
    return best;
  }

  long long total_area() const {
    long long total = 0;
    for (const Piece& p : pieces) total += p.area();
    return total;
  }

  // Sorted distinct piece heights.
  std::vector<int> distinct_heights() const {
    std::vector<int> out;
    out.reserve(pieces.size());
    for (const Piece& p : pieces) out.push_back(p.height);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  friend bool operator==(const Instance&, const Instance&) = default;
};

// Throws ValidationError if the instance breaks an invariant. Piece heights
// above bin_h are allowed here; the full model rejects them at build time.
inline void validate_instance(const Instance& inst) {
  if (inst.bin_w < 1 || inst.bin_h < 1) {
    throw ValidationError("bin dimensions must be positive, got " +
                          std::to_string(inst.bin_w) + "x" +
                          std::to_string(inst.bin_h));
  }
  if (inst.pieces.empty()) throw ValidationError("instance has no pieces");
  for (std::size_t k = 0; k < inst.pieces.size(); ++k) {
    const Piece& p = inst.pieces[k];
    const std::string where = "piece " + std::to_string(k + 1);
    if (p.id != static_cast<int>(k) + 1) {
      throw ValidationError(where + " has id " + std::to_string(p.id));
    }
    if (p.height < 1 || p.width < 1) {
      throw ValidationError(where + " has a nonpositive dimension");
    }
    if (p.width > inst.bin_w) {
      throw ValidationError(where + " width " + std::to_string(p.width) +
                            " exceeds bin width " + std::to_string(inst.bin_w));
    }
  }
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Parses exactly `count` integers from a line; anything else is an error.
inline std::vector<long long> parse_ints(std::string_view line, std::size_t count,
                                         int line_no) {
  std::istringstream in{std::string(line)};
  std::vector<long long> values;
  std::string token;
  while (in >> token) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) {
      throw ParseError("line " + std::to_string(line_no) + ": '" + token +
                       "' is not an integer");
    }
    values.push_back(v);
  }
  if (values.size() != count) {
    throw ParseError("line " + std::to_string(line_no) + ": expected " +
                     std::to_string(count) + " integers, found " +
                     std::to_string(values.size()));
  }
  return values;
}

inline int to_int(long long v, int line_no) {
  if (v < -2147483647LL || v > 2147483647LL) {
    throw ParseError("line " + std::to_string(line_no) + ": value out of range");
  }
  return static_cast<int>(v);
}

}  // namespace detail

inline Instance parse_instance(std::string_view text, std::string name = {}) {
  Instance inst;
  inst.name = std::move(name);
  bool have_header = false;
  long long expected = 0;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = detail::trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      constexpr std::string_view kNameTag = "name:";
      const std::string_view body = detail::trim(line.substr(1));
      if (!have_header && inst.name.empty() &&
          body.substr(0, kNameTag.size()) == kNameTag) {
        inst.name = std::string(detail::trim(body.substr(kNameTag.size())));
      }
      continue;
    }
    if (!have_header) {
      const auto v = detail::parse_ints(line, 3, line_no);
      if (v[0] < 1) throw ParseError("line " + std::to_string(line_no) + ": K must be >= 1");
      expected = v[0];
      inst.bin_w = detail::to_int(v[1], line_no);
      inst.bin_h = detail::to_int(v[2], line_no);
      have_header = true;
      continue;
    }
    if (static_cast<long long>(inst.pieces.size()) == expected) {
      throw ParseError("line " + std::to_string(line_no) + ": more than " +
                       std::to_string(expected) + " piece lines");
    }
    const auto v = detail::parse_ints(line, 2, line_no);
    const int id = static_cast<int>(inst.pieces.size()) + 1;
    inst.pieces.push_back(
        Piece{id, detail::to_int(v[0], line_no), detail::to_int(v[1], line_no)});
  }
  if (!have_header) throw ParseError("missing header line 'K Bin_W Bin_H'");
  if (static_cast<long long>(inst.pieces.size()) != expected) {
    throw ParseError("header declares " + std::to_string(expected) +
                     " pieces, found " + std::to_string(inst.pieces.size()));
  }
  validate_instance(inst);
  return inst;
}

inline std::string serialize_instance(const Instance& inst) {
  std::string out;
  if (!inst.name.empty()) out += "# name: " + inst.name + "\n";
  out += std::to_string(inst.pieces.size()) + " " + std::to_string(inst.bin_w) +
         " " + std::to_string(inst.bin_h) + "\n";
  for (const Piece& p : inst.pieces) {
    out += std::to_string(p.height) + " " + std::to_string(p.width) + "\n";
  }
  return out;
}

// Seeded random instance: widths uniform in [1, bin_w], heights uniform in
// [1, bin_h].
inline Instance generate_instance(std::uint64_t seed, int k, int bin_w, int bin_h) {
  if (k < 1) throw std::invalid_argument("generate_instance: k must be >= 1");
  if (bin_w < 1 || bin_h < 1) {
    throw std::invalid_argument("generate_instance: bin dimensions must be positive");
  }
  Rng rng = make_stream(seed, 0);
  Instance inst;
  inst.bin_w = bin_w;
  inst.bin_h = bin_h;
  inst.name = "gen-s" + std::to_string(seed) + "-k" + std::to_string(k);
  for (int id = 1; id <= k; ++id) {
    const int w = static_cast<int>(uniform_int(rng, 1, bin_w));
    const int h = static_cast<int>(uniform_int(rng, 1, bin_h));
    inst.pieces.push_back(Piece{id, h, w});
  }
  return inst;
}

// Number of pieces whose width strictly exceeds half the bin width.
inline int high_width_count(const Instance& inst) {
  return static_cast<int>(std::count_if(
      inst.pieces.begin(), inst.pieces.end(),
      [&](const Piece& p) { return 2 * p.width > inst.bin_w; }));
}

// Like generate_instance, but with exactly `high_width` pieces wider than
// bin_w / 2 (placed at random positions). Used for high-width correlation
// studies, which need control over that count.
inline Instance generate_instance_with_high_width(std::uint64_t seed, int k, int bin_w,
                                                  int bin_h, int high_width) {
  if (k < 1) throw std::invalid_argument("generate_instance: k must be >= 1");
  if (bin_w < 1 || bin_h < 1) {
    throw std::invalid_argument("generate_instance: bin dimensions must be positive");
  }
  if (high_width < 0 || high_width > k) {
    throw std::invalid_argument("generate_instance: high_width must be in [0, k]");
  }
  const int narrow_max = bin_w / 2;  // widths <= bin_w/2 are not high-width
  if (high_width < k && narrow_max < 1) {
    throw std::invalid_argument("generate_instance: bin too narrow for low-width pieces");
  }
  Rng rng = make_stream(seed, 1);
  std::vector<bool> is_high(static_cast<std::size_t>(k), false);
  std::fill(is_high.begin(), is_high.begin() + high_width, true);
  for (int a = k - 1; a > 0; --a) {
    const auto b = static_cast<std::size_t>(uniform_int(rng, 0, a));
    const bool tmp = is_high[static_cast<std::size_t>(a)];
    is_high[static_cast<std::size_t>(a)] = is_high[b];
    is_high[b] = tmp;
  }
  Instance inst;
  inst.bin_w = bin_w;
  inst.bin_h = bin_h;
  inst.name = "gen-s" + std::to_string(seed) + "-k" + std::to_string(k) + "-hw" +
              std::to_string(high_width);
  for (int id = 1; id <= k; ++id) {
    const int w = is_high[static_cast<std::size_t>(id - 1)]
                      ? static_cast<int>(uniform_int(rng, narrow_max + 1, bin_w))
                      : static_cast<int>(uniform_int(rng, 1, narrow_max));
    const int h = static_cast<int>(uniform_int(rng, 1, bin_h));
    inst.pieces.push_back(Piece{id, h, w});
  }
  return inst;
}

}  // namespace cutstock
