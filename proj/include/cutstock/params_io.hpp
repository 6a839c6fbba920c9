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

// Penalty parameter files: one "key=value" per line, '#' starts a comment.
// Keys: sigma, sigma_t, lambda_a, lambda_w, mu_w, lambda_h, mu_h, lambda_l,
// sigma_l. Missing keys keep their defaults.

#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include "cutstock/errors.hpp"
#include "cutstock/instance.hpp"
#include "cutstock/qubo_model.hpp"

namespace cutstock {

struct ParsedParams {
  PenaltyParams params;
  std::set<std::string> keys;  // keys present in the file
};

inline ParsedParams parse_params(std::string_view text) {
  ParsedParams out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("params line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string_view value = detail::trim(line.substr(eq + 1));
    Coeff* slot = nullptr;
    PenaltyParams& p = out.params;
    if (key == "sigma") slot = &p.sigma;
    else if (key == "sigma_t") slot = &p.sigma_t;
    else if (key == "lambda_a") slot = &p.lambda_a;
    else if (key == "lambda_w") slot = &p.lambda_w;
    else if (key == "mu_w") slot = &p.mu_w;
    else if (key == "lambda_h") slot = &p.lambda_h;
    else if (key == "mu_h") slot = &p.mu_h;
    else if (key == "lambda_l") slot = &p.lambda_l;
    else if (key == "sigma_l") slot = &p.sigma_l;
    else throw ParseError("params line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (!out.keys.insert(key).second) {
      throw ParseError("params line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    *slot = detail::parse_ints(value, 1, line_no).front();
  }
  validate_params(out.params);
  return out;
}

inline std::string serialize_params(const PenaltyParams& p) {
  std::ostringstream out;
  out << "sigma=" << p.sigma << "\nsigma_t=" << p.sigma_t << "\nlambda_a=" << p.lambda_a
      << "\nlambda_w=" << p.lambda_w << "\nmu_w=" << p.mu_w << "\nlambda_h=" << p.lambda_h
      << "\nmu_h=" << p.mu_h << "\nlambda_l=" << p.lambda_l << "\nsigma_l=" << p.sigma_l
      << "\n";
  return out.str();
}

}  // namespace cutstock
