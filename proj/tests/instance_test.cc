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

#include "cutstock/instance.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "gtest/gtest.h"

namespace cutstock {
namespace {

std::string Table2Text() {
  std::string text = "# benchmark-sized instance\n20 10 10\n";
  for (int k = 0; k < 20; ++k) {
    text += std::to_string(1 + k % 10) + " " + std::to_string(1 + (k * 3) % 10) + "\n";
  }
  return text;
}

TEST(ParseInstanceTest, BenchmarkHeader) {
  const Instance inst = parse_instance(Table2Text());
  EXPECT_EQ(inst.num_pieces(), 20);
  EXPECT_EQ(inst.bin_w, 10);
  EXPECT_EQ(inst.bin_h, 10);
  for (int k = 0; k < 20; ++k) EXPECT_EQ(inst.pieces[k].id, k + 1);
}

TEST(ParseInstanceTest, HeightComesFirst) {
  const Instance inst = parse_instance("2 10 8\n3 7\n8 1\n");
  EXPECT_EQ(inst.pieces[0], (Piece{1, 3, 7}));
  EXPECT_EQ(inst.pieces[1], (Piece{2, 8, 1}));
}

TEST(ParseInstanceTest, IdentitySizedPiece) {
  const Instance inst = parse_instance("1 5 5\n5 5\n");
  ASSERT_EQ(inst.num_pieces(), 1);
  EXPECT_EQ(inst.pieces[0].width, inst.bin_w);
  EXPECT_EQ(inst.pieces[0].height, inst.bin_h);
}

TEST(ParseInstanceTest, WidthBeyondBinIsValidationError) {
  EXPECT_THROW(parse_instance("1 10 10\n3 11\n"), ValidationError);
}

TEST(ParseInstanceTest, NonpositiveDimensionIsValidationError) {
  EXPECT_THROW(parse_instance("1 10 10\n0 3\n"), ValidationError);
  EXPECT_THROW(parse_instance("1 0 10\n1 1\n"), ValidationError);
}

TEST(ParseInstanceTest, TallPieceAcceptedAtParseTime) {
  const Instance inst = parse_instance("1 10 4\n9 2\n");
  EXPECT_EQ(inst.pieces[0].height, 9);
}

TEST(ParseInstanceTest, MalformedInputIsParseError) {
  EXPECT_THROW(parse_instance(""), ParseError);
  EXPECT_THROW(parse_instance("# only comments\n"), ParseError);
  EXPECT_THROW(parse_instance("2 10 10\n1 1\n"), ParseError);          // too few
  EXPECT_THROW(parse_instance("1 10 10\n1 1\n2 2\n"), ParseError);     // too many
  EXPECT_THROW(parse_instance("1 10\n1 1\n"), ParseError);             // short header
  EXPECT_THROW(parse_instance("1 10 10\n1 x\n"), ParseError);
  EXPECT_THROW(parse_instance("1 10 10\n1 2 3\n"), ParseError);
  EXPECT_THROW(parse_instance("0 10 10\n"), ParseError);
}

TEST(ParseInstanceTest, CommentsAndNameTag) {
  const Instance inst = parse_instance("# name: demo\n# other\n\n1 4 4\n# mid\n2 3\n");
  EXPECT_EQ(inst.name, "demo");
  EXPECT_EQ(inst.num_pieces(), 1);
}

TEST(SerializeInstanceTest, ExactFormat) {
  Instance inst;
  inst.bin_w = 10;
  inst.bin_h = 8;
  inst.pieces = {{1, 3, 4}, {2, 5, 10}};
  EXPECT_EQ(serialize_instance(inst), "2 10 8\n3 4\n5 10\n");
  inst.name = "x";
  EXPECT_EQ(serialize_instance(inst), "# name: x\n2 10 8\n3 4\n5 10\n");
}

TEST(SerializeInstanceTest, RoundTripOnGeneratedInstances) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int k = 1 + static_cast<int>(seed % 23);
    const Instance inst = generate_instance(seed, k, 1 + static_cast<int>(seed % 12),
                                            1 + static_cast<int>(seed % 7));
    EXPECT_EQ(parse_instance(serialize_instance(inst)), inst) << "seed " << seed;
  }
}

TEST(GenerateInstanceTest, Deterministic) {
  EXPECT_EQ(generate_instance(7, 20, 10, 10), generate_instance(7, 20, 10, 10));
  EXPECT_NE(generate_instance(7, 20, 10, 10), generate_instance(8, 20, 10, 10));
}

TEST(GenerateInstanceTest, DimensionsWithinBounds) {
  const Instance inst = generate_instance(7, 20, 10, 10);
  ASSERT_EQ(inst.num_pieces(), 20);
  for (const Piece& p : inst.pieces) {
    EXPECT_GE(p.width, 1);
    EXPECT_LE(p.width, 10);
    EXPECT_GE(p.height, 1);
    EXPECT_LE(p.height, 10);
  }
}

TEST(GenerateInstanceTest, CoversFullRange) {
  std::set<int> widths;
  std::set<int> heights;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (const Piece& p : generate_instance(seed, 20, 10, 6).pieces) {
      widths.insert(p.width);
      heights.insert(p.height);
    }
  }
  EXPECT_EQ(widths.size(), 10U);
  EXPECT_EQ(heights.size(), 6U);
}

TEST(GenerateInstanceTest, EmptyInstanceRejected) {
  EXPECT_THROW(generate_instance(1, 0, 10, 10), std::invalid_argument);
}

TEST(GenerateInstanceTest, ControlledHighWidthCount) {
  for (int hw = 0; hw <= 20; ++hw) {
    const Instance inst = generate_instance_with_high_width(3, 20, 10, 10, hw);
    EXPECT_EQ(high_width_count(inst), hw);
    validate_instance(inst);
  }
  EXPECT_THROW(generate_instance_with_high_width(3, 4, 10, 10, 5), std::invalid_argument);
}

Instance WithWidths(int bin_w, std::vector<int> widths) {
  Instance inst;
  inst.bin_w = bin_w;
  inst.bin_h = 10;
  for (std::size_t k = 0; k < widths.size(); ++k) {
    inst.pieces.push_back({static_cast<int>(k) + 1, 1, widths[k]});
  }
  return inst;
}

TEST(HighWidthCountTest, StrictlyMoreThanHalf) {
  EXPECT_EQ(high_width_count(WithWidths(10, {6, 5, 1})), 1);
  EXPECT_EQ(high_width_count(WithWidths(10, {10, 10, 10, 10})), 4);
  EXPECT_EQ(high_width_count(WithWidths(10, {1, 1, 1})), 0);
  // Odd bin width: 4 > 7/2 counts, 3 does not.
  EXPECT_EQ(high_width_count(WithWidths(7, {3, 4})), 1);
}

TEST(HighWidthCountTest, PermutationInvariant) {
  Instance inst = generate_instance(11, 15, 9, 9);
  const int before = high_width_count(inst);
  std::reverse(inst.pieces.begin(), inst.pieces.end());
  EXPECT_EQ(high_width_count(inst), before);
}

}  // namespace
}  // namespace cutstock
