// Copyright 2026 The qnnsim Authors
//
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

#include "qnnsim/encoder.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "qnnsim/unitary.hpp"

namespace qnnsim {
namespace {

std::vector<int> pattern_bits(std::size_t pattern, std::size_t n) {
    std::vector<int> bits(n);
    for (std::size_t i = 0; i < n; ++i) {
        bits[i] = static_cast<int>((pattern >> i) & 1);
    }
    return bits;
}

TEST(EncoderBlock, FirstColumnInterleavesBitAndComplement) {
    UnitaryMatrix block = build_encoder_block({1, 0});
    ASSERT_EQ(block.dim(), 4u);
    check_unitary(block, 1e-10);
    double c = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(block.at(0, 0).real(), c, 1e-12);
    EXPECT_NEAR(block.at(1, 0).real(), 0.0, 1e-12);
    EXPECT_NEAR(block.at(2, 0).real(), 0.0, 1e-12);
    EXPECT_NEAR(block.at(3, 0).real(), c, 1e-12);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_NEAR(block.at(i, 0).imag(), 0.0, 1e-12);
    }
}

TEST(EncoderBlock, EveryPatternEncodesExactly) {
    for (std::size_t n : {std::size_t{2}, std::size_t{4}}) {
        double c = 1.0 / std::sqrt(static_cast<double>(n));
        for (std::size_t pattern = 0; pattern < (std::size_t{1} << n); ++pattern) {
            std::vector<int> bits = pattern_bits(pattern, n);
            UnitaryMatrix block = build_encoder_block(bits);
            check_unitary(block, 1e-10);
            StateVector s = encode_with_encoder(bits);
            ASSERT_EQ(s.dim(), 2 * n);
            EXPECT_DOUBLE_EQ(s.sink_prob(), 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                EXPECT_NEAR(s.amp(2 * i).real(), c * bits[i], 1e-12)
                    << "n=" << n << " pattern=" << pattern << " slot=" << i;
                EXPECT_NEAR(s.amp(2 * i + 1).real(), c * (1 - bits[i]), 1e-12)
                    << "n=" << n << " pattern=" << pattern << " slot=" << i;
                EXPECT_NEAR(s.amp(2 * i).imag(), 0.0, 1e-12);
                EXPECT_NEAR(s.amp(2 * i + 1).imag(), 0.0, 1e-12);
            }
        }
    }
}

TEST(EncoderBlock, ConstantPatternsStayNormalized) {
    StateVector ones = encode_with_encoder({1, 1, 1, 1});
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_NEAR(ones.amp(2 * i).real(), 0.5, 1e-12);
        EXPECT_NEAR(ones.amp(2 * i + 1).real(), 0.0, 1e-12);
    }
    StateVector zeros = encode_with_encoder({0, 0, 0, 0});
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_NEAR(zeros.amp(2 * i).real(), 0.0, 1e-12);
        EXPECT_NEAR(zeros.amp(2 * i + 1).real(), 0.5, 1e-12);
    }
}

TEST(EncoderOperator, MaterializedBlocksMatchTheLazyPath) {
    BlockBandedUnitary full = build_encoder_unitary(2);
    ASSERT_EQ(full.blocks().size(), 4u);
    ASSERT_EQ(full.block_dim(), 4u);
    for (std::size_t pattern = 0; pattern < 4; ++pattern) {
        const UnitaryMatrix& block = full.blocks()[pattern];
        StateVector lazy = encode_with_encoder(pattern_bits(pattern, 2));
        for (std::size_t i = 0; i < 4; ++i) {
            EXPECT_NEAR(std::abs(block.at(i, 0) - lazy.amp(i)), 0.0, 1e-12)
                << "pattern=" << pattern << " row=" << i;
        }
    }
}

TEST(EncoderOperator, RejectsBadShapes) {
    EXPECT_THROW(build_encoder_block({1, 0, 1}), std::invalid_argument);
    EXPECT_THROW(build_encoder_block({}), std::invalid_argument);
    EXPECT_THROW(build_encoder_block({1, 2}), std::invalid_argument);
    EXPECT_THROW(build_encoder_unitary(3), std::invalid_argument);
    EXPECT_THROW(build_encoder_unitary(16), std::invalid_argument);
}

}  // namespace
}  // namespace qnnsim
