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

/**
 * @file
 * Dense-encoding unitary: packs n classical bits held in basis form into
 * log2(n) + 1 qubits of amplitude form.
 *
 * For each classical pattern b there is one 2n x 2n block B_b whose first
 * column is c * [b_0, 1-b_0, b_1, 1-b_1, ...] with c = 1/sqrt(n): reading the
 * result state |i; z>, the amplitude is c*b_i at z=0 and c*(1-b_i) at z=1.
 * The conceptual full operator is block-diagonal over all 2^n patterns and
 * is never materialized for large n; encoding applies the single relevant
 * block lazily.
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qnnsim/state_vector.hpp"
#include "qnnsim/unitary.hpp"

namespace qnnsim {

namespace detail {

inline void require_bits(const std::vector<int>& bits) {
    for (int b : bits) {
        if (b != 0 && b != 1) {
            throw std::invalid_argument("bits must be 0 or 1");
        }
    }
}

}  // namespace detail

/// Builds the 2n x 2n encoder block for one classical pattern. The first
/// column is the encoding target; the remaining columns are the
/// deterministic orthonormal completion (computed row-wise on the transpose,
/// since the completion primitive fixes a row).
inline UnitaryMatrix build_encoder_block(const std::vector<int>& bits) {
    if (!detail::is_power_of_two(bits.size())) {
        throw std::invalid_argument("encoder needs a power-of-two bit count");
    }
    detail::require_bits(bits);
    std::size_t n = bits.size();
    double c = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<amplitude> first_col(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        first_col[2 * i] = amplitude{c * bits[i], 0.0};
        first_col[2 * i + 1] = amplitude{c * (1.0 - bits[i]), 0.0};
    }
    UnitaryMatrix transposed = complete_orthonormal_block(first_col);
    UnitaryMatrix block(2 * n);
    for (std::size_t i = 0; i < 2 * n; ++i) {
        for (std::size_t j = 0; j < 2 * n; ++j) {
            block.at(i, j) = transposed.at(j, i);
        }
    }
    return block;
}

/// Materializes the full encoder operator for small n: one block per
/// classical pattern, 2^n blocks of dimension 2n, acting on n + log2(n) + 1
/// qubits. Bit i of the block index is classical bit i.
inline BlockBandedUnitary build_encoder_unitary(std::size_t n) {
    if (!detail::is_power_of_two(n)) {
        throw std::invalid_argument("encoder needs a power-of-two bit count");
    }
    if (n > 10) {
        throw std::invalid_argument("full encoder materialization is capped at n = 10; "
                                    "use encode_with_encoder for larger inputs");
    }
    std::vector<UnitaryMatrix> blocks;
    blocks.reserve(std::size_t{1} << n);
    for (std::size_t pattern = 0; pattern < (std::size_t{1} << n); ++pattern) {
        std::vector<int> bits(n);
        for (std::size_t i = 0; i < n; ++i) {
            bits[i] = (pattern >> i) & 1;
        }
        blocks.push_back(build_encoder_block(bits));
    }
    return BlockBandedUnitary(std::move(blocks));
}

/// Lazy encoding path: applies only the block selected by the classical bits
/// and returns the resulting (log2(n) + 1)-qubit register, i.e. the block's
/// first column as a state. Exact for any n without building the operator.
inline StateVector encode_with_encoder(const std::vector<int>& bits) {
    UnitaryMatrix block = build_encoder_block(bits);
    std::size_t dim = block.dim();
    std::vector<amplitude> amps(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        amps[i] = block.at(i, 0);
    }
    std::size_t qubits = detail::log2_exact(dim);
    return StateVector(qubits, std::move(amps), 0.0);
}

}  // namespace qnnsim
