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
 * Dense and block-banded unitary operators: construction by deterministic
 * orthonormal completion, unitarity verification, application to states, and
 * the two fixed 4x4 operators used by the toolkit (the NAND evaluator and the
 * ancilla-transfer permutation).
 */

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qnnsim/detail/textio.hpp"
#include "qnnsim/state_vector.hpp"

namespace qnnsim {

/// Unitarity slack applied when operators are constructed or assembled.
inline constexpr double kUnitaryTolerance = 1e-10;

/// Dense complex square matrix, row-major. The type itself does not force
/// unitarity: quantized operators drift off the unitary manifold by design,
/// and check_unitary is the explicit gate for everything promised unitary.
class UnitaryMatrix {
  public:
    explicit UnitaryMatrix(std::size_t dim)
        : dim_(dim), entries_(dim * dim, amplitude{0.0, 0.0}) {
        if (dim == 0) {
            throw std::invalid_argument("matrix dimension must be positive");
        }
    }

    UnitaryMatrix(std::size_t dim, std::vector<amplitude> entries)
        : dim_(dim), entries_(std::move(entries)) {
        if (dim == 0 || entries_.size() != dim * dim) {
            throw std::invalid_argument("entry count must equal dim^2");
        }
        for (const amplitude& a : entries_) {
            detail::require_finite(a, "matrix entry");
        }
    }

    std::size_t dim() const { return dim_; }
    const amplitude& at(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }
    amplitude& at(std::size_t row, std::size_t col) { return entries_[row * dim_ + col]; }
    const std::vector<amplitude>& entries() const { return entries_; }

  private:
    std::size_t dim_;
    std::vector<amplitude> entries_;
};

/// Largest entry of |U^dagger U - I|; 0 for an exactly unitary matrix.
inline double unitarity_defect(const UnitaryMatrix& u) {
    double worst = 0.0;
    for (std::size_t i = 0; i < u.dim(); ++i) {
        for (std::size_t j = 0; j < u.dim(); ++j) {
            amplitude dot{0.0, 0.0};
            for (std::size_t k = 0; k < u.dim(); ++k) {
                dot += std::conj(u.at(k, i)) * u.at(k, j);
            }
            if (i == j) {
                dot -= 1.0;
            }
            worst = std::max(worst, std::abs(dot));
        }
    }
    return worst;
}

/// True iff max |U^dagger U - I| entry is below tol.
inline bool check_unitary(const UnitaryMatrix& u, double tol) {
    return unitarity_defect(u) < tol;
}

/// Completes a unit first row to a full unitary matrix. Candidates are the
/// standard basis vectors e0..e_{d-1} in index order, orthogonalized against
/// every accepted row (modified Gram-Schmidt); a candidate whose residual
/// norm falls below 1e-8 is rejected. Deterministic: identical input yields
/// bit-identical output.
inline UnitaryMatrix complete_orthonormal_block(const std::vector<amplitude>& first_row) {
    std::size_t d = first_row.size();
    if (d == 0) {
        throw std::invalid_argument("first row must be nonempty");
    }
    double norm_sq = 0.0;
    for (const amplitude& a : first_row) {
        detail::require_finite(a, "first row entry");
        norm_sq += std::norm(a);
    }
    if (std::abs(std::sqrt(norm_sq) - 1.0) > 1e-9) {
        throw std::invalid_argument("first row must have unit norm");
    }

    std::vector<std::vector<amplitude>> rows;
    rows.reserve(d);
    rows.push_back(first_row);
    for (std::size_t cand = 0; cand < d && rows.size() < d; ++cand) {
        std::vector<amplitude> v(d, amplitude{0.0, 0.0});
        v[cand] = amplitude{1.0, 0.0};
        for (const auto& r : rows) {
            amplitude proj{0.0, 0.0};
            for (std::size_t k = 0; k < d; ++k) {
                proj += std::conj(r[k]) * v[k];
            }
            for (std::size_t k = 0; k < d; ++k) {
                v[k] -= proj * r[k];
            }
        }
        double rn = 0.0;
        for (const amplitude& a : v) {
            rn += std::norm(a);
        }
        rn = std::sqrt(rn);
        if (rn < 1e-8) {
            continue;  // candidate already spanned by accepted rows
        }
        for (amplitude& a : v) {
            a /= rn;
        }
        rows.push_back(std::move(v));
    }
    if (rows.size() != d) {
        throw std::runtime_error("orthonormal completion failed to reach full rank");
    }
    UnitaryMatrix out(d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            out.at(i, j) = rows[i][j];
        }
    }
    return out;
}

/// Block-diagonal operator: equal-size unitary blocks tiling the index space
/// in order. Block j acts on the contiguous index range [j*b, (j+1)*b).
class BlockBandedUnitary {
  public:
    explicit BlockBandedUnitary(std::vector<UnitaryMatrix> blocks) : blocks_(std::move(blocks)) {
        if (blocks_.empty()) {
            throw std::invalid_argument("block list must be nonempty");
        }
        for (const UnitaryMatrix& b : blocks_) {
            if (b.dim() != blocks_.front().dim()) {
                throw std::invalid_argument("blocks must share one dimension");
            }
        }
    }

    std::size_t block_dim() const { return blocks_.front().dim(); }
    std::size_t dim() const { return block_dim() * blocks_.size(); }
    const std::vector<UnitaryMatrix>& blocks() const { return blocks_; }
    std::vector<UnitaryMatrix>& blocks() { return blocks_; }

  private:
    std::vector<UnitaryMatrix> blocks_;
};

/// Assembles verified blocks into a block-banded operator. Every block must
/// pass check_unitary; quantized operators are produced later by mutating an
/// assembled program, never by reassembly.
inline BlockBandedUnitary assemble_block_banded(std::vector<UnitaryMatrix> blocks) {
    for (const UnitaryMatrix& b : blocks) {
        if (!detail::is_power_of_two(b.dim())) {
            throw std::invalid_argument("block dimension must be a power of two");
        }
        if (!check_unitary(b, kUnitaryTolerance)) {
            throw std::invalid_argument("block fails unitarity check");
        }
    }
    return BlockBandedUnitary(std::move(blocks));
}

namespace detail {

inline void apply_dense_to_range(const UnitaryMatrix& u, const std::vector<amplitude>& in,
                                 std::vector<amplitude>& out, std::size_t base) {
    std::size_t d = u.dim();
    for (std::size_t r = 0; r < d; ++r) {
        amplitude acc{0.0, 0.0};
        for (std::size_t c = 0; c < d; ++c) {
            acc += u.at(r, c) * in[base + c];
        }
        out[base + r] = acc;
    }
}

}  // namespace detail

/// Applies U to the k least significant qubits, identically across the high
/// qubits. U must be 2^k dimensional. Sink probability is untouched.
inline StateVector apply_unitary(const UnitaryMatrix& u, const StateVector& s, std::size_t low_qubits) {
    if (low_qubits > s.num_qubits()) {
        throw std::invalid_argument("operator acts on more qubits than the state has");
    }
    if (u.dim() != (std::size_t{1} << low_qubits)) {
        throw std::invalid_argument("operator dimension must be 2^low_qubits");
    }
    std::vector<amplitude> out(s.dim());
    for (std::size_t base = 0; base < s.dim(); base += u.dim()) {
        detail::apply_dense_to_range(u, s.amps(), out, base);
    }
    return StateVector(s.num_qubits(), std::move(out), s.sink_prob());
}

/// Applies a block-banded operator covering the whole state: the operator
/// dimension must equal 2^n and block j touches only its own index range.
inline StateVector apply_unitary(const BlockBandedUnitary& u, const StateVector& s) {
    if (u.dim() != s.dim()) {
        throw std::invalid_argument("block-banded operator must cover the full state");
    }
    std::vector<amplitude> out(s.dim());
    std::size_t base = 0;
    for (const UnitaryMatrix& b : u.blocks()) {
        detail::apply_dense_to_range(b, s.amps(), out, base);
        base += b.dim();
    }
    return StateVector(s.num_qubits(), std::move(out), s.sink_prob());
}

/// The 4x4 evaluator from the NAND example. Acting on (1/2)[x1, 1, x2, 1] it
/// puts (x1 + x2 - 2) / (2 sqrt 6) on |00>, which vanishes exactly when
/// NAND(x1, x2) = 0. The (3,3) entry is 1/3, the unique value making the
/// printed matrix unitary.
inline UnitaryMatrix build_nand_unitary() {
    const double s2 = std::sqrt(2.0);
    const double s3 = std::sqrt(3.0);
    const double s6 = std::sqrt(6.0);
    UnitaryMatrix u(4);
    u.at(0, 0) = 1.0 / s6;
    u.at(0, 1) = 0.0;
    u.at(0, 2) = 1.0 / s6;
    u.at(0, 3) = -2.0 / s6;
    u.at(1, 0) = 1.0 / s3;
    u.at(1, 1) = 1.0 / s3;
    u.at(1, 2) = -1.0 / s3;
    u.at(1, 3) = 0.0;
    u.at(2, 0) = 1.0 / (3.0 * s2);
    u.at(2, 1) = s2 / 3.0;
    u.at(2, 2) = 1.0 / s2;
    u.at(2, 3) = s2 / 3.0;
    u.at(3, 0) = 2.0 / 3.0;
    u.at(3, 1) = -2.0 / 3.0;
    u.at(3, 2) = 0.0;
    u.at(3, 3) = 1.0 / 3.0;
    return u;
}

/// The 4x4 ancilla-transfer permutation: swaps the |01> and |10> amplitudes,
/// mapping [b0, 0, b2, 0] to [b0, b2, 0, 0]. Its own inverse.
inline UnitaryMatrix build_ancilla_transfer() {
    UnitaryMatrix u(4);
    u.at(0, 0) = 1.0;
    u.at(1, 2) = 1.0;
    u.at(2, 1) = 1.0;
    u.at(3, 3) = 1.0;
    return u;
}

/// Quantizes every entry onto the 2^-p dyadic grid (ties toward zero). The
/// result is generally no longer exactly unitary.
inline UnitaryMatrix quantize(const UnitaryMatrix& u, int p) {
    UnitaryMatrix out(u.dim());
    for (std::size_t i = 0; i < u.dim(); ++i) {
        for (std::size_t j = 0; j < u.dim(); ++j) {
            out.at(i, j) = quantize_value(u.at(i, j), p);
        }
    }
    return out;
}

/// Matrix file format: `dim <d>` then d lines of d `re:im` entries.
inline void write_matrix(std::ostream& out, const UnitaryMatrix& u, const std::string& header = "") {
    if (!header.empty()) {
        out << header;
    }
    out << "dim " << u.dim() << '\n';
    for (std::size_t i = 0; i < u.dim(); ++i) {
        for (std::size_t j = 0; j < u.dim(); ++j) {
            if (j) {
                out << ' ';
            }
            const amplitude& a = u.at(i, j);
            out << detail::format_real(a.real()) << ':' << detail::format_real(a.imag());
        }
        out << '\n';
    }
}

namespace detail {

inline amplitude parse_complex_entry(const std::string& tok, std::size_t line_no) {
    auto colon = tok.find(':');
    if (colon == std::string::npos) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": entry '" + tok +
                                 "' is not re:im");
    }
    double re = parse_real(tok.substr(0, colon), "real part", line_no);
    double im = parse_real(tok.substr(colon + 1), "imaginary part", line_no);
    return amplitude{re, im};
}

}  // namespace detail

inline UnitaryMatrix read_matrix(std::istream& in, std::size_t& line_no) {
    std::string line;
    if (!detail::next_content_line(in, line, line_no)) {
        throw std::runtime_error("unexpected end of input, expected matrix header");
    }
    auto toks = detail::split_ws(line);
    if (toks.size() != 2 || toks[0] != "dim") {
        throw std::runtime_error("line " + std::to_string(line_no) + ": expected 'dim <d>'");
    }
    std::size_t d = static_cast<std::size_t>(detail::parse_int(toks[1], "dimension", line_no));
    if (d == 0) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": dimension must be positive");
    }
    UnitaryMatrix u(d);
    for (std::size_t i = 0; i < d; ++i) {
        if (!detail::next_content_line(in, line, line_no)) {
            throw std::runtime_error("unexpected end of input inside matrix rows");
        }
        auto row = detail::split_ws(line);
        if (row.size() != d) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(d) + " entries");
        }
        for (std::size_t j = 0; j < d; ++j) {
            u.at(i, j) = detail::parse_complex_entry(row[j], line_no);
        }
    }
    return u;
}

inline UnitaryMatrix read_matrix(std::istream& in) {
    std::size_t line_no = 0;
    return read_matrix(in, line_no);
}

}  // namespace qnnsim
