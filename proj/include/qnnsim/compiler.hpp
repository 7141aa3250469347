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
 * Compilation between equality-test circuits and layered quantum programs.
 *
 * Forward direction: the circuit is opened to a tree, stretched to uniform
 * depth and fan-in s = 2^m, and embedded in a complete s-ary tree of gate
 * slots. Each gate becomes one block of the level's block-banded unitary
 * whose first row carries the gate's normalized weights interleaved with
 * zero scratch slots; the dissipative gate then turns "weighted sum is
 * nonzero" into the presence of a fixed output amplitude, and the sink
 * discard moves that output to the next level's input slot. Per-level
 * thresholds and output constants follow the fan-in geometry.
 *
 * Reverse direction: every block row becomes one integer-weight equality
 * test over the slots it reads. Real and imaginary parts combine into a
 * single integer by shifting the imaginary part past the largest possible
 * real sum, so one weighted zero check tests both parts at once.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qnnsim/circuit.hpp"
#include "qnnsim/qnn_program.hpp"
#include "qnnsim/transforms.hpp"
#include "qnnsim/unitary.hpp"

namespace qnnsim {

namespace detail {

inline void require_fanin_pow2(int fanin) {
    if (fanin < 1 || (fanin & (fanin - 1)) != 0) {
        throw std::invalid_argument("fan-in must be a power of two");
    }
}

}  // namespace detail

/// Dissipative threshold for level `level` with fan-in s and weight bound w:
/// delta = 1/(2 s^(level/2) sqrt(s) w), half the smallest nonzero magnitude
/// a live pre-check amplitude can take at that level.
inline double choose_delta(int level, int fanin, std::int64_t weight_bound) {
    if (level < 1 || weight_bound < 1) {
        throw std::invalid_argument("choose_delta needs level >= 1 and weight bound >= 1");
    }
    detail::require_fanin_pow2(fanin);
    double s = static_cast<double>(fanin);
    return 0.5 * std::pow(s, -0.5 * (level + 1)) / static_cast<double>(weight_bound);
}

/// Grid bits so the per-entry error 2^-(p+1) stays within the level's error
/// budget 1/(3^level s^(level/2) w): p = ceil(log2(3^level s^(level/2) w)) + 1.
inline int required_precision(int level, int fanin, std::int64_t weight_bound) {
    if (level < 1 || weight_bound < 1) {
        throw std::invalid_argument("required_precision needs level >= 1 and weight bound >= 1");
    }
    detail::require_fanin_pow2(fanin);
    double bits = level * std::log2(3.0) + 0.5 * level * std::log2(static_cast<double>(fanin)) +
                  std::log2(static_cast<double>(weight_bound));
    return static_cast<int>(std::ceil(bits - 1e-12)) + 1;
}

namespace detail {

inline LeafSlot leaf_slot_for(const Node& n, std::int64_t weight) {
    if (weight == 0) {
        return LeafSlot{LeafKind::kScratch, -1};
    }
    switch (n.kind) {
        case NodeKind::kInput:
            return LeafSlot{LeafKind::kInput, n.input};
        case NodeKind::kInputNeg:
            return LeafSlot{LeafKind::kInputNeg, n.input};
        case NodeKind::kConst1:
            return LeafSlot{LeafKind::kConst1, -1};
        default:
            return LeafSlot{LeafKind::kConst0, -1};
    }
}

/// First row of a block that never fires: a unit on the first scratch slot,
/// whose amplitude is always zero.
inline std::vector<amplitude> scratch_unit_row(std::size_t dim) {
    std::vector<amplitude> row(dim, amplitude{0.0, 0.0});
    row[1] = amplitude{1.0, 0.0};
    return row;
}

}  // namespace detail

/// Compiles a single-output equality-test circuit into a layered program.
/// The uniform fan-in is the smallest power of two (at least 2) covering the
/// widest gate; opening and levelizing happen internally.
inline QnnProgram ec_to_qnn(const BoolCircuit& c) {
    if (c.outputs().size() != 1) {
        throw std::invalid_argument("ec_to_qnn requires a single-output circuit");
    }
    detail::require_kinds(c, {NodeKind::kEt}, "ec_to_qnn");
    if (c.size() == 0) {
        throw std::invalid_argument("ec_to_qnn requires at least one gate");
    }

    int max_fanin = 2;
    for (const Node& n : c.nodes()) {
        if (is_gate_kind(n.kind)) {
            max_fanin = std::max(max_fanin, static_cast<int>(n.preds.size()));
        }
    }
    int s = 1;
    while (s < max_fanin) {
        s <<= 1;
    }
    LeveledCircuit lc = levelize(open_circuit(c), s);
    const BoolCircuit& tree = lc.circuit;
    int d = lc.depth;
    std::int64_t w = tree.weight_bound();
    int m = 0;
    while ((1 << m) < s) {
        ++m;
    }

    // Embed the tree into the complete s-ary slot tree: the root takes
    // position 0 at level 1 and operand k of the gate at position pi sits at
    // position pi*s + k one level down. Weight-0 pads leave their child slot
    // empty; leaves fill the input layout below level d.
    std::vector<std::map<std::size_t, int>> gate_at(static_cast<std::size_t>(d) + 1);
    std::size_t leaf_count = 1;
    for (int l = 0; l < d; ++l) {
        leaf_count *= static_cast<std::size_t>(s);
    }
    std::vector<LeafSlot> leaves(leaf_count);

    auto embed = [&](auto&& self, int id, int level, std::size_t pos) -> void {
        gate_at[static_cast<std::size_t>(level)][pos] = id;
        const Node& n = tree.node(id);
        for (std::size_t k = 0; k < n.preds.size(); ++k) {
            std::size_t child = pos * static_cast<std::size_t>(s) + k;
            const Node& pred = tree.node(n.preds[k]);
            if (is_gate_kind(pred.kind)) {
                self(self, n.preds[k], level + 1, child);
            } else if (level == d) {
                leaves[child] = detail::leaf_slot_for(pred, n.weights[k]);
            } else if (n.weights[k] != 0) {
                throw std::logic_error("levelized gate reads a leaf above the bottom level");
            }
        }
    };
    embed(embed, lc.output, 1, 0);

    std::size_t block_dim = std::size_t{1} << (m + 1);
    std::vector<QnnLayer> layers;
    for (int level = d; level >= 1; --level) {
        std::size_t slots = 1;
        for (int l = 1; l < level; ++l) {
            slots *= static_cast<std::size_t>(s);
        }
        double delta = choose_delta(level, s, w);
        double c_out = std::pow(static_cast<double>(s), -0.5 * (level - 1));
        double incoming = std::pow(static_cast<double>(s), -0.5 * level);

        std::vector<UnitaryMatrix> blocks;
        blocks.reserve(slots);
        const auto& level_gates = gate_at[static_cast<std::size_t>(level)];
        for (std::size_t pos = 0; pos < slots; ++pos) {
            auto it = level_gates.find(pos);
            std::vector<amplitude> first_row;
            if (it == level_gates.end()) {
                first_row = detail::scratch_unit_row(block_dim);
            } else {
                const Node& g = tree.node(it->second);
                double norm_sq = 0.0;
                for (std::int64_t wk : g.weights) {
                    norm_sq += static_cast<double>(wk) * static_cast<double>(wk);
                }
                if (norm_sq == 0.0) {
                    first_row = detail::scratch_unit_row(block_dim);
                } else {
                    double norm = std::sqrt(norm_sq);
                    // Structural guarantee: the threshold sits strictly below
                    // the smallest nonzero amplitude this gate can produce.
                    if (!(delta < incoming / norm)) {
                        throw std::logic_error("threshold exceeds the gate's amplitude floor");
                    }
                    first_row.assign(block_dim, amplitude{0.0, 0.0});
                    for (std::size_t k = 0; k < g.weights.size(); ++k) {
                        first_row[2 * k] =
                            amplitude{static_cast<double>(g.weights[k]) / norm, 0.0};
                    }
                }
            }
            blocks.push_back(complete_orthonormal_block(first_row));
        }

        std::vector<std::size_t> sink;
        for (int qbit = 1; qbit <= m; ++qbit) {
            sink.push_back(static_cast<std::size_t>(qbit));
        }
        layers.push_back(QnnLayer{level, assemble_block_banded(std::move(blocks)),
                                  DGateSpec{delta, c_out, DMode::kIdeal}, std::move(sink)});
    }
    return QnnProgram(m, c.num_inputs(), std::move(leaves), std::move(layers));
}

namespace detail {

/// Best rational approximation p/q to x with q <= max_den, by continued
/// fractions. Exact for rationals whose denominator fits the bound when x
/// is accurate to double precision.
inline std::pair<std::int64_t, std::int64_t> best_rational(double x, std::int64_t max_den) {
    bool neg = x < 0.0;
    double v = neg ? -x : x;
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    for (int iter = 0; iter < 64; ++iter) {
        double af = std::floor(v);
        if (af > 9e17) {
            break;
        }
        std::int64_t a = static_cast<std::int64_t>(af);
        std::int64_t p2 = a * p1 + p0;
        std::int64_t q2 = a * q1 + q0;
        if (q2 > max_den) {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        double rem = v - af;
        if (rem < 1e-12) {
            break;
        }
        v = 1.0 / rem;
    }
    if (q1 == 0) {
        return {neg ? -p0 : p0, q0};
    }
    return {neg ? -p1 : p1, q1};
}

/// Integer weight pair (real, imaginary) per even slot of a block row.
struct RowWeights {
    std::vector<std::int64_t> re;
    std::vector<std::int64_t> im;
    bool has_imag = false;
    bool all_zero = false;
};

/// Recovers integer weights from a block's first row at grid precision p.
/// Rows already on the 2^-p grid scale verbatim; off-grid rows must be real
/// multiples of one integer direction (the canonical compiled form), which
/// is recovered exactly by rational reconstruction so that zero sums are
/// preserved. Anything else is not a canonical program.
inline RowWeights recover_row_weights(const UnitaryMatrix& block, int p) {
    std::size_t dim = block.dim();
    std::size_t slots = dim / 2;
    std::vector<amplitude> even(slots);
    double max_mag = 0.0;
    for (std::size_t k = 0; k < slots; ++k) {
        even[k] = block.at(0, 2 * k);
        max_mag = std::max(max_mag, std::abs(even[k]));
    }
    RowWeights rw;
    rw.re.assign(slots, 0);
    rw.im.assign(slots, 0);
    if (max_mag <= 1e-12) {
        rw.all_zero = true;  // scratch-only row; the gate never fires
        return rw;
    }
    for (std::size_t k = 0; k < slots; ++k) {
        if (std::abs(block.at(0, 2 * k + 1)) > 1e-12) {
            throw std::invalid_argument("non-canonical program: block row reads a scratch slot");
        }
    }

    double scale = std::ldexp(1.0, p);
    bool on_grid = true;
    for (std::size_t k = 0; k < slots && on_grid; ++k) {
        double re = even[k].real() * scale;
        double im = even[k].imag() * scale;
        on_grid = std::fabs(re - std::round(re)) <= 1e-6 && std::fabs(im - std::round(im)) <= 1e-6;
    }
    if (on_grid) {
        for (std::size_t k = 0; k < slots; ++k) {
            rw.re[k] = std::llround(even[k].real() * scale);
            rw.im[k] = std::llround(even[k].imag() * scale);
            rw.has_imag = rw.has_imag || rw.im[k] != 0;
        }
        return rw;
    }

    std::int64_t max_den = std::int64_t{1} << std::min(p, 52);
    std::size_t ref = 0;
    for (std::size_t k = 0; k < slots; ++k) {
        if (std::abs(even[k].imag()) > 1e-12) {
            throw std::invalid_argument(
                "non-canonical program: off-grid complex entries cannot be reconstructed");
        }
        if (std::fabs(even[k].real()) > std::fabs(even[ref].real())) {
            ref = k;
        }
    }
    double ref_val = even[ref].real();
    std::vector<std::pair<std::int64_t, std::int64_t>> fractions(slots);
    std::int64_t common = 1;
    for (std::size_t k = 0; k < slots; ++k) {
        fractions[k] = best_rational(even[k].real() / ref_val, max_den);
        common = std::lcm(common, fractions[k].second);
        if (common > max_den) {
            throw std::invalid_argument(
                "non-canonical program: row direction needs more precision than requested");
        }
    }
    for (std::size_t k = 0; k < slots; ++k) {
        rw.re[k] = fractions[k].first * (common / fractions[k].second);
    }
    // The reconstruction must reproduce the row exactly up to rounding; a
    // misfit means the row was never an integer direction.
    double fit_num = 0.0;
    double fit_den = 0.0;
    for (std::size_t k = 0; k < slots; ++k) {
        fit_num += even[k].real() * static_cast<double>(rw.re[k]);
        fit_den += static_cast<double>(rw.re[k]) * static_cast<double>(rw.re[k]);
    }
    double fitted = fit_num / fit_den;
    for (std::size_t k = 0; k < slots; ++k) {
        if (std::fabs(even[k].real() - fitted * static_cast<double>(rw.re[k])) >
            1e-9 * std::fabs(ref_val)) {
            throw std::invalid_argument(
                "non-canonical program: block row is not an integer direction");
        }
    }
    return rw;
}

}  // namespace detail

/// Reverse compilation: one integer-weight equality test per gate slot, read
/// off the block rows at grid precision p. Produces a circuit of depth equal
/// to the program depth whose value matches the program's boolean output on
/// every assignment.
inline BoolCircuit qnn_to_ec(const QnnProgram& prog, int p) {
    if (p < 1 || p > 52) {
        throw std::invalid_argument("precision must lie in [1, 52]");
    }
    int m = prog.m();
    std::size_t s = prog.fanin();
    int d = prog.depth();

    std::vector<Node> nodes;
    std::map<std::pair<int, int>, int> leaf_nodes;  // (kind tag, input) -> node id
    auto leaf_node = [&](const LeafSlot& leaf) -> int {
        int tag;
        switch (leaf.kind) {
            case LeafKind::kInput:
                tag = 0;
                break;
            case LeafKind::kInputNeg:
                tag = 1;
                break;
            case LeafKind::kConst1:
                tag = 2;
                break;
            default:
                tag = 3;  // constant-0 and scratch slots read as 0
                break;
        }
        auto key = std::make_pair(tag, leaf.input);
        auto it = leaf_nodes.find(key);
        if (it != leaf_nodes.end()) {
            return it->second;
        }
        Node n;
        switch (tag) {
            case 0:
                n = Node::make_input(leaf.input);
                break;
            case 1:
                n = Node::make_input_neg(leaf.input);
                break;
            case 2:
                n = Node::make_const1();
                break;
            default:
                n = Node::make_const0();
                break;
        }
        nodes.push_back(n);
        int id = static_cast<int>(nodes.size()) - 1;
        leaf_nodes[key] = id;
        return id;
    };
    int const0 = leaf_node(LeafSlot{LeafKind::kConst0, -1});

    // Integer scale q = m + 1 + p: even-slot sums of the real parts stay
    // strictly below 2^q, so shifting the imaginary weights by 2q - p keeps
    // the two zero checks from mixing.
    int shift_re = m + 1;
    int shift_im = 2 * (m + 1) + p;

    std::vector<int> below;  // node per position at the level being consumed
    for (int level = d; level >= 1; --level) {
        const QnnLayer& layer = prog.layers()[static_cast<std::size_t>(d - level)];
        std::size_t slots = layer.unitary.blocks().size();
        std::vector<int> current(slots, -1);
        for (std::size_t pos = 0; pos < slots; ++pos) {
            detail::RowWeights rw =
                detail::recover_row_weights(layer.unitary.blocks()[pos], p);
            std::vector<int> preds;
            std::vector<std::int64_t> weights;
            if (!rw.all_zero) {
                for (std::size_t k = 0; k < s; ++k) {
                    std::int64_t wk;
                    if (rw.has_imag) {
                        if (shift_im + p + 1 > 62) {
                            throw std::invalid_argument(
                                "precision too large to combine real and imaginary weights");
                        }
                        wk = (rw.re[k] << shift_re) + (rw.im[k] << shift_im);
                    } else {
                        wk = rw.re[k];
                    }
                    if (wk == 0) {
                        continue;
                    }
                    std::size_t child = pos * s + k;
                    int operand = level == d
                                      ? leaf_node(prog.leaves()[child])
                                      : below[child];
                    preds.push_back(operand);
                    weights.push_back(wk);
                }
            }
            if (preds.empty()) {
                preds.push_back(const0);
                weights.push_back(1);
            }
            nodes.push_back(Node::make_et(std::move(preds), std::move(weights)));
            current[pos] = static_cast<int>(nodes.size()) - 1;
        }
        below = std::move(current);
    }
    return BoolCircuit(prog.num_inputs(), std::move(nodes), {below[0]});
}

}  // namespace qnnsim
