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
 * Layered quantum program representation and its text format.
 *
 * A program runs on m*d+1 qubits and consists of d layers, executed from
 * level d down to level 1. Each layer is a block-banded unitary (one block
 * of dimension 2^(m+1) per gate slot), a dissipative gate on the m+1 least
 * significant qubits, and a discard of qubits q1..qm. Inputs are classical
 * bits placed at the even indices of the initial state with a common
 * amplitude s^(-d/2); the boolean output is read from the final one-qubit
 * state's |0> amplitude.
 *
 * File format: `qnn m=<m> d=<d>` header, an `inputs` line naming the leaf
 * slots (x<k>, !x<k>, 0, 1, or _ for scratch), then per layer in execution
 * order the block matrices (matrix text format), a
 * `dgate delta=<v> cout=<v> mode=<ideal|ode>` line, and a `sink q1..qm`
 * line.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qnnsim/detail/textio.hpp"
#include "qnnsim/unitary.hpp"

namespace qnnsim {

enum class DMode {
    kIdeal,  // exact threshold snap
    kOde,    // amplitude evolved under the dissipative flow, then snapped
};

/// Dissipative gate on the m+1 least significant qubits: the |0^(m+1)>
/// amplitude of each block is zeroed when its magnitude is at most delta and
/// replaced by the real constant c_out when above; every other in-block
/// state is routed to the sink.
struct DGateSpec {
    double delta = 0.0;
    double c_out = 0.0;
    DMode mode = DMode::kIdeal;
};

enum class LeafKind { kInput, kInputNeg, kConst0, kConst1, kScratch };

/// One leaf position of the input layout (an even slot of the initial
/// state). Scratch slots always carry amplitude 0.
struct LeafSlot {
    LeafKind kind = LeafKind::kScratch;
    int input = -1;
};

struct QnnLayer {
    int level = 0;  // 1 is the output layer; execution starts at level d
    BlockBandedUnitary unitary;
    DGateSpec dgate;
    std::vector<std::size_t> sink_qubits;
};

class QnnProgram {
  public:
    QnnProgram(int m, int num_inputs, std::vector<LeafSlot> leaves, std::vector<QnnLayer> layers)
        : m_(m), num_inputs_(num_inputs), leaves_(std::move(leaves)), layers_(std::move(layers)) {
        validate();
    }

    int m() const { return m_; }
    std::size_t fanin() const { return std::size_t{1} << m_; }
    int depth() const { return static_cast<int>(layers_.size()); }
    int num_inputs() const { return num_inputs_; }
    std::size_t num_qubits() const { return static_cast<std::size_t>(m_) * layers_.size() + 1; }
    const std::vector<LeafSlot>& leaves() const { return leaves_; }
    const std::vector<QnnLayer>& layers() const { return layers_; }

    /// Common amplitude of a one-bit at a leaf slot, s^(-d/2).
    double input_amp() const {
        return std::pow(static_cast<double>(fanin()), -0.5 * depth());
    }

  private:
    void validate() const {
        if (m_ < 1) {
            throw std::invalid_argument("program needs m >= 1");
        }
        if (layers_.empty()) {
            throw std::invalid_argument("program needs at least one layer");
        }
        int d = depth();
        std::size_t s = fanin();
        std::size_t block_dim = std::size_t{1} << (m_ + 1);
        std::size_t expected_leaves = 1;
        for (int l = 0; l < d; ++l) {
            expected_leaves *= s;
        }
        if (leaves_.size() != expected_leaves) {
            throw std::invalid_argument("leaf slot count must be s^d");
        }
        for (const LeafSlot& leaf : leaves_) {
            bool is_input = leaf.kind == LeafKind::kInput || leaf.kind == LeafKind::kInputNeg;
            if (is_input && (leaf.input < 0 || leaf.input >= num_inputs_)) {
                throw std::invalid_argument("leaf input index out of range");
            }
        }
        for (int i = 0; i < d; ++i) {
            const QnnLayer& layer = layers_[static_cast<std::size_t>(i)];
            if (layer.level != d - i) {
                throw std::invalid_argument("layers must run from level d down to 1");
            }
            std::size_t blocks = 1;
            for (int l = 1; l < layer.level; ++l) {
                blocks *= s;
            }
            if (layer.unitary.block_dim() != block_dim ||
                layer.unitary.blocks().size() != blocks) {
                throw std::invalid_argument("layer unitary shape mismatch at level " +
                                            std::to_string(layer.level));
            }
            if (!(layer.dgate.delta > 0.0) || !(layer.dgate.c_out > 0.0) ||
                !(layer.dgate.delta < layer.dgate.c_out)) {
                throw std::invalid_argument("dgate needs 0 < delta < c_out");
            }
            if (layer.sink_qubits.size() != static_cast<std::size_t>(m_)) {
                throw std::invalid_argument("sink must discard exactly m qubits");
            }
            for (int q = 1; q <= m_; ++q) {
                if (layer.sink_qubits[static_cast<std::size_t>(q - 1)] !=
                    static_cast<std::size_t>(q)) {
                    throw std::invalid_argument("sink qubits must be q1..qm in order");
                }
            }
        }
    }

    int m_;
    int num_inputs_;
    std::vector<LeafSlot> leaves_;
    std::vector<QnnLayer> layers_;
};

/// Copy of the program with every layer's dissipative gate switched to the
/// given mode (the simulate-time override).
inline QnnProgram with_d_mode(const QnnProgram& q, DMode mode) {
    std::vector<QnnLayer> layers = q.layers();
    for (QnnLayer& layer : layers) {
        layer.dgate.mode = mode;
    }
    return QnnProgram(q.m(), q.num_inputs(), q.leaves(), std::move(layers));
}

namespace detail {

inline std::string leaf_token(const LeafSlot& leaf) {
    switch (leaf.kind) {
        case LeafKind::kInput:
            return "x" + std::to_string(leaf.input);
        case LeafKind::kInputNeg:
            return "!x" + std::to_string(leaf.input);
        case LeafKind::kConst0:
            return "0";
        case LeafKind::kConst1:
            return "1";
        default:
            return "_";
    }
}

inline LeafSlot parse_leaf_token(const std::string& tok, std::size_t line_no) {
    if (tok == "_") {
        return LeafSlot{LeafKind::kScratch, -1};
    }
    if (tok == "0") {
        return LeafSlot{LeafKind::kConst0, -1};
    }
    if (tok == "1") {
        return LeafSlot{LeafKind::kConst1, -1};
    }
    bool neg = tok.size() > 1 && tok[0] == '!';
    const std::string body = neg ? tok.substr(1) : tok;
    if (body.size() < 2 || body[0] != 'x') {
        throw std::runtime_error("line " + std::to_string(line_no) + ": bad leaf token '" + tok +
                                 "'");
    }
    int index = static_cast<int>(parse_int(body.substr(1), "leaf input index", line_no));
    return LeafSlot{neg ? LeafKind::kInputNeg : LeafKind::kInput, index};
}

/// Parses `key=value` and returns the value string; the key must match.
inline std::string keyed_value(const std::string& tok, const std::string& key,
                               std::size_t line_no) {
    if (tok.size() <= key.size() + 1 || tok.compare(0, key.size(), key) != 0 ||
        tok[key.size()] != '=') {
        throw std::runtime_error("line " + std::to_string(line_no) + ": expected " + key +
                                 "=<value>, got '" + tok + "'");
    }
    return tok.substr(key.size() + 1);
}

}  // namespace detail

inline void write_qnn(std::ostream& out, const QnnProgram& q, const std::string& header = "") {
    if (!header.empty()) {
        out << header;
    }
    out << "# inputs " << q.num_inputs() << "\n";
    out << "qnn m=" << q.m() << " d=" << q.depth() << "\n";
    out << "inputs";
    for (const LeafSlot& leaf : q.leaves()) {
        out << ' ' << detail::leaf_token(leaf);
    }
    out << '\n';
    for (const QnnLayer& layer : q.layers()) {
        for (const UnitaryMatrix& block : layer.unitary.blocks()) {
            write_matrix(out, block);
        }
        out << "dgate delta=" << detail::format_real(layer.dgate.delta)
            << " cout=" << detail::format_real(layer.dgate.c_out)
            << " mode=" << (layer.dgate.mode == DMode::kIdeal ? "ideal" : "ode") << '\n';
        out << "sink";
        for (std::size_t qbit : layer.sink_qubits) {
            out << " q" << qbit;
        }
        out << '\n';
    }
}

inline QnnProgram read_qnn(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    long inputs_hint = -1;

    auto next_line = [&](const char* what) -> std::vector<std::string> {
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') {
                line.pop_back();
            }
            auto toks = detail::split_ws(line);
            if (!toks.empty() && toks[0] == "#" && toks.size() >= 3 && toks[1] == "inputs") {
                inputs_hint = static_cast<long>(detail::parse_int(toks[2], "input count", line_no));
                continue;
            }
            if (detail::is_comment_or_blank(line)) {
                continue;
            }
            return toks;
        }
        throw std::runtime_error(std::string("program file ended while reading ") + what);
    };

    auto header = next_line("the qnn header");
    if (header.size() != 3 || header[0] != "qnn") {
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": expected 'qnn m=<m> d=<d>'");
    }
    int m = static_cast<int>(
        detail::parse_int(detail::keyed_value(header[1], "m", line_no), "m", line_no));
    int d = static_cast<int>(
        detail::parse_int(detail::keyed_value(header[2], "d", line_no), "d", line_no));
    if (m < 1 || d < 1) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": m and d must be >= 1");
    }

    auto leaf_toks = next_line("the inputs line");
    if (leaf_toks.empty() || leaf_toks[0] != "inputs") {
        throw std::runtime_error("line " + std::to_string(line_no) + ": expected the inputs line");
    }
    std::vector<LeafSlot> leaves;
    int max_input = -1;
    for (std::size_t k = 1; k < leaf_toks.size(); ++k) {
        LeafSlot leaf = detail::parse_leaf_token(leaf_toks[k], line_no);
        if (leaf.kind == LeafKind::kInput || leaf.kind == LeafKind::kInputNeg) {
            max_input = leaf.input > max_input ? leaf.input : max_input;
        }
        leaves.push_back(leaf);
    }

    std::size_t s = std::size_t{1} << m;
    std::vector<QnnLayer> layers;
    for (int level = d; level >= 1; --level) {
        std::size_t blocks_needed = 1;
        for (int l = 1; l < level; ++l) {
            blocks_needed *= s;
        }
        std::vector<UnitaryMatrix> blocks;
        blocks.reserve(blocks_needed);
        for (std::size_t bindex = 0; bindex < blocks_needed; ++bindex) {
            blocks.push_back(read_matrix(in, line_no));
        }
        auto dgate_toks = next_line("a dgate line");
        if (dgate_toks.size() != 4 || dgate_toks[0] != "dgate") {
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": expected 'dgate delta=<v> cout=<v> mode=<ideal|ode>'");
        }
        DGateSpec dgate;
        dgate.delta = detail::parse_real(detail::keyed_value(dgate_toks[1], "delta", line_no),
                                         "delta", line_no);
        dgate.c_out = detail::parse_real(detail::keyed_value(dgate_toks[2], "cout", line_no),
                                         "cout", line_no);
        std::string mode = detail::keyed_value(dgate_toks[3], "mode", line_no);
        if (mode == "ideal") {
            dgate.mode = DMode::kIdeal;
        } else if (mode == "ode") {
            dgate.mode = DMode::kOde;
        } else {
            throw std::runtime_error("line " + std::to_string(line_no) + ": unknown dgate mode '" +
                                     mode + "'");
        }
        auto sink_toks = next_line("a sink line");
        if (sink_toks.empty() || sink_toks[0] != "sink") {
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": expected the sink line");
        }
        std::vector<std::size_t> sink;
        for (std::size_t k = 1; k < sink_toks.size(); ++k) {
            const std::string& tok = sink_toks[k];
            if (tok.size() < 2 || tok[0] != 'q') {
                throw std::runtime_error("line " + std::to_string(line_no) +
                                         ": expected qubit names like q1");
            }
            sink.push_back(static_cast<std::size_t>(
                detail::parse_int(tok.substr(1), "sink qubit", line_no)));
        }
        layers.push_back(QnnLayer{level, BlockBandedUnitary(std::move(blocks)), dgate,
                                  std::move(sink)});
    }

    int num_inputs = max_input + 1;
    if (inputs_hint >= 0) {
        if (inputs_hint < num_inputs) {
            throw std::runtime_error("declared input count is smaller than a leaf index used");
        }
        num_inputs = static_cast<int>(inputs_hint);
    }
    return QnnProgram(m, num_inputs, std::move(leaves), std::move(layers));
}

inline std::string qnn_to_string(const QnnProgram& q) {
    std::ostringstream out;
    write_qnn(out, q);
    return out.str();
}

inline QnnProgram qnn_from_string(const std::string& text) {
    std::istringstream in(text);
    return read_qnn(in);
}

/// Per-entry quantization of every block in every layer. The dissipative
/// parameters are untouched; the result is generally no longer exactly
/// unitary, which is the point of the precision experiments.
inline QnnProgram quantize(const QnnProgram& q, int p) {
    std::vector<QnnLayer> layers;
    layers.reserve(q.layers().size());
    for (const QnnLayer& layer : q.layers()) {
        std::vector<UnitaryMatrix> blocks;
        blocks.reserve(layer.unitary.blocks().size());
        for (const UnitaryMatrix& block : layer.unitary.blocks()) {
            blocks.push_back(quantize(block, p));
        }
        layers.push_back(QnnLayer{layer.level, BlockBandedUnitary(std::move(blocks)), layer.dgate,
                                  layer.sink_qubits});
    }
    return QnnProgram(q.m(), q.num_inputs(), q.leaves(), std::move(layers));
}

}  // namespace qnnsim
