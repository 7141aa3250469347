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
 * Constructive equivalences between the classical gate families.
 *
 * Each pass rewrites a circuit over one gate kind into an equivalent
 * circuit over another:
 *
 *   th_gate_to_ec / tc_to_ec   threshold -> equality-test, via per-value
 *                              checkers (merged or naive variant)
 *   et_gate_to_tc / ec_to_tc   equality-test -> weighted threshold, via a
 *                              positive/negative half pair
 *   weighted_tc_to_tc          weighted -> unit-weight threshold, via input
 *                              complementation and edge duplication
 *   nand_circuit_to_ec         NAND -> the fixed gate ET(1,1,-2)
 *
 * All passes preserve the boolean function on every assignment, which the
 * test suite checks exhaustively; BoundsReport records the exact size,
 * depth, and weight cost of a rewrite.
 */

#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qnnsim/circuit.hpp"

namespace qnnsim {

/// Exact cost accounting for one rewrite, before and after.
struct BoundsReport {
    int size_before = 0;
    int size_after = 0;
    int depth_before = 0;
    int depth_after = 0;
    std::int64_t weight_before = 0;
    std::int64_t weight_after = 0;
};

inline BoundsReport make_bounds_report(const BoolCircuit& before, const BoolCircuit& after) {
    return BoundsReport{before.size(), after.size(),   before.depth(),
                        after.depth(), before.weight_bound(), after.weight_bound()};
}

inline void write_bounds_report(std::ostream& out, const BoundsReport& r) {
    out << "size " << r.size_before << " -> " << r.size_after << "\n"
        << "depth " << r.depth_before << " -> " << r.depth_after << "\n"
        << "weight_bound " << r.weight_before << " -> " << r.weight_after << "\n";
}

namespace detail {

inline void require_kinds(const BoolCircuit& c, std::initializer_list<NodeKind> allowed,
                          const char* pass) {
    for (const Node& n : c.nodes()) {
        if (!is_gate_kind(n.kind)) {
            continue;
        }
        bool ok = false;
        for (NodeKind k : allowed) {
            ok = ok || n.kind == k;
        }
        if (!ok) {
            throw std::invalid_argument(std::string(pass) + ": unsupported gate kind in input");
        }
    }
}

/// Shared machinery for passes that copy leaves and then emit fresh gates.
class CircuitBuilder {
  public:
    explicit CircuitBuilder(const BoolCircuit& source)
        : source_(source), leaf_map_(source.nodes().size(), -1) {}

    int leaf(int old_id) {
        if (leaf_map_[static_cast<std::size_t>(old_id)] < 0) {
            nodes_.push_back(source_.node(old_id));
            leaf_map_[static_cast<std::size_t>(old_id)] = last();
        }
        return leaf_map_[static_cast<std::size_t>(old_id)];
    }
    int const0() {
        if (const0_ < 0) {
            nodes_.push_back(Node::make_const0());
            const0_ = last();
        }
        return const0_;
    }
    int const1() {
        if (const1_ < 0) {
            nodes_.push_back(Node::make_const1());
            const1_ = last();
        }
        return const1_;
    }
    int add(Node n) {
        nodes_.push_back(std::move(n));
        return last();
    }
    BoolCircuit finish(std::vector<int> outputs) {
        return BoolCircuit(source_.num_inputs(), std::move(nodes_), std::move(outputs));
    }

  private:
    int last() const { return static_cast<int>(nodes_.size()) - 1; }

    const BoolCircuit& source_;
    std::vector<Node> nodes_;
    std::vector<int> leaf_map_;
    int const0_ = -1;
    int const1_ = -1;
};

/// Emits the per-value checkers for one threshold comparison: checker v
/// tests (weighted operand sum) == v, for v = 0..threshold-1. Returns the
/// checker node ids. A trigger count of 0 means the comparison always holds.
inline std::vector<int> emit_checkers(CircuitBuilder& b, std::int64_t threshold,
                                      const std::vector<std::pair<int, std::int64_t>>& operands) {
    std::vector<int> checkers;
    for (std::int64_t v = 0; v < threshold; ++v) {
        std::vector<int> preds;
        std::vector<std::int64_t> weights;
        for (const auto& [id, w] : operands) {
            preds.push_back(id);
            weights.push_back(w);
        }
        if (v > 0) {
            preds.push_back(b.const1());
            weights.push_back(-v);
        }
        checkers.push_back(b.add(Node::make_et(std::move(preds), std::move(weights))));
    }
    return checkers;
}

/// Emits the summing gate over a checker set: outputs 1 iff no checker
/// detected a below-threshold sum, i.e. iff the simulated gate fires.
inline int emit_summing_gate(CircuitBuilder& b, const std::vector<int>& checkers) {
    std::vector<int> preds;
    std::vector<std::int64_t> weights;
    for (int id : checkers) {
        preds.push_back(id);
        weights.push_back(1);
    }
    std::int64_t offset = static_cast<std::int64_t>(checkers.size()) - 1;
    if (offset != 0) {
        preds.push_back(b.const1());
        weights.push_back(-offset);
    }
    return b.add(Node::make_et(std::move(preds), std::move(weights)));
}

}  // namespace detail

/// Simulates the single gate TH(threshold) over `fanin` inputs by a depth-2
/// equality-test fragment: one checker per value below the threshold, plus a
/// summing gate that fires unless some checker detected such a value.
inline BoolCircuit th_gate_to_ec(std::int64_t threshold, int fanin) {
    if (fanin < 0 || threshold < 0 || threshold > fanin) {
        throw std::invalid_argument("th_gate_to_ec needs 0 <= threshold <= fanin");
    }
    std::vector<Node> nodes;
    std::vector<int> inputs;
    for (int i = 0; i < fanin; ++i) {
        nodes.push_back(Node::make_input(i));
        inputs.push_back(i);
    }
    int const1 = -1;
    auto get_const1 = [&]() {
        if (const1 < 0) {
            nodes.push_back(Node::make_const1());
            const1 = static_cast<int>(nodes.size()) - 1;
        }
        return const1;
    };
    std::vector<int> checkers;
    for (std::int64_t v = 0; v < threshold; ++v) {
        std::vector<int> preds(inputs);
        std::vector<std::int64_t> weights(inputs.size(), 1);
        if (v > 0) {
            preds.push_back(get_const1());
            weights.push_back(-v);
        }
        nodes.push_back(Node::make_et(std::move(preds), std::move(weights)));
        checkers.push_back(static_cast<int>(nodes.size()) - 1);
    }
    std::vector<int> preds(checkers);
    std::vector<std::int64_t> weights(checkers.size(), 1);
    std::int64_t offset = static_cast<std::int64_t>(checkers.size()) - 1;
    if (offset != 0) {
        preds.push_back(get_const1());
        weights.push_back(-offset);
    }
    nodes.push_back(Node::make_et(std::move(preds), std::move(weights)));
    int out = static_cast<int>(nodes.size()) - 1;
    return BoolCircuit(fanin, std::move(nodes), {out});
}

enum class TcToEcVariant {
    kMerged,  // checkers read predecessor checkers; depth d+1
    kNaive,   // per-gate replacement; depth up to 2d
};

/// Rewrites a unit-weight threshold circuit into an equality-test circuit.
///
/// The merged variant gives each gate only its checkers and folds the
/// predecessor offsets into the checker comparison constants: a gate's
/// checkers read its predecessors' checker outputs, whose sum understates
/// the predecessor values by a known constant, so the gate threshold is
/// adjusted by sum(D'_pred - 1). Adjusted thresholds that fall below zero
/// mark a provably constant-1 gate and clamp to zero checkers. Output gates
/// additionally get a summing gate, for total depth d+1.
inline BoolCircuit tc_to_ec(const BoolCircuit& c, TcToEcVariant variant = TcToEcVariant::kMerged) {
    detail::require_kinds(c, {NodeKind::kTh}, "tc_to_ec");
    detail::CircuitBuilder b(c);

    if (variant == TcToEcVariant::kNaive) {
        // Independent per-gate replacement: each gate's summing output is a
        // bit, so consumers can read it directly.
        std::vector<int> value_of(c.nodes().size(), -1);
        for (std::size_t i = 0; i < c.nodes().size(); ++i) {
            const Node& n = c.node(static_cast<int>(i));
            if (!is_gate_kind(n.kind)) {
                value_of[i] = b.leaf(static_cast<int>(i));
                continue;
            }
            std::vector<std::pair<int, std::int64_t>> operands;
            for (int p : n.preds) {
                operands.emplace_back(value_of[static_cast<std::size_t>(p)], 1);
            }
            std::vector<int> checkers = detail::emit_checkers(b, n.threshold, operands);
            value_of[i] = detail::emit_summing_gate(b, checkers);
        }
        std::vector<int> outputs;
        for (int o : c.outputs()) {
            outputs.push_back(value_of[static_cast<std::size_t>(o)]);
        }
        return b.finish(std::move(outputs));
    }

    std::vector<std::vector<int>> checkers_of(c.nodes().size());
    std::vector<std::int64_t> adjusted(c.nodes().size(), 0);
    for (std::size_t i = 0; i < c.nodes().size(); ++i) {
        const Node& n = c.node(static_cast<int>(i));
        if (!is_gate_kind(n.kind)) {
            continue;
        }
        std::int64_t t = n.threshold;
        std::vector<std::pair<int, std::int64_t>> operands;
        for (int p : n.preds) {
            if (is_gate_kind(c.node(p).kind)) {
                t += adjusted[static_cast<std::size_t>(p)] - 1;
                for (int ch : checkers_of[static_cast<std::size_t>(p)]) {
                    operands.emplace_back(ch, 1);
                }
            } else {
                operands.emplace_back(b.leaf(p), 1);
            }
        }
        if (t < 0) {
            t = 0;  // the gate is constant 1 regardless of its inputs
        }
        adjusted[i] = t;
        checkers_of[i] = detail::emit_checkers(b, t, operands);
    }
    std::map<int, int> summed;
    std::vector<int> outputs;
    for (int o : c.outputs()) {
        if (!is_gate_kind(c.node(o).kind)) {
            outputs.push_back(b.leaf(o));
            continue;
        }
        auto it = summed.find(o);
        if (it == summed.end()) {
            it = summed.emplace(o, detail::emit_summing_gate(b, checkers_of[static_cast<std::size_t>(o)]))
                     .first;
        }
        outputs.push_back(it->second);
    }
    return b.finish(std::move(outputs));
}

/// Simulates one equality-test gate by three weighted threshold gates: the
/// halves detect a positive and a negative weighted sum, and the top gate
/// ORs them. The weight bound is unchanged.
inline BoolCircuit et_gate_to_tc(const std::vector<std::int64_t>& weights) {
    int n = static_cast<int>(weights.size());
    std::vector<Node> nodes;
    std::vector<int> preds;
    for (int i = 0; i < n; ++i) {
        nodes.push_back(Node::make_input(i));
        preds.push_back(i);
    }
    std::vector<std::int64_t> neg(weights);
    for (std::int64_t& w : neg) {
        w = -w;
    }
    nodes.push_back(Node::make_wth(1, preds, weights));
    nodes.push_back(Node::make_wth(1, preds, neg));
    nodes.push_back(Node::make_th(1, {n, n + 1}));
    return BoolCircuit(n, std::move(nodes), {n + 2});
}

/// Rewrites an equality-test circuit into a weighted threshold circuit.
/// Every gate becomes a positive/negative half pair whose bit sum equals the
/// gate's value exactly, so consumer edges split into two edges of the same
/// weight with no threshold adjustment. Output gates get an ORing top gate.
/// Size is at most 2s+o, depth at most d+1, weight bound preserved.
inline BoolCircuit ec_to_tc(const BoolCircuit& c) {
    detail::require_kinds(c, {NodeKind::kEt}, "ec_to_tc");
    detail::CircuitBuilder b(c);
    std::vector<std::pair<int, int>> half_of(c.nodes().size(), {-1, -1});
    for (std::size_t i = 0; i < c.nodes().size(); ++i) {
        const Node& n = c.node(static_cast<int>(i));
        if (!is_gate_kind(n.kind)) {
            continue;
        }
        std::vector<int> preds;
        std::vector<std::int64_t> pos;
        for (std::size_t k = 0; k < n.preds.size(); ++k) {
            int p = n.preds[k];
            std::int64_t w = n.weights[k];
            if (is_gate_kind(c.node(p).kind)) {
                auto [hp, hm] = half_of[static_cast<std::size_t>(p)];
                preds.push_back(hp);
                pos.push_back(w);
                preds.push_back(hm);
                pos.push_back(w);
            } else {
                preds.push_back(b.leaf(p));
                pos.push_back(w);
            }
        }
        std::vector<std::int64_t> negw(pos);
        for (std::int64_t& w : negw) {
            w = -w;
        }
        int hp = b.add(Node::make_wth(1, preds, std::move(pos)));
        int hm = b.add(Node::make_wth(1, std::move(preds), std::move(negw)));
        half_of[i] = {hp, hm};
    }
    std::map<int, int> tops;
    std::vector<int> outputs;
    for (int o : c.outputs()) {
        if (!is_gate_kind(c.node(o).kind)) {
            outputs.push_back(b.leaf(o));
            continue;
        }
        auto it = tops.find(o);
        if (it == tops.end()) {
            auto [hp, hm] = half_of[static_cast<std::size_t>(o)];
            it = tops.emplace(o, b.add(Node::make_th(1, {hp, hm}))).first;
        }
        outputs.push_back(it->second);
    }
    return b.finish(std::move(outputs));
}

/// Rewrites a weighted threshold circuit into a unit-weight one. Negative
/// weights move to the complemented operand (w < 0 on x becomes |w| on the
/// complement, raising the threshold by |w|); gate complements are realized
/// by negating weights and replacing the threshold with 1-D; multiplicity
/// |w| becomes |w| parallel unit edges. Realized thresholds outside
/// [0, fan-in] mark constant gates and are normalized. `weight_limit` is the
/// caller's declared bound and is validated against the circuit.
inline BoolCircuit weighted_tc_to_tc(const BoolCircuit& c, std::int64_t weight_limit) {
    detail::require_kinds(c, {NodeKind::kTh, NodeKind::kWth}, "weighted_tc_to_tc");
    if (c.weight_bound() > weight_limit) {
        throw std::invalid_argument("weighted_tc_to_tc: circuit exceeds the declared weight bound");
    }
    detail::CircuitBuilder b(c);
    // Realized node ids per (node, polarity); polarity 0 is the value itself,
    // 1 its complement.
    std::map<std::pair<int, int>, int> realized;

    auto realize = [&](auto&& self, int id, int pol) -> int {
        auto key = std::make_pair(id, pol);
        auto it = realized.find(key);
        if (it != realized.end()) {
            return it->second;
        }
        const Node& n = c.node(id);
        int result;
        if (!is_gate_kind(n.kind)) {
            if (pol == 0) {
                result = b.leaf(id);
            } else {
                switch (n.kind) {
                    case NodeKind::kInput:
                        result = b.add(Node::make_input_neg(n.input));
                        break;
                    case NodeKind::kInputNeg:
                        result = b.add(Node::make_input(n.input));
                        break;
                    case NodeKind::kConst0:
                        result = b.const1();
                        break;
                    default:
                        result = b.const0();
                        break;
                }
            }
        } else {
            std::int64_t t = n.threshold;
            std::vector<std::pair<int, std::int64_t>> edges;
            for (std::size_t k = 0; k < n.preds.size(); ++k) {
                std::int64_t w = n.kind == NodeKind::kTh ? 1 : n.weights[k];
                edges.emplace_back(n.preds[k], w);
            }
            if (pol == 1) {
                // not(sum >= t) == (-sum >= 1-t)
                t = 1 - t;
                for (auto& [p, w] : edges) {
                    w = -w;
                }
            }
            std::vector<int> preds;
            for (auto& [p, w] : edges) {
                if (w == 0) {
                    continue;
                }
                int operand_pol = w > 0 ? 0 : 1;
                std::int64_t copies = w > 0 ? w : -w;
                if (w < 0) {
                    t += copies;
                }
                int operand = self(self, p, operand_pol);
                for (std::int64_t dup = 0; dup < copies; ++dup) {
                    preds.push_back(operand);
                }
            }
            if (t < 0) {
                t = 0;  // constant 1; keep the operands, the gate always fires
            }
            if (t > static_cast<std::int64_t>(preds.size())) {
                result = b.add(Node::make_th(1, {b.const0()}));  // constant 0
            } else {
                result = b.add(Node::make_th(t, std::move(preds)));
            }
            realized[key] = result;
            return result;
        }
        realized[key] = result;
        return result;
    };

    std::vector<int> outputs;
    for (int o : c.outputs()) {
        outputs.push_back(realize(realize, o, 0));
    }
    return b.finish(std::move(outputs));
}

/// Gate-for-gate NAND replacement by ET(1,1,-2) over the two operands and
/// the constant-1 leaf: the weighted sum x1 + x2 - 2 vanishes exactly on
/// (1,1). Depth is preserved and the weight bound is exactly 2.
inline BoolCircuit nand_circuit_to_ec(const BoolCircuit& c) {
    detail::require_kinds(c, {NodeKind::kNand}, "nand_circuit_to_ec");
    detail::CircuitBuilder b(c);
    std::vector<int> value_of(c.nodes().size(), -1);
    for (std::size_t i = 0; i < c.nodes().size(); ++i) {
        const Node& n = c.node(static_cast<int>(i));
        if (!is_gate_kind(n.kind)) {
            value_of[i] = b.leaf(static_cast<int>(i));
            continue;
        }
        int pa = value_of[static_cast<std::size_t>(n.preds[0])];
        int pb = value_of[static_cast<std::size_t>(n.preds[1])];
        value_of[i] = b.add(Node::make_et({pa, pb, b.const1()}, {1, 1, -2}));
    }
    std::vector<int> outputs;
    for (int o : c.outputs()) {
        outputs.push_back(value_of[static_cast<std::size_t>(o)]);
    }
    return b.finish(std::move(outputs));
}

}  // namespace qnnsim
