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
 * Boolean circuit intermediate representation.
 *
 * A circuit is a topologically ordered DAG over four gate kinds:
 *
 *   TH   unit-weight threshold: 1 iff sum x_i >= threshold
 *   WTH  weighted threshold:    1 iff sum w_i x_i >= threshold
 *   ET   equality-threshold:    0 iff sum w_i x_i == 0, else 1
 *   NAND two-input NAND
 *
 * Leaves are input references (plain or complemented) and the two constant
 * nodes. The gate-by-gate evaluator here is the ground-truth oracle that
 * every transformation and every compiled program is checked against.
 * Structural passes (open to fan-out 1, levelize to uniform depth and
 * fan-in) prepare a circuit for the layered compiler.
 */

#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qnnsim {

enum class NodeKind {
    kInput,      // reads input bit x_i
    kInputNeg,   // reads the complement 1 - x_i
    kConst0,
    kConst1,
    kTh,
    kWth,
    kEt,
    kNand,
};

inline bool is_gate_kind(NodeKind k) {
    return k == NodeKind::kTh || k == NodeKind::kWth || k == NodeKind::kEt || k == NodeKind::kNand;
}

struct Node {
    NodeKind kind = NodeKind::kConst0;
    int input = -1;                       // kInput / kInputNeg only
    std::int64_t threshold = 0;           // kTh / kWth only
    std::vector<int> preds;               // gate kinds only
    std::vector<std::int64_t> weights;    // kWth / kEt, parallel to preds

    static Node make_input(int index) { return Node{NodeKind::kInput, index, 0, {}, {}}; }
    static Node make_input_neg(int index) { return Node{NodeKind::kInputNeg, index, 0, {}, {}}; }
    static Node make_const0() { return Node{NodeKind::kConst0, -1, 0, {}, {}}; }
    static Node make_const1() { return Node{NodeKind::kConst1, -1, 0, {}, {}}; }
    static Node make_th(std::int64_t threshold, std::vector<int> preds) {
        return Node{NodeKind::kTh, -1, threshold, std::move(preds), {}};
    }
    static Node make_wth(std::int64_t threshold, std::vector<int> preds,
                         std::vector<std::int64_t> weights) {
        return Node{NodeKind::kWth, -1, threshold, std::move(preds), std::move(weights)};
    }
    static Node make_et(std::vector<int> preds, std::vector<std::int64_t> weights) {
        return Node{NodeKind::kEt, -1, 0, std::move(preds), std::move(weights)};
    }
    static Node make_nand(int a, int b) { return Node{NodeKind::kNand, -1, 0, {a, b}, {}}; }
};

class BoolCircuit {
  public:
    BoolCircuit(int num_inputs, std::vector<Node> nodes, std::vector<int> outputs)
        : num_inputs_(num_inputs), nodes_(std::move(nodes)), outputs_(std::move(outputs)) {
        validate();
    }

    int num_inputs() const { return num_inputs_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    const Node& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
    const std::vector<int>& outputs() const { return outputs_; }

    /// Number of gate nodes (leaves excluded).
    int size() const {
        int n = 0;
        for (const Node& node : nodes_) {
            n += is_gate_kind(node.kind) ? 1 : 0;
        }
        return n;
    }

    /// Longest gate chain ending at an output; leaves have depth 0.
    int depth() const {
        std::vector<int> d(nodes_.size(), 0);
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            if (!is_gate_kind(nodes_[i].kind)) {
                continue;
            }
            int longest = 0;
            for (int p : nodes_[i].preds) {
                longest = std::max(longest, d[static_cast<std::size_t>(p)]);
            }
            d[i] = longest + 1;
        }
        int out = 0;
        for (int o : outputs_) {
            out = std::max(out, d[static_cast<std::size_t>(o)]);
        }
        return out;
    }

    /// Largest |w_i| over weighted gates; unit-weight gates count as 1.
    std::int64_t weight_bound() const {
        std::int64_t bound = 1;
        for (const Node& node : nodes_) {
            if (node.kind == NodeKind::kWth || node.kind == NodeKind::kEt) {
                for (std::int64_t w : node.weights) {
                    bound = std::max(bound, w < 0 ? -w : w);
                }
            }
        }
        return bound;
    }

    /// Evaluates every node on one assignment; the returned vector is
    /// indexed by node id.
    std::vector<int> eval_nodes(const std::vector<int>& assignment) const {
        if (assignment.size() != static_cast<std::size_t>(num_inputs_)) {
            throw std::invalid_argument("assignment length must equal the input count");
        }
        for (int b : assignment) {
            if (b != 0 && b != 1) {
                throw std::invalid_argument("assignment bits must be 0 or 1");
            }
        }
        std::vector<int> val(nodes_.size(), 0);
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const Node& n = nodes_[i];
            switch (n.kind) {
                case NodeKind::kInput:
                    val[i] = assignment[static_cast<std::size_t>(n.input)];
                    break;
                case NodeKind::kInputNeg:
                    val[i] = 1 - assignment[static_cast<std::size_t>(n.input)];
                    break;
                case NodeKind::kConst0:
                    val[i] = 0;
                    break;
                case NodeKind::kConst1:
                    val[i] = 1;
                    break;
                case NodeKind::kTh: {
                    std::int64_t sum = 0;
                    for (int p : n.preds) {
                        sum += val[static_cast<std::size_t>(p)];
                    }
                    val[i] = sum >= n.threshold ? 1 : 0;
                    break;
                }
                case NodeKind::kWth: {
                    std::int64_t sum = 0;
                    for (std::size_t k = 0; k < n.preds.size(); ++k) {
                        sum += n.weights[k] * val[static_cast<std::size_t>(n.preds[k])];
                    }
                    val[i] = sum >= n.threshold ? 1 : 0;
                    break;
                }
                case NodeKind::kEt: {
                    std::int64_t sum = 0;
                    for (std::size_t k = 0; k < n.preds.size(); ++k) {
                        sum += n.weights[k] * val[static_cast<std::size_t>(n.preds[k])];
                    }
                    val[i] = sum == 0 ? 0 : 1;
                    break;
                }
                case NodeKind::kNand: {
                    int a = val[static_cast<std::size_t>(n.preds[0])];
                    int b = val[static_cast<std::size_t>(n.preds[1])];
                    val[i] = (a && b) ? 0 : 1;
                    break;
                }
            }
        }
        return val;
    }

  private:
    void validate() const {
        if (num_inputs_ < 0) {
            throw std::invalid_argument("negative input count");
        }
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const Node& n = nodes_[i];
            switch (n.kind) {
                case NodeKind::kInput:
                case NodeKind::kInputNeg:
                    if (n.input < 0 || n.input >= num_inputs_) {
                        throw std::invalid_argument("node " + std::to_string(i) +
                                                    ": input index out of range");
                    }
                    if (!n.preds.empty()) {
                        throw std::invalid_argument("node " + std::to_string(i) +
                                                    ": leaves take no predecessors");
                    }
                    break;
                case NodeKind::kConst0:
                case NodeKind::kConst1:
                    if (!n.preds.empty()) {
                        throw std::invalid_argument("node " + std::to_string(i) +
                                                    ": leaves take no predecessors");
                    }
                    break;
                case NodeKind::kTh:
                    if (!n.weights.empty()) {
                        throw std::invalid_argument("node " + std::to_string(i) +
                                                    ": TH gates have implicit unit weights");
                    }
                    if (n.threshold < 0 || n.threshold > static_cast<std::int64_t>(n.preds.size())) {
                        throw std::invalid_argument("node " + std::to_string(i) +
                                                    ": TH threshold outside [0, fan-in]");
                    }
                    break;
                case NodeKind::kWth:
                case NodeKind::kEt:
                    if (n.weights.size() != n.preds.size()) {
                        throw std::invalid_argument("node " + std::to_string(i) +
                                                    ": weight/predecessor count mismatch");
                    }
                    break;
                case NodeKind::kNand:
                    if (n.preds.size() != 2) {
                        throw std::invalid_argument("node " + std::to_string(i) +
                                                    ": NAND takes exactly two predecessors");
                    }
                    break;
            }
            for (int p : n.preds) {
                if (p < 0 || static_cast<std::size_t>(p) >= i) {
                    throw std::invalid_argument("node " + std::to_string(i) +
                                                ": predecessors must precede their consumer");
                }
            }
        }
        if (outputs_.empty()) {
            throw std::invalid_argument("circuit needs at least one output");
        }
        for (int o : outputs_) {
            if (o < 0 || static_cast<std::size_t>(o) >= nodes_.size()) {
                throw std::invalid_argument("output id out of range");
            }
        }
    }

    int num_inputs_;
    std::vector<Node> nodes_;
    std::vector<int> outputs_;
};

/// Gate-by-gate evaluation of one assignment; returns the output bits.
/// This is the oracle every transformation is validated against.
inline std::vector<int> eval_bruteforce(const BoolCircuit& c, const std::vector<int>& assignment) {
    std::vector<int> val = c.eval_nodes(assignment);
    std::vector<int> out;
    out.reserve(c.outputs().size());
    for (int o : c.outputs()) {
        out.push_back(val[static_cast<std::size_t>(o)]);
    }
    return out;
}

/// True iff both circuits compute the same function on every assignment.
/// Exhaustive over 2^n inputs; callers cap n (the CLI caps at 20).
inline bool exhaustive_equivalent(const BoolCircuit& a, const BoolCircuit& b) {
    if (a.num_inputs() != b.num_inputs() || a.outputs().size() != b.outputs().size()) {
        return false;
    }
    std::uint64_t total = std::uint64_t{1} << a.num_inputs();
    std::vector<int> x(static_cast<std::size_t>(a.num_inputs()));
    for (std::uint64_t v = 0; v < total; ++v) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = (v >> i) & 1;
        }
        if (eval_bruteforce(a, x) != eval_bruteforce(b, x)) {
            return false;
        }
    }
    return true;
}

/// Duplicates gates so every gate has fan-out exactly 1: the output becomes
/// a tree over shared leaves. Requires a single-output circuit.
inline BoolCircuit open_circuit(const BoolCircuit& c) {
    if (c.outputs().size() != 1) {
        throw std::invalid_argument("open_circuit requires a single-output circuit");
    }
    std::vector<Node> out_nodes;
    std::vector<int> leaf_map(c.nodes().size(), -1);

    // Tree-copy; leaves memoized, gates duplicated per use. Recursion depth
    // is bounded by the circuit depth.
    auto clone = [&](auto&& self, int id) -> int {
        const Node& n = c.node(id);
        if (!is_gate_kind(n.kind)) {
            if (leaf_map[static_cast<std::size_t>(id)] < 0) {
                out_nodes.push_back(n);
                leaf_map[static_cast<std::size_t>(id)] = static_cast<int>(out_nodes.size()) - 1;
            }
            return leaf_map[static_cast<std::size_t>(id)];
        }
        Node copy = n;
        for (int& p : copy.preds) {
            p = self(self, p);
        }
        out_nodes.push_back(std::move(copy));
        return static_cast<int>(out_nodes.size()) - 1;
    };
    int root = clone(clone, c.outputs()[0]);
    return BoolCircuit(c.num_inputs(), std::move(out_nodes), {root});
}

/// True iff every gate feeds at most one consumer edge and at most one
/// output slot (the shape open_circuit produces).
inline bool has_unit_fanout(const BoolCircuit& c) {
    std::vector<int> uses(c.nodes().size(), 0);
    for (const Node& n : c.nodes()) {
        for (int p : n.preds) {
            uses[static_cast<std::size_t>(p)]++;
        }
    }
    for (int o : c.outputs()) {
        uses[static_cast<std::size_t>(o)]++;
    }
    for (std::size_t i = 0; i < c.nodes().size(); ++i) {
        if (is_gate_kind(c.node(static_cast<int>(i)).kind) && uses[i] > 1) {
            return false;
        }
    }
    return true;
}

/// An opened circuit with a level assigned to every gate: the output gate is
/// level 1, every gate at level l reads its nonzero-weight operands from
/// level l+1 (or from leaves exactly when l = depth), and every gate has
/// exactly `fanin` operands after weight-0 padding.
struct LeveledCircuit {
    BoolCircuit circuit;
    int fanin = 0;              // s, a power of 2
    int depth = 0;              // d
    std::vector<int> level;     // per node id; 0 for leaves
    int output = -1;
};

/// Stretches all paths to uniform length with pass-through dummies (ET with
/// a single weight 1) and pads every gate to `fanin` operands with weight-0
/// edges from the constant-0 leaf. Input must be opened; gates must be
/// weighted kinds (ET or WTH) so zero-weight padding is expressible.
inline LeveledCircuit levelize(const BoolCircuit& c, int fanin) {
    if (c.outputs().size() != 1) {
        throw std::invalid_argument("levelize requires a single-output circuit");
    }
    if (!has_unit_fanout(c)) {
        throw std::invalid_argument("levelize requires an opened circuit");
    }
    if (fanin < 1 || (fanin & (fanin - 1)) != 0) {
        throw std::invalid_argument("fan-in must be a power of two");
    }
    for (const Node& n : c.nodes()) {
        if (n.kind == NodeKind::kTh || n.kind == NodeKind::kNand) {
            throw std::invalid_argument("levelize requires weighted gates; convert TH/NAND first");
        }
        if (is_gate_kind(n.kind) && static_cast<int>(n.preds.size()) > fanin) {
            throw std::invalid_argument("gate fan-in exceeds the requested uniform fan-in");
        }
    }

    // Height of each node's subtree in gates; leaves are 0.
    std::vector<int> height(c.nodes().size(), 0);
    for (std::size_t i = 0; i < c.nodes().size(); ++i) {
        const Node& n = c.node(static_cast<int>(i));
        if (!is_gate_kind(n.kind)) {
            continue;
        }
        int h = 0;
        for (int p : n.preds) {
            h = std::max(h, height[static_cast<std::size_t>(p)]);
        }
        height[i] = h + 1;
    }
    int root = c.outputs()[0];
    int d = height[static_cast<std::size_t>(root)];
    if (d == 0) {
        throw std::invalid_argument("levelize requires at least one gate");
    }

    std::vector<Node> out_nodes;
    std::vector<int> out_level;
    std::vector<int> leaf_map(c.nodes().size(), -1);

    auto emit_leaf = [&](int old_id) -> int {
        if (leaf_map[static_cast<std::size_t>(old_id)] < 0) {
            out_nodes.push_back(c.node(old_id));
            out_level.push_back(0);
            leaf_map[static_cast<std::size_t>(old_id)] = static_cast<int>(out_nodes.size()) - 1;
        }
        return leaf_map[static_cast<std::size_t>(old_id)];
    };
    int const0 = -1;
    auto emit_const0 = [&]() -> int {
        if (const0 < 0) {
            out_nodes.push_back(Node::make_const0());
            out_level.push_back(0);
            const0 = static_cast<int>(out_nodes.size()) - 1;
        }
        return const0;
    };
    auto pad_operands = [&](Node& n) {
        while (static_cast<int>(n.preds.size()) < fanin) {
            n.preds.push_back(emit_const0());
            n.weights.push_back(0);
        }
    };
    // Chain of pass-through dummies carrying `inner` from level `from` up to
    // level `to` (inclusive); returns the node at level `to`.
    auto stretch = [&](int inner, int from, int to) -> int {
        int cur = inner;
        for (int l = from; l >= to; --l) {
            Node dummy = Node::make_et({cur}, {1});
            pad_operands(dummy);
            out_nodes.push_back(std::move(dummy));
            out_level.push_back(l);
            cur = static_cast<int>(out_nodes.size()) - 1;
        }
        return cur;
    };

    auto place = [&](auto&& self, int old_id, int lvl) -> int {
        const Node& n = c.node(old_id);
        Node copy = n;
        for (std::size_t k = 0; k < copy.preds.size(); ++k) {
            int p = copy.preds[k];
            const Node& pn = c.node(p);
            if (is_gate_kind(pn.kind)) {
                int target = d + 1 - height[static_cast<std::size_t>(p)];
                int sub = self(self, p, target);
                copy.preds[k] = stretch(sub, target - 1, lvl + 1);
            } else if (copy.weights[k] == 0) {
                copy.preds[k] = emit_const0();  // padding edge, no stretching needed
            } else {
                copy.preds[k] = stretch(emit_leaf(p), d, lvl + 1);
            }
        }
        pad_operands(copy);
        out_nodes.push_back(std::move(copy));
        out_level.push_back(lvl);
        return static_cast<int>(out_nodes.size()) - 1;
    };
    int new_root = place(place, root, 1);

    // Emission order is children-first, which is not ascending topological
    // order for the flat vector; re-sort by descending level so the
    // BoolCircuit topological invariant holds.
    std::vector<int> order(out_nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = static_cast<int>(i);
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        bool leaf_a = out_level[static_cast<std::size_t>(a)] == 0;
        bool leaf_b = out_level[static_cast<std::size_t>(b)] == 0;
        if (leaf_a != leaf_b) {
            return leaf_a;
        }
        return out_level[static_cast<std::size_t>(a)] > out_level[static_cast<std::size_t>(b)];
    });
    std::vector<int> new_id(out_nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        new_id[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
    }
    std::vector<Node> sorted_nodes(out_nodes.size());
    std::vector<int> sorted_level(out_nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        Node n = std::move(out_nodes[static_cast<std::size_t>(order[i])]);
        for (int& p : n.preds) {
            p = new_id[static_cast<std::size_t>(p)];
        }
        sorted_nodes[i] = std::move(n);
        sorted_level[i] = out_level[static_cast<std::size_t>(order[i])];
    }

    int sorted_root = new_id[static_cast<std::size_t>(new_root)];
    return LeveledCircuit{
        BoolCircuit(c.num_inputs(), std::move(sorted_nodes), {sorted_root}),
        fanin,
        d,
        std::move(sorted_level),
        sorted_root,
    };
}

}  // namespace qnnsim
