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

#include "qnnsim/circuit.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "qnnsim/circuit_text.hpp"
#include "test_util.hpp"

namespace qnnsim {
namespace {

BoolCircuit single_gate(Node gate, int num_inputs) {
    std::vector<Node> nodes;
    for (int i = 0; i < num_inputs; ++i) {
        nodes.push_back(Node::make_input(i));
    }
    nodes.push_back(std::move(gate));
    return BoolCircuit(num_inputs, std::move(nodes), {num_inputs});
}

TEST(BoolCircuitValidation, RejectsMalformedNodes) {
    // Predecessor referring to a later node breaks topological order.
    EXPECT_THROW(BoolCircuit(1,
                             {Node::make_input(0), Node::make_th(1, {2}),
                              Node::make_th(0, {0})},
                             {1}),
                 std::invalid_argument);
    // Unweighted threshold outside [0, fan-in].
    EXPECT_THROW(single_gate(Node::make_th(3, {0, 1}), 2), std::invalid_argument);
    EXPECT_THROW(single_gate(Node::make_th(-1, {0}), 1), std::invalid_argument);
    // Weight count must match the predecessor count.
    EXPECT_THROW(single_gate(Node::make_wth(0, {0, 1}, {1}), 2), std::invalid_argument);
    EXPECT_THROW(single_gate(Node::make_et({0}, {1, 1}), 1), std::invalid_argument);
    // Input index out of range.
    EXPECT_THROW(BoolCircuit(1, {Node::make_input(1), Node::make_th(1, {0})}, {1}),
                 std::invalid_argument);
    // Output list must be nonempty and in range.
    EXPECT_THROW(BoolCircuit(1, {Node::make_input(0)}, {}), std::invalid_argument);
    EXPECT_THROW(BoolCircuit(1, {Node::make_input(0)}, {3}), std::invalid_argument);
}

TEST(BoolCircuitEval, ThresholdGateTruthTables) {
    BoolCircuit and2 = single_gate(Node::make_th(2, {0, 1}), 2);
    BoolCircuit or2 = single_gate(Node::make_th(1, {0, 1}), 2);
    for (std::uint64_t v = 0; v < 4; ++v) {
        std::vector<int> bits = testutil::assignment_bits(v, 2);
        EXPECT_EQ(eval_bruteforce(and2, bits)[0], bits[0] & bits[1]);
        EXPECT_EQ(eval_bruteforce(or2, bits)[0], bits[0] | bits[1]);
    }
    // Threshold 0 accepts every assignment.
    BoolCircuit taut = single_gate(Node::make_th(0, {0}), 1);
    EXPECT_EQ(eval_bruteforce(taut, {0})[0], 1);
}

TEST(BoolCircuitEval, WeightedAndEqualityGates) {
    // Weight -1 with threshold 0 realizes negation.
    BoolCircuit neg = single_gate(Node::make_wth(0, {0}, {-1}), 1);
    EXPECT_EQ(eval_bruteforce(neg, {0})[0], 1);
    EXPECT_EQ(eval_bruteforce(neg, {1})[0], 0);

    // The two-input equality test x1 + x2 - 2 realizes NAND.
    std::vector<Node> nodes = {Node::make_input(0), Node::make_input(1), Node::make_const1(),
                               Node::make_et({0, 1, 2}, {1, 1, -2})};
    BoolCircuit et_nand(2, std::move(nodes), {3});
    BoolCircuit nand2 = single_gate(Node::make_nand(0, 1), 2);
    EXPECT_TRUE(exhaustive_equivalent(et_nand, nand2));
    for (std::uint64_t v = 0; v < 4; ++v) {
        std::vector<int> bits = testutil::assignment_bits(v, 2);
        EXPECT_EQ(eval_bruteforce(nand2, bits)[0], !(bits[0] && bits[1]) ? 1 : 0);
    }
}

TEST(BoolCircuitEval, DuplicatePredecessorsCountWithMultiplicity) {
    // NAND(x, x) is NOT x; the same id may appear in both slots.
    BoolCircuit notx = single_gate(Node::make_nand(0, 0), 1);
    EXPECT_EQ(eval_bruteforce(notx, {0})[0], 1);
    EXPECT_EQ(eval_bruteforce(notx, {1})[0], 0);

    // ET with x twice at weight 1 and const1 at -2 fires only on x = 1.
    std::vector<Node> nodes = {Node::make_input(0), Node::make_const1(),
                               Node::make_et({0, 0, 1}, {1, 1, -2})};
    BoolCircuit twice(1, std::move(nodes), {2});
    EXPECT_EQ(eval_bruteforce(twice, {0})[0], 1);
    EXPECT_EQ(eval_bruteforce(twice, {1})[0], 0);
}

TEST(BoolCircuitMetrics, SizeDepthWeight) {
    // x0 -> g1 = OR(x0, x1) -> g2 = WTH(3, {g1, x1}, {4, -2}).
    std::vector<Node> nodes = {Node::make_input(0), Node::make_input(1),
                               Node::make_th(1, {0, 1}),
                               Node::make_wth(3, {2, 1}, {4, -2})};
    BoolCircuit c(2, std::move(nodes), {3});
    EXPECT_EQ(c.size(), 2u);
    EXPECT_EQ(c.depth(), 2);
    EXPECT_EQ(c.weight_bound(), 4);
    // Leaves alone still report weight bound 1.
    BoolCircuit leafy(1, {Node::make_input(0), Node::make_th(1, {0})}, {1});
    EXPECT_EQ(leafy.weight_bound(), 1);
}

TEST(ExhaustiveEquivalence, DetectsDifferenceAndReflexivity) {
    BoolCircuit and2 = single_gate(Node::make_th(2, {0, 1}), 2);
    BoolCircuit or2 = single_gate(Node::make_th(1, {0, 1}), 2);
    EXPECT_TRUE(exhaustive_equivalent(and2, and2));
    EXPECT_FALSE(exhaustive_equivalent(and2, or2));
}

TEST(OpenCircuit, ProducesUnitFanoutTreePreservingValues) {
    std::mt19937_64 gen(0xA11CE);
    for (int trial = 0; trial < 20; ++trial) {
        // Opening works on single-output cones, so pin one output.
        BoolCircuit multi = testutil::random_tc(gen);
        BoolCircuit c(multi.num_inputs(), multi.nodes(), {multi.outputs()[0]});
        BoolCircuit opened = open_circuit(c);
        EXPECT_TRUE(has_unit_fanout(opened));
        EXPECT_TRUE(exhaustive_equivalent(c, opened));
        EXPECT_EQ(opened.depth(), c.depth());
    }
}

TEST(Levelize, UniformTreeKeepsValueAndShape) {
    std::mt19937_64 gen(0xBEEF);
    for (int trial = 0; trial < 20; ++trial) {
        BoolCircuit c = testutil::random_ec(gen, /*single_output=*/true);
        BoolCircuit opened = open_circuit(c);
        int max_fanin = 2;
        for (const Node& n : opened.nodes()) {
            if (is_gate_kind(n.kind)) {
                max_fanin = std::max(max_fanin, static_cast<int>(n.preds.size()));
            }
        }
        int s = 1;
        while (s < max_fanin) {
            s <<= 1;
        }
        LeveledCircuit lc = levelize(opened, s);
        EXPECT_EQ(lc.fanin, s);
        EXPECT_GE(lc.depth, opened.depth());

        // Every gate has exactly s operands; levels decrease by one along
        // each edge to a gate; leaves feed only bottom-level gates through
        // nonzero weights.
        for (std::size_t i = 0; i < lc.circuit.nodes().size(); ++i) {
            const Node& n = lc.circuit.node(static_cast<int>(i));
            if (!is_gate_kind(n.kind)) {
                continue;
            }
            EXPECT_EQ(n.preds.size(), static_cast<std::size_t>(s));
            int level = lc.level[i];
            for (std::size_t k = 0; k < n.preds.size(); ++k) {
                const Node& p = lc.circuit.node(n.preds[k]);
                if (is_gate_kind(p.kind)) {
                    EXPECT_EQ(lc.level[static_cast<std::size_t>(n.preds[k])], level + 1);
                } else if (n.weights[k] != 0) {
                    EXPECT_EQ(level, lc.depth);
                }
            }
        }

        // Value preserved on every assignment.
        BoolCircuit rooted(lc.circuit.num_inputs(), lc.circuit.nodes(), {lc.output});
        EXPECT_TRUE(exhaustive_equivalent(c, rooted));
    }
}

TEST(Levelize, RejectsUnopenedOrUnweightedCircuits) {
    // Shared fan-out must be opened first.
    std::vector<Node> nodes = {Node::make_input(0), Node::make_et({0}, {1}),
                               Node::make_et({1, 1}, {1, 1})};
    BoolCircuit shared(1, std::move(nodes), {2});
    EXPECT_THROW(levelize(shared, 2), std::invalid_argument);

    // Plain threshold gates have no weight row to embed.
    BoolCircuit th = single_gate(Node::make_th(1, {0}), 1);
    EXPECT_THROW(levelize(th, 2), std::invalid_argument);
}

TEST(CircuitText, RoundTripIsByteIdentical) {
    std::mt19937_64 gen(0xC0DE);
    for (int trial = 0; trial < 10; ++trial) {
        BoolCircuit c = testutil::random_wtc(gen);
        std::string once = circuit_to_string(c);
        BoolCircuit back = circuit_from_string(once);
        EXPECT_EQ(circuit_to_string(back), once);
        EXPECT_TRUE(exhaustive_equivalent(c, back));
    }
}

TEST(CircuitText, ParseErrorsCarryLineNumbers) {
    try {
        circuit_from_string("0 INPUT 0\n1 FROB 2\nOUTPUT 1\n");
        FAIL() << "expected parse failure";
    } catch (const std::runtime_error& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    }
    // Forward references are rejected at the use site.
    EXPECT_THROW(circuit_from_string("0 INPUT 0\n1 ET 1:2\n2 CONST1\nOUTPUT 1\n"),
                 std::runtime_error);
    // A circuit without an OUTPUT line is incomplete.
    EXPECT_THROW(circuit_from_string("0 INPUT 0\n"), std::runtime_error);
}

}  // namespace
}  // namespace qnnsim
