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

#include "qnnsim/transforms.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "qnnsim/circuit.hpp"
#include "test_util.hpp"

namespace qnnsim {
namespace {

bool all_gates_are(const BoolCircuit& c, NodeKind kind) {
    for (const Node& n : c.nodes()) {
        if (is_gate_kind(n.kind) && n.kind != kind) {
            return false;
        }
    }
    return true;
}

TEST(ThGateToEc, MatchesThresholdSemanticsExhaustively) {
    for (int fanin = 0; fanin <= 4; ++fanin) {
        for (int threshold = 0; threshold <= fanin; ++threshold) {
            BoolCircuit ec = th_gate_to_ec(threshold, fanin);
            EXPECT_TRUE(all_gates_are(ec, NodeKind::kEt));
            for (std::uint64_t v = 0; v < (std::uint64_t{1} << fanin); ++v) {
                std::vector<int> bits = testutil::assignment_bits(v, fanin);
                int ones = 0;
                for (int b : bits) {
                    ones += b;
                }
                EXPECT_EQ(eval_bruteforce(ec, bits)[0], ones >= threshold ? 1 : 0)
                    << "fanin=" << fanin << " threshold=" << threshold << " v=" << v;
            }
        }
    }
}

TEST(TcToEc, BothVariantsAgreeWithOracleAndBounds) {
    std::mt19937_64 gen(0x71C);
    for (int trial = 0; trial < 25; ++trial) {
        BoolCircuit tc = testutil::random_tc(gen);
        int d = tc.depth();
        BoolCircuit merged = tc_to_ec(tc);
        BoolCircuit naive = tc_to_ec(tc, TcToEcVariant::kNaive);
        EXPECT_TRUE(all_gates_are(merged, NodeKind::kEt));
        EXPECT_TRUE(all_gates_are(naive, NodeKind::kEt));
        EXPECT_TRUE(exhaustive_equivalent(tc, merged)) << "trial " << trial;
        EXPECT_TRUE(exhaustive_equivalent(tc, naive)) << "trial " << trial;
        EXPECT_LE(merged.depth(), d + 1);
        EXPECT_LE(naive.depth(), 2 * d);
    }
}

TEST(TcToEc, ConstantThresholdEdgeCases) {
    // Threshold 0 is the constant 1 regardless of operands.
    std::vector<Node> nodes = {Node::make_input(0), Node::make_th(0, {0, 0})};
    BoolCircuit taut(1, std::move(nodes), {1});
    BoolCircuit ec = tc_to_ec(taut);
    EXPECT_EQ(eval_bruteforce(ec, {0})[0], 1);
    EXPECT_EQ(eval_bruteforce(ec, {1})[0], 1);

    // A leaf routed straight to the outputs passes through.
    BoolCircuit wire(1, {Node::make_input(0)}, {0});
    BoolCircuit wired = tc_to_ec(wire);
    EXPECT_EQ(eval_bruteforce(wired, {0})[0], 0);
    EXPECT_EQ(eval_bruteforce(wired, {1})[0], 1);
}

TEST(EtGateToTc, SplitHalvesReproduceTheEqualityTest) {
    const std::vector<std::vector<std::int64_t>> weight_sets = {
        {1}, {-1}, {1, 1, -2}, {2, -3, 1}, {4, 4, 4}, {0, 2, -2}};
    for (const auto& weights : weight_sets) {
        BoolCircuit tc = et_gate_to_tc(weights);
        int n = static_cast<int>(weights.size());
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
            std::vector<int> bits = testutil::assignment_bits(v, n);
            std::int64_t sum = 0;
            for (int i = 0; i < n; ++i) {
                sum += weights[static_cast<std::size_t>(i)] * bits[static_cast<std::size_t>(i)];
            }
            EXPECT_EQ(eval_bruteforce(tc, bits)[0], sum != 0 ? 1 : 0);
        }
    }
}

TEST(EcToTc, EquivalentWithSizeDepthWeightBounds) {
    std::mt19937_64 gen(0xEC);
    for (int trial = 0; trial < 25; ++trial) {
        BoolCircuit ec = testutil::random_ec(gen);
        BoolCircuit tc = ec_to_tc(ec);
        EXPECT_TRUE(exhaustive_equivalent(ec, tc)) << "trial " << trial;
        EXPECT_LE(tc.size(), 2 * ec.size() + ec.outputs().size());
        EXPECT_LE(tc.depth(), ec.depth() + 1);
        EXPECT_LE(tc.weight_bound(), ec.weight_bound());
        for (const Node& n : tc.nodes()) {
            EXPECT_TRUE(!is_gate_kind(n.kind) || n.kind == NodeKind::kTh ||
                        n.kind == NodeKind::kWth);
        }
    }
}

TEST(WeightedTcToTc, UnitWeightsAndEquivalence) {
    std::mt19937_64 gen(0x317C);
    for (int trial = 0; trial < 25; ++trial) {
        BoolCircuit wtc = testutil::random_wtc(gen);
        BoolCircuit tc = weighted_tc_to_tc(wtc, wtc.weight_bound());
        EXPECT_TRUE(all_gates_are(tc, NodeKind::kTh));
        EXPECT_EQ(tc.weight_bound(), 1);
        EXPECT_TRUE(exhaustive_equivalent(wtc, tc)) << "trial " << trial;
    }
    // Declared bound below the actual one is rejected.
    BoolCircuit heavy(1,
                      {Node::make_input(0), Node::make_wth(1, {0}, {3})},
                      {1});
    EXPECT_THROW(weighted_tc_to_tc(heavy, 2), std::invalid_argument);
}

TEST(WeightedTcToTc, NegationAndConstantNormalization) {
    // Negative unit weight at threshold 0: plain negation.
    BoolCircuit neg(1, {Node::make_input(0), Node::make_wth(0, {0}, {-1})}, {1});
    BoolCircuit neg_tc = weighted_tc_to_tc(neg, 1);
    EXPECT_EQ(eval_bruteforce(neg_tc, {0})[0], 1);
    EXPECT_EQ(eval_bruteforce(neg_tc, {1})[0], 0);

    // Threshold above the reachable sum: the gate is the constant 0.
    BoolCircuit never(1, {Node::make_input(0), Node::make_wth(3, {0}, {1})}, {1});
    BoolCircuit never_tc = weighted_tc_to_tc(never, 1);
    EXPECT_EQ(eval_bruteforce(never_tc, {0})[0], 0);
    EXPECT_EQ(eval_bruteforce(never_tc, {1})[0], 0);

    // Threshold at or below the minimum sum: the constant 1.
    BoolCircuit always(1, {Node::make_input(0), Node::make_wth(-4, {0}, {-2})}, {1});
    BoolCircuit always_tc = weighted_tc_to_tc(always, 2);
    EXPECT_EQ(eval_bruteforce(always_tc, {0})[0], 1);
    EXPECT_EQ(eval_bruteforce(always_tc, {1})[0], 1);
}

TEST(NandCircuitToEc, EquivalentWithWeightBoundTwo) {
    std::mt19937_64 gen(0x4A4D);
    for (int trial = 0; trial < 25; ++trial) {
        BoolCircuit nand = testutil::random_nand_circuit(gen);
        BoolCircuit ec = nand_circuit_to_ec(nand);
        EXPECT_TRUE(all_gates_are(ec, NodeKind::kEt));
        EXPECT_TRUE(exhaustive_equivalent(nand, ec)) << "trial " << trial;
        EXPECT_EQ(ec.weight_bound(), 2);
        EXPECT_EQ(ec.depth(), nand.depth());
    }
}

TEST(TransformPipeline, LoweringsComposeAcrossClasses) {
    // nand -> ec -> tc (weighted halves) -> unit tc -> ec again, value
    // preserved at every stage.
    std::mt19937_64 gen(0xC0FA);
    for (int trial = 0; trial < 10; ++trial) {
        BoolCircuit nand = testutil::random_nand_circuit(gen);
        BoolCircuit ec = nand_circuit_to_ec(nand);
        BoolCircuit wtc = ec_to_tc(ec);
        BoolCircuit tc = weighted_tc_to_tc(wtc, wtc.weight_bound());
        BoolCircuit ec2 = tc_to_ec(tc);
        EXPECT_TRUE(exhaustive_equivalent(nand, ec2)) << "trial " << trial;
    }
}

TEST(BoundsReport, RecordsBeforeAfterMetrics) {
    std::mt19937_64 gen(0xB0);
    BoolCircuit wtc = testutil::random_wtc(gen);
    BoolCircuit tc = weighted_tc_to_tc(wtc, wtc.weight_bound());
    BoundsReport r = make_bounds_report(wtc, tc);
    EXPECT_EQ(r.size_before, wtc.size());
    EXPECT_EQ(r.size_after, tc.size());
    EXPECT_EQ(r.weight_after, 1);
    std::ostringstream out;
    write_bounds_report(out, r);
    EXPECT_NE(out.str().find("weight"), std::string::npos);
}

TEST(RequireKinds, RejectsForeignGateFamilies) {
    BoolCircuit nand(1, {Node::make_input(0), Node::make_nand(0, 0)}, {1});
    EXPECT_THROW(tc_to_ec(nand), std::invalid_argument);
    EXPECT_THROW(ec_to_tc(nand), std::invalid_argument);
    EXPECT_THROW(weighted_tc_to_tc(nand, 1), std::invalid_argument);
    BoolCircuit th(1, {Node::make_input(0), Node::make_th(1, {0})}, {1});
    EXPECT_THROW(nand_circuit_to_ec(th), std::invalid_argument);
}

}  // namespace
}  // namespace qnnsim
