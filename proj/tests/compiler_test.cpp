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

#include "qnnsim/compiler.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "qnnsim/circuit.hpp"
#include "qnnsim/qnn_program.hpp"
#include "qnnsim/runtime.hpp"
#include "qnnsim/unitary.hpp"
#include "test_util.hpp"

namespace qnnsim {
namespace {

/// ET over two inputs plus the constants, computing NAND via x0 + x1 - 2.
BoolCircuit nand_equality_circuit() {
    std::vector<Node> nodes;
    nodes.push_back(Node::make_input(0));
    nodes.push_back(Node::make_input(1));
    nodes.push_back(Node::make_const1());
    nodes.push_back(Node::make_const0());
    nodes.push_back(Node::make_et({0, 1, 2, 3}, {1, 1, -2, 0}));
    return BoolCircuit(2, std::move(nodes), {4});
}

TEST(ScheduleConstants, FrozenThresholdValues) {
    EXPECT_DOUBLE_EQ(choose_delta(1, 4, 2), 0.0625);
    EXPECT_DOUBLE_EQ(choose_delta(2, 4, 2), 0.03125);
    EXPECT_DOUBLE_EQ(choose_delta(1, 1, 1), 0.5);

    EXPECT_THROW(choose_delta(0, 4, 2), std::invalid_argument);
    EXPECT_THROW(choose_delta(1, 4, 0), std::invalid_argument);
    EXPECT_THROW(choose_delta(1, 3, 1), std::invalid_argument);
}

TEST(ScheduleConstants, FrozenPrecisionValues) {
    EXPECT_EQ(required_precision(1, 2, 1), 4);
    EXPECT_EQ(required_precision(2, 4, 2), 8);
    EXPECT_EQ(required_precision(1, 1, 1), 3);

    EXPECT_THROW(required_precision(0, 2, 1), std::invalid_argument);
    EXPECT_THROW(required_precision(1, 5, 1), std::invalid_argument);
}

TEST(EcToQnn, SingleGateNandProgram) {
    QnnProgram prog = ec_to_qnn(nand_equality_circuit());

    EXPECT_EQ(prog.m(), 2);
    EXPECT_EQ(prog.depth(), 1);
    EXPECT_EQ(prog.fanin(), 4u);
    EXPECT_EQ(prog.num_qubits(), 3u);
    EXPECT_EQ(prog.num_inputs(), 2);
    EXPECT_DOUBLE_EQ(prog.input_amp(), 0.5);

    ASSERT_EQ(prog.leaves().size(), 4u);
    EXPECT_EQ(prog.leaves()[0].kind, LeafKind::kInput);
    EXPECT_EQ(prog.leaves()[0].input, 0);
    EXPECT_EQ(prog.leaves()[1].kind, LeafKind::kInput);
    EXPECT_EQ(prog.leaves()[1].input, 1);
    EXPECT_EQ(prog.leaves()[2].kind, LeafKind::kConst1);
    // The weight-0 operand never contributes and becomes a scratch slot.
    EXPECT_EQ(prog.leaves()[3].kind, LeafKind::kScratch);

    ASSERT_EQ(prog.layers().size(), 1u);
    const QnnLayer& layer = prog.layers()[0];
    EXPECT_EQ(layer.level, 1);
    ASSERT_EQ(layer.unitary.blocks().size(), 1u);
    const UnitaryMatrix& block = layer.unitary.blocks()[0];
    ASSERT_EQ(block.dim(), 8u);
    check_unitary(block, 1e-10);

    double c = 1.0 / std::sqrt(6.0);
    const double expected[8] = {c, 0.0, c, 0.0, -2.0 * c, 0.0, 0.0, 0.0};
    for (std::size_t j = 0; j < 8; ++j) {
        EXPECT_NEAR(block.at(0, j).real(), expected[j], 1e-12) << "column " << j;
        EXPECT_NEAR(block.at(0, j).imag(), 0.0, 1e-12) << "column " << j;
    }

    EXPECT_DOUBLE_EQ(layer.dgate.delta, 0.0625);
    EXPECT_DOUBLE_EQ(layer.dgate.c_out, 1.0);
    ASSERT_EQ(layer.sink_qubits.size(), 2u);
    EXPECT_EQ(layer.sink_qubits[0], 1u);
    EXPECT_EQ(layer.sink_qubits[1], 2u);
}

TEST(EcToQnn, SimulatedNandMatchesTheGateTable) {
    BoolCircuit c = nand_equality_circuit();
    QnnProgram prog = ec_to_qnn(c);
    for (int x = 0; x < 4; ++x) {
        std::vector<int> bits = testutil::assignment_bits(static_cast<std::uint64_t>(x), 2);
        SimulationResult r = simulate(prog, bits);
        EXPECT_EQ(r.output_bit, eval_bruteforce(c, bits)[0]) << "assignment " << x;
        // The dissipative gate snaps the live amplitude to exactly 0 or c_out.
        amplitude a = r.final_state.amp(0);
        EXPECT_TRUE(a == amplitude(0.0, 0.0) || a == amplitude(1.0, 0.0))
            << "assignment " << x << " amp " << a;
    }
}

TEST(EcToQnn, RejectsUnsupportedCircuits) {
    // Two outputs.
    {
        std::vector<Node> nodes;
        nodes.push_back(Node::make_input(0));
        nodes.push_back(Node::make_et({0}, {1}));
        nodes.push_back(Node::make_et({0}, {-1}));
        BoolCircuit c(1, std::move(nodes), {1, 2});
        EXPECT_THROW(ec_to_qnn(c), std::invalid_argument);
    }
    // Wrong gate kind.
    {
        std::vector<Node> nodes;
        nodes.push_back(Node::make_input(0));
        nodes.push_back(Node::make_th(1, {0}));
        BoolCircuit c(1, std::move(nodes), {1});
        EXPECT_THROW(ec_to_qnn(c), std::invalid_argument);
    }
    // No gate at all.
    {
        std::vector<Node> nodes;
        nodes.push_back(Node::make_input(0));
        BoolCircuit c(1, std::move(nodes), {0});
        EXPECT_THROW(ec_to_qnn(c), std::invalid_argument);
    }
}

TEST(EcToQnn, StructureFollowsTheLevelSchedule) {
    std::mt19937_64 gen(0x5CED);
    for (int trial = 0; trial < 15; ++trial) {
        BoolCircuit c = testutil::random_ec(gen, /*single_output=*/true);
        QnnProgram prog = ec_to_qnn(c);
        int d = prog.depth();
        std::size_t s = prog.fanin();
        ASSERT_GE(d, 1);

        std::size_t expected_leaves = 1;
        for (int l = 0; l < d; ++l) {
            expected_leaves *= s;
        }
        EXPECT_EQ(prog.leaves().size(), expected_leaves);

        std::size_t slots = expected_leaves / s;
        for (int i = 0; i < d; ++i) {
            const QnnLayer& layer = prog.layers()[static_cast<std::size_t>(i)];
            EXPECT_EQ(layer.level, d - i);
            EXPECT_EQ(layer.unitary.blocks().size(), slots);
            slots /= s;
            for (const UnitaryMatrix& block : layer.unitary.blocks()) {
                EXPECT_LT(unitarity_defect(block), 1e-10);
            }
            EXPECT_DOUBLE_EQ(layer.dgate.c_out,
                             std::pow(static_cast<double>(s), -0.5 * (layer.level - 1)));
            EXPECT_LT(layer.dgate.delta, layer.dgate.c_out);
            EXPECT_GT(layer.dgate.delta, 0.0);
        }
    }
}

TEST(EcToQnn, SimulationAgreesWithTheCircuitOnEveryAssignment) {
    std::mt19937_64 gen(0xE2E);
    for (int trial = 0; trial < 12; ++trial) {
        BoolCircuit c = testutil::random_ec(gen, /*single_output=*/true);
        QnnProgram prog = ec_to_qnn(c);
        int n = c.num_inputs();
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
            std::vector<int> bits = testutil::assignment_bits(x, n);
            SimulationResult r = simulate(prog, bits);
            ASSERT_EQ(r.output_bit, eval_bruteforce(c, bits)[0])
                << "trial " << trial << " assignment " << x;
        }
    }
}

TEST(ProgramInput, EncodesBitsAtEvenSlotsWithSinkBalance) {
    QnnProgram prog = ec_to_qnn(nand_equality_circuit());
    StateVector s = encode_program_input(prog, {1, 0});
    ASSERT_EQ(s.num_qubits(), 3u);
    // Leaves x0=1, x1=0, const 1, scratch at even indices 0,2,4,6.
    EXPECT_DOUBLE_EQ(s.amp(0).real(), 0.5);
    EXPECT_EQ(s.amp(2), amplitude(0.0, 0.0));
    EXPECT_DOUBLE_EQ(s.amp(4).real(), 0.5);
    EXPECT_EQ(s.amp(6), amplitude(0.0, 0.0));
    for (std::size_t i = 1; i < 8; i += 2) {
        EXPECT_EQ(s.amp(i), amplitude(0.0, 0.0));
    }
    EXPECT_DOUBLE_EQ(s.sink_prob(), 0.5);

    EXPECT_THROW(encode_program_input(prog, {1}), std::invalid_argument);
    EXPECT_THROW(encode_program_input(prog, {1, 2}), std::invalid_argument);
}

TEST(QnnRoundTrip, RecoversAnEquivalentCircuitAtCompiledDepth) {
    std::mt19937_64 gen(0x3E3);
    for (int trial = 0; trial < 10; ++trial) {
        BoolCircuit c = testutil::random_ec(gen, /*single_output=*/true);
        QnnProgram prog = ec_to_qnn(c);
        BoolCircuit rec = qnn_to_ec(prog, 8);
        EXPECT_TRUE(exhaustive_equivalent(c, rec)) << "trial " << trial;
        EXPECT_EQ(rec.depth(), prog.depth()) << "trial " << trial;
    }
}

TEST(QnnRoundTrip, ReadsDyadicRowsVerbatim) {
    // A block whose live row lies exactly on the 2^-3 grid; recovery must
    // scale the entries verbatim instead of reconstructing a direction.
    std::vector<amplitude> row(8, amplitude(0.0, 0.0));
    row[0] = row[2] = row[4] = row[6] = amplitude(0.5, 0.0);
    std::vector<LeafSlot> leaves = {LeafSlot{LeafKind::kInput, 0}, LeafSlot{LeafKind::kInput, 1},
                                    LeafSlot{LeafKind::kInput, 2}, LeafSlot{LeafKind::kInput, 3}};
    QnnProgram prog(2, 4, leaves,
                    {QnnLayer{1, assemble_block_banded({complete_orthonormal_block(row)}),
                              DGateSpec{0.125, 1.0, DMode::kIdeal},
                              {1, 2}}});
    BoolCircuit rec = qnn_to_ec(prog, 3);

    std::vector<Node> nodes;
    for (int i = 0; i < 4; ++i) {
        nodes.push_back(Node::make_input(i));
    }
    nodes.push_back(Node::make_et({0, 1, 2, 3}, {1, 1, 1, 1}));
    BoolCircuit expected(4, std::move(nodes), {4});
    EXPECT_TRUE(exhaustive_equivalent(rec, expected));
}

TEST(QnnRoundTrip, CombinesComplexGridWeightsIntoOneTest) {
    // Complex dyadic row: zero requires both the real and the imaginary
    // weighted sums to vanish, folded into a single integer weight.
    std::vector<amplitude> row = {amplitude(0.5, 0.5), amplitude(0.0, 0.0),
                                  amplitude(0.5, -0.5), amplitude(0.0, 0.0)};
    std::vector<LeafSlot> leaves = {LeafSlot{LeafKind::kInput, 0}, LeafSlot{LeafKind::kInput, 1}};
    QnnProgram prog(1, 2, leaves,
                    {QnnLayer{1, assemble_block_banded({complete_orthonormal_block(row)}),
                              DGateSpec{0.25, 1.0, DMode::kIdeal},
                              {1}}});
    BoolCircuit rec = qnn_to_ec(prog, 4);

    std::vector<Node> nodes;
    nodes.push_back(Node::make_input(0));
    nodes.push_back(Node::make_input(1));
    nodes.push_back(Node::make_et({0, 1}, {1, 1}));
    BoolCircuit expected(2, std::move(nodes), {2});
    EXPECT_TRUE(exhaustive_equivalent(rec, expected));

    // Behavioral cross-check against the simulator.
    for (std::uint64_t x = 0; x < 4; ++x) {
        std::vector<int> bits = testutil::assignment_bits(x, 2);
        EXPECT_EQ(simulate(prog, bits).output_bit, eval_bruteforce(expected, bits)[0]);
    }
}

TEST(QnnRoundTrip, RejectsNonCanonicalPrograms) {
    std::vector<LeafSlot> leaves = {LeafSlot{LeafKind::kInput, 0}, LeafSlot{LeafKind::kInput, 1}};
    double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    // Live row touching an odd (scratch) slot.
    {
        std::vector<amplitude> row = {amplitude(inv_sqrt2, 0.0), amplitude(inv_sqrt2, 0.0),
                                      amplitude(0.0, 0.0), amplitude(0.0, 0.0)};
        QnnProgram prog(1, 2, leaves,
                        {QnnLayer{1, assemble_block_banded({complete_orthonormal_block(row)}),
                                  DGateSpec{0.25, 1.0, DMode::kIdeal},
                                  {1}}});
        EXPECT_THROW(qnn_to_ec(prog, 8), std::invalid_argument);
    }
    // Off-grid complex entries cannot be reconstructed.
    {
        std::vector<amplitude> row = {amplitude(std::cos(0.7) * inv_sqrt2,
                                                std::sin(0.7) * inv_sqrt2),
                                      amplitude(0.0, 0.0), amplitude(inv_sqrt2, 0.0),
                                      amplitude(0.0, 0.0)};
        QnnProgram prog(1, 2, leaves,
                        {QnnLayer{1, assemble_block_banded({complete_orthonormal_block(row)}),
                                  DGateSpec{0.25, 1.0, DMode::kIdeal},
                                  {1}}});
        EXPECT_THROW(qnn_to_ec(prog, 8), std::invalid_argument);
    }
    // A real row that is no integer direction at all.
    {
        std::vector<amplitude> row = {amplitude(std::cos(0.7), 0.0), amplitude(0.0, 0.0),
                                      amplitude(std::sin(0.7), 0.0), amplitude(0.0, 0.0)};
        QnnProgram prog(1, 2, leaves,
                        {QnnLayer{1, assemble_block_banded({complete_orthonormal_block(row)}),
                                  DGateSpec{0.25, 1.0, DMode::kIdeal},
                                  {1}}});
        EXPECT_THROW(qnn_to_ec(prog, 8), std::invalid_argument);
    }

    QnnProgram prog = ec_to_qnn(nand_equality_circuit());
    EXPECT_THROW(qnn_to_ec(prog, 0), std::invalid_argument);
    EXPECT_THROW(qnn_to_ec(prog, 53), std::invalid_argument);
}

TEST(ProgramText, RoundTripIsByteIdentical) {
    QnnProgram prog = ec_to_qnn(nand_equality_circuit());
    std::string first = qnn_to_string(prog);
    QnnProgram reread = qnn_from_string(first);
    EXPECT_EQ(qnn_to_string(reread), first);

    EXPECT_THROW(qnn_from_string("qnn m=2\n"), std::runtime_error);
    EXPECT_THROW(qnn_from_string("qnn m=2 d=1\ninputs x0\n"), std::runtime_error);
}

TEST(ProgramRewrites, ModeSwitchAndGridSnapping) {
    QnnProgram prog = ec_to_qnn(nand_equality_circuit());
    QnnProgram ode = with_d_mode(prog, DMode::kOde);
    for (const QnnLayer& layer : ode.layers()) {
        EXPECT_EQ(layer.dgate.mode, DMode::kOde);
    }
    EXPECT_DOUBLE_EQ(ode.layers()[0].dgate.delta, prog.layers()[0].dgate.delta);

    QnnProgram q = quantize(prog, 8);
    double scale = 256.0;
    for (const QnnLayer& layer : q.layers()) {
        for (const UnitaryMatrix& block : layer.unitary.blocks()) {
            for (std::size_t r = 0; r < block.dim(); ++r) {
                for (std::size_t col = 0; col < block.dim(); ++col) {
                    double re = block.at(r, col).real() * scale;
                    double im = block.at(r, col).imag() * scale;
                    EXPECT_NEAR(re, std::round(re), 1e-9);
                    EXPECT_NEAR(im, std::round(im), 1e-9);
                }
            }
        }
    }
}

}  // namespace
}  // namespace qnnsim
