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
 * Exact execution of layered programs on the amplitude vector.
 *
 * A run alternates three steps per layer: the block-banded unitary mixes
 * each block, the dissipative gate decides every block's checked amplitude
 * and routes the rest of the block to the sink, and the block-local work
 * qubits are discarded so each block's result lands on the next level's
 * input slot. The readout is the probability of |0> on the last remaining
 * qubit, which an exact run drives to 0 or 1.
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qnnsim/dgate_dynamics.hpp"
#include "qnnsim/qnn_program.hpp"
#include "qnnsim/state_vector.hpp"
#include "qnnsim/unitary.hpp"

namespace qnnsim {

/// Prepares the program's input state: leaf k holds its value times the
/// input constant on amplitude index 2k, odd slots stay empty, and the
/// unused norm starts in the sink.
inline StateVector encode_program_input(const QnnProgram& prog, const std::vector<int>& bits) {
    if (bits.size() != static_cast<std::size_t>(prog.num_inputs())) {
        throw std::invalid_argument("input bit count does not match the program");
    }
    for (int b : bits) {
        if (b != 0 && b != 1) {
            throw std::invalid_argument("input bits must be 0 or 1");
        }
    }
    double unit = prog.input_amp();
    std::size_t num_qubits = static_cast<std::size_t>(prog.num_qubits());
    std::vector<amplitude> amps(std::size_t{1} << num_qubits, amplitude{0.0, 0.0});
    double live = 0.0;
    const auto& leaves = prog.leaves();
    for (std::size_t k = 0; k < leaves.size(); ++k) {
        int v;
        switch (leaves[k].kind) {
            case LeafKind::kInput:
                v = bits[static_cast<std::size_t>(leaves[k].input)];
                break;
            case LeafKind::kInputNeg:
                v = 1 - bits[static_cast<std::size_t>(leaves[k].input)];
                break;
            case LeafKind::kConst1:
                v = 1;
                break;
            default:
                v = 0;
                break;
        }
        if (v == 1) {
            amps[2 * k] = amplitude{unit, 0.0};
            live += unit * unit;
        }
    }
    double sink = live < 1.0 ? 1.0 - live : 0.0;
    return StateVector(num_qubits, std::move(amps), sink);
}

/// Applies one dissipative gate across all blocks of 2^(m+1) amplitudes.
/// Each block's checked amplitude (local index 0) collapses to 0 when its
/// magnitude is at or below the threshold and to the output constant when
/// above; every other amplitude in the block is routed to the sink. In flow
/// mode the decision comes from integrating the amplitude equation and
/// thresholding the result, which agrees with the ideal rule whenever the
/// input sits outside the dead band around the threshold.
inline StateVector apply_dgate(const StateVector& s, const DGateSpec& gate, int m,
                               DMode mode_override,
                               const DGateDynamics* dynamics = nullptr) {
    if (m < 1) {
        throw std::invalid_argument("dissipative gate needs at least one work qubit");
    }
    std::size_t span = std::size_t{1} << (m + 1);
    std::size_t dim = s.amps().size();
    if (dim % span != 0) {
        throw std::invalid_argument("state dimension is not a multiple of the block size");
    }
    DGateDynamics local{};
    if (mode_override == DMode::kOde && dynamics == nullptr) {
        local = dynamics_for_threshold(gate.delta);
        dynamics = &local;
    }

    std::vector<amplitude> out(dim, amplitude{0.0, 0.0});
    double live = 0.0;
    for (std::size_t base = 0; base < dim; base += span) {
        amplitude checked = s.amps()[base];
        bool fires;
        if (mode_override == DMode::kIdeal) {
            fires = std::abs(checked) > gate.delta;
        } else {
            std::vector<TrajectoryPoint> traj =
                integrate_amplitude(checked, *dynamics, dynamics->t_end);
            fires = std::abs(traj.back().a) > gate.delta;
        }
        if (fires) {
            out[base] = amplitude{gate.c_out, 0.0};
            live += gate.c_out * gate.c_out;
        }
    }
    double sink = live < 1.0 ? 1.0 - live : 0.0;
    return StateVector(s.num_qubits(), std::move(out), sink);
}

inline StateVector apply_dgate(const StateVector& s, const DGateSpec& gate, int m) {
    return apply_dgate(s, gate, m, gate.mode);
}

/// Per-layer states captured when tracing: after the unitary (before the
/// dissipative gate) and after the work qubits are discarded.
struct LayerSnapshot {
    int level;
    StateVector pre_dissipation;
    StateVector post_discard;
};

struct SimulationOptions {
    /// Overrides every layer's dissipative-gate mode when set.
    std::optional<DMode> d_mode;
    /// Quantizes all unitary entries to signed multiples of 2^-p first.
    std::optional<int> precision;
    /// Records per-layer snapshots in the result.
    bool trace = false;
};

struct SimulationResult {
    StateVector final_state;
    double p_zero = 0.0;
    int output_bit = 0;
    std::vector<LayerSnapshot> layers;
};

/// Runs the program on the given input bits. The exact run keeps the full
/// amplitude vector, so time and memory grow with 2^(m * depth + 1).
inline SimulationResult simulate(const QnnProgram& program, const std::vector<int>& bits,
                                 const SimulationOptions& options = SimulationOptions{}) {
    const QnnProgram* prog = &program;
    QnnProgram quantized = program;
    if (options.precision) {
        quantized = quantize(program, *options.precision);
        prog = &quantized;
    }
    int m = prog->m();

    StateVector state = encode_program_input(*prog, bits);
    SimulationResult result{state, 0.0, 0, {}};
    for (const QnnLayer& layer : prog->layers()) {
        state = apply_unitary(layer.unitary, state);
        std::optional<StateVector> pre;
        if (options.trace) {
            pre = state;
        }
        DMode mode = options.d_mode ? *options.d_mode : layer.dgate.mode;
        state = apply_dgate(state, layer.dgate, m, mode);
        state = discard_to_sink(state, layer.sink_qubits);
        if (options.trace) {
            result.layers.push_back(LayerSnapshot{layer.level, std::move(*pre), state});
        }
    }
    result.final_state = state;
    result.p_zero = std::norm(state.amps()[0]);
    result.output_bit = result.p_zero > 0.5 ? 1 : 0;
    return result;
}

}  // namespace qnnsim
