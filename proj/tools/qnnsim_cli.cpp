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

// Command-line front end for batch compilation, simulation, verification,
// dissipation planning, and input encoding. Every command is deterministic
// for a given flag set (sampled verification takes an explicit seed), and
// every produced file starts with a comment recording the tool version and
// the exact invocation, so experiment trails replay byte for byte.
//
// Exit codes: 0 on success, 1 when verification finds a mismatch, 2 on any
// input or usage error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qnnsim/circuit.hpp"
#include "qnnsim/circuit_text.hpp"
#include "qnnsim/compiler.hpp"
#include "qnnsim/dgate_dynamics.hpp"
#include "qnnsim/encoder.hpp"
#include "qnnsim/qnn_program.hpp"
#include "qnnsim/runtime.hpp"
#include "qnnsim/state_vector.hpp"
#include "qnnsim/transforms.hpp"
#include "qnnsim/unitary.hpp"
#include "qnnsim/version.hpp"

namespace {

using nlohmann::ordered_json;
using namespace qnnsim;

std::string quote_arg(const std::string& arg) {
    if (arg.find_first_of(" \t\"") == std::string::npos) {
        return arg;
    }
    std::string quoted = "\"";
    for (char ch : arg) {
        if (ch == '"') {
            quoted += '\\';
        }
        quoted += ch;
    }
    return quoted + '"';
}

/// Two comment lines placed at the top of every output: tool version and the
/// exact command line.
std::string file_header(const std::vector<std::string>& argv_tokens) {
    std::string line;
    for (const std::string& tok : argv_tokens) {
        if (!line.empty()) {
            line += ' ';
        }
        line += quote_arg(tok);
    }
    return std::string("# ") + kToolName + ' ' + kVersion + "\n# " + line + '\n';
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open input file: " + path);
    }
    return in;
}

void write_output_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open output file: " + path);
    }
    out << content;
    if (!out) {
        throw std::runtime_error("failed writing output file: " + path);
    }
}

std::vector<int> parse_bitstring(const std::string& text) {
    std::vector<int> bits;
    bits.reserve(text.size());
    for (char ch : text) {
        if (ch != '0' && ch != '1') {
            throw std::invalid_argument("bitstring may contain only 0 and 1");
        }
        bits.push_back(ch - '0');
    }
    if (bits.empty()) {
        throw std::invalid_argument("bitstring must not be empty");
    }
    return bits;
}

std::string bits_to_string(const std::vector<int>& bits) {
    std::string text;
    for (int b : bits) {
        text += static_cast<char>('0' + b);
    }
    return text;
}

const char* kind_name(NodeKind kind) {
    switch (kind) {
        case NodeKind::kInput:
            return "INPUT";
        case NodeKind::kInputNeg:
            return "INPUTN";
        case NodeKind::kConst0:
            return "CONST0";
        case NodeKind::kConst1:
            return "CONST1";
        case NodeKind::kTh:
            return "TH";
        case NodeKind::kWth:
            return "WTH";
        case NodeKind::kEt:
            return "ET";
        default:
            return "NAND";
    }
}

ordered_json circuit_to_json(const BoolCircuit& c) {
    ordered_json nodes = ordered_json::array();
    for (std::size_t i = 0; i < c.nodes().size(); ++i) {
        const Node& n = c.node(static_cast<int>(i));
        ordered_json jn;
        jn["id"] = i;
        jn["kind"] = kind_name(n.kind);
        if (n.kind == NodeKind::kInput || n.kind == NodeKind::kInputNeg) {
            jn["input"] = n.input;
        }
        if (is_gate_kind(n.kind)) {
            if (n.kind != NodeKind::kNand) {
                jn["threshold"] = n.threshold;
            }
            jn["preds"] = n.preds;
            if (!n.weights.empty()) {
                jn["weights"] = n.weights;
            }
        }
        nodes.push_back(std::move(jn));
    }
    ordered_json j;
    j["format"] = "circuit";
    j["version"] = kVersion;
    j["inputs"] = c.num_inputs();
    j["nodes"] = std::move(nodes);
    j["outputs"] = c.outputs();
    return j;
}

ordered_json matrix_to_json(const UnitaryMatrix& u) {
    ordered_json rows = ordered_json::array();
    for (std::size_t r = 0; r < u.dim(); ++r) {
        ordered_json row = ordered_json::array();
        for (std::size_t col = 0; col < u.dim(); ++col) {
            row.push_back({u.at(r, col).real(), u.at(r, col).imag()});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ordered_json qnn_to_json(const QnnProgram& q) {
    ordered_json leaves = ordered_json::array();
    for (const LeafSlot& leaf : q.leaves()) {
        leaves.push_back(detail::leaf_token(leaf));
    }
    ordered_json layers = ordered_json::array();
    for (const QnnLayer& layer : q.layers()) {
        ordered_json blocks = ordered_json::array();
        for (const UnitaryMatrix& b : layer.unitary.blocks()) {
            blocks.push_back(matrix_to_json(b));
        }
        ordered_json jl;
        jl["level"] = layer.level;
        jl["blocks"] = std::move(blocks);
        jl["dgate"] = {{"delta", layer.dgate.delta},
                       {"cout", layer.dgate.c_out},
                       {"mode", layer.dgate.mode == DMode::kIdeal ? "ideal" : "ode"}};
        jl["sink"] = layer.sink_qubits;
        layers.push_back(std::move(jl));
    }
    ordered_json j;
    j["format"] = "qnn";
    j["version"] = kVersion;
    j["m"] = q.m();
    j["fanin"] = q.fanin();
    j["depth"] = q.depth();
    j["inputs"] = q.num_inputs();
    j["leaves"] = std::move(leaves);
    j["layers"] = std::move(layers);
    return j;
}

ordered_json state_to_json(const StateVector& s) {
    ordered_json amps = ordered_json::array();
    for (std::size_t i = 0; i < s.dim(); ++i) {
        const amplitude& a = s.amp(i);
        if (a != amplitude{0.0, 0.0}) {
            amps.push_back({{"index", i}, {"re", a.real()}, {"im", a.imag()}});
        }
    }
    ordered_json j;
    j["format"] = "state";
    j["qubits"] = s.num_qubits();
    j["amps"] = std::move(amps);
    j["sink"] = s.sink_prob();
    return j;
}

std::string json_text(const ordered_json& j) { return j.dump(2) + '\n'; }

// --- compile ---------------------------------------------------------------

struct CompileArgs {
    std::string from;
    std::string to;
    std::string input;
    std::string output;
    std::string report;
    std::string variant = "merged";
    bool json = false;
};

/// Per-level threshold, output constant, and grid precision for a compiled
/// program, written when --report is given on a qnn compile.
std::string qnn_schedule_report(const QnnProgram& prog, std::int64_t weight_bound,
                                const std::string& header) {
    std::ostringstream out;
    out << header;
    out << "fanin " << prog.fanin() << '\n';
    out << "m " << prog.m() << '\n';
    out << "depth " << prog.depth() << '\n';
    out << "weight_bound " << weight_bound << '\n';
    for (const QnnLayer& layer : prog.layers()) {
        out << "level " << layer.level << " delta " << detail::format_real(layer.dgate.delta)
            << " cout " << detail::format_real(layer.dgate.c_out) << " precision "
            << required_precision(layer.level, static_cast<int>(prog.fanin()), weight_bound)
            << '\n';
    }
    return out.str();
}

int run_compile(const CompileArgs& args, const std::string& header) {
    std::ifstream in = open_input(args.input);
    BoolCircuit circuit = read_circuit(in);
    std::string route = args.from + "->" + args.to;

    if (args.to == "qnn") {
        if (args.from != "ec") {
            throw std::invalid_argument("unsupported conversion: " + route);
        }
        QnnProgram prog = ec_to_qnn(circuit);
        if (args.json) {
            write_output_file(args.output, json_text(qnn_to_json(prog)));
        } else {
            std::ostringstream out;
            write_qnn(out, prog, header);
            write_output_file(args.output, out.str());
        }
        if (!args.report.empty()) {
            write_output_file(args.report,
                              qnn_schedule_report(prog, circuit.weight_bound(), header));
        }
        return 0;
    }

    std::optional<BoolCircuit> result;
    if (args.from == "tc" && args.to == "ec") {
        TcToEcVariant variant =
            args.variant == "naive" ? TcToEcVariant::kNaive : TcToEcVariant::kMerged;
        result = tc_to_ec(circuit, variant);
    } else if (args.from == "wtc" && args.to == "tc") {
        result = weighted_tc_to_tc(circuit, circuit.weight_bound());
    } else if (args.from == "ec" && args.to == "tc") {
        result = ec_to_tc(circuit);
    } else if (args.from == "nand" && args.to == "ec") {
        result = nand_circuit_to_ec(circuit);
    } else {
        throw std::invalid_argument("unsupported conversion: " + route);
    }

    if (args.json) {
        write_output_file(args.output, json_text(circuit_to_json(*result)));
    } else {
        std::ostringstream out;
        write_circuit(out, *result, header);
        write_output_file(args.output, out.str());
    }
    if (!args.report.empty()) {
        BoundsReport bounds = make_bounds_report(circuit, *result);
        std::ostringstream out;
        out << header;
        write_bounds_report(out, bounds);
        write_output_file(args.report, out.str());
    }
    return 0;
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
    std::string program;
    std::string input;
    std::string d_mode = "program";
    int precision = 0;
    bool trace = false;
    bool json = false;
};

int run_simulate(const SimulateArgs& args, const std::string& header) {
    std::ifstream in = open_input(args.program);
    QnnProgram prog = read_qnn(in);
    std::vector<int> bits = parse_bitstring(args.input);

    SimulationOptions options;
    if (args.d_mode == "ideal") {
        options.d_mode = DMode::kIdeal;
    } else if (args.d_mode == "ode") {
        options.d_mode = DMode::kOde;
    }
    if (args.precision > 0) {
        options.precision = args.precision;
    }
    options.trace = args.trace;

    SimulationResult result = simulate(prog, bits, options);

    if (args.json) {
        ordered_json j;
        j["format"] = "simulation";
        j["version"] = kVersion;
        j["input"] = bits_to_string(bits);
        j["output"] = result.output_bit;
        j["p_zero"] = result.p_zero;
        j["final_state"] = state_to_json(result.final_state);
        if (args.trace) {
            ordered_json layers = ordered_json::array();
            for (const LayerSnapshot& snap : result.layers) {
                layers.push_back({{"level", snap.level},
                                  {"pre_dissipation", state_to_json(snap.pre_dissipation)},
                                  {"post_discard", state_to_json(snap.post_discard)}});
            }
            j["layers"] = std::move(layers);
        }
        std::cout << json_text(j);
        return 0;
    }

    std::cout << header;
    if (args.trace) {
        for (const LayerSnapshot& snap : result.layers) {
            std::cout << "layer " << snap.level << " pre_dissipation\n";
            write_state(std::cout, snap.pre_dissipation);
            std::cout << "layer " << snap.level << " post_discard\n";
            write_state(std::cout, snap.post_discard);
        }
    }
    std::cout << "output " << result.output_bit << '\n';
    std::cout << "p_zero " << detail::format_real(result.p_zero) << '\n';
    std::cout << "final state\n";
    write_state(std::cout, result.final_state);
    return 0;
}

// --- verify -----------------------------------------------------------------

struct VerifyArgs {
    std::string left;
    std::string right;
    std::uint64_t samples = 0;
    std::uint64_t seed = 1;
    bool json = false;
};

/// A loaded artifact that maps an input assignment to output bits: either a
/// circuit evaluated directly or a program run through the exact simulator.
struct Evaluated {
    int num_inputs = 0;
    std::size_t num_outputs = 0;
    std::optional<BoolCircuit> circuit;
    std::optional<QnnProgram> program;

    std::vector<int> eval(const std::vector<int>& bits) const {
        if (circuit) {
            return eval_bruteforce(*circuit, bits);
        }
        return {simulate(*program, bits).output_bit};
    }
};

Evaluated load_artifact(const std::string& path) {
    std::ifstream in = open_input(path);
    // Sniff the type from the first content line: programs start with a
    // "qnn" header, circuits with a node or hint line.
    std::string line;
    std::streampos at = in.tellg();
    bool is_qnn = false;
    while (std::getline(in, line)) {
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') {
            at = in.tellg();
            continue;
        }
        is_qnn = line.compare(start, 4, "qnn ") == 0;
        break;
    }
    in.clear();
    in.seekg(0);

    Evaluated art;
    if (is_qnn) {
        art.program = read_qnn(in);
        art.num_inputs = art.program->num_inputs();
        art.num_outputs = 1;
    } else {
        art.circuit = read_circuit(in);
        art.num_inputs = art.circuit->num_inputs();
        art.num_outputs = art.circuit->outputs().size();
    }
    return art;
}

int run_verify(const VerifyArgs& args, const std::string& header) {
    Evaluated left = load_artifact(args.left);
    Evaluated right = load_artifact(args.right);
    if (left.num_inputs != right.num_inputs) {
        throw std::invalid_argument("input-arity mismatch: " + std::to_string(left.num_inputs) +
                                    " vs " + std::to_string(right.num_inputs));
    }
    if (left.num_outputs != right.num_outputs) {
        throw std::invalid_argument("output-arity mismatch");
    }
    int n = left.num_inputs;
    bool exhaustive = n <= 20 && args.samples == 0;

    struct Mismatch {
        std::vector<int> bits;
        std::vector<int> left;
        std::vector<int> right;
    };
    std::vector<Mismatch> mismatches;
    std::uint64_t checked = 0;

    auto check_one = [&](const std::vector<int>& bits) {
        std::vector<int> a = left.eval(bits);
        std::vector<int> b = right.eval(bits);
        ++checked;
        if (a != b) {
            mismatches.push_back(Mismatch{bits, std::move(a), std::move(b)});
        }
    };

    if (exhaustive) {
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
            std::vector<int> bits(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) {
                bits[static_cast<std::size_t>(i)] = static_cast<int>((v >> i) & 1);
            }
            check_one(bits);
        }
    } else {
        std::uint64_t count = args.samples == 0 ? 4096 : args.samples;
        std::mt19937_64 gen(args.seed);
        for (std::uint64_t v = 0; v < count; ++v) {
            std::vector<int> bits(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) {
                bits[static_cast<std::size_t>(i)] = static_cast<int>(gen() & 1);
            }
            check_one(bits);
        }
    }

    if (args.json) {
        ordered_json j;
        j["format"] = "verify";
        j["version"] = kVersion;
        j["left"] = args.left;
        j["right"] = args.right;
        j["inputs"] = n;
        j["mode"] = exhaustive ? "exhaustive" : "sampled";
        j["checked"] = checked;
        if (!exhaustive) {
            j["seed"] = args.seed;
        }
        ordered_json jm = ordered_json::array();
        for (const Mismatch& mm : mismatches) {
            jm.push_back({{"input", bits_to_string(mm.bits)},
                          {"left", mm.left},
                          {"right", mm.right}});
        }
        j["mismatches"] = std::move(jm);
        j["count"] = mismatches.size();
        std::cout << json_text(j);
        return mismatches.empty() ? 0 : 1;
    }

    std::cout << header;
    std::cout << "left " << args.left << '\n';
    std::cout << "right " << args.right << '\n';
    std::cout << "inputs " << n << '\n';
    if (exhaustive) {
        std::cout << "mode exhaustive " << checked << '\n';
    } else {
        std::cout << "mode sampled " << checked << " seed " << args.seed << '\n';
    }
    constexpr std::size_t kMaxListed = 16;
    for (std::size_t i = 0; i < mismatches.size() && i < kMaxListed; ++i) {
        const Mismatch& mm = mismatches[i];
        std::cout << "mismatch input=" << bits_to_string(mm.bits)
                  << " left=" << bits_to_string(mm.left)
                  << " right=" << bits_to_string(mm.right) << '\n';
    }
    if (mismatches.size() > kMaxListed) {
        std::cout << "mismatch ... " << (mismatches.size() - kMaxListed) << " more\n";
    }
    if (mismatches.empty()) {
        std::cout << "OK\n";
        return 0;
    }
    std::cout << "MISMATCH " << mismatches.size() << '\n';
    return 1;
}

// --- dgate-plan ---------------------------------------------------------

struct PlanArgs {
    double delta = 0.0;
    double delta0 = 0.0;
    double delta1 = 0.0;
    double eps = 0.0;
    double time = 0.0;
    bool json = false;
};

int run_plan(const PlanArgs& args, const std::string& header) {
    RatePlan plan = plan_rate(args.delta, args.delta0, args.delta1, args.eps, args.time);
    DGateDynamics dyn =
        make_dynamics(args.delta, args.delta0, args.delta1, args.eps, args.time);
    std::vector<TrajectoryPoint> traj =
        integrate_amplitude(amplitude{args.delta0, 0.0}, dyn, dyn.t_end);

    // The table pairs the integrated |a| with the two closed-form columns
    // that should agree along the decay branch: the implicit solution's
    // left-hand side and the exponential it equals.
    auto lhs_at = [&](double mag) -> double {
        if (mag <= 0.0 || mag >= 1.0 || mag == args.delta) {
            return std::numeric_limits<double>::quiet_NaN();
        }
        return implicit_solution_lhs(mag, args.delta0, args.delta);
    };

    if (args.json) {
        ordered_json rows = ordered_json::array();
        for (std::size_t i = 0; i < traj.size(); i += 16) {
            double mag = std::abs(traj[i].a);
            rows.push_back({{"t", traj[i].t},
                            {"abs_a", mag},
                            {"lhs", lhs_at(mag)},
                            {"exp", std::exp(-plan.rate * traj[i].t)}});
        }
        ordered_json j;
        j["format"] = "dgate-plan";
        j["version"] = kVersion;
        j["delta"] = args.delta;
        j["delta0"] = args.delta0;
        j["delta1"] = args.delta1;
        j["eps"] = args.eps;
        j["time"] = args.time;
        j["rate0"] = plan.rate0;
        j["rate1"] = plan.rate1;
        j["rate"] = plan.rate;
        j["trajectory"] = std::move(rows);
        std::cout << json_text(j);
        return 0;
    }

    std::cout << header;
    std::cout << "R0 " << detail::format_real(plan.rate0) << '\n';
    std::cout << "R1 " << detail::format_real(plan.rate1) << '\n';
    std::cout << "R " << detail::format_real(plan.rate) << '\n';
    std::cout << "t,abs_a,lhs,exp\n";
    for (std::size_t i = 0; i < traj.size(); i += 16) {
        double mag = std::abs(traj[i].a);
        std::cout << detail::format_real(traj[i].t) << ',' << detail::format_real(mag) << ','
                  << detail::format_real(lhs_at(mag)) << ','
                  << detail::format_real(std::exp(-plan.rate * traj[i].t)) << '\n';
    }
    return 0;
}

// --- encode -------------------------------------------------------------

struct EncodeArgs {
    std::string bits;
    std::string scheme = "both";
    bool json = false;
};

int run_encode(const EncodeArgs& args, const std::string& header) {
    std::vector<int> bits = parse_bitstring(args.bits);
    if ((bits.size() & (bits.size() - 1)) != 0) {
        throw std::invalid_argument("bit count must be a power of two");
    }
    double unit = 1.0 / std::sqrt(static_cast<double>(bits.size()));

    std::optional<StateVector> dense;
    std::optional<StateVector> block;
    if (args.scheme == "dense" || args.scheme == "both") {
        dense = encode_dense(bits, unit);
    }
    if (args.scheme == "block" || args.scheme == "both") {
        block = encode_with_encoder(bits);
    }

    if (args.json) {
        ordered_json j;
        j["format"] = "encode";
        j["version"] = kVersion;
        j["bits"] = args.bits;
        if (dense) {
            j["dense"] = state_to_json(*dense);
        }
        if (block) {
            j["block"] = state_to_json(*block);
        }
        std::cout << json_text(j);
        return 0;
    }

    std::cout << header;
    if (dense) {
        std::cout << "scheme dense\n";
        write_state(std::cout, *dense);
    }
    if (block) {
        std::cout << "scheme block\n";
        write_state(std::cout, *block);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> argv_tokens(argv, argv + argc);
    if (!argv_tokens.empty()) {
        argv_tokens[0] = kToolName;  // header shows the tool name, not the path
    }
    std::string header = file_header(argv_tokens);

    CLI::App app{"Compiler and exact simulator for layered dissipative programs"};
    app.require_subcommand(1);

    CompileArgs compile_args;
    CLI::App* compile = app.add_subcommand(
        "compile", "Convert between circuit classes or compile to a layered program");
    compile->add_option("--from", compile_args.from, "Source class")
        ->required()
        ->check(CLI::IsMember({"tc", "wtc", "ec", "nand"}));
    compile->add_option("--to", compile_args.to, "Target class")
        ->required()
        ->check(CLI::IsMember({"ec", "tc", "qnn"}));
    compile->add_option("input", compile_args.input, "Input circuit file")->required();
    compile->add_option("-o,--output", compile_args.output, "Output file")->required();
    compile->add_option("--report", compile_args.report,
                        "Write a size/depth/weight report (or level schedule for qnn)");
    compile->add_option("--variant", compile_args.variant, "Threshold lowering variant")
        ->check(CLI::IsMember({"naive", "merged"}))
        ->capture_default_str();
    compile->add_flag("--json", compile_args.json, "Write the output as JSON");

    SimulateArgs sim_args;
    CLI::App* sim = app.add_subcommand("simulate", "Run a program on one input assignment");
    sim->add_option("program", sim_args.program, "Program file")->required();
    sim->add_option("--input", sim_args.input,
                    "Input bits, leftmost character is input 0")
        ->required();
    sim->add_option("--d-mode", sim_args.d_mode,
                    "Dissipative gate handling: ideal, ode, or the program's own modes")
        ->check(CLI::IsMember({"ideal", "ode", "program"}))
        ->capture_default_str();
    sim->add_option("--precision", sim_args.precision,
                    "Quantize unitary entries to signed multiples of 2^-p")
        ->check(CLI::Range(1, 52));
    sim->add_flag("--trace", sim_args.trace, "Print per-layer states");
    sim->add_flag("--json", sim_args.json, "Print the result as JSON");

    VerifyArgs verify_args;
    CLI::App* verify = app.add_subcommand(
        "verify", "Check two artifacts (circuit or program) for boolean equivalence");
    verify->add_option("left", verify_args.left, "First artifact")->required();
    verify->add_option("right", verify_args.right, "Second artifact")->required();
    verify->add_option("--samples", verify_args.samples,
                       "Sample this many assignments instead of exhausting (forced above 20 "
                       "inputs, default 4096)");
    verify->add_option("--seed", verify_args.seed, "Seed for sampled mode")
        ->capture_default_str();
    verify->add_flag("--json", verify_args.json, "Print the report as JSON");

    PlanArgs plan_args;
    CLI::App* plan = app.add_subcommand(
        "dgate-plan", "Solve the dissipation rate for a threshold band and print a trajectory");
    plan->add_option("--delta", plan_args.delta, "Unstable threshold")->required();
    plan->add_option("--delta0", plan_args.delta0, "Largest magnitude that must decay")
        ->required();
    plan->add_option("--delta1", plan_args.delta1, "Smallest magnitude that must grow")
        ->required();
    plan->add_option("--eps", plan_args.eps, "Terminal tolerance at the horizon")->required();
    plan->add_option("--time", plan_args.time, "Horizon T")->required();
    plan->add_flag("--json", plan_args.json, "Print the plan as JSON");

    EncodeArgs encode_args;
    CLI::App* encode = app.add_subcommand("encode", "Encode classical bits into a state dump");
    encode->add_option("bits", encode_args.bits, "Bitstring, length a power of two")
        ->required();
    encode->add_option("--scheme", encode_args.scheme, "Which encoding to print")
        ->check(CLI::IsMember({"dense", "block", "both"}))
        ->capture_default_str();
    encode->add_flag("--json", encode_args.json, "Print the state as JSON");

    int rc = 0;
    compile->callback([&]() { rc = run_compile(compile_args, header); });
    sim->callback([&]() { rc = run_simulate(sim_args, header); });
    verify->callback([&]() { rc = run_verify(verify_args, header); });
    plan->callback([&]() { rc = run_plan(plan_args, header); });
    encode->callback([&]() { rc = run_encode(encode_args, header); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return rc;
}
