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
 * Line-oriented text format for boolean circuits.
 *
 * One node per line, `#` comments and blank lines ignored:
 *
 *   <id> INPUT [k]        input bit x_k (bare INPUT takes the next index)
 *   <id> INPUTN <k>       complemented input, 1 - x_k
 *   <id> CONST0
 *   <id> CONST1
 *   <id> TH <t> <p...>    unit-weight threshold over predecessor ids
 *   <id> WTH <t> <w:p...> weighted threshold, weight:pred pairs
 *   <id> ET <w:p...>      equality test, 0 iff the weighted sum is 0
 *   <id> NAND <p1> <p2>
 *   OUTPUT <id...>
 *
 * Ids must be distinct and predecessors declared before use. The writer
 * adds an `# inputs <n>` comment so circuits whose highest input index is
 * unused still round-trip with the right arity.
 */

#pragma once

#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qnnsim/circuit.hpp"
#include "qnnsim/detail/textio.hpp"

namespace qnnsim {

namespace detail {

inline std::pair<std::int64_t, int> parse_weight_pred(const std::string& tok, std::size_t line_no) {
    std::size_t colon = tok.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == tok.size()) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": expected weight:pred, got '" +
                                 tok + "'");
    }
    std::int64_t w = parse_int(tok.substr(0, colon), "weight", line_no);
    std::int64_t p = parse_int(tok.substr(colon + 1), "predecessor id", line_no);
    if (p < 0) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": negative predecessor id");
    }
    return {w, static_cast<int>(p)};
}

}  // namespace detail

inline void write_circuit(std::ostream& out, const BoolCircuit& c, const std::string& header = "") {
    if (!header.empty()) {
        out << header;
    }
    out << "# inputs " << c.num_inputs() << "\n";
    for (std::size_t i = 0; i < c.nodes().size(); ++i) {
        const Node& n = c.node(static_cast<int>(i));
        out << i;
        switch (n.kind) {
            case NodeKind::kInput:
                out << " INPUT " << n.input;
                break;
            case NodeKind::kInputNeg:
                out << " INPUTN " << n.input;
                break;
            case NodeKind::kConst0:
                out << " CONST0";
                break;
            case NodeKind::kConst1:
                out << " CONST1";
                break;
            case NodeKind::kTh:
                out << " TH " << n.threshold;
                for (int p : n.preds) {
                    out << ' ' << p;
                }
                break;
            case NodeKind::kWth:
                out << " WTH " << n.threshold;
                for (std::size_t k = 0; k < n.preds.size(); ++k) {
                    out << ' ' << n.weights[k] << ':' << n.preds[k];
                }
                break;
            case NodeKind::kEt:
                out << " ET";
                for (std::size_t k = 0; k < n.preds.size(); ++k) {
                    out << ' ' << n.weights[k] << ':' << n.preds[k];
                }
                break;
            case NodeKind::kNand:
                out << " NAND " << n.preds[0] << ' ' << n.preds[1];
                break;
        }
        out << '\n';
    }
    out << "OUTPUT";
    for (int o : c.outputs()) {
        out << ' ' << o;
    }
    out << '\n';
}

inline BoolCircuit read_circuit(std::istream& in) {
    std::vector<Node> nodes;
    std::map<std::int64_t, int> id_map;  // declared id -> dense node index
    std::vector<std::int64_t> outputs_raw;
    bool saw_output = false;
    long inputs_hint = -1;
    int max_input = -1;
    int bare_inputs = 0;

    auto resolve = [&](std::int64_t raw, std::size_t line_no) -> int {
        auto it = id_map.find(raw);
        if (it == id_map.end()) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": node " +
                                     std::to_string(raw) + " used before declaration");
        }
        return it->second;
    };

    std::string line;
    std::size_t line_no = 0;
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
        if (saw_output) {
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": content after the OUTPUT line");
        }
        if (toks[0] == "OUTPUT") {
            if (toks.size() < 2) {
                throw std::runtime_error("line " + std::to_string(line_no) +
                                         ": OUTPUT needs at least one id");
            }
            for (std::size_t k = 1; k < toks.size(); ++k) {
                outputs_raw.push_back(detail::parse_int(toks[k], "output id", line_no));
            }
            saw_output = true;
            continue;
        }
        if (toks.size() < 2) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected <id> <kind> ...");
        }
        std::int64_t raw_id = detail::parse_int(toks[0], "node id", line_no);
        if (id_map.count(raw_id)) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": duplicate node id " +
                                     std::to_string(raw_id));
        }
        const std::string& kind = toks[1];
        Node n;
        if (kind == "INPUT" || kind == "INPUTN") {
            int index;
            if (toks.size() >= 3) {
                index = static_cast<int>(detail::parse_int(toks[2], "input index", line_no));
            } else if (kind == "INPUT") {
                index = bare_inputs;  // positional numbering for index-free files
            } else {
                throw std::runtime_error("line " + std::to_string(line_no) +
                                         ": INPUTN needs an input index");
            }
            if (toks.size() > 3) {
                throw std::runtime_error("line " + std::to_string(line_no) + ": trailing tokens");
            }
            n = kind == "INPUT" ? Node::make_input(index) : Node::make_input_neg(index);
            max_input = index > max_input ? index : max_input;
            ++bare_inputs;
        } else if (kind == "CONST0" || kind == "CONST1") {
            if (toks.size() > 2) {
                throw std::runtime_error("line " + std::to_string(line_no) + ": trailing tokens");
            }
            n = kind == "CONST0" ? Node::make_const0() : Node::make_const1();
        } else if (kind == "TH") {
            if (toks.size() < 3) {
                throw std::runtime_error("line " + std::to_string(line_no) +
                                         ": TH needs a threshold");
            }
            std::int64_t t = detail::parse_int(toks[2], "threshold", line_no);
            std::vector<int> preds;
            for (std::size_t k = 3; k < toks.size(); ++k) {
                preds.push_back(resolve(detail::parse_int(toks[k], "predecessor id", line_no),
                                        line_no));
            }
            n = Node::make_th(t, std::move(preds));
        } else if (kind == "WTH" || kind == "ET") {
            std::size_t first_pair = kind == "WTH" ? 3 : 2;
            std::int64_t t = 0;
            if (kind == "WTH") {
                if (toks.size() < 3) {
                    throw std::runtime_error("line " + std::to_string(line_no) +
                                             ": WTH needs a threshold");
                }
                t = detail::parse_int(toks[2], "threshold", line_no);
            }
            std::vector<int> preds;
            std::vector<std::int64_t> weights;
            for (std::size_t k = first_pair; k < toks.size(); ++k) {
                auto [w, raw_pred] = detail::parse_weight_pred(toks[k], line_no);
                preds.push_back(resolve(raw_pred, line_no));
                weights.push_back(w);
            }
            n = kind == "WTH" ? Node::make_wth(t, std::move(preds), std::move(weights))
                              : Node::make_et(std::move(preds), std::move(weights));
        } else if (kind == "NAND") {
            if (toks.size() != 4) {
                throw std::runtime_error("line " + std::to_string(line_no) +
                                         ": NAND takes exactly two predecessors");
            }
            int a = resolve(detail::parse_int(toks[2], "predecessor id", line_no), line_no);
            int b = resolve(detail::parse_int(toks[3], "predecessor id", line_no), line_no);
            n = Node::make_nand(a, b);
        } else {
            throw std::runtime_error("line " + std::to_string(line_no) + ": unknown node kind '" +
                                     kind + "'");
        }
        nodes.push_back(std::move(n));
        id_map[raw_id] = static_cast<int>(nodes.size()) - 1;
    }
    if (!saw_output) {
        throw std::runtime_error("circuit file has no OUTPUT line");
    }
    std::vector<int> outputs;
    for (std::int64_t raw : outputs_raw) {
        auto it = id_map.find(raw);
        if (it == id_map.end()) {
            throw std::runtime_error("OUTPUT references undeclared node " + std::to_string(raw));
        }
        outputs.push_back(it->second);
    }
    int num_inputs = max_input + 1;
    if (inputs_hint >= 0) {
        if (inputs_hint < num_inputs) {
            throw std::runtime_error("declared input count is smaller than an input index used");
        }
        num_inputs = static_cast<int>(inputs_hint);
    }
    return BoolCircuit(num_inputs, std::move(nodes), std::move(outputs));
}

inline std::string circuit_to_string(const BoolCircuit& c) {
    std::ostringstream out;
    write_circuit(out, c);
    return out.str();
}

inline BoolCircuit circuit_from_string(const std::string& text) {
    std::istringstream in(text);
    return read_circuit(in);
}

}  // namespace qnnsim
