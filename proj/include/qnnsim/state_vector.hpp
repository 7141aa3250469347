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
 * Exact state-vector container with explicit sink-probability bookkeeping,
 * dense classical-bit encoding, qubit discarding, single-qubit measurement,
 * and dyadic-grid quantization.
 *
 * The machine state is a vector of 2^n complex amplitudes plus one scalar,
 * the sink probability. The sink absorbs the mass of every basis state that
 * the model declares discarded or undefined, so the accounting identity
 * sum |amps|^2 + sink_prob = 1 can be checked after any operation that
 * promises to preserve it. Qubit 0 is the least significant bit of the basis
 * index. Values are immutable after construction; operations return new
 * values.
 */

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "qnnsim/detail/textio.hpp"

namespace qnnsim {

using amplitude = std::complex<double>;

/// Slack allowed on the total-probability identity before state accounting is
/// considered broken.
inline constexpr double kProbTolerance = 1e-9;

namespace detail {

inline void require_finite(const amplitude& a, const char* what) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
        throw std::invalid_argument(std::string(what) + " must be finite");
    }
}

inline bool is_power_of_two(std::uint64_t v) {
    return v != 0 && (v & (v - 1)) == 0;
}

inline std::size_t log2_exact(std::uint64_t v) {
    std::size_t k = 0;
    while ((std::uint64_t{1} << k) < v) {
        ++k;
    }
    return k;
}

/// Maps a 64-bit generator draw to [0,1) with 53 uniform mantissa bits.
/// Deterministic across platforms, unlike std::uniform_real_distribution.
inline double uniform_unit(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace detail

class StateVector {
  public:
    /// Builds a state from raw parts. The amplitude count must be a power of
    /// two (2^n for n qubits); the sink probability must lie in [0, 1] up to
    /// rounding slack. Total probability is deliberately not enforced here so
    /// that quantized states remain representable; callers that promise the
    /// identity check it via total_probability().
    StateVector(std::size_t num_qubits, std::vector<amplitude> amps, double sink_prob)
        : num_qubits_(num_qubits), amps_(std::move(amps)), sink_prob_(sink_prob) {
        if (amps_.size() != (std::size_t{1} << num_qubits_)) {
            throw std::invalid_argument("amplitude count must be 2^num_qubits");
        }
        for (const amplitude& a : amps_) {
            detail::require_finite(a, "amplitude");
        }
        if (!std::isfinite(sink_prob_) || sink_prob_ < -1e-12 || sink_prob_ > 1.0 + kProbTolerance) {
            throw std::invalid_argument("sink probability out of range");
        }
    }

    std::size_t num_qubits() const { return num_qubits_; }
    std::size_t dim() const { return amps_.size(); }
    const std::vector<amplitude>& amps() const { return amps_; }
    const amplitude& amp(std::size_t index) const { return amps_.at(index); }
    double sink_prob() const { return sink_prob_; }

    /// Sum of |amp|^2 over all live basis states.
    double live_mass() const {
        double m = 0.0;
        for (const amplitude& a : amps_) {
            m += std::norm(a);
        }
        return m;
    }

    /// live_mass() + sink_prob(); equals 1 within kProbTolerance whenever the
    /// accounting invariant holds.
    double total_probability() const { return live_mass() + sink_prob_; }

  private:
    std::size_t num_qubits_;
    std::vector<amplitude> amps_;
    double sink_prob_;
};

/// Returns the computational basis state |index> on n qubits (sink 0).
inline StateVector basis_state(std::size_t num_qubits, std::uint64_t index) {
    std::size_t dim = std::size_t{1} << num_qubits;
    if (index >= dim) {
        throw std::invalid_argument("basis index out of range");
    }
    std::vector<amplitude> amps(dim, amplitude{0.0, 0.0});
    amps[index] = amplitude{1.0, 0.0};
    return StateVector(num_qubits, std::move(amps), 0.0);
}

/// Dense encoding: packs n = 2^m classical bits into m qubits, amps[j] =
/// c * bits[j]. The mass not used by one-bits goes to the sink, so the total
/// stays exactly 1.
inline StateVector encode_dense(const std::vector<int>& bits, double unit_amp) {
    if (!detail::is_power_of_two(bits.size())) {
        throw std::invalid_argument("encode_dense needs a power-of-two bit count");
    }
    if (!std::isfinite(unit_amp) || unit_amp <= 0.0) {
        throw std::invalid_argument("unit amplitude must be positive");
    }
    std::size_t n = bits.size();
    std::vector<amplitude> amps(n, amplitude{0.0, 0.0});
    double live = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (bits[j] != 0 && bits[j] != 1) {
            throw std::invalid_argument("bits must be 0 or 1");
        }
        if (bits[j] == 1) {
            amps[j] = amplitude{unit_amp, 0.0};
            live += unit_amp * unit_amp;
        }
    }
    if (live > 1.0 + kProbTolerance) {
        throw std::invalid_argument("encoded norm would exceed 1");
    }
    return StateVector(detail::log2_exact(n), std::move(amps), 1.0 - live);
}

namespace detail {

inline std::uint64_t qubit_mask(const StateVector& s, const std::vector<std::size_t>& qubits) {
    std::uint64_t mask = 0;
    for (std::size_t q : qubits) {
        if (q >= s.num_qubits()) {
            throw std::invalid_argument("qubit index out of range");
        }
        std::uint64_t bit = std::uint64_t{1} << q;
        if (mask & bit) {
            throw std::invalid_argument("duplicate qubit index");
        }
        mask |= bit;
    }
    return mask;
}

}  // namespace detail

/// Zeroes every amplitude whose basis state has any of the given qubits set,
/// routing the mass to the sink. Keeps the qubit count; idempotent for a
/// fixed qubit set. This is the projection half of discard_to_sink.
inline StateVector sink_project(const StateVector& s, const std::vector<std::size_t>& qubits) {
    std::uint64_t mask = detail::qubit_mask(s, qubits);
    std::vector<amplitude> amps(s.amps());
    double lost = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & mask) {
            lost += std::norm(amps[i]);
            amps[i] = amplitude{0.0, 0.0};
        }
    }
    return StateVector(s.num_qubits(), std::move(amps), s.sink_prob() + lost);
}

/// Discards the given qubits: survivors are the components where every
/// discarded qubit reads 0 (kept verbatim, no renormalization); everything
/// else is added to the sink. Returns a state on the remaining qubits.
inline StateVector discard_to_sink(const StateVector& s, const std::vector<std::size_t>& qubits) {
    std::uint64_t mask = detail::qubit_mask(s, qubits);
    std::size_t remaining = s.num_qubits() - qubits.size();
    std::vector<amplitude> out(std::size_t{1} << remaining, amplitude{0.0, 0.0});
    double lost = 0.0;
    for (std::size_t i = 0; i < s.dim(); ++i) {
        if (i & mask) {
            lost += std::norm(s.amp(i));
            continue;
        }
        // Compress the surviving bit positions into a dense index.
        std::uint64_t packed = 0;
        std::size_t out_bit = 0;
        for (std::size_t q = 0; q < s.num_qubits(); ++q) {
            if (mask & (std::uint64_t{1} << q)) {
                continue;
            }
            if (i & (std::uint64_t{1} << q)) {
                packed |= std::uint64_t{1} << out_bit;
            }
            ++out_bit;
        }
        out[packed] = s.amp(i);
    }
    return StateVector(remaining, std::move(out), s.sink_prob() + lost);
}

struct MeasurementResult {
    int outcome;            // 0 or 1
    double prob_zero;       // P(qubit reads 0), from live amplitudes only
    StateVector post;       // renormalized projection onto the outcome
};

/// Measures one qubit along |0>. Sink mass counts toward outcome 1 (the sink
/// never holds the |0...0> answer state). The outcome is sampled with a
/// seeded generator so runs are bit-reproducible.
inline MeasurementResult measure_along_zero(const StateVector& s, std::size_t qubit,
                                            std::uint64_t rng_seed) {
    if (qubit >= s.num_qubits()) {
        throw std::invalid_argument("qubit index out of range");
    }
    std::uint64_t bit = std::uint64_t{1} << qubit;
    double p0 = 0.0;
    for (std::size_t i = 0; i < s.dim(); ++i) {
        if (!(i & bit)) {
            p0 += std::norm(s.amp(i));
        }
    }
    std::mt19937_64 gen(rng_seed);
    int outcome = detail::uniform_unit(gen) < p0 ? 0 : 1;

    std::vector<amplitude> amps(s.dim(), amplitude{0.0, 0.0});
    double sink = 0.0;
    if (outcome == 0) {
        double scale = 1.0 / std::sqrt(p0);
        for (std::size_t i = 0; i < s.dim(); ++i) {
            if (!(i & bit)) {
                amps[i] = s.amp(i) * scale;
            }
        }
    } else {
        double p1 = 1.0 - p0;
        double scale = 1.0 / std::sqrt(p1);
        for (std::size_t i = 0; i < s.dim(); ++i) {
            if (i & bit) {
                amps[i] = s.amp(i) * scale;
            }
        }
        sink = s.sink_prob() / p1;
    }
    return MeasurementResult{outcome, p0, StateVector(s.num_qubits(), std::move(amps), sink)};
}

/// Appends a fresh qubit in |0> as the new least significant qubit (ancilla
/// convention used by the dissipative collapse step).
inline StateVector append_lsb_qubit(const StateVector& s) {
    std::vector<amplitude> amps(s.dim() * 2, amplitude{0.0, 0.0});
    for (std::size_t i = 0; i < s.dim(); ++i) {
        amps[i << 1] = s.amp(i);
    }
    return StateVector(s.num_qubits() + 1, std::move(amps), s.sink_prob());
}

/// Rounds a real to the nearest multiple of 2^-p; ties round toward zero.
/// The result differs from the input by at most 2^-(p+1).
inline double quantize_value(double v, int p) {
    if (p < 1 || p > 52) {
        throw std::invalid_argument("precision must be in [1, 52]");
    }
    double scale = std::ldexp(1.0, p);
    double t = v * scale;
    double f = std::floor(t);
    double frac = t - f;
    double k;
    if (frac > 0.5) {
        k = f + 1.0;
    } else if (frac < 0.5) {
        k = f;
    } else {
        k = t >= 0.0 ? f : f + 1.0;  // tie: pick the value closer to zero
    }
    return k / scale;
}

inline amplitude quantize_value(const amplitude& a, int p) {
    return amplitude{quantize_value(a.real(), p), quantize_value(a.imag(), p)};
}

/// Quantizes every amplitude component onto the 2^-p grid. The sink is
/// rebalanced to keep the total-probability identity (the grid moves live
/// mass by up to 2^-(p+1) per component).
inline StateVector quantize(const StateVector& s, int p) {
    std::vector<amplitude> amps(s.dim());
    double live = 0.0;
    for (std::size_t i = 0; i < s.dim(); ++i) {
        amps[i] = quantize_value(s.amp(i), p);
        live += std::norm(amps[i]);
    }
    double sink = live < 1.0 ? 1.0 - live : 0.0;
    return StateVector(s.num_qubits(), std::move(amps), sink);
}

///// Writes the state dump format: one `index<TAB>re<TAB>im` line per nonzero
/// basis state (17 significant digits), then `sink<TAB>prob`. A `# qubits n`
/// comment makes the dump self-describing for the reader.
inline void write_state(std::ostream& out, const StateVector& s, const std::string& header = "") {
    if (!header.empty()) {
        out << header;
    }
    out << "# qubits " << s.num_qubits() << "\n";
    for (std::size_t i = 0; i < s.dim(); ++i) {
        const amplitude& a = s.amp(i);
        if (a == amplitude{0.0, 0.0}) {
            continue;
        }
        out << i << '\t' << detail::format_real(a.real()) << '\t' << detail::format_real(a.imag())
            << '\n';
    }
    out << "sink\t" << detail::format_real(s.sink_prob()) << '\n';
}

/// Parses the state dump format. Qubit count is taken from the `# qubits`
/// comment when present, otherwise inferred from the largest index seen.
inline StateVector read_state(std::istream& in) {
    std::vector<std::pair<std::uint64_t, amplitude>> entries;
    double sink = 0.0;
    bool saw_sink = false;
    long qubits_hint = -1;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        auto toks = detail::split_ws(line);
        if (!toks.empty() && toks[0] == "#" && toks.size() >= 3 && toks[1] == "qubits") {
            qubits_hint = static_cast<long>(detail::parse_int(toks[2], "qubit count", line_no));
            continue;
        }
        if (detail::is_comment_or_blank(line)) {
            continue;
        }
        if (saw_sink) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": content after sink line");
        }
        if (toks[0] == "sink") {
            if (toks.size() != 2) {
                throw std::runtime_error("line " + std::to_string(line_no) + ": malformed sink line");
            }
            sink = detail::parse_real(toks[1], "sink probability", line_no);
            saw_sink = true;
            continue;
        }
        if (toks.size() != 3) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected index, re, im");
        }
        std::uint64_t index = static_cast<std::uint64_t>(detail::parse_int(toks[0], "index", line_no));
        double re = detail::parse_real(toks[1], "real part", line_no);
        double im = detail::parse_real(toks[2], "imaginary part", line_no);
        entries.emplace_back(index, amplitude{re, im});
    }
    if (!saw_sink) {
        throw std::runtime_error("state dump has no sink line");
    }
    std::size_t num_qubits = 0;
    if (qubits_hint >= 0) {
        num_qubits = static_cast<std::size_t>(qubits_hint);
    } else {
        std::uint64_t max_index = 0;
        for (const auto& [index, a] : entries) {
            max_index = index > max_index ? index : max_index;
        }
        while ((std::uint64_t{1} << num_qubits) <= max_index) {
            ++num_qubits;
        }
    }
    std::vector<amplitude> amps(std::size_t{1} << num_qubits, amplitude{0.0, 0.0});
    for (const auto& [index, a] : entries) {
        if (index >= amps.size()) {
            throw std::runtime_error("state dump index exceeds declared qubit count");
        }
        amps[index] = a;
    }
    return StateVector(num_qubits, std::move(amps), sink);
}

}  // namespace qnnsim
