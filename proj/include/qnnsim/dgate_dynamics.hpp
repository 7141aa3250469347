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
 * Continuous model of the dissipative gate.
 *
 * The checked amplitude evolves under dA/dt = R * A * (|A| - delta) * (1 - |A|),
 * a bistable flow with stable fixed points 0 and 1 and an unstable fixed
 * point at delta. The phase of A is invariant because the factor multiplying
 * A is real. The flow admits the closed-form first integral
 *
 *   (a/a0)^(1/delta) * ((a-delta)/(a0-delta))^(-1/(delta(1-delta)))
 *                    * ((1-a)/(1-a0))^(1/(1-delta)) = exp(-R t)
 *
 * which both drives the integrator's step control and yields the rate R
 * needed to reach the fixed points within tolerance epsilon by time T.
 * The ancilla-assisted collapse step at the end shelters the answer
 * amplitude from the measurement that empties the scratch qubits.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qnnsim/state_vector.hpp"
#include "qnnsim/unitary.hpp"

namespace qnnsim {

/// Parameter bundle for one dissipative evolution: rate R, unstable fixed
/// point delta, exclusion band (delta0, delta1) that trajectories never
/// start inside, terminal tolerance epsilon, and horizon T.
struct DGateDynamics {
    double rate = 0.0;
    double delta = 0.0;
    double delta0 = 0.0;
    double delta1 = 0.0;
    double epsilon = 0.0;
    double t_end = 0.0;
};

namespace detail {

/// The flow itself only involves the rate and the unstable fixed point; the
/// band and tolerance fields matter to rate planning and mode snapping.
inline void require_flow_params(const DGateDynamics& dyn) {
    if (!(dyn.rate > 0.0)) {
        throw std::invalid_argument("rate must be positive");
    }
    if (!(dyn.delta > 0.0 && dyn.delta < 1.0)) {
        throw std::invalid_argument("delta must lie in (0,1)");
    }
}

inline amplitude flow_rhs(const amplitude& a, double rate, double delta) {
    double mag = std::abs(a);
    return a * (rate * (mag - delta) * (1.0 - mag));
}

}  // namespace detail

/// Time derivative of the checked amplitude, R * A * (|A| - delta) * (1 - |A|).
inline amplitude amplitude_rhs(const amplitude& a, const DGateDynamics& dyn) {
    detail::require_flow_params(dyn);
    if (std::abs(a) > 1.0 + 1e-9) {
        throw std::invalid_argument("amplitude magnitude exceeds 1");
    }
    return detail::flow_rhs(a, dyn.rate, dyn.delta);
}

/// Natural log of the implicit-solution left-hand side. Along an exact
/// trajectory this equals -R*t, which makes it the integrator's residual.
inline double implicit_solution_log_lhs(double a, double a0, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("delta must lie in (0,1)");
    }
    if (!(a > 0.0 && a < 1.0) || !(a0 > 0.0 && a0 < 1.0) || a == delta || a0 == delta) {
        throw std::invalid_argument("magnitudes must lie in (0,1) and differ from delta");
    }
    if ((a < delta) != (a0 < delta)) {
        throw std::invalid_argument("magnitudes must lie on the same side of delta");
    }
    return std::log(a / a0) / delta -
           std::log((a - delta) / (a0 - delta)) / (delta * (1.0 - delta)) +
           std::log((1.0 - a) / (1.0 - a0)) / (1.0 - delta);
}

inline double implicit_solution_lhs(double a, double a0, double delta) {
    return std::exp(implicit_solution_log_lhs(a, a0, delta));
}

struct TrajectoryPoint {
    double t = 0.0;
    amplitude a;
};

/// Integrates the flow from a0 over [0, t_end] with a classical 4th-order
/// fixed-step scheme. The step starts at t_end/1024 and is halved until the
/// worst log-residual against the implicit solution over the recorded points
/// is below 5e-5 (comfortably inside the 1e-4 contract); persistent failure
/// to converge is reported, never silently accepted. Returns at most 1025
/// evenly spaced trajectory points including both endpoints.
inline std::vector<TrajectoryPoint> integrate_amplitude(const amplitude& a0,
                                                        const DGateDynamics& dyn, double t_end) {
    detail::require_flow_params(dyn);
    double mag0 = std::abs(a0);
    if (mag0 > 1.0 + 1e-9) {
        throw std::invalid_argument("amplitude magnitude exceeds 1");
    }
    if (t_end < 0.0) {
        throw std::invalid_argument("negative integration time");
    }
    if (t_end == 0.0) {
        return {TrajectoryPoint{0.0, a0}};
    }
    // Fixed points are exact: the derivative vanishes identically, so the
    // trajectory is constant and the implicit solution does not apply.
    if (mag0 == 0.0 || mag0 == dyn.delta || mag0 == 1.0) {
        std::vector<TrajectoryPoint> flat(2);
        flat[0] = TrajectoryPoint{0.0, a0};
        flat[1] = TrajectoryPoint{t_end, a0};
        return flat;
    }

    constexpr std::size_t kRecordPoints = 1024;
    constexpr double kResidualTarget = 5e-5;
    constexpr int kMaxHalvings = 12;
    // Once the magnitude is this close to its attracting endpoint, the log
    // form of the implicit solution has no double-precision accuracy left;
    // the flow is contracting there, so the residual check is retired for
    // the rest of the trajectory.
    constexpr double kEndpointBand = 1e-9;

    for (int attempt = 0; attempt <= kMaxHalvings; ++attempt) {
        std::size_t steps = kRecordPoints << attempt;
        std::size_t record_every = steps / kRecordPoints;
        double h = t_end / static_cast<double>(steps);
        std::vector<TrajectoryPoint> points;
        points.reserve(kRecordPoints + 1);
        points.push_back(TrajectoryPoint{0.0, a0});

        amplitude a = a0;
        double worst = 0.0;
        bool valid = true;
        bool settled = false;
        for (std::size_t i = 1; i <= steps; ++i) {
            amplitude k1 = detail::flow_rhs(a, dyn.rate, dyn.delta);
            amplitude k2 = detail::flow_rhs(a + 0.5 * h * k1, dyn.rate, dyn.delta);
            amplitude k3 = detail::flow_rhs(a + 0.5 * h * k2, dyn.rate, dyn.delta);
            amplitude k4 = detail::flow_rhs(a + h * k3, dyn.rate, dyn.delta);
            a += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if (i % record_every == 0) {
                double t = h * static_cast<double>(i);
                points.push_back(TrajectoryPoint{t, a});
                if (settled) {
                    continue;
                }
                double mag = std::abs(a);
                settled = mag0 > dyn.delta ? mag >= 1.0 - kEndpointBand : mag <= kEndpointBand;
                if (settled) {
                    continue;
                }
                if (mag <= 0.0 || mag >= 1.0 || mag == dyn.delta ||
                    (mag < dyn.delta) != (mag0 < dyn.delta)) {
                    valid = false;  // left the closed form's domain; refine
                    break;
                }
                double residual =
                    std::fabs(implicit_solution_log_lhs(mag, mag0, dyn.delta) + dyn.rate * t);
                worst = residual > worst ? residual : worst;
            }
        }
        if (valid && worst <= kResidualTarget) {
            return points;
        }
    }
    throw std::runtime_error("integrator step underflow: residual target unreachable");
}

/// The two branch rates and their maximum, from the closed form: R0 drives
/// a(0) = delta0 down to epsilon by time T, R1 drives a(0) = delta1 up to
/// 1 - epsilon. A branch that needs no decay (LHS >= 1) reports rate 0.
struct RatePlan {
    double rate0 = 0.0;
    double rate1 = 0.0;
    double rate = 0.0;
};

inline RatePlan plan_rate(double delta, double delta0, double delta1, double epsilon,
                          double t_end) {
    if (!(delta0 > 0.0 && delta0 < delta && delta < delta1 && delta1 < 1.0)) {
        throw std::invalid_argument("rate planning needs 0 < delta0 < delta < delta1 < 1");
    }
    if (!(epsilon > 0.0 && epsilon < delta0 && epsilon < 1.0 - delta1)) {
        throw std::invalid_argument("epsilon must lie in (0, min(delta0, 1-delta1))");
    }
    if (!(t_end > 0.0)) {
        throw std::invalid_argument("horizon must be positive");
    }
    RatePlan plan;
    double down = implicit_solution_log_lhs(epsilon, delta0, delta);
    plan.rate0 = down < 0.0 ? -down / t_end : 0.0;
    double up = implicit_solution_log_lhs(1.0 - epsilon, delta1, delta);
    plan.rate1 = up < 0.0 ? -up / t_end : 0.0;
    plan.rate = plan.rate0 > plan.rate1 ? plan.rate0 : plan.rate1;
    return plan;
}

inline double solve_rate(double delta, double delta0, double delta1, double epsilon,
                         double t_end) {
    return plan_rate(delta, delta0, delta1, epsilon, t_end).rate;
}

inline DGateDynamics make_dynamics(double delta, double delta0, double delta1, double epsilon,
                                   double t_end) {
    return DGateDynamics{solve_rate(delta, delta0, delta1, epsilon, t_end), delta, delta0,
                         delta1, epsilon, t_end};
}

/// Runtime defaults for a dissipative gate that only knows its threshold:
/// the exclusion band is (delta/2, min(2*delta, (1+delta)/2)), epsilon sits
/// a factor 10 below the band margins, and the horizon is 1.
inline DGateDynamics dynamics_for_threshold(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("delta must lie in (0,1)");
    }
    double delta0 = 0.5 * delta;
    double delta1 = std::fmin(2.0 * delta, 0.5 * (1.0 + delta));
    double epsilon = std::fmin(delta0, 1.0 - delta1) / 10.0;
    return make_dynamics(delta, delta0, delta1, epsilon, 1.0);
}

/// The collapse step of the dissipative gate: with a fresh ancilla appended
/// at q0, transfers any amplitude with q1 = 1 into the ancilla component and
/// measures q1 along |0>. When the incoming state satisfies the checked-state
/// precondition (mass only on patterns whose m gate qubits read 0^m or
/// 0^(m-1)1), the measurement reads |0> with certainty and the answer
/// amplitude survives in the ancilla.
inline StateVector collapse_with_ancilla(const StateVector& s, int m, std::uint64_t rng_seed) {
    if (m < 1) {
        throw std::invalid_argument("gate width must be at least 1");
    }
    if (s.num_qubits() < static_cast<std::size_t>(m) + 1) {
        throw std::invalid_argument("state must hold the gate qubits plus the ancilla");
    }
    for (std::size_t i = 0; i < s.dim(); ++i) {
        if ((i & 1u) && s.amp(i) != amplitude{0.0, 0.0}) {
            throw std::invalid_argument("ancilla qubit must be in |0>");
        }
    }
    StateVector transferred = apply_unitary(build_ancilla_transfer(), s, 2);
    return measure_along_zero(transferred, 1, rng_seed).post;
}

}  // namespace qnnsim
