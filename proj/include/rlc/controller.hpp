#pragma once

#include "rlc/scenario.hpp"

#include <cstdint>
#include <vector>

namespace rlc {

enum class ControllerKind {
    straight_line,
};

struct ControllerSpec {
    ControllerKind kind = ControllerKind::straight_line;
    /// Std of the Gaussian perturbation added to every coordinate at every step.
    double actuation_noise_std = 0.0;
};

struct TrialOutcome {
    bool success = false;
    /// Configuration-space path length on success, 0 otherwise.
    double cost = 0.0;
    int steps = 0;

    bool operator==(const TrialOutcome&) const = default;
};

/// One simulated local transition. A single world sample is drawn at trial
/// start and held fixed; actuation noise is drawn per step.
///
/// Each step k = 1, 2, ... first checks the current configuration: a collision
/// ends the trial as a failure, being within the endgame radius of `to` ends it
/// as a success with `steps = k`, and reaching `max_steps` without either ends
/// it as a failure (time limit). Otherwise the controller advances
/// min(step_size, remaining distance) toward `to` plus noise and accumulates
/// the length of the displacement actually taken.
TrialOutcome simulate_transition(const Scenario& scenario, const ControllerSpec& controller, const Configuration& from,
                                 const Configuration& to, StreamRng& rng);

/// Identifies the random streams of one directed connection.
struct EdgeKey {
    std::uint64_t seed = 0;
    std::uint64_t from_id = 0;
    std::uint64_t to_id = 0;
};

/// Stream for trial `trial` of the connection `key`.
inline StreamRng trial_stream(const EdgeKey& key, std::uint64_t trial) {
    return StreamRng::derive({key.seed, key.from_id, key.to_id, trial});
}

/// T independent trials; result order is by trial index.
std::vector<TrialOutcome> run_trials(const Scenario& scenario, const ControllerSpec& controller,
                                     const Configuration& from, const Configuration& to, int trials,
                                     const EdgeKey& key);

} // namespace rlc
