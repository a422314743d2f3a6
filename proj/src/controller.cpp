#include "rlc/controller.hpp"

#include "rlc/error.hpp"

namespace rlc {

TrialOutcome simulate_transition(const Scenario& scn, const ControllerSpec& controller, const Configuration& from,
                                 const Configuration& to, StreamRng& rng) {
    require(from.size() == scn.dof() && to.size() == scn.dof(), "transition endpoints have wrong dimension");
    require(controller.actuation_noise_std >= 0, "actuation noise std must be >= 0");

    const WorldSample world = sample_world(scn, rng);
    Configuration x = from;
    double cost = 0.0;
    for (int step = 1;; ++step) {
        if (collides(scn, x, world)) return {false, 0.0, step};
        const Configuration gap = to - x;
        const double remaining = gap.norm();
        if (remaining <= scn.endgame_radius) return {true, cost, step};
        if (step >= scn.max_steps) return {false, 0.0, step};

        Configuration delta = gap * (std::min(scn.step_size, remaining) / remaining);
        if (controller.actuation_noise_std > 0) {
            for (Eigen::Index i = 0; i < delta.size(); ++i)
                delta[i] += controller.actuation_noise_std * standard_normal(rng);
        }
        x += delta;
        cost += delta.norm();
    }
}

std::vector<TrialOutcome> run_trials(const Scenario& scn, const ControllerSpec& controller, const Configuration& from,
                                     const Configuration& to, int trials, const EdgeKey& key) {
    require(trials >= 1, "trial count must be >= 1");
    std::vector<TrialOutcome> out;
    out.reserve(static_cast<std::size_t>(trials));
    for (int t = 0; t < trials; ++t) {
        StreamRng rng = trial_stream(key, static_cast<std::uint64_t>(t));
        out.push_back(simulate_transition(scn, controller, from, to, rng));
    }
    return out;
}

} // namespace rlc
