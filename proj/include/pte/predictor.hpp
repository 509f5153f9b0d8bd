#pragma once

// Scripted closed-loop planner standing in for a trained chunk-predicting
// policy, plus the noise wrapper. Each call plans a fresh chunk from the
// current observation only (no hidden state), advancing at the demonstrator
// speed — the speed ceiling the proleptic ensemble exists to beat.

#include <cstdint>

#include "pte/rng.hpp"
#include "pte/types.hpp"

namespace pte {

// Plans a chunk of L samples from `obs`: straight-line approach to the
// current phase's goal at demo_speed, a short settle dwell at the goal, then
// a linear grip ramp over grip_steps; once holding, carry to the matching
// box, dwell, and open. A partially closed grip away from any block is
// reopened while re-approaching (grasp-retry recovery). Entries beyond task
// completion hold the final pose; actions[0] is the observed state.
// Throws planning_error when the phase goal lies outside the workspace,
// invalid_argument on malformed observations.
ActionChunk plan_chunk(const Observation& obs, const PredictorConfig& cfg,
                       int L, double dt);

// Adds i.i.d. Gaussian noise (std sigma) to the position channels of every
// entry; grip channels untouched. sigma = 0 returns the chunk bit-identical
// without consuming randomness. Throws invalid_argument for sigma < 0 or an
// action dimension with no known position layout (supported: 3 and 26).
ActionChunk perturb_chunk(ActionChunk chunk, double sigma, Rng& rng);

// plan_chunk + perturb_chunk with a noise stream derived per inference time,
// so chunk content depends only on (seed, observation) — never on call
// order. This is what makes a remote policy server bit-identical to the
// in-process path.
class ScriptedPredictor {
public:
    ScriptedPredictor(PredictorConfig cfg, int chunk_len, double dt,
                      std::uint64_t noise_seed)
        : cfg_(cfg), chunk_len_(chunk_len), dt_(dt), noise_seed_(noise_seed) {}

    ActionChunk chunk_for(const Observation& obs) const;

    const PredictorConfig& config() const { return cfg_; }

private:
    PredictorConfig cfg_;
    int chunk_len_;
    double dt_;
    std::uint64_t noise_seed_;
};

}  // namespace pte
