#pragma once

// The control loop shared by in-process and networked execution. Each tick:
// request a chunk for the current observation (every inference_period
// steps), deliver any chunk whose latency has elapsed, ensemble a command
// for step t+f, drive the plant, and apply events. Latency is modeled in
// simulation time — a chunk inferred at v is pushed at tick v+latency_steps —
// which makes the zero-latency networked run bit-identical to the in-process
// one.

#include <cstdint>
#include <functional>

#include "pte/predictor.hpp"
#include "pte/types.hpp"

namespace pte {

// Supplies one chunk per observation. Implementations: the in-process
// scripted predictor, and the policy-server client.
class ChunkSource {
public:
    virtual ~ChunkSource() = default;
    virtual ActionChunk fetch(const Observation& obs) = 0;
};

class PredictorChunkSource final : public ChunkSource {
public:
    explicit PredictorChunkSource(const ScriptedPredictor& predictor)
        : predictor_(predictor) {}
    ActionChunk fetch(const Observation& obs) override {
        return predictor_.chunk_for(obs);
    }

private:
    const ScriptedPredictor& predictor_;
};

struct LoopOptions {
    bool want_trace = true;
    // Called for every chunk at the moment it is delivered to the buffer
    // (i.e. after latency), in delivery order; used by the chunk recorder.
    std::function<void(const ActionChunk&)> on_chunk;
};

// Runs one episode from `world` under the given configs, pulling chunks
// from `source`. Terminates on place (success or misplace), drop, timeout,
// a planner failure (recorded as a timeout with a note), or a transport
// failure (cause = infrastructure).
EpisodeResult run_control_loop(WorldSnapshot world, const Scenario& scenario,
                               const EnsembleConfig& ensemble,
                               const PredictorConfig& predictor,
                               const PlantLimits& limits, ChunkSource& source,
                               const LoopOptions& options = {});

// Scenario seeding + in-process predictor + control loop: the whole
// single-trial experiment as one deterministic function of (seed, configs).
EpisodeResult run_episode(std::uint64_t seed, const Scenario& scenario,
                          const EnsembleConfig& ensemble,
                          const PredictorConfig& predictor,
                          const PlantLimits& limits,
                          const LoopOptions& options = {});

// The noise stream id used to derive a predictor's noise seed from an
// episode seed; shared with the policy server so both sides of a networked
// run can agree on the noise sequence.
std::uint64_t noise_seed_for(std::uint64_t episode_seed);

}  // namespace pte
