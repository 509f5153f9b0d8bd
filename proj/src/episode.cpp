#include "pte/episode.hpp"

#include <cmath>
#include <deque>
#include <utility>

#include "pte/ensemble.hpp"
#include "pte/errors.hpp"
#include "pte/rng.hpp"
#include "pte/sim.hpp"

namespace pte {

namespace {

constexpr std::uint64_t kNoiseStream = 1;

Observation make_observation(std::int64_t t, const WorldSnapshot& world) {
    Observation obs;
    obs.time = t;
    obs.agent_pose = {world.agent.pos.x, world.agent.pos.y, world.agent.grip};
    obs.world = world;
    return obs;
}

EpisodeResult finish(bool success, FailureCause cause, std::int64_t steps,
                     double dt, std::vector<TraceStep> trace, std::string note) {
    EpisodeResult r;
    r.success = success;
    r.failure_cause = cause;
    r.elapsed_steps = steps;
    r.elapsed_seconds = static_cast<double>(steps) * dt;
    r.trace = std::move(trace);
    r.note = std::move(note);
    return r;
}

}  // namespace

std::uint64_t noise_seed_for(std::uint64_t episode_seed) {
    return derive_seed(episode_seed, kNoiseStream);
}

EpisodeResult run_control_loop(WorldSnapshot world, const Scenario& scenario,
                               const EnsembleConfig& ensemble,
                               const PredictorConfig& predictor,
                               const PlantLimits& limits, ChunkSource& source,
                               const LoopOptions& options) {
    const double dt = limits.dt;
    const std::int64_t max_steps =
        std::llround(scenario.timeout_s / dt);

    ChunkBuffer buffer(ensemble.chunk_len, ensemble.inference_period);
    std::deque<std::pair<std::int64_t, ActionChunk>> pending; // (due tick, chunk)
    std::vector<TraceStep> trace;
    if (options.want_trace) trace.reserve(static_cast<std::size_t>(max_steps));

    for (std::int64_t t = 0; t < max_steps; ++t) {
        if (t % ensemble.inference_period == 0) {
            const Observation obs = make_observation(t, world);
            ActionChunk chunk;
            try {
                chunk = source.fetch(obs);
            } catch (const planning_error& e) {
                return finish(false, FailureCause::timeout, t, dt,
                              std::move(trace),
                              std::string("planner failed: ") + e.what());
            } catch (const protocol_error& e) {
                return finish(false, FailureCause::infrastructure, t, dt,
                              std::move(trace), e.what());
            } catch (const stream_error& e) {
                return finish(false, FailureCause::infrastructure, t, dt,
                              std::move(trace), e.what());
            }
            if (chunk.inference_time != t)
                return finish(false, FailureCause::infrastructure, t, dt,
                              std::move(trace),
                              "chunk inference_time does not match observation");
            pending.emplace_back(t + predictor.latency_steps, std::move(chunk));
        }

        while (!pending.empty() && pending.front().first <= t) {
            if (options.on_chunk) options.on_chunk(pending.front().second);
            buffer.push(std::move(pending.front().second));
            pending.pop_front();
        }

        // Ensemble a command for t+f; if nothing covers that step yet
        // (possible only under latency), hold the current pose.
        ActionVector command;
        std::int64_t newest_v = -1;
        bool ensembled = false;
        if (!buffer.empty()) {
            try {
                command = ensemble_action(buffer, t, ensemble);
                newest_v = column_sources(buffer, t, ensemble.f).front();
                ensembled = true;
            } catch (const empty_column_error&) {
            }
        }
        if (!ensembled)
            command = {world.agent.pos.x, world.agent.pos.y, world.agent.grip};

        const WorldSnapshot before = world;
        world = step(before, command, limits);
        if (options.want_trace)
            trace.push_back({t, command, world.agent, newest_v, ensembled});

        for (const Event& ev : check_events(before, world, command, scenario.events)) {
            switch (ev.kind) {
                case EventKind::drop:
                    return finish(false, FailureCause::drop, t + 1, dt,
                                  std::move(trace), "");
                case EventKind::place:
                    if (ev.in_matching_box)
                        return finish(true, FailureCause::none, t + 1, dt,
                                      std::move(trace), "");
                    return finish(false, FailureCause::misplace, t + 1, dt,
                                  std::move(trace), "");
                case EventKind::grasp:
                    break; // carry on
            }
        }
    }

    return finish(false, FailureCause::timeout, max_steps, dt, std::move(trace), "");
}

EpisodeResult run_episode(std::uint64_t seed, const Scenario& scenario,
                          const EnsembleConfig& ensemble,
                          const PredictorConfig& predictor,
                          const PlantLimits& limits, const LoopOptions& options) {
    const WorldSnapshot world = make_initial_world(scenario, seed);
    const ScriptedPredictor scripted(predictor, ensemble.chunk_len, limits.dt,
                                     noise_seed_for(seed));
    PredictorChunkSource source(scripted);
    return run_control_loop(world, scenario, ensemble, predictor, limits, source,
                            options);
}

}  // namespace pte
