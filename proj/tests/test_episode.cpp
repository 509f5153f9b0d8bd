// Tests for the episode control loop: determinism, timing arithmetic,
// lookahead speedup, failure classification, latency bookkeeping, and the
// chunk-delivery callback.

#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "pte/episode.hpp"
#include "pte/errors.hpp"
#include "pte/sim.hpp"
#include "pte/types.hpp"

using namespace pte;

namespace {

struct Fixture {
    Scenario scenario;
    EnsembleConfig ensemble;
    PredictorConfig predictor;
    PlantLimits limits;
};

Fixture defaults() { return {}; }

}  // namespace

TEST_SUITE("episode") {

TEST_CASE("the same seed reproduces the episode exactly") {
    auto fx = defaults();
    fx.predictor.noise_sigma = 0.02;  // exercise the noise path too
    const EpisodeResult a =
        run_episode(42, fx.scenario, fx.ensemble, fx.predictor, fx.limits);
    const EpisodeResult b =
        run_episode(42, fx.scenario, fx.ensemble, fx.predictor, fx.limits);

    CHECK(a.success == b.success);
    CHECK(a.failure_cause == b.failure_cause);
    CHECK(a.elapsed_steps == b.elapsed_steps);
    CHECK(a.elapsed_seconds == b.elapsed_seconds);
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) CHECK(a.trace[i] == b.trace[i]);
}

TEST_CASE("a noise-free baseline episode succeeds in about the scripted time") {
    auto fx = defaults();
    const std::uint64_t seed = 3;
    const WorldSnapshot start = make_initial_world(fx.scenario, seed);
    const EpisodeResult r =
        run_episode(seed, fx.scenario, fx.ensemble, fx.predictor, fx.limits);

    REQUIRE(r.success);
    CHECK(r.failure_cause == FailureCause::none);

    // The plan moves home -> block -> box center at demo_speed with a dwell
    // and a grip actuation at each end.
    const double d1 = dist(start.agent.pos, start.blocks.at(0).pos);
    const double d2 = dist(start.blocks.at(0).pos, fx.scenario.box.center());
    const double travel = (d1 + d2) / fx.predictor.demo_speed;
    const double dwell = (2.0 * fx.predictor.hold_steps + 2.0 * fx.predictor.grip_steps) *
                         fx.ensemble.dt();
    CHECK(std::abs(r.elapsed_seconds - (travel + dwell)) <= 1.0);
}

TEST_CASE("elapsed_seconds is elapsed_steps times the control period") {
    auto fx = defaults();
    for (std::uint64_t seed : {1u, 2u, 9u}) {
        const EpisodeResult r =
            run_episode(seed, fx.scenario, fx.ensemble, fx.predictor, fx.limits);
        CHECK(r.elapsed_seconds == static_cast<double>(r.elapsed_steps) * fx.ensemble.dt());
    }
}

TEST_CASE("larger lookahead finishes faster on the same seed") {
    auto fx = defaults();
    EnsembleConfig fast = fx.ensemble;
    fast.f = 20;
    for (std::uint64_t seed : {1u, 5u, 11u}) {
        const EpisodeResult slow =
            run_episode(seed, fx.scenario, fx.ensemble, fx.predictor, fx.limits);
        const EpisodeResult quick =
            run_episode(seed, fx.scenario, fast, fx.predictor, fx.limits);
        REQUIRE(slow.success);
        REQUIRE(quick.success);
        CHECK(quick.elapsed_steps < slow.elapsed_steps);
    }
}

TEST_CASE("an expiring clock reports a timeout at the step limit") {
    auto fx = defaults();
    fx.scenario.timeout_s = 0.5;  // 10 steps at 20 Hz; far too short to finish
    const EpisodeResult r =
        run_episode(4, fx.scenario, fx.ensemble, fx.predictor, fx.limits);
    CHECK_FALSE(r.success);
    CHECK(r.failure_cause == FailureCause::timeout);
    CHECK(r.elapsed_steps == 10);
}

TEST_CASE("a planner failure surfaces as a timeout with an explanatory note") {
    auto fx = defaults();
    // No box matches the block color, so planning fails on the very first
    // observation; the loop can only hold pose until the clock runs out.
    fx.scenario.box.color = "green";
    fx.scenario.timeout_s = 1.0;
    const EpisodeResult r =
        run_episode(4, fx.scenario, fx.ensemble, fx.predictor, fx.limits);
    CHECK_FALSE(r.success);
    CHECK(r.failure_cause == FailureCause::timeout);
    CHECK(r.note.find("planner") != std::string::npos);
}

TEST_CASE("with zero latency every step is ensembled from the current chunk") {
    auto fx = defaults();
    const EpisodeResult r =
        run_episode(6, fx.scenario, fx.ensemble, fx.predictor, fx.limits);
    REQUIRE(r.success);
    REQUIRE(!r.trace.empty());
    for (const TraceStep& s : r.trace) {
        CHECK(s.ensembled);
        CHECK(s.newest_v == s.t);
    }
}

TEST_CASE("chunk latency delays the newest contributing inference time") {
    auto fx = defaults();
    fx.predictor.latency_steps = 3;
    const EpisodeResult r =
        run_episode(6, fx.scenario, fx.ensemble, fx.predictor, fx.limits);
    REQUIRE(r.success);
    REQUIRE(r.trace.size() > 3);
    for (const TraceStep& s : r.trace) {
        if (s.t < 3) {
            // Nothing has arrived yet: the agent holds pose.
            CHECK_FALSE(s.ensembled);
            CHECK(s.newest_v == -1);
        } else {
            CHECK(s.ensembled);
            CHECK(s.newest_v == s.t - 3);
        }
        CHECK(s.newest_v <= s.t);
    }
}

TEST_CASE("disabling the trace leaves it empty without changing the outcome") {
    auto fx = defaults();
    LoopOptions quiet;
    quiet.want_trace = false;
    const EpisodeResult traced =
        run_episode(8, fx.scenario, fx.ensemble, fx.predictor, fx.limits);
    const EpisodeResult bare =
        run_episode(8, fx.scenario, fx.ensemble, fx.predictor, fx.limits, quiet);
    CHECK(bare.trace.empty());
    CHECK_FALSE(traced.trace.empty());
    CHECK(bare.success == traced.success);
    CHECK(bare.elapsed_steps == traced.elapsed_steps);
}

TEST_CASE("the chunk callback sees one delivery per step in inference order") {
    auto fx = defaults();
    std::vector<std::int64_t> seen;
    LoopOptions options;
    options.on_chunk = [&](const ActionChunk& chunk) { seen.push_back(chunk.inference_time); };
    const EpisodeResult r =
        run_episode(12, fx.scenario, fx.ensemble, fx.predictor, fx.limits, options);
    REQUIRE(r.success);
    REQUIRE(static_cast<std::int64_t>(seen.size()) == r.elapsed_steps);
    for (std::size_t i = 0; i < seen.size(); ++i)
        CHECK(seen[i] == static_cast<std::int64_t>(i));
}

TEST_CASE("a transport failure is classified as infrastructure") {
    struct Flaky final : ChunkSource {
        ActionChunk fetch(const Observation&) override {
            throw stream_error("connection reset");
        }
    };
    auto fx = defaults();
    Flaky source;
    WorldSnapshot world = make_initial_world(fx.scenario, 1);
    const EpisodeResult r = run_control_loop(world, fx.scenario, fx.ensemble,
                                             fx.predictor, fx.limits, source);
    CHECK_FALSE(r.success);
    CHECK(r.failure_cause == FailureCause::infrastructure);
}

TEST_CASE("a sparser inference period still completes the task") {
    auto fx = defaults();
    fx.ensemble.inference_period = 4;
    const EpisodeResult r =
        run_episode(2, fx.scenario, fx.ensemble, fx.predictor, fx.limits);
    CHECK(r.success);
    CHECK(r.failure_cause == FailureCause::none);
}

}  // TEST_SUITE
