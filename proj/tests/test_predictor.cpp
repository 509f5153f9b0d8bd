#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"

#include "pte/errors.hpp"
#include "pte/predictor.hpp"
#include "pte/rng.hpp"

using namespace pte;

namespace {

// A world with one yellow block and the matching box; agent wherever the
// observation says.
WorldSnapshot world_with_block(Vec2 block_pos, bool held = false) {
    WorldSnapshot world;
    world.blocks.push_back({block_pos, "yellow", held});
    world.boxes.push_back({{0.05, 0.28}, {0.33, 0.52}, "yellow"});
    return world;
}

Observation make_obs(std::int64_t t, Vec2 agent, double grip,
                     WorldSnapshot world) {
    Observation obs;
    obs.time = t;
    obs.agent_pose = {agent.x, agent.y, grip};
    world.agent.pos = agent;
    world.agent.grip = grip;
    obs.world = std::move(world);
    return obs;
}

}  // namespace

TEST_SUITE("predictor") {

TEST_CASE("a finished task plans a fixed-point chunk") {
    // The block already rests in its box: nothing to do, so every entry
    // repeats the observed pose.
    WorldSnapshot world = world_with_block({0.19, 0.40});
    const Observation obs = make_obs(12, {0.7, 0.3}, 0.0, world);
    const ActionChunk chunk = plan_chunk(obs, PredictorConfig{}, 24, 0.05);
    REQUIRE(chunk.actions.size() == 24);
    CHECK(chunk.inference_time == 12);
    for (const auto& a : chunk.actions) {
        CHECK(a == ActionVector{0.7, 0.3, 0.0});
    }
}

TEST_CASE("straight-line approach advances demo_speed*dt per entry") {
    // 1.0 m from the block at demo_speed 0.5 -> 0.025 m per control step;
    // entry j sits at distance 1.0 - 0.025*j from the goal.
    WorldSnapshot world = world_with_block({1.05, 0.1});
    const Observation obs = make_obs(0, {0.05, 0.1}, 0.0, world);
    PredictorConfig cfg;
    cfg.demo_speed = 0.5;
    const ActionChunk chunk = plan_chunk(obs, cfg, 24, 0.05);
    REQUIRE(chunk.actions.size() == 24);
    for (int j = 0; j < 24; ++j) {
        const auto& a = chunk.actions[static_cast<std::size_t>(j)];
        CHECK(std::abs(a[0] - (0.05 + 0.025 * j)) <= 1e-12);
        CHECK(a[1] == 0.1);
        CHECK(a[2] == 0.0);
        const double d = std::abs(1.05 - a[0]);
        CHECK(std::abs(d - (1.0 - 0.025 * j)) <= 1e-12);
    }
}

TEST_CASE("planning is deterministic") {
    WorldSnapshot world = world_with_block({0.95, 0.6});
    const Observation obs = make_obs(3, {0.6, 0.25}, 0.0, world);
    const ActionChunk a = plan_chunk(obs, PredictorConfig{}, 24, 0.05);
    const ActionChunk b = plan_chunk(obs, PredictorConfig{}, 24, 0.05);
    CHECK(a.inference_time == b.inference_time);
    CHECK(a.actions == b.actions);
}

TEST_CASE("every plan respects the demonstrator speed ceiling") {
    const PredictorConfig cfg;
    const double cap = cfg.demo_speed * 0.05 + 1e-12;
    std::vector<Observation> cases;
    cases.push_back(make_obs(0, {0.6, 0.25}, 0.0, world_with_block({0.95, 0.6})));
    cases.push_back(make_obs(5, {0.95, 0.6}, 0.4, world_with_block({0.95, 0.6})));
    cases.push_back(make_obs(9, {0.95, 0.6}, 1.0, world_with_block({0.95, 0.6}, true)));
    cases.push_back(make_obs(14, {0.4, 0.45}, 1.0, world_with_block({0.4, 0.45}, true)));
    cases.push_back(make_obs(20, {0.5, 0.5}, 0.5, world_with_block({0.9, 0.65})));
    for (const Observation& obs : cases) {
        const ActionChunk chunk = plan_chunk(obs, cfg, 24, 0.05);
        for (std::size_t j = 0; j + 1 < chunk.actions.size(); ++j) {
            const auto& a = chunk.actions[j];
            const auto& b = chunk.actions[j + 1];
            CHECK(std::hypot(b[0] - a[0], b[1] - a[1]) <= cap);
        }
    }
}

TEST_CASE("plans from along the planned path agree on overlapping targets") {
    // Closed-loop consistency on motion segments: planning from the pose the
    // previous plan predicted for t+1 reproduces that plan's suffix exactly.
    const PredictorConfig cfg;
    const auto check_suffix = [&](const Observation& obs) {
        const ActionChunk c1 = plan_chunk(obs, cfg, 24, 0.05);
        Observation next = obs;
        next.time = obs.time + 1;
        next.agent_pose = c1.actions[1];
        next.world.agent.pos = {c1.actions[1][0], c1.actions[1][1]};
        next.world.agent.grip = c1.actions[1][2];
        const ActionChunk c2 = plan_chunk(next, cfg, 24, 0.05);
        for (std::size_t j = 0; j + 1 < c1.actions.size(); ++j) {
            CHECK(c2.actions[j] == c1.actions[j + 1]);
        }
    };
    // Approach segment (far from the block, grip open).
    check_suffix(make_obs(0, {0.6, 0.25}, 0.0, world_with_block({0.95, 0.6})));
    // Carry segment (holding, far from the box).
    check_suffix(make_obs(40, {0.95, 0.6}, 1.0, world_with_block({0.95, 0.6}, true)));
}

TEST_CASE("the grip schedule closes linearly after the settle dwell") {
    PredictorConfig cfg;  // hold_steps = 4, grip_steps = 4
    WorldSnapshot world = world_with_block({0.7, 0.4});
    const Observation obs = make_obs(0, {0.7, 0.4}, 0.0, world);
    const ActionChunk chunk = plan_chunk(obs, cfg, 24, 0.05);
    // Entries 1..4 dwell with grip 0 (settle), entries 5..8 ramp by 0.25.
    for (int j = 1; j <= 4; ++j) {
        CHECK(chunk.actions[static_cast<std::size_t>(j)][2] == 0.0);
    }
    for (int j = 5; j <= 8; ++j) {
        CHECK(std::abs(chunk.actions[static_cast<std::size_t>(j)][2] -
                       0.25 * (j - 4)) <= 1e-12);
    }
    CHECK(chunk.actions[8][2] == 1.0);
    // After the grasp completes the plan carries toward the box.
    CHECK(std::hypot(chunk.actions[10][0] - 0.7,
                     chunk.actions[10][1] - 0.4) > 0.0);
}

TEST_CASE("a partially closed grip away from any block reopens en route") {
    WorldSnapshot world = world_with_block({0.95, 0.6});
    const Observation obs = make_obs(0, {0.6, 0.25}, 0.5, world);
    const ActionChunk chunk = plan_chunk(obs, PredictorConfig{}, 24, 0.05);
    // The reopening happens concurrently with motion, never as a dwell.
    CHECK(chunk.actions[1][2] == 0.25);
    CHECK(chunk.actions[2][2] == 0.0);
    CHECK(std::hypot(chunk.actions[1][0] - chunk.actions[0][0],
                     chunk.actions[1][1] - chunk.actions[0][1]) > 0.0);
}

TEST_CASE("plan_chunk validates its inputs") {
    WorldSnapshot world = world_with_block({0.95, 0.6});
    const Observation obs = make_obs(0, {0.6, 0.25}, 0.0, world);
    CHECK_THROWS_AS(plan_chunk(obs, PredictorConfig{}, 0, 0.05),
                    invalid_argument);
    Observation short_pose = obs;
    short_pose.agent_pose = {0.6, 0.25};
    CHECK_THROWS_AS(plan_chunk(short_pose, PredictorConfig{}, 24, 0.05),
                    invalid_argument);
    Observation nan_pose = obs;
    nan_pose.agent_pose[0] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(plan_chunk(nan_pose, PredictorConfig{}, 24, 0.05),
                    invalid_argument);
}

TEST_CASE("goals outside the workspace raise planning errors") {
    // Block beyond the workspace edge.
    WorldSnapshot world = world_with_block({1.5, 0.6});
    CHECK_THROWS_AS(plan_chunk(make_obs(0, {0.6, 0.25}, 0.0, world),
                               PredictorConfig{}, 24, 0.05),
                    planning_error);
    // Matching box centered outside the workspace while holding.
    WorldSnapshot carry = world_with_block({0.6, 0.25}, true);
    carry.boxes[0] = {{1.3, 0.2}, {1.6, 0.5}, "yellow"};
    CHECK_THROWS_AS(plan_chunk(make_obs(0, {0.6, 0.25}, 1.0, carry),
                               PredictorConfig{}, 24, 0.05),
                    planning_error);
    // No box of the block's color at all.
    WorldSnapshot orphan = world_with_block({0.6, 0.25}, true);
    orphan.boxes[0].color = "blue";
    CHECK_THROWS_AS(plan_chunk(make_obs(0, {0.6, 0.25}, 1.0, orphan),
                               PredictorConfig{}, 24, 0.05),
                    planning_error);
}

TEST_CASE("perturb_chunk leaves sigma=0 chunks bit-identical") {
    WorldSnapshot world = world_with_block({0.95, 0.6});
    const ActionChunk plain = plan_chunk(make_obs(0, {0.6, 0.25}, 0.0, world),
                                         PredictorConfig{}, 24, 0.05);
    Rng rng(1u);
    const ActionChunk out = perturb_chunk(plain, 0.0, rng);
    CHECK(out.actions == plain.actions);
    // No randomness consumed: the stream is untouched.
    Rng fresh(1u);
    CHECK(rng.uniform01() == fresh.uniform01());
}

TEST_CASE("perturb_chunk is reproducible and grip-preserving") {
    WorldSnapshot world = world_with_block({0.95, 0.6});
    const ActionChunk plain = plan_chunk(make_obs(0, {0.6, 0.25}, 0.0, world),
                                         PredictorConfig{}, 24, 0.05);
    Rng a(42u), b(42u), c(43u);
    const ActionChunk pa = perturb_chunk(plain, 0.01, a);
    const ActionChunk pb = perturb_chunk(plain, 0.01, b);
    const ActionChunk pc = perturb_chunk(plain, 0.01, c);
    CHECK(pa.actions == pb.actions);
    CHECK(pa.actions != pc.actions);
    for (std::size_t j = 0; j < plain.actions.size(); ++j) {
        CHECK(pa.actions[j][2] == plain.actions[j][2]);  // grip untouched
        CHECK(pa.actions[j][0] != plain.actions[j][0]);
    }
}

TEST_CASE("perturbation noise has the configured scale") {
    const double sigma = 0.01;
    ActionChunk base;
    base.inference_time = 0;
    base.actions.assign(24, ActionVector{0.5, 0.5, 0.3});
    Rng rng(2024u);
    double sum = 0.0, sq = 0.0;
    std::int64_t n = 0;
    for (int rep = 0; rep < 2200; ++rep) {
        const ActionChunk noisy = perturb_chunk(base, sigma, rng);
        for (const auto& a : noisy.actions) {
            for (int d = 0; d < 2; ++d) {
                const double e = a[static_cast<std::size_t>(d)] - 0.5;
                sum += e;
                sq += e * e;
                ++n;
            }
        }
    }
    CHECK(n >= 100000);
    const double mean = sum / static_cast<double>(n);
    const double std_dev = std::sqrt(sq / static_cast<double>(n) - mean * mean);
    CHECK(std::abs(std_dev - sigma) <= 0.05 * sigma);
    CHECK(std::abs(mean) <= 0.02 * sigma);
}

TEST_CASE("perturb_chunk rejects bad sigma and unknown layouts") {
    ActionChunk base;
    base.inference_time = 0;
    base.actions.assign(4, ActionVector{0.5, 0.5, 0.3});
    Rng rng(7u);
    CHECK_THROWS_AS(perturb_chunk(base, -0.1, rng), invalid_argument);
    CHECK_THROWS_AS(
        perturb_chunk(base, std::numeric_limits<double>::quiet_NaN(), rng),
        invalid_argument);
    ActionChunk odd;
    odd.inference_time = 0;
    odd.actions.assign(4, ActionVector{0.5, 0.5, 0.3, 0.1});  // dof 4
    CHECK_THROWS_AS(perturb_chunk(odd, 0.01, rng), invalid_argument);
}

TEST_CASE("scripted predictor noise depends on the observation, not call order") {
    PredictorConfig cfg;
    cfg.noise_sigma = 0.02;
    const ScriptedPredictor pred(cfg, 24, 0.05, 555u);
    WorldSnapshot world = world_with_block({0.95, 0.6});
    const Observation at3 = make_obs(3, {0.6, 0.25}, 0.0, world);
    const Observation at9 = make_obs(9, {0.7, 0.35}, 0.0, world);

    const ActionChunk a3_first = pred.chunk_for(at3);
    const ActionChunk a9_first = pred.chunk_for(at9);
    const ActionChunk a9_again = pred.chunk_for(at9);
    const ActionChunk a3_again = pred.chunk_for(at3);
    CHECK(a3_first.actions == a3_again.actions);
    CHECK(a9_first.actions == a9_again.actions);
    CHECK(a3_first.actions != a9_first.actions);

    const ScriptedPredictor other(cfg, 24, 0.05, 556u);
    CHECK(other.chunk_for(at3).actions != a3_first.actions);
}

}  // TEST_SUITE
