#include "pte/sim.hpp"

#include <algorithm>
#include <cmath>

#include "pte/errors.hpp"
#include "pte/rng.hpp"

namespace pte {

namespace {

constexpr std::uint64_t kSpawnStream = 0;

const BoxRegion* matching_box(const WorldSnapshot& world, const std::string& color) {
    for (const auto& box : world.boxes)
        if (box.color == color) return &box;
    return nullptr;
}

}  // namespace

WorldSnapshot step(const WorldSnapshot& world, const ActionVector& command,
                   const PlantLimits& limits) {
    if (command.size() != 3) throw plant_fault("plant command must have dof 3");
    for (double c : command)
        if (!std::isfinite(c)) throw plant_fault("non-finite plant command");

    WorldSnapshot next = world;
    AgentState& agent = next.agent;

    const Vec2 target{command[0], command[1]};
    const Vec2 delta = target - agent.pos;
    const double d = norm(delta);

    Vec2 v_des{0.0, 0.0};
    if (d > 1e-12) {
        // Braking envelope: never request a speed the plant cannot shed
        // before reaching the commanded point.
        const double sp = std::min({limits.v_max,
                                    std::sqrt(2.0 * limits.a_max * d),
                                    d / limits.dt});
        v_des = (sp / d) * delta;
    }

    Vec2 accel = v_des - agent.vel;
    const double a = norm(accel);
    const double a_lim = limits.a_max * limits.dt;
    if (a > a_lim) accel = (a_lim / a) * accel;

    agent.vel = agent.vel + accel;
    agent.pos = agent.pos + limits.dt * agent.vel;

    const double g_lim = limits.grip_rate * limits.dt;
    const double dg = std::clamp(command[2] - agent.grip, -g_lim, g_lim);
    agent.grip = std::clamp(agent.grip + dg, 0.0, 1.0);

    for (auto& block : next.blocks)
        if (block.held) block.pos = agent.pos;

    next.time_step = world.time_step + 1;
    return next;
}

std::vector<Event> check_events(const WorldSnapshot& before, WorldSnapshot& after,
                                const ActionVector& command, const EventConfig& cfg) {
    std::vector<Event> events;
    const double prev_grip = before.agent.grip;
    const double grip = after.agent.grip;
    const Vec2 agent_pos = after.agent.pos;

    // DROP: a held block whose command is running away faster than the plant
    // can track loses contact.
    for (std::size_t i = 0; i < after.blocks.size(); ++i) {
        Block& block = after.blocks[i];
        if (!block.held) continue;
        const Vec2 cmd_xy{command[0], command[1]};
        if (dist(cmd_xy, agent_pos) > cfg.e_drop) {
            block.held = false;
            block.pos = agent_pos;
            events.push_back({EventKind::drop, i, false});
        }
    }

    // GRASP: grip crossed the close threshold this step within reach of a
    // free block, and nothing is currently held.
    const bool holding_any =
        std::any_of(after.blocks.begin(), after.blocks.end(),
                    [](const Block& b) { return b.held; });
    if (!holding_any && prev_grip < cfg.close_threshold &&
        grip >= cfg.close_threshold) {
        for (std::size_t i = 0; i < after.blocks.size(); ++i) {
            Block& block = after.blocks[i];
            if (block.held) continue;
            if (dist(agent_pos, block.pos) <= cfg.r_grasp) {
                block.held = true;
                block.pos = agent_pos;
                events.push_back({EventKind::grasp, i, false});
                break;
            }
        }
    }

    // PLACE: grip crossed the open threshold while holding.
    if (prev_grip > cfg.open_threshold && grip <= cfg.open_threshold) {
        for (std::size_t i = 0; i < after.blocks.size(); ++i) {
            Block& block = after.blocks[i];
            if (!block.held) continue;
            block.held = false;
            block.pos = agent_pos;
            const BoxRegion* box = matching_box(after, block.color);
            const bool inside = box != nullptr && box->contains(agent_pos);
            events.push_back({EventKind::place, i, inside});
        }
    }

    return events;
}

WorldSnapshot make_initial_world(const Scenario& scenario, std::uint64_t seed) {
    Rng rng(derive_seed(seed, kSpawnStream));

    WorldSnapshot world;
    world.agent.pos = scenario.home;
    world.agent.vel = {0.0, 0.0};
    world.agent.grip = 0.0;

    Block block;
    block.color = scenario.block_color;
    block.pos.x = rng.uniform(scenario.spawn_min.x, scenario.spawn_max.x);
    block.pos.y = rng.uniform(scenario.spawn_min.y, scenario.spawn_max.y);
    world.blocks.push_back(block);

    world.boxes.push_back(scenario.box);
    world.workspace_min = scenario.workspace_min;
    world.workspace_max = scenario.workspace_max;
    world.time_step = 0;
    return world;
}

}  // namespace pte
