#include "pte/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "pte/errors.hpp"

namespace pte {

namespace {

Vec2 advance_toward(Vec2 p, Vec2 goal, double step) {
    const double d = dist(p, goal);
    if (d <= step) return goal;
    const double s = step / d;
    return {p.x + (goal.x - p.x) * s, p.y + (goal.y - p.y) * s};
}

const BoxRegion* matching_box(const WorldSnapshot& world, const std::string& color) {
    for (const auto& box : world.boxes)
        if (box.color == color) return &box;
    return nullptr;
}

Vec2 carry_goal_for(const WorldSnapshot& world, const Block& block) {
    const BoxRegion* box = matching_box(world, block.color);
    if (box == nullptr)
        throw planning_error("no box matches block color '" + block.color + "'");
    return box->center();
}

void require_in_workspace(const WorldSnapshot& world, Vec2 goal,
                          const char* what) {
    if (goal.x < world.workspace_min.x || goal.x > world.workspace_max.x ||
        goal.y < world.workspace_min.y || goal.y > world.workspace_max.y)
        throw planning_error(std::string(what) + " goal (" +
                             std::to_string(goal.x) + ", " + std::to_string(goal.y) +
                             ") is outside the workspace");
}

}  // namespace

ActionChunk plan_chunk(const Observation& obs, const PredictorConfig& cfg,
                       int L, double dt) {
    if (L < 1) throw invalid_argument("plan_chunk needs L >= 1");
    if (cfg.grip_steps < 1) throw invalid_argument("grip_steps must be >= 1");
    if (obs.agent_pose.size() != 3)
        throw invalid_argument("plan_chunk expects a dof-3 agent pose, got " +
                               std::to_string(obs.agent_pose.size()));
    for (double x : obs.agent_pose)
        if (!std::isfinite(x)) throw invalid_argument("non-finite agent pose");

    const WorldSnapshot& world = obs.world;

    // Derive the phase targets from the world alone: a held block is carried
    // to its box; otherwise the first unplaced block is the pick target.
    const Block* held_block = nullptr;
    const Block* target_block = nullptr;
    for (const auto& b : world.blocks) {
        if (b.held) {
            held_block = &b;
            break;
        }
    }
    if (held_block == nullptr) {
        for (const auto& b : world.blocks) {
            const BoxRegion* home = matching_box(world, b.color);
            if (home != nullptr && home->contains(b.pos)) continue; // placed
            target_block = &b;
            break;
        }
    }

    Vec2 carry_goal{};
    if (held_block != nullptr) {
        carry_goal = carry_goal_for(world, *held_block);
        require_in_workspace(world, carry_goal, "carry");
    } else if (target_block != nullptr) {
        require_in_workspace(world, target_block->pos, "approach");
        carry_goal = carry_goal_for(world, *target_block);
        require_in_workspace(world, carry_goal, "carry");
    }

    const double step = cfg.demo_speed * dt;
    const double dg = 1.0 / static_cast<double>(cfg.grip_steps);

    ActionChunk chunk;
    chunk.inference_time = obs.time;
    chunk.actions.reserve(static_cast<std::size_t>(L));
    chunk.actions.push_back(obs.agent_pose);

    Vec2 p{obs.agent_pose[0], obs.agent_pose[1]};
    double g = obs.agent_pose[2];
    bool holding = held_block != nullptr;
    int hold = 0;
    bool done = false;

    for (int j = 1; j < L; ++j) {
        if (done) {
            // keep holding the final pose
        } else if (holding) {
            if (dist(p, carry_goal) > cfg.waypoint_tolerance) {
                p = advance_toward(p, carry_goal, step);
                hold = 0;
            } else if (g < 1.0 || hold >= cfg.hold_steps) {
                g -= dg;
                if (g < 1e-9) {
                    g = 0.0;
                    done = true;
                }
            } else {
                ++hold;
            }
        } else if (target_block == nullptr) {
            done = true;
        } else {
            const Vec2 goal = target_block->pos;
            const bool at_goal = dist(p, goal) <= cfg.waypoint_tolerance;
            if (at_goal && (g > 0.0 || hold >= cfg.hold_steps)) {
                g += dg;
                if (g > 1.0 - 1e-9) {
                    g = 1.0;
                    holding = true;
                    hold = 0;
                }
            } else if (at_goal) {
                ++hold;
            } else {
                p = advance_toward(p, goal, step);
                hold = 0;
                if (g > 0.0) g = std::max(0.0, g - dg); // reopen en route
            }
        }
        chunk.actions.push_back({p.x, p.y, g});
    }
    return chunk;
}

ActionChunk perturb_chunk(ActionChunk chunk, double sigma, Rng& rng) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma))
        throw invalid_argument("perturb_chunk needs finite sigma >= 0");
    if (sigma == 0.0) return chunk;

    std::vector<std::size_t> position_channels;
    const std::size_t dof = chunk.actions.empty() ? 0 : chunk.actions.front().size();
    if (dof == 3) {
        position_channels = {0, 1};
    } else if (dof == 26) {
        position_channels = {0, 1, 2, 13, 14, 15};
    } else {
        throw invalid_argument("perturb_chunk: no position layout for dof " +
                               std::to_string(dof));
    }

    for (auto& action : chunk.actions)
        for (std::size_t c : position_channels) action[c] += rng.gauss(0.0, sigma);
    return chunk;
}

ActionChunk ScriptedPredictor::chunk_for(const Observation& obs) const {
    ActionChunk chunk = plan_chunk(obs, cfg_, chunk_len_, dt_);
    if (cfg_.noise_sigma > 0.0) {
        Rng rng(derive_seed(noise_seed_, static_cast<std::uint64_t>(obs.time)));
        chunk = perturb_chunk(std::move(chunk), cfg_.noise_sigma, rng);
    }
    return chunk;
}

}  // namespace pte
