#pragma once

// Kinematic pick-and-place world. The plant is a velocity/acceleration-
// limited planar point gripper tracking the ensemble's commanded pose; task
// outcome is decided by three events: GRASP (grip closes near a free block),
// DROP (tracking error on a held block exceeds a threshold — the mechanism
// by which aggressive lookahead loses the block), and PLACE (grip opens,
// successful inside the color-matched box).

#include <cstdint>
#include <vector>

#include "pte/types.hpp"

namespace pte {

// One explicit-Euler step of the plant toward `command` ([x, y, grip]).
// Desired speed follows a braking envelope min(v_max, sqrt(2*a_max*d), d/dt)
// toward the commanded point; acceleration is clamped to a_max; the grip
// slews toward the commanded grip at grip_rate. A held block follows the
// agent. Pure function; throws plant_fault on a non-finite command.
WorldSnapshot step(const WorldSnapshot& world, const ActionVector& command,
                   const PlantLimits& limits);

enum class EventKind { grasp, drop, place };

struct Event {
    EventKind kind;
    std::size_t block_index = 0;
    bool in_matching_box = false; // for place events
};

// Detects grip-threshold crossings and tracking-error violations across one
// plant step (`before` -> `after`, driven by `command`), applies their world
// effects (held flags, block release position), and returns the events in
// occurrence order. Total: never throws on valid worlds.
std::vector<Event> check_events(const WorldSnapshot& before, WorldSnapshot& after,
                                const ActionVector& command, const EventConfig& cfg);

// Initial world for a scenario: agent at rest at home with open grip, one
// block of the scenario color spawned uniformly in the spawn rectangle using
// the stream derived from `seed`.
WorldSnapshot make_initial_world(const Scenario& scenario, std::uint64_t seed);

}  // namespace pte
