#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace pte {

// One action sample. Fixed dimension per episode: the simulator profile is
// dof=3 (x [m], y [m], grip in [0,1]); the replay profile is the 26-dof
// dual-arm pose feature handled by the pose codec.
using ActionVector = std::vector<double>;

// A sequence of L action samples predicted at control step `inference_time` v,
// covering target times v .. v+L-1; actions[j] targets step v+j and
// actions[0] is the state at the moment of inference.
struct ActionChunk {
    std::int64_t inference_time = 0;
    std::vector<ActionVector> actions;
};

struct EnsembleConfig {
    double m = 0.05;           // weight slope; larger emphasizes newer chunks
    int f = 0;                 // lookahead offset, in [0, chunk_len-1]
    int chunk_len = 24;        // L, samples per chunk
    int inference_period = 1;  // control steps between chunk requests
    double control_hz = 20.0;

    double dt() const { return 1.0 / control_hz; }
};

struct PredictorConfig {
    double demo_speed = 0.25;         // m/s embedded in planned chunks
    double waypoint_tolerance = 0.02; // m; arrival radius for plan goals
    double noise_sigma = 0.0;         // m; Gaussian std on position channels
    int latency_steps = 0;            // chunks delivered this many steps late
    int grip_steps = 4;               // planned close/open duration, steps
    int hold_steps = 4;               // planned dwell at a goal before
                                      // actuating the grip, steps
};

struct PlantLimits {
    double v_max = 0.9;     // m/s
    double a_max = 4.0;     // m/s^2
    double dt = 0.05;       // s, = 1/control_hz
    double grip_rate = 5.0; // 1/s; slew rate of the physical grip.
                            // Default matches the planner's schedule rate
                            // (1 / (grip_steps * dt)) so planned grip
                            // trajectories are physically trackable.
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

struct BoxRegion {
    Vec2 min;
    Vec2 max;
    std::string color = "yellow";

    bool contains(Vec2 p) const {
        return min.x <= p.x && p.x <= max.x && min.y <= p.y && p.y <= max.y;
    }
    Vec2 center() const { return {0.5 * (min.x + max.x), 0.5 * (min.y + max.y)}; }
};

struct Block {
    Vec2 pos;
    std::string color = "yellow";
    bool held = false;
};

struct AgentState {
    Vec2 pos;
    Vec2 vel;
    double grip = 0.0;
};

struct WorldSnapshot {
    AgentState agent;
    std::vector<Block> blocks;
    std::vector<BoxRegion> boxes;
    Vec2 workspace_min{0.0, 0.0};
    Vec2 workspace_max{1.20, 0.80};
    std::int64_t time_step = 0;
};

// The predictor's input: the control-step index, the agent pose in action
// layout ([x, y, grip] for the simulator profile), and the world state.
struct Observation {
    std::int64_t time = 0;
    ActionVector agent_pose;
    WorldSnapshot world;
};

struct EventConfig {
    double r_grasp = 0.06;         // m; grasp radius around a free block
    double close_threshold = 0.75; // grip level counting as "closed"
    double open_threshold = 0.25;  // grip level counting as "open"
    double e_drop = 0.35;          // m; tracking error that drops a held block
};

// World layout plus episode-level rules (event thresholds, timeout).
struct Scenario {
    Vec2 home{0.60, 0.25};
    Vec2 spawn_min{0.86, 0.56}; // block spawn rectangle
    Vec2 spawn_max{1.10, 0.70};
    std::string block_color = "yellow";
    BoxRegion box{{0.05, 0.28}, {0.33, 0.52}, "yellow"};
    Vec2 workspace_min{0.0, 0.0};
    Vec2 workspace_max{1.20, 0.80};
    EventConfig events;
    double timeout_s = 60.0;
};

enum class FailureCause { none, drop, misplace, timeout, infrastructure };

std::string to_string(FailureCause c);

inline bool operator==(const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }
inline bool operator==(const AgentState& a, const AgentState& b) {
    return a.pos == b.pos && a.vel == b.vel && a.grip == b.grip;
}

// One control tick of an episode trace. `newest_v` is the inference time of
// the newest chunk contributing to that tick's ensemble column, or -1 when
// the agent held its pose because no chunk covered the target time.
struct TraceStep {
    std::int64_t t = 0;
    ActionVector command;
    AgentState agent;
    std::int64_t newest_v = -1;
    bool ensembled = false;

    friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

struct EpisodeResult {
    bool success = false;
    FailureCause failure_cause = FailureCause::none;
    std::int64_t elapsed_steps = 0;
    double elapsed_seconds = 0.0;
    std::vector<TraceStep> trace;
    std::string note; // extra detail, e.g. the planner error behind a timeout
};

}  // namespace pte
