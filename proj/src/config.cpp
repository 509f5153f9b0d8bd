#include "pte/config.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>

#include "pte/errors.hpp"

namespace pte {

using nlohmann::json;

namespace {

json vec2_to_json(Vec2 v) { return json::array({v.x, v.y}); }

std::string join_path(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

// Two JSON values are merge-compatible when replacing one with the other
// cannot change the document's shape: numbers onto numbers, strings onto
// strings, booleans onto booleans, arrays onto arrays.
bool same_family(const json& base, const json& patch) {
    if (base.is_number() && patch.is_number()) return true;
    if (base.is_string() && patch.is_string()) return true;
    if (base.is_boolean() && patch.is_boolean()) return true;
    if (base.is_array() && patch.is_array()) return true;
    return false;
}

void merge_into(json& base, const json& patch, const std::string& prefix) {
    if (!patch.is_object()) {
        throw config_error("config fragment at '" +
                           (prefix.empty() ? std::string("<root>") : prefix) +
                           "' must be a JSON object");
    }
    for (auto it = patch.begin(); it != patch.end(); ++it) {
        const std::string path = join_path(prefix, it.key());
        if (!base.contains(it.key())) {
            throw config_error("unknown config key '" + path + "'");
        }
        json& slot = base[it.key()];
        if (slot.is_object()) {
            merge_into(slot, it.value(), path);
        } else if (same_family(slot, it.value())) {
            slot = it.value();
        } else {
            throw config_error("config key '" + path + "' expects " +
                               std::string(slot.type_name()) + ", got " +
                               std::string(it.value().type_name()));
        }
    }
}

double require_finite(double v, const std::string& path) {
    if (!std::isfinite(v)) {
        throw config_error("config key '" + path + "' must be finite");
    }
    return v;
}

double get_double(const json& doc, const std::string& path) {
    const json* cur = &doc;
    std::size_t start = 0;
    while (true) {
        std::size_t dot = path.find('.', start);
        std::string key = path.substr(start, dot - start);
        cur = &cur->at(key);
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    if (!cur->is_number()) {
        throw config_error("config key '" + path + "' must be a number");
    }
    return require_finite(cur->get<double>(), path);
}

int get_int(const json& doc, const std::string& path) {
    double v = get_double(doc, path);
    if (v != std::floor(v) || std::abs(v) > 1e15) {
        throw config_error("config key '" + path + "' must be an integer");
    }
    return static_cast<int>(v);
}

std::uint64_t get_seed(const json& doc, const std::string& path) {
    const json& v = doc.at(path);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    throw config_error("config key '" + path +
                       "' must be a non-negative integer");
}

Vec2 get_vec2(const json& node, const std::string& path) {
    if (!node.is_array() || node.size() != 2 || !node[0].is_number() ||
        !node[1].is_number()) {
        throw config_error("config key '" + path +
                           "' must be a 2-element number array");
    }
    return {require_finite(node[0].get<double>(), path),
            require_finite(node[1].get<double>(), path)};
}

void check(bool ok, const std::string& message) {
    if (!ok) throw config_error(message);
}

}  // namespace

json default_config_json() {
    const SweepSpec d{};
    const StreamConfig s{};
    json doc;
    doc["f_values"] = d.f_values;
    doc["trials_per_f"] = d.trials_per_f;
    doc["base_seed"] = d.base_seed;
    doc["scenario"] = {
        {"home", vec2_to_json(d.scenario.home)},
        {"spawn_min", vec2_to_json(d.scenario.spawn_min)},
        {"spawn_max", vec2_to_json(d.scenario.spawn_max)},
        {"block_color", d.scenario.block_color},
        {"box",
         {{"min", vec2_to_json(d.scenario.box.min)},
          {"max", vec2_to_json(d.scenario.box.max)},
          {"color", d.scenario.box.color}}},
        {"workspace_min", vec2_to_json(d.scenario.workspace_min)},
        {"workspace_max", vec2_to_json(d.scenario.workspace_max)},
        {"events",
         {{"r_grasp", d.scenario.events.r_grasp},
          {"close_threshold", d.scenario.events.close_threshold},
          {"open_threshold", d.scenario.events.open_threshold},
          {"e_drop", d.scenario.events.e_drop}}},
        {"timeout_s", d.scenario.timeout_s},
    };
    doc["ensemble"] = {
        {"m", d.ensemble.m},
        {"f", d.ensemble.f},
        {"chunk_len", d.ensemble.chunk_len},
        {"inference_period", d.ensemble.inference_period},
        {"control_hz", d.ensemble.control_hz},
    };
    doc["predictor"] = {
        {"demo_speed", d.predictor.demo_speed},
        {"waypoint_tolerance", d.predictor.waypoint_tolerance},
        {"noise_sigma", d.predictor.noise_sigma},
        {"latency_steps", d.predictor.latency_steps},
        {"grip_steps", d.predictor.grip_steps},
        {"hold_steps", d.predictor.hold_steps},
    };
    doc["plant"] = {
        {"v_max", d.plant.v_max},
        {"a_max", d.plant.a_max},
        {"grip_rate", d.plant.grip_rate},
    };
    doc["stream"] = {{"host", s.host}, {"port", s.port}};
    return doc;
}

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw config_error("cannot open config file '" + path + "'");
    }
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) {
        throw config_error("config file '" + path + "' is not valid JSON");
    }
    if (!doc.is_object()) {
        throw config_error("config file '" + path +
                           "' must contain a JSON object");
    }
    return doc;
}

void merge_config(json& base, const json& patch) {
    merge_into(base, patch, "");
}

void apply_override(json& doc, const std::string& entry) {
    std::size_t eq = entry.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw config_error("override '" + entry + "' is not KEY=VAL");
    }
    const std::string path = entry.substr(0, eq);
    const std::string raw = entry.substr(eq + 1);

    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded() || value.is_object()) {
        value = raw;  // treat non-JSON (and object-shaped) values as strings
    }

    json* cur = &doc;
    std::size_t start = 0;
    while (true) {
        std::size_t dot = path.find('.', start);
        const std::string key = path.substr(start, dot - start);
        if (!cur->is_object() || !cur->contains(key)) {
            throw config_error("unknown config key '" + path + "'");
        }
        cur = &(*cur)[key];
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    if (cur->is_object()) {
        throw config_error("config key '" + path +
                           "' is a section, not a value");
    }
    if (!same_family(*cur, value)) {
        throw config_error("config key '" + path + "' expects " +
                           std::string(cur->type_name()) + ", got " +
                           std::string(value.type_name()));
    }
    *cur = value;
}

json resolve_config_json(const std::string& path,
                         const std::vector<std::string>& overrides) {
    json doc = default_config_json();
    if (!path.empty()) {
        merge_config(doc, load_config_file(path));
    }
    for (const std::string& entry : overrides) {
        apply_override(doc, entry);
    }
    return doc;
}

AppConfig config_from_json(const json& doc) {
    AppConfig app;
    SweepSpec& s = app.sweep;
    try {
        const json& fv = doc.at("f_values");
        check(fv.is_array(), "config key 'f_values' must be an array");
        s.f_values.clear();
        for (const json& v : fv) {
            check(v.is_number_integer(),
                  "config key 'f_values' must contain integers");
            s.f_values.push_back(v.get<int>());
        }
        s.trials_per_f = get_int(doc, "trials_per_f");
        s.base_seed = get_seed(doc, "base_seed");

        s.ensemble.m = get_double(doc, "ensemble.m");
        s.ensemble.f = get_int(doc, "ensemble.f");
        s.ensemble.chunk_len = get_int(doc, "ensemble.chunk_len");
        s.ensemble.inference_period = get_int(doc, "ensemble.inference_period");
        s.ensemble.control_hz = get_double(doc, "ensemble.control_hz");

        s.predictor.demo_speed = get_double(doc, "predictor.demo_speed");
        s.predictor.waypoint_tolerance =
            get_double(doc, "predictor.waypoint_tolerance");
        s.predictor.noise_sigma = get_double(doc, "predictor.noise_sigma");
        s.predictor.latency_steps = get_int(doc, "predictor.latency_steps");
        s.predictor.grip_steps = get_int(doc, "predictor.grip_steps");
        s.predictor.hold_steps = get_int(doc, "predictor.hold_steps");

        s.plant.v_max = get_double(doc, "plant.v_max");
        s.plant.a_max = get_double(doc, "plant.a_max");
        s.plant.grip_rate = get_double(doc, "plant.grip_rate");

        const json& sc = doc.at("scenario");
        s.scenario.home = get_vec2(sc.at("home"), "scenario.home");
        s.scenario.spawn_min = get_vec2(sc.at("spawn_min"), "scenario.spawn_min");
        s.scenario.spawn_max = get_vec2(sc.at("spawn_max"), "scenario.spawn_max");
        s.scenario.block_color = sc.at("block_color").get<std::string>();
        s.scenario.box.min = get_vec2(sc.at("box").at("min"), "scenario.box.min");
        s.scenario.box.max = get_vec2(sc.at("box").at("max"), "scenario.box.max");
        s.scenario.box.color = sc.at("box").at("color").get<std::string>();
        s.scenario.workspace_min =
            get_vec2(sc.at("workspace_min"), "scenario.workspace_min");
        s.scenario.workspace_max =
            get_vec2(sc.at("workspace_max"), "scenario.workspace_max");
        s.scenario.events.r_grasp = get_double(doc, "scenario.events.r_grasp");
        s.scenario.events.close_threshold =
            get_double(doc, "scenario.events.close_threshold");
        s.scenario.events.open_threshold =
            get_double(doc, "scenario.events.open_threshold");
        s.scenario.events.e_drop = get_double(doc, "scenario.events.e_drop");
        s.scenario.timeout_s = get_double(doc, "scenario.timeout_s");

        app.stream.host = doc.at("stream").at("host").get<std::string>();
        app.stream.port = get_int(doc, "stream.port");
    } catch (const json::exception& e) {
        throw config_error(std::string("malformed config document: ") +
                           e.what());
    }

    // Range checks.  The library ops re-validate what they consume; this pass
    // exists so a bad config fails at load time with a key name, not mid-run.
    check(s.trials_per_f >= 1, "'trials_per_f' must be >= 1");
    check(s.ensemble.chunk_len >= 1, "'ensemble.chunk_len' must be >= 1");
    check(s.ensemble.inference_period >= 1,
          "'ensemble.inference_period' must be >= 1");
    check(s.ensemble.control_hz > 0.0, "'ensemble.control_hz' must be > 0");
    check(s.ensemble.m >= 0.0, "'ensemble.m' must be >= 0");
    check(s.ensemble.f >= 0 && s.ensemble.f <= s.ensemble.chunk_len - 1,
          "'ensemble.f' must lie in [0, chunk_len-1]");
    for (int f : s.f_values) {
        check(f >= 0 && f <= s.ensemble.chunk_len - 1,
              "'f_values' entries must lie in [0, chunk_len-1]");
    }
    check(s.predictor.demo_speed > 0.0, "'predictor.demo_speed' must be > 0");
    check(s.predictor.waypoint_tolerance > 0.0,
          "'predictor.waypoint_tolerance' must be > 0");
    check(s.predictor.noise_sigma >= 0.0,
          "'predictor.noise_sigma' must be >= 0");
    check(s.predictor.latency_steps >= 0,
          "'predictor.latency_steps' must be >= 0");
    check(s.predictor.grip_steps >= 1, "'predictor.grip_steps' must be >= 1");
    check(s.predictor.hold_steps >= 0, "'predictor.hold_steps' must be >= 0");
    check(s.plant.v_max > 0.0, "'plant.v_max' must be > 0");
    check(s.plant.a_max > 0.0, "'plant.a_max' must be > 0");
    check(s.plant.grip_rate >= 0.0, "'plant.grip_rate' must be >= 0");
    check(s.scenario.timeout_s > 0.0, "'scenario.timeout_s' must be > 0");
    check(s.scenario.spawn_min.x <= s.scenario.spawn_max.x &&
              s.scenario.spawn_min.y <= s.scenario.spawn_max.y,
          "'scenario.spawn_min' must not exceed 'scenario.spawn_max'");
    check(s.scenario.workspace_min.x < s.scenario.workspace_max.x &&
              s.scenario.workspace_min.y < s.scenario.workspace_max.y,
          "'scenario.workspace_min' must be below 'scenario.workspace_max'");
    check(s.scenario.events.r_grasp > 0.0,
          "'scenario.events.r_grasp' must be > 0");
    check(s.scenario.events.open_threshold >= 0.0 &&
              s.scenario.events.open_threshold <
                  s.scenario.events.close_threshold &&
              s.scenario.events.close_threshold <= 1.0,
          "grip thresholds must satisfy 0 <= open < close <= 1");
    check(s.scenario.events.e_drop > 0.0, "'scenario.events.e_drop' must be > 0");
    check(app.stream.port >= 0 && app.stream.port <= 65535,
          "'stream.port' must lie in [0, 65535]");
    check(!app.stream.host.empty(), "'stream.host' must be non-empty");

    // The plant integrates on the control clock; dt is derived, never set.
    s.plant.dt = s.ensemble.dt();
    return app;
}

}  // namespace pte
