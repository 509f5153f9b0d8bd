#include "pte/stream.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <utility>

#include "json.hpp"

#include "pte/errors.hpp"
#include "pte/sim.hpp"

namespace pte {

using nlohmann::json;

namespace {

json vec2_to_json(Vec2 v) { return json::array({v.x, v.y}); }

Vec2 vec2_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2)
        throw protocol_error("expected a 2-vector");
    return {j[0].get<double>(), j[1].get<double>()};
}

json world_to_json(const WorldSnapshot& world) {
    json j;
    j["agent"] = {{"pos", vec2_to_json(world.agent.pos)},
                  {"vel", vec2_to_json(world.agent.vel)},
                  {"grip", world.agent.grip}};
    j["blocks"] = json::array();
    for (const auto& b : world.blocks)
        j["blocks"].push_back({{"pos", vec2_to_json(b.pos)},
                               {"color", b.color},
                               {"held", b.held}});
    j["boxes"] = json::array();
    for (const auto& box : world.boxes)
        j["boxes"].push_back({{"min", vec2_to_json(box.min)},
                              {"max", vec2_to_json(box.max)},
                              {"color", box.color}});
    j["workspace_min"] = vec2_to_json(world.workspace_min);
    j["workspace_max"] = vec2_to_json(world.workspace_max);
    j["time_step"] = world.time_step;
    return j;
}

WorldSnapshot world_from_json(const json& j) {
    WorldSnapshot world;
    world.agent.pos = vec2_from_json(j.at("agent").at("pos"));
    world.agent.vel = vec2_from_json(j.at("agent").at("vel"));
    world.agent.grip = j.at("agent").at("grip").get<double>();
    for (const auto& b : j.at("blocks")) {
        Block block;
        block.pos = vec2_from_json(b.at("pos"));
        block.color = b.at("color").get<std::string>();
        block.held = b.at("held").get<bool>();
        world.blocks.push_back(std::move(block));
    }
    for (const auto& box : j.at("boxes")) {
        BoxRegion region;
        region.min = vec2_from_json(box.at("min"));
        region.max = vec2_from_json(box.at("max"));
        region.color = box.at("color").get<std::string>();
        world.boxes.push_back(std::move(region));
    }
    world.workspace_min = vec2_from_json(j.at("workspace_min"));
    world.workspace_max = vec2_from_json(j.at("workspace_max"));
    world.time_step = j.at("time_step").get<std::int64_t>();
    return world;
}

void send_all(int fd, const std::string& text) {
    std::size_t sent = 0;
    while (sent < text.size()) {
        const ssize_t n = ::send(fd, text.data() + sent, text.size() - sent,
                                 MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw stream_error(std::string("send failed: ") + std::strerror(errno));
        }
        sent += static_cast<std::size_t>(n);
    }
}

void send_line(int fd, const json& msg) { send_all(fd, msg.dump() + "\n"); }

// Reads one newline-terminated line; returns false on orderly EOF with an
// empty buffer.
bool recv_line(int fd, std::string& buffer, std::string& line) {
    while (true) {
        const std::size_t pos = buffer.find('\n');
        if (pos != std::string::npos) {
            line = buffer.substr(0, pos);
            buffer.erase(0, pos + 1);
            return true;
        }
        char chunk[4096];
        const ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw stream_error(std::string("recv failed: ") + std::strerror(errno));
        }
        if (n == 0) {
            if (buffer.empty()) return false;
            throw stream_error("connection closed mid-line");
        }
        buffer.append(chunk, static_cast<std::size_t>(n));
    }
}

sockaddr_in make_addr(const std::string& host, int port) {
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<std::uint16_t>(port));
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
        throw stream_error("bad IPv4 host literal: " + host);
    return addr;
}

}  // namespace

std::string observation_to_wire(const Observation& obs, std::int64_t seq) {
    json msg;
    msg["kind"] = "OBS";
    msg["seq"] = seq;
    msg["t"] = obs.time;
    msg["agent"] = obs.agent_pose;
    msg["world"] = world_to_json(obs.world);
    return msg.dump();
}

Observation observation_from_wire(const std::string& line) {
    json msg;
    try {
        msg = json::parse(line);
    } catch (const json::parse_error& e) {
        throw protocol_error(std::string("unparseable message: ") + e.what());
    }
    try {
        if (msg.at("kind").get<std::string>() != "OBS")
            throw protocol_error("expected kind OBS");
        Observation obs;
        obs.time = msg.at("t").get<std::int64_t>();
        obs.agent_pose = msg.at("agent").get<ActionVector>();
        obs.world = world_from_json(msg.at("world"));
        return obs;
    } catch (const json::exception& e) {
        throw protocol_error(std::string("malformed OBS: ") + e.what());
    }
}

PolicyServer::PolicyServer(const std::string& host, int port,
                           const PredictorConfig& cfg, int chunk_len, double dt,
                           std::uint64_t noise_seed)
    : predictor_(cfg, chunk_len, dt, noise_seed) {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0)
        throw stream_error(std::string("socket failed: ") + std::strerror(errno));

    const int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

    sockaddr_in addr = make_addr(host, port);
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
        const std::string why = std::strerror(errno);
        ::close(listen_fd_);
        listen_fd_ = -1;
        throw stream_error("bind " + host + ":" + std::to_string(port) +
                           " failed: " + why);
    }
    if (::listen(listen_fd_, 4) < 0) {
        const std::string why = std::strerror(errno);
        ::close(listen_fd_);
        listen_fd_ = -1;
        throw stream_error("listen failed: " + why);
    }

    sockaddr_in bound{};
    socklen_t len = sizeof(bound);
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
    port_ = static_cast<int>(ntohs(bound.sin_port));
}

PolicyServer::~PolicyServer() {
    if (listen_fd_ >= 0) ::close(listen_fd_);
}

void PolicyServer::serve_one_connection() {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0)
        throw stream_error(std::string("accept failed: ") + std::strerror(errno));

    std::string buffer, line;
    try {
        while (recv_line(fd, buffer, line)) {
            json reply;
            std::int64_t seq = -1;
            try {
                const json msg = json::parse(line);
                seq = msg.value("seq", static_cast<std::int64_t>(-1));
                const std::string kind = msg.at("kind").get<std::string>();
                if (kind == "END") break;
                if (kind != "OBS") throw protocol_error("unexpected kind " + kind);

                const Observation obs = observation_from_wire(line);
                const ActionChunk chunk = predictor_.chunk_for(obs);
                reply["kind"] = "CHUNK";
                reply["seq"] = seq;
                reply["t"] = chunk.inference_time;
                reply["actions"] = chunk.actions;
            } catch (const json::exception& e) {
                reply = {{"kind", "ERROR"},
                         {"seq", seq},
                         {"message", std::string("bad message: ") + e.what()}};
                send_line(fd, reply);
                break;
            } catch (const error& e) {
                reply = {{"kind", "ERROR"}, {"seq", seq}, {"message", e.what()}};
                send_line(fd, reply);
                break;
            }
            send_line(fd, reply);
        }
    } catch (const stream_error&) {
        // client went away; nothing to answer
    }
    ::close(fd);
}

void serve_policy(const std::string& host, int port, const PredictorConfig& cfg,
                  int chunk_len, double dt, std::uint64_t noise_seed) {
    PolicyServer server(host, port, cfg, chunk_len, dt, noise_seed);
    server.serve_one_connection();
}

PolicyClient::PolicyClient(const std::string& host, int port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0)
        throw stream_error(std::string("socket failed: ") + std::strerror(errno));

    timeval timeout{};
    timeout.tv_sec = 10;
    ::setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &timeout, sizeof(timeout));

    sockaddr_in addr = make_addr(host, port);
    if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
        const std::string why = std::strerror(errno);
        ::close(fd_);
        fd_ = -1;
        throw stream_error("connect " + host + ":" + std::to_string(port) +
                           " failed: " + why);
    }
}

PolicyClient::~PolicyClient() {
    if (fd_ >= 0) {
        try {
            end();
        } catch (...) {
        }
        ::close(fd_);
    }
}

std::string PolicyClient::read_line() {
    std::string line;
    if (!recv_line(fd_, rx_buffer_, line))
        throw stream_error("server closed the connection");
    return line;
}

ActionChunk PolicyClient::fetch(const Observation& obs) {
    const std::int64_t seq = ++seq_;
    send_all(fd_, observation_to_wire(obs, seq) + "\n");

    const std::string line = read_line();
    json msg;
    try {
        msg = json::parse(line);
    } catch (const json::parse_error& e) {
        throw protocol_error(std::string("unparseable reply: ") + e.what());
    }

    try {
        const std::string kind = msg.at("kind").get<std::string>();
        if (kind == "ERROR")
            throw protocol_error("server error: " +
                                 msg.value("message", std::string("unknown")));
        if (kind != "CHUNK") throw protocol_error("unexpected reply kind " + kind);
        if (msg.at("seq").get<std::int64_t>() != seq)
            throw protocol_error("reply seq mismatch");

        ActionChunk chunk;
        chunk.inference_time = msg.at("t").get<std::int64_t>();
        chunk.actions = msg.at("actions").get<std::vector<ActionVector>>();
        return chunk;
    } catch (const json::exception& e) {
        throw protocol_error(std::string("malformed CHUNK: ") + e.what());
    }
}

void PolicyClient::end() {
    if (ended_ || fd_ < 0) return;
    ended_ = true;
    send_line(fd_, {{"kind", "END"}, {"seq", ++seq_}});
}

EpisodeResult client_loop(const std::string& host, int port, std::uint64_t seed,
                          const Scenario& scenario, const EnsembleConfig& ensemble,
                          const PredictorConfig& predictor, const PlantLimits& limits,
                          const LoopOptions& options) {
    const WorldSnapshot world = make_initial_world(scenario, seed);
    try {
        PolicyClient client(host, port);
        EpisodeResult result = run_control_loop(world, scenario, ensemble,
                                                predictor, limits, client, options);
        try {
            client.end();
        } catch (const stream_error&) {
            // episode already resolved; a dead socket at goodbye is harmless
        }
        return result;
    } catch (const stream_error& e) {
        EpisodeResult result;
        result.success = false;
        result.failure_cause = FailureCause::infrastructure;
        result.note = e.what();
        return result;
    }
}

}  // namespace pte
