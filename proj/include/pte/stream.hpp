#pragma once

// Policy-server split: the planner runs in a separate process and serves
// chunks over TCP, one JSON object per line. The client paces the exchange
// (request/response), so with zero configured latency the networked episode
// is bit-identical to the in-process one.
//
// Wire schema (UTF-8, newline-delimited JSON, decimal numbers):
//   request : {"kind":"OBS","seq":n,"t":t,"agent":[...],"world":{...}}
//   reply   : {"kind":"CHUNK","seq":n,"t":v,"actions":[[...] x L]}
//   finish  : {"kind":"END","seq":n}
//   fault   : {"kind":"ERROR","seq":n,"message":"..."} (then connection close)

#include <cstdint>
#include <string>

#include "pte/episode.hpp"
#include "pte/types.hpp"

namespace pte {

// Serves one client connection: replies to each OBS with the scripted
// predictor's CHUNK, preserving request order; returns when the client
// sends END or disconnects; on a malformed message, replies ERROR and
// closes. Construction binds and listens (port 0 picks an ephemeral port);
// bind failure throws stream_error.
class PolicyServer {
public:
    PolicyServer(const std::string& host, int port, const PredictorConfig& cfg,
                 int chunk_len, double dt, std::uint64_t noise_seed);
    ~PolicyServer();

    PolicyServer(const PolicyServer&) = delete;
    PolicyServer& operator=(const PolicyServer&) = delete;

    int port() const { return port_; }

    // Blocks until one connection has been fully served.
    void serve_one_connection();

private:
    int listen_fd_ = -1;
    int port_ = 0;
    ScriptedPredictor predictor_;
};

// Spec-shaped entry point: bind `host:port` and serve connections until a
// client sends END (each call to this function serves exactly one
// connection).
void serve_policy(const std::string& host, int port, const PredictorConfig& cfg,
                  int chunk_len, double dt, std::uint64_t noise_seed);

// ChunkSource backed by a policy server. fetch() sends one OBS and blocks
// for the matching CHUNK; sequence or shape mismatches throw protocol_error,
// transport failures throw stream_error.
class PolicyClient final : public ChunkSource {
public:
    PolicyClient(const std::string& host, int port);
    ~PolicyClient();

    PolicyClient(const PolicyClient&) = delete;
    PolicyClient& operator=(const PolicyClient&) = delete;

    ActionChunk fetch(const Observation& obs) override;

    // Sends END; safe to call more than once.
    void end();

private:
    std::string read_line();

    int fd_ = -1;
    std::int64_t seq_ = 0;
    std::string rx_buffer_;
    bool ended_ = false;
};

// run_episode, but sourcing chunks from a policy server. Transport failures
// (connection refused or lost, malformed replies) yield a result with
// failure_cause = infrastructure instead of throwing.
EpisodeResult client_loop(const std::string& host, int port, std::uint64_t seed,
                          const Scenario& scenario, const EnsembleConfig& ensemble,
                          const PredictorConfig& predictor, const PlantLimits& limits,
                          const LoopOptions& options = {});

// JSON (de)serialization of observations, shared by both wire endpoints and
// exposed for tests.
std::string observation_to_wire(const Observation& obs, std::int64_t seq);
Observation observation_from_wire(const std::string& line);

}  // namespace pte
