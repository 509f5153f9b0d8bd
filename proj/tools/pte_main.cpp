// pte: proleptic temporal-ensemble runtime for scripted pick-and-place.
//
// Subcommands:
//   run     one episode (in-process, or via --remote against a policy server)
//   sweep   f sweep -> results CSV + text table
//   replay  re-run the ensemble over a recorded chunk log
//   serve   policy server (scripted predictor over TCP)
//   report  summarize a results CSV next to the published reference sweep
//
// Exit codes: 0 = episode placed the block / command completed;
//             1 = the task or operation failed at runtime;
//             2 = usage, config, or input-file error.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pte/chunk_log.hpp"
#include "pte/config.hpp"
#include "pte/ensemble.hpp"
#include "pte/episode.hpp"
#include "pte/errors.hpp"
#include "pte/pose.hpp"
#include "pte/reference_data.hpp"
#include "pte/results_io.hpp"
#include "pte/stream.hpp"
#include "pte/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::pair<std::string, int> parse_endpoint(const std::string& s) {
    const auto colon = s.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 >= s.size()) {
        throw pte::config_error("endpoint '" + s + "' is not HOST:PORT");
    }
    int port = 0;
    const char* begin = s.data() + colon + 1;
    const char* end = s.data() + s.size();
    const auto res = std::from_chars(begin, end, port);
    if (res.ec != std::errc{} || res.ptr != end || port < 1 || port > 65535) {
        throw pte::config_error("endpoint '" + s + "' has an invalid port");
    }
    return {s.substr(0, colon), port};
}

void write_trace_file(const std::string& path, const pte::EpisodeResult& r) {
    std::ofstream out(path);
    if (!out) throw pte::io_error("cannot open trace path '" + path + "'");
    for (const pte::TraceStep& s : r.trace) {
        nlohmann::json j{
            {"t", s.t},
            {"command", s.command},
            {"agent",
             {{"pos", {s.agent.pos.x, s.agent.pos.y}},
              {"vel", {s.agent.vel.x, s.agent.vel.y}},
              {"grip", s.agent.grip}}},
            {"newest_v", s.newest_v},
            {"ensembled", s.ensembled},
        };
        out << j.dump() << "\n";
    }
    if (!out) throw pte::io_error("failed writing trace to '" + path + "'");
}

int cmd_run(const pte::AppConfig& cfg, std::optional<std::uint64_t> seed_flag,
            const std::string& out_path, const std::string& trace_path,
            const std::string& remote) {
    const pte::SweepSpec& s = cfg.sweep;
    const std::uint64_t seed = seed_flag.value_or(s.base_seed);

    std::vector<pte::ActionChunk> recorded;
    pte::LoopOptions options;
    options.want_trace = true;
    if (!out_path.empty()) {
        options.on_chunk = [&recorded](const pte::ActionChunk& c) {
            recorded.push_back(c);
        };
    }

    pte::EpisodeResult result;
    if (!remote.empty()) {
        const auto [host, port] = parse_endpoint(remote);
        result = pte::client_loop(host, port, seed, s.scenario, s.ensemble,
                                  s.predictor, s.plant, options);
    } else {
        result = pte::run_episode(seed, s.scenario, s.ensemble, s.predictor,
                                  s.plant, options);
    }

    std::cout << "result: " << (result.success ? "success" : "failure") << "\n"
              << "cause: " << pte::to_string(result.failure_cause) << "\n"
              << "seed: " << seed << "\n"
              << "f: " << s.ensemble.f << "\n"
              << "elapsed_steps: " << result.elapsed_steps << "\n"
              << "elapsed_s: " << pte::format_fixed(result.elapsed_seconds, 6)
              << "\n";
    if (!result.note.empty()) std::cout << "note: " << result.note << "\n";
    if (!out_path.empty()) {
        pte::record_chunk_log(recorded, out_path);
        std::cout << "chunk_log: " << out_path << "\n";
    }
    if (!trace_path.empty()) {
        write_trace_file(trace_path, result);
        std::cout << "trace: " << trace_path << "\n";
    }
    return result.success ? kExitOk : kExitFailure;
}

int cmd_sweep(const pte::AppConfig& cfg, std::string out_path) {
    if (out_path.empty()) out_path = "results.csv";
    const std::vector<pte::ResultRow> rows = pte::sweep_f(cfg.sweep);
    pte::write_results(rows, out_path);

    std::cout << std::setw(4) << "f" << std::setw(16) << "mean_elapsed_s"
              << std::setw(14) << "success_rate" << "\n";
    for (const pte::ResultRow& r : rows) {
        std::cout << std::setw(4) << r.f << std::setw(16)
                  << pte::format_fixed(r.mean_elapsed_s, 6) << std::setw(13)
                  << pte::format_fixed(100.0 * r.success_rate, 1) << "%\n";
    }
    std::cout << "wrote " << out_path << "\n";
    return kExitOk;
}

int cmd_replay(const pte::AppConfig& cfg, const std::string& log_path,
               const std::string& out_path) {
    std::vector<pte::ActionChunk> chunks;
    try {
        chunks = pte::read_chunk_log(log_path);
    } catch (const pte::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    const pte::EnsembleConfig& ensemble = cfg.sweep.ensemble;
    const int latency = cfg.sweep.predictor.latency_steps;
    pte::ChunkBuffer buffer(ensemble.chunk_len, ensemble.inference_period);

    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) {
            throw pte::io_error("cannot open output path '" + out_path + "'");
        }
        os = &file;
    }

    std::size_t emitted = 0;
    try {
        for (const pte::ActionChunk& chunk : chunks) {
            pte::push_chunk(buffer, chunk);
            // Evaluate at the tick where the runtime would have seen this
            // chunk as newest: its inference time plus the delivery latency.
            const std::int64_t t = chunk.inference_time + latency;
            pte::ActionVector action;
            try {
                action = pte::ensemble_action(buffer, t, ensemble);
            } catch (const pte::empty_column_error&) {
                continue;  // this offset has no coverage at this tick
            }
            if (action.size() == pte::kPoseFeatureDof) {
                pte::feature_to_pose(action);  // validate codec layout
            }
            (*os) << nlohmann::json{{"t", t}, {"action", action}}.dump()
                  << "\n";
            ++emitted;
        }
    } catch (const pte::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    if (!out_path.empty()) {
        if (!file) {
            throw pte::io_error("failed writing commands to '" + out_path +
                                "'");
        }
        std::cout << "replayed " << chunks.size() << " chunks -> " << emitted
                  << " commands\n"
                  << "wrote " << out_path << "\n";
    }
    return kExitOk;
}

int cmd_serve(const pte::AppConfig& cfg) {
    const pte::SweepSpec& s = cfg.sweep;
    pte::PolicyServer server(cfg.stream.host, cfg.stream.port, s.predictor,
                             s.ensemble.chunk_len, s.ensemble.dt(),
                             pte::noise_seed_for(s.base_seed));
    std::cout << "listening on " << cfg.stream.host << ":" << server.port()
              << std::endl;
    for (;;) {
        server.serve_one_connection();
    }
}

int cmd_report(const std::string& csv_path) {
    std::vector<pte::ResultRow> rows;
    try {
        rows = pte::read_results(csv_path);
    } catch (const pte::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    std::cout << std::setw(4) << "f" << std::setw(8) << "trials"
              << std::setw(11) << "successes" << std::setw(14)
              << "success_rate" << std::setw(16) << "mean_elapsed_s"
              << std::setw(18) << "median_elapsed_s" << std::setw(12)
              << "ref_mean_s" << std::setw(10) << "ref_rate" << "\n";
    for (const pte::ResultRow& r : rows) {
        const double rate =
            r.trials > 0 ? static_cast<double>(r.successes) / r.trials : 0.0;
        std::cout << std::setw(4) << r.f << std::setw(8) << r.trials
                  << std::setw(11) << r.successes << std::setw(13)
                  << pte::format_fixed(100.0 * rate, 1) << "%" << std::setw(16)
                  << pte::format_fixed(r.mean_elapsed_s, 6) << std::setw(18)
                  << pte::format_fixed(r.median_elapsed_s, 6);
        const pte::ReferenceRow* ref = nullptr;
        for (const pte::ReferenceRow& row : pte::reference_sweep()) {
            if (row.f == r.f) ref = &row;
        }
        if (ref != nullptr) {
            std::cout << std::setw(12) << pte::format_fixed(ref->mean_elapsed_s, 3)
                      << std::setw(9)
                      << pte::format_fixed(100.0 * ref->success_rate, 1) << "%";
        } else {
            std::cout << std::setw(12) << "-" << std::setw(10) << "-";
        }
        std::cout << "\n";
    }
    std::cout << "ref_* columns: published hardware-study sweep "
                 "(20 trials per f); trend reference only\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"proleptic temporal-ensemble pick-and-place runtime"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    std::string out_path;
    std::string trace_path;
    std::string remote;
    std::string log_path;
    std::string csv_path;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "configuration file (JSON)")
            ->envname("PTE_CONFIG");
        sub->add_option("--override", overrides,
                        "KEY=VAL config override, repeatable (dotted keys, "
                        "e.g. ensemble.f=10)");
    };

    CLI::App* run = app.add_subcommand("run", "run a single episode");
    add_common(run);
    run->add_option("--seed", seed,
                    "episode seed (default: base_seed from config)");
    run->add_option("--out", out_path,
                    "record the delivered chunk stream to this path");
    run->add_option("--trace", trace_path, "write the control trace (JSON lines)");
    run->add_option("--remote", remote,
                    "fetch chunks from a policy server at HOST:PORT");

    CLI::App* sweep =
        app.add_subcommand("sweep", "sweep f and write the results CSV");
    add_common(sweep);
    sweep->add_option("--out", out_path, "results CSV path (default: results.csv)");

    CLI::App* replay =
        app.add_subcommand("replay", "re-run the ensemble over a chunk log");
    add_common(replay);
    replay->add_option("log", log_path, "chunk log (JSON lines)")->required();
    replay->add_option("--out", out_path,
                       "write the command sequence here instead of stdout");

    CLI::App* serve =
        app.add_subcommand("serve", "serve the scripted policy over TCP");
    add_common(serve);

    CLI::App* report = app.add_subcommand(
        "report", "summarize a results CSV next to the reference sweep");
    add_common(report);
    report->add_option("csv", csv_path, "results CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        const nlohmann::json doc = pte::resolve_config_json(config_path, overrides);
        const pte::AppConfig cfg = pte::config_from_json(doc);

        if (run->parsed()) {
            std::optional<std::uint64_t> seed_flag;
            if (run->count("--seed") > 0) seed_flag = seed;
            return cmd_run(cfg, seed_flag, out_path, trace_path, remote);
        }
        if (sweep->parsed()) return cmd_sweep(cfg, out_path);
        if (replay->parsed()) return cmd_replay(cfg, log_path, out_path);
        if (serve->parsed()) return cmd_serve(cfg);
        if (report->parsed()) return cmd_report(csv_path);
        std::cerr << "error: no subcommand\n";
        return kExitUsage;
    } catch (const pte::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}
