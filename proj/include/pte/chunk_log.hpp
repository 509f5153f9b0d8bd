#pragma once

// Chunk logs: JSON Lines, one chunk per line,
//   {"v": <inference_time>, "actions": [[...dof reals...] x L]}
// The reader validates monotone inference times and a constant (L, dof)
// shape across the file, and reports precise line numbers on malformed
// input. Values are written with shortest-roundtrip formatting, so a
// write -> read cycle reproduces every double bit-for-bit.

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "pte/types.hpp"

namespace pte {

class ChunkLogWriter {
public:
    explicit ChunkLogWriter(const std::string& path);

    void write(const ActionChunk& chunk);
    std::size_t written() const { return written_; }

private:
    std::ofstream out_;
    std::string path_;
    std::size_t written_ = 0;
};

// Streaming reader; `next` yields chunks in file order and std::nullopt at
// end of log. Throws parse_error (with the line number and the index of the
// last complete record) on malformed/truncated/shape-drifted lines, and
// ordering_error when inference times do not strictly increase.
class ChunkLogCursor {
public:
    explicit ChunkLogCursor(const std::string& path);

    std::optional<ActionChunk> next();

    std::size_t records_read() const { return records_; }

private:
    std::ifstream in_;
    std::string path_;
    std::size_t line_ = 0;
    std::size_t records_ = 0;
    int chunk_len_ = -1;
    int dof_ = -1;
    std::int64_t last_v_ = -1;
    bool saw_any_ = false;
};

// Reads an entire log.
std::vector<ActionChunk> read_chunk_log(const std::string& path);

// Writes an entire log.
void write_chunk_log(const std::vector<ActionChunk>& chunks, const std::string& path);

// Records an episode's delivered chunk stream (see LoopOptions::on_chunk for
// how such a stream is captured live) to `path`.
void record_chunk_log(const std::vector<ActionChunk>& chunks, const std::string& path);

// Opens a log for streaming reads.
ChunkLogCursor open_chunk_log(const std::string& path);

}  // namespace pte
