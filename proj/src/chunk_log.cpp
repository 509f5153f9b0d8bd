#include "pte/chunk_log.hpp"

#include "json.hpp"

#include "pte/errors.hpp"

namespace pte {

using nlohmann::json;

ChunkLogWriter::ChunkLogWriter(const std::string& path)
    : out_(path, std::ios::trunc), path_(path) {
    if (!out_) throw io_error("cannot open chunk log for writing: " + path);
}

void ChunkLogWriter::write(const ActionChunk& chunk) {
    json line;
    line["v"] = chunk.inference_time;
    line["actions"] = chunk.actions;
    out_ << line.dump() << '\n';
    if (!out_) throw io_error("write failed on chunk log: " + path_);
    ++written_;
}

ChunkLogCursor::ChunkLogCursor(const std::string& path)
    : in_(path), path_(path) {
    if (!in_) throw io_error("cannot open chunk log for reading: " + path);
}

std::optional<ActionChunk> ChunkLogCursor::next() {
    std::string text;
    while (std::getline(in_, text)) {
        ++line_;
        if (text.empty()) continue;

        json doc;
        try {
            doc = json::parse(text);
        } catch (const json::parse_error& e) {
            throw pte::parse_error(std::string("bad chunk record: ") + e.what(),
                                   line_, records_);
        }

        if (!doc.is_object() || !doc.contains("v") || !doc.contains("actions") ||
            !doc["v"].is_number_integer() || !doc["actions"].is_array())
            throw pte::parse_error("chunk record needs integer 'v' and array 'actions'",
                                   line_, records_);

        ActionChunk chunk;
        chunk.inference_time = doc["v"].get<std::int64_t>();
        try {
            chunk.actions = doc["actions"].get<std::vector<ActionVector>>();
        } catch (const json::exception&) {
            throw pte::parse_error("chunk 'actions' is not a matrix of reals",
                                   line_, records_);
        }
        if (chunk.actions.empty())
            throw pte::parse_error("chunk record has no actions", line_, records_);

        const int len = static_cast<int>(chunk.actions.size());
        const int dof = static_cast<int>(chunk.actions.front().size());
        for (const auto& a : chunk.actions)
            if (static_cast<int>(a.size()) != dof)
                throw pte::parse_error("inconsistent dof within chunk record",
                                       line_, records_);
        if (chunk_len_ < 0) {
            chunk_len_ = len;
            dof_ = dof;
        } else if (len != chunk_len_ || dof != dof_) {
            throw pte::parse_error(
                "chunk shape drift: expected " + std::to_string(chunk_len_) + "x" +
                    std::to_string(dof_) + ", got " + std::to_string(len) + "x" +
                    std::to_string(dof),
                line_, records_);
        }

        if (saw_any_ && chunk.inference_time <= last_v_)
            throw ordering_error("chunk log inference_time " +
                                 std::to_string(chunk.inference_time) +
                                 " not after " + std::to_string(last_v_) +
                                 " (line " + std::to_string(line_) + ")");
        last_v_ = chunk.inference_time;
        saw_any_ = true;
        ++records_;
        return chunk;
    }
    return std::nullopt;
}

std::vector<ActionChunk> read_chunk_log(const std::string& path) {
    ChunkLogCursor cursor(path);
    std::vector<ActionChunk> chunks;
    while (auto chunk = cursor.next()) chunks.push_back(std::move(*chunk));
    return chunks;
}

void write_chunk_log(const std::vector<ActionChunk>& chunks, const std::string& path) {
    ChunkLogWriter writer(path);
    for (const auto& chunk : chunks) writer.write(chunk);
}

void record_chunk_log(const std::vector<ActionChunk>& chunks, const std::string& path) {
    write_chunk_log(chunks, path);
}

ChunkLogCursor open_chunk_log(const std::string& path) {
    return ChunkLogCursor(path);
}

}  // namespace pte
