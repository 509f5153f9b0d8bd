// Tests for the JSONL chunk log: exact write/read roundtrips, hand-written
// fixture files, and precise error reporting (line numbers, last complete
// record) on malformed input.

#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "doctest.h"
#include "pte/chunk_log.hpp"
#include "pte/ensemble.hpp"
#include "pte/errors.hpp"
#include "pte/rng.hpp"
#include "pte/types.hpp"

using namespace pte;

namespace {

std::string temp_path(const std::string& stem) {
    return "/tmp/pte_test_chunklog_" + stem + ".jsonl";
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    out << text;
}

ActionChunk synthetic_chunk(std::int64_t v, int chunk_len, int dof) {
    ActionChunk chunk;
    chunk.inference_time = v;
    chunk.actions.resize(chunk_len);
    for (int j = 0; j < chunk_len; ++j) {
        chunk.actions[j].resize(dof);
        for (int d = 0; d < dof; ++d)
            chunk.actions[j][d] = 10.0 * static_cast<double>(v) + j + 0.01 * d;
    }
    return chunk;
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& stem) : path(temp_path(stem)) {}
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_SUITE("chunk_log") {

TEST_CASE("a write/read cycle reproduces every chunk bit-for-bit") {
    TempFile file("roundtrip");
    Rng rng(99);
    std::vector<ActionChunk> chunks;
    for (std::int64_t v = 0; v < 12; ++v) {
        ActionChunk c;
        c.inference_time = v;
        c.actions.resize(8);
        for (auto& row : c.actions) {
            row.resize(26);
            for (auto& x : row) x = rng.gauss() * 3.14159;
        }
        chunks.push_back(std::move(c));
    }
    write_chunk_log(chunks, file.path);
    const std::vector<ActionChunk> back = read_chunk_log(file.path);
    REQUIRE(back.size() == chunks.size());
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        CHECK(back[i].inference_time == chunks[i].inference_time);
        REQUIRE(back[i].actions.size() == chunks[i].actions.size());
        for (std::size_t j = 0; j < chunks[i].actions.size(); ++j)
            for (std::size_t d = 0; d < chunks[i].actions[j].size(); ++d)
                CHECK(back[i].actions[j][d] == chunks[i].actions[j][d]);
    }
}

TEST_CASE("a hand-written log feeds the buffer and produces the expected column") {
    TempFile file("fixture");
    // Two chunks, L=5, dof=1, entry j of chunk v equal to 10v+j.
    write_text(file.path,
               "{\"v\": 4, \"actions\": [[40], [41], [42], [43], [44]]}\n"
               "{\"v\": 5, \"actions\": [[50], [51], [52], [53], [54]]}\n");
    const std::vector<ActionChunk> chunks = read_chunk_log(file.path);
    REQUIRE(chunks.size() == 2);
    CHECK(chunks[0].inference_time == 4);
    CHECK(chunks[1].inference_time == 5);

    ChunkBuffer buffer(8);
    for (const auto& c : chunks) push_chunk(buffer, c);
    // Column for t=5, f=0: newest-first entries a_5[0]=50 and a_4[1]=41.
    const auto column = proleptic_column(buffer, 5, 0);
    REQUIRE(column.size() == 2);
    CHECK(column[0].at(0) == 50.0);
    CHECK(column[1].at(0) == 41.0);
}

TEST_CASE("a short actions row is rejected with its line number") {
    TempFile file("short_row");
    write_text(file.path,
               "{\"v\": 0, \"actions\": [[1], [2], [3], [4], [5]]}\n"
               "{\"v\": 1, \"actions\": [[1], [2], [3], [4]]}\n");
    try {
        read_chunk_log(file.path);
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line() == 2);
        CHECK(e.last_complete() == 1);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("a dof drift between lines is rejected at the offending line") {
    TempFile file("dof_drift");
    write_text(file.path,
               "{\"v\": 0, \"actions\": [[1, 2], [3, 4]]}\n"
               "{\"v\": 1, \"actions\": [[1], [2]]}\n");
    try {
        read_chunk_log(file.path);
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line() == 2);
        CHECK(e.last_complete() == 1);
    }
}

TEST_CASE("malformed JSON reports the line it occurred on") {
    TempFile file("bad_json");
    write_text(file.path,
               "{\"v\": 0, \"actions\": [[1], [2]]}\n"
               "{\"v\": 1, \"actions\": [[3], [4]]}\n"
               "this is not json\n");
    try {
        read_chunk_log(file.path);
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line() == 3);
        CHECK(e.last_complete() == 2);
    }
}

TEST_CASE("a truncated final line names the last complete record") {
    TempFile file("truncated");
    write_text(file.path,
               "{\"v\": 0, \"actions\": [[1], [2]]}\n"
               "{\"v\": 1, \"actions\": [[3], [4]\n");
    try {
        read_chunk_log(file.path);
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line() == 2);
        CHECK(e.last_complete() == 1);
    }
}

TEST_CASE("non-increasing inference times are an ordering violation") {
    TempFile file("order");
    write_text(file.path,
               "{\"v\": 3, \"actions\": [[1], [2]]}\n"
               "{\"v\": 3, \"actions\": [[3], [4]]}\n");
    CHECK_THROWS_AS(read_chunk_log(file.path), ordering_error);

    write_text(file.path,
               "{\"v\": 3, \"actions\": [[1], [2]]}\n"
               "{\"v\": 1, \"actions\": [[3], [4]]}\n");
    CHECK_THROWS_AS(read_chunk_log(file.path), ordering_error);
}

TEST_CASE("an empty log yields no records and a cursor that ends immediately") {
    TempFile file("empty");
    write_text(file.path, "");
    CHECK(read_chunk_log(file.path).empty());
    ChunkLogCursor cursor = open_chunk_log(file.path);
    CHECK(cursor.next() == std::nullopt);
    CHECK(cursor.records_read() == 0);
}

TEST_CASE("blank lines between records are skipped") {
    TempFile file("blanks");
    write_text(file.path,
               "{\"v\": 0, \"actions\": [[1], [2]]}\n"
               "\n"
               "{\"v\": 1, \"actions\": [[3], [4]]}\n"
               "\n");
    const auto chunks = read_chunk_log(file.path);
    REQUIRE(chunks.size() == 2);
    CHECK(chunks[0].inference_time == 0);
    CHECK(chunks[1].inference_time == 1);
}

TEST_CASE("a missing file is an I/O error, not a parse error") {
    CHECK_THROWS_AS(read_chunk_log("/tmp/pte_no_such_log_file.jsonl"), io_error);
    CHECK_THROWS_AS(open_chunk_log("/tmp/pte_no_such_log_file.jsonl"), io_error);
}

TEST_CASE("record and open are equivalent to write and cursor reads") {
    TempFile file("aliases");
    std::vector<ActionChunk> chunks;
    for (std::int64_t v = 0; v < 4; ++v) chunks.push_back(synthetic_chunk(v, 5, 2));
    record_chunk_log(chunks, file.path);

    ChunkLogCursor cursor = open_chunk_log(file.path);
    std::size_t count = 0;
    while (auto chunk = cursor.next()) {
        CHECK(chunk->inference_time == static_cast<std::int64_t>(count));
        CHECK(chunk->actions == chunks[count].actions);
        ++count;
    }
    CHECK(count == 4);
    CHECK(cursor.records_read() == 4);
}

}  // TEST_SUITE
