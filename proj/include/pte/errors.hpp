#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pte {

// Base class for all library errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid argument to a library operation (bad m, n, f, non-finite input...).
class invalid_argument : public error {
public:
    explicit invalid_argument(const std::string& msg) : error(msg) {}
};

// Chunk pushed out of order or with a duplicate/misaligned inference time.
class ordering_error : public error {
public:
    explicit ordering_error(const std::string& msg) : error(msg) {}
};

// Chunk length or action dimension inconsistent with the buffer contents.
class shape_error : public error {
public:
    explicit shape_error(const std::string& msg) : error(msg) {}
};

// No retained chunk covers the requested target time.
class empty_column_error : public error {
public:
    explicit empty_column_error(const std::string& msg) : error(msg) {}
};

// Planner cannot produce a chunk (e.g. goal outside the workspace).
class planning_error : public error {
public:
    explicit planning_error(const std::string& msg) : error(msg) {}
};

// Pose feature cannot be decoded (degenerate rotation columns).
class decode_error : public error {
public:
    explicit decode_error(const std::string& msg) : error(msg) {}
};

// Non-finite command handed to the plant.
class plant_fault : public error {
public:
    explicit plant_fault(const std::string& msg) : error(msg) {}
};

// Malformed record in a log or results file. `line` is 1-based;
// `last_complete` is the number of records successfully read before the error.
class parse_error : public error {
public:
    parse_error(const std::string& msg, std::size_t line, std::size_t last_complete)
        : error(msg + " (line " + std::to_string(line) + ", last complete record " +
                std::to_string(last_complete) + ")"),
          line_(line),
          last_complete_(last_complete) {}

    std::size_t line() const { return line_; }
    std::size_t last_complete() const { return last_complete_; }

private:
    std::size_t line_;
    std::size_t last_complete_;
};

// Wire-protocol violation (bad message, unexpected kind or sequence number).
class protocol_error : public error {
public:
    explicit protocol_error(const std::string& msg) : error(msg) {}
};

// Socket-level failure (connect, send, receive, bind).
class stream_error : public error {
public:
    explicit stream_error(const std::string& msg) : error(msg) {}
};

// File system failure (unreadable/unwritable path).
class io_error : public error {
public:
    explicit io_error(const std::string& msg) : error(msg) {}
};

// Bad configuration file or override key.
class config_error : public error {
public:
    explicit config_error(const std::string& msg) : error(msg) {}
};

}  // namespace pte
