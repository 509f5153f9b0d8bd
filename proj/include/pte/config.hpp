#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "pte/sweep.hpp"

namespace pte {

// Endpoint used by `serve` and by `run --remote` when no explicit
// HOST:PORT is given on the command line.
struct StreamConfig {
    std::string host = "127.0.0.1";
    int port = 8471;
};

// The full application configuration: the sweep parameters plus the stream
// endpoint.  The JSON document mirrors these field names exactly; see
// data/default.json for the canonical layout.
struct AppConfig {
    SweepSpec sweep;
    StreamConfig stream;
};

// The built-in defaults as a JSON document.  This is the schema authority:
// a config file or override may only set keys that exist here.
nlohmann::json default_config_json();

// Parses the file at `path` as a JSON object.  I/O or syntax problems throw
// config_error with the path in the message.
nlohmann::json load_config_file(const std::string& path);

// Recursively merges `patch` into `base`.  Every key in `patch` must already
// exist in `base` with a compatible shape (object onto object, scalar/array
// onto scalar/array of the same JSON type family); anything else throws
// config_error naming the offending dotted path.
void merge_config(nlohmann::json& base, const nlohmann::json& patch);

// Applies one `--override KEY=VAL` entry.  KEY is a dotted path into the
// document; VAL is parsed as JSON when it is valid JSON and treated as a
// string otherwise.  Unknown keys and type mismatches throw config_error.
void apply_override(nlohmann::json& doc, const std::string& entry);

// Builds the merged configuration document with precedence
// built-in defaults < config file < overrides.  `path` may be empty (no
// file).  The caller resolves the path beforehand (flag, then PTE_CONFIG).
nlohmann::json resolve_config_json(const std::string& path,
                                   const std::vector<std::string>& overrides);

// Materializes the merged document into typed structs, range-checking every
// value (throws config_error on violations).  plant.dt is not a config key:
// it is derived from ensemble.control_hz so the plant and the control loop
// can never disagree about the tick length.
AppConfig config_from_json(const nlohmann::json& doc);

}  // namespace pte
