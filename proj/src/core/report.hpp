#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace irrlab {

using Json = nlohmann::json;

struct TaskOptions {
  unsigned threads = 1;
  std::optional<uint64_t> seed;  // used when the params carry no seed
  bool timing = false;           // adds a runtime field (breaks byte-identity)
};

// Runs one command and returns the report document:
// {schema_version, tool, version, command, params, result}.
Json run_task(const std::string& command, const Json& params, const TaskOptions& opts);
std::vector<std::string> task_names();

// "json" or "csv". CSV emits result.rows when present, key/value pairs otherwise.
std::string render(const Json& report, const std::string& format);

struct SuiteSummary {
  Json manifest;
  std::size_t ok = 0, failed = 0;
};
// Config: {"entries": [{"name", "command", "params"}], "seed"?}. Writes
// <out_dir>/<name>.json per entry and <out_dir>/manifest.json.
SuiteSummary run_suite(const Json& config, const std::string& out_dir, const TaskOptions& opts);

}  // namespace irrlab
