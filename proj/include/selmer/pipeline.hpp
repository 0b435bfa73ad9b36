#pragma once

#include <optional>
#include <string>
#include <vector>

#include "selmer/config.hpp"
#include "selmer/report.hpp"

namespace selmer::cli {

const char* tool_version();

struct RunFlags {
    std::string cache_dir;           // empty: no cache
    std::optional<u64> bound;        // overrides bounds.prime_scan (class-set / brandt: prime bound)
    std::optional<u64> p;
    std::optional<int> n;
    std::vector<u64> exclude;        // appended to the config exclusions
    std::optional<i64> D, M;         // class-set / brandt without a config
    bool timing = false;
};

const std::vector<std::string>& command_names();

/// Runs one pipeline stage. cfg may be null only for class-set and brandt with --D.
ReportDocument run_command(const std::string& name, const InstanceConfig* cfg, const RunFlags& flags);

}  // namespace selmer::cli
