#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "runner/config.hpp"

namespace runner {

inline constexpr const char* kToolVersion = "1.0.0";

struct RunManifest {
    std::vector<std::pair<std::string, std::string>> files;  // name, sha256
    nlohmann::json document;
    std::string out_dir;
};

// Executes the configured command and writes its artifacts plus
// manifest.json under cfg.out. All file contents are assembled in memory
// first, so a failing computation leaves no partial outputs behind.
RunManifest run(const RunConfig& cfg);

}  // namespace runner
