#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mftd/config.hpp"
#include "mftd/errors.hpp"

namespace mftd {

// A module failure tagged with the pipeline stage that raised it.
class StageError : public Error {
public:
    StageError(std::string stage, const Error& cause)
        : Error("stage", "'" + stage + "' failed: " + cause.what()), stage_(std::move(stage)),
          cause_category_(cause.category()) {}

    const std::string& stage() const noexcept { return stage_; }
    const std::string& cause_category() const noexcept { return cause_category_; }

private:
    std::string stage_;
    std::string cause_category_;
};

struct RunOptions {
    std::optional<std::uint64_t> seed;  // overrides the config seed
    std::optional<int> workers;         // overrides the config worker count
    std::ostream* log = nullptr;        // progress lines, if set
};

struct ArtifactBundle {
    std::string directory;
    std::vector<std::string> files;  // relative names, sorted; excludes the manifest
    std::string manifest;            // manifest text as written
};

// Runs every scene and K value of the config and writes the artifacts into
// out_dir (created if missing). Identical config and seed give byte-identical
// files. Throws ConfigError for invalid configs and StageError otherwise.
ArtifactBundle run_experiment(const ExperimentConfig& config, const std::string& out_dir,
                              const RunOptions& opts = {});

// git-style blob hash: SHA-1 of "blob <size>\0" + content, lowercase hex.
std::string git_blob_sha1(const std::string& content);

struct Preset {
    std::string name;
    std::string description;
    std::string text;
};

// Shipped recipes for the numerical figures and the initial-guess table.
const std::vector<Preset>& presets();

// Writes <name>.cfg for every preset; returns the written paths.
std::vector<std::string> export_presets(const std::string& out_dir);

}  // namespace mftd
