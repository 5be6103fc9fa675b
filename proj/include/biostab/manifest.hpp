#pragma once

#include <map>
#include <string>
#include <vector>

#include "biostab/config.hpp"
#include "biostab/taxis.hpp"

namespace biostab {

/// Record of one CLI run: config snapshot, taxis identifier, code version,
/// timestamp and the files produced. The hash covers everything that affects
/// the numbers (config + taxis + version), not the timestamp, so identical
/// configs give identical CSV headers.
struct RunManifest {
    std::map<std::string, std::string> config;
    std::string taxis_id;
    std::string version;
    std::string timestamp;
    std::vector<std::string> outputs;

    std::string hash() const;
};

RunManifest make_manifest(const CaseConfig& cfg, const TaxisFunction& taxis);

/// Writes manifest.json into out_dir and appends one line to manifests.jsonl
/// (the append-only run log).
void write_manifest(const RunManifest& m, const std::string& out_dir);

}  // namespace biostab
