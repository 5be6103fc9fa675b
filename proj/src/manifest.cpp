#include "biostab/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "biostab/errors.hpp"
#include "biostab/version.hpp"

namespace biostab {

namespace {

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

std::string RunManifest::hash() const {
    std::ostringstream blob;
    for (const auto& [k, v] : config) blob << k << "=" << v << ";";
    blob << "taxis=" << taxis_id << ";version=" << version;
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : blob.str()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunManifest make_manifest(const CaseConfig& cfg, const TaxisFunction& taxis) {
    RunManifest m;
    m.config = cfg.snapshot();
    m.taxis_id = taxis.id;
    m.version = kVersion;
    m.timestamp = utc_now();
    return m;
}

void write_manifest(const RunManifest& m, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    nlohmann::json j;
    j["hash"] = m.hash();
    j["config"] = m.config;
    j["taxis"] = m.taxis_id;
    j["version"] = m.version;
    j["timestamp"] = m.timestamp;
    j["outputs"] = m.outputs;

    const auto path = std::filesystem::path(out_dir) / "manifest.json";
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::trunc);
        if (!f) throw ValidationError("write_manifest: cannot open " + tmp);
        f << j.dump(2) << "\n";
    }
    std::filesystem::rename(tmp, path);

    std::ofstream log(std::filesystem::path(out_dir) / "manifests.jsonl", std::ios::app);
    if (!log) throw ValidationError("write_manifest: cannot append to manifests.jsonl");
    log << j.dump() << "\n";
}

}  // namespace biostab
