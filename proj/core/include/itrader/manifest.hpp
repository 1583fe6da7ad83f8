#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace itrader {

inline constexpr const char* kToolVersion = "0.1.0";

// 64-bit FNV-1a over a file's bytes, hex encoded. Used to fingerprint
// inputs so a manifest pins exactly what a run consumed.
std::string file_fingerprint(const std::string& path);
std::string bytes_fingerprint(const void* data, std::size_t size);

// Immutable record of one run: the effective configuration, the input
// fingerprints, and the artifacts produced (paths relative to the manifest).
struct RunManifest {
    std::string command;
    std::string tool_version = kToolVersion;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> config;
    std::map<std::string, std::string> inputs;  // path -> fingerprint
    std::vector<std::string> artifacts;
};

void save_manifest(const std::string& path, const RunManifest& manifest);
RunManifest load_manifest(const std::string& path);

}  // namespace itrader
