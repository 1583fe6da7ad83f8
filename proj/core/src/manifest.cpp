#include "itrader/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace itrader {

std::string bytes_fingerprint(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= bytes[i];
        hash *= 0x100000001b3ULL;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::string file_fingerprint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path + " for fingerprinting");
    std::vector<char> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return bytes_fingerprint(data.data(), data.size());
}

void save_manifest(const std::string& path, const RunManifest& m) {
    nlohmann::json root;
    root["command"] = m.command;
    root["tool_version"] = m.tool_version;
    root["seed"] = m.seed;
    root["config"] = m.config;
    root["inputs"] = m.inputs;
    root["artifacts"] = m.artifacts;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << root.dump(2) << "\n";
}

RunManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json root;
    in >> root;
    RunManifest m;
    m.command = root.at("command").get<std::string>();
    m.tool_version = root.at("tool_version").get<std::string>();
    m.seed = root.at("seed").get<std::uint64_t>();
    m.config = root.at("config").get<std::map<std::string, std::string>>();
    m.inputs = root.at("inputs").get<std::map<std::string, std::string>>();
    m.artifacts = root.at("artifacts").get<std::vector<std::string>>();
    return m;
}

}  // namespace itrader
