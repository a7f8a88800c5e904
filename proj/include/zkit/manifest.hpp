#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace zkit {

// SHA-256 of a byte string, lowercase hex.
std::string sha256_hex(const std::string& bytes);

// SHA-256 of a file's contents. Throws FormatError when the file is
// unreadable.
std::string file_digest(const std::string& path);

// Record of one tool invocation: what ran, on which inputs, with which seeds
// and configuration, and what it produced. Re-running the same command on
// inputs with matching digests reproduces the output digests byte for byte.
struct RunManifest {
    std::string command;
    std::string tool_version;
    uint64_t seed = 0;
    std::map<std::string, std::string> inputs;   // path -> digest
    std::map<std::string, std::string> outputs;  // path -> digest
    std::map<std::string, std::string> config;   // option -> value

    void add_input(const std::string& path);
    void add_output(const std::string& path);

    std::string to_json() const;
    static RunManifest from_json(const std::string& text);

    void save(const std::string& path) const;
    static RunManifest load(const std::string& path);
};

}  // namespace zkit
