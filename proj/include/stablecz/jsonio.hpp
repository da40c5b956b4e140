#pragma once

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace stablecz {

using json = nlohmann::json;

/// Write JSON to a temporary file and rename into place, so partially
/// written artifacts are never observed.
inline void atomic_write_json(const std::string& path, const json& j,
                              int indent = 1) {
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("cannot open " + tmp.string());
        out << j.dump(indent) << "\n";
    }
    fs::rename(tmp, target);
}

inline json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

}  // namespace stablecz
