#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#ifndef ONTOMESH_DATA_DIR
#define ONTOMESH_DATA_DIR "data"
#endif

namespace corpus {

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline std::filesystem::path data_dir() {
    return std::filesystem::path(ONTOMESH_DATA_DIR);
}

/// Every shipped .onto.json under data/fixtures, sorted for determinism.
inline std::vector<std::filesystem::path> ontology_paths() {
    std::vector<std::filesystem::path> paths;
    auto root = data_dir() / "fixtures";
    if (std::filesystem::exists(root)) {
        for (const auto& entry : std::filesystem::recursive_directory_iterator(root)) {
            if (entry.is_regular_file() &&
                entry.path().string().ends_with(".onto.json")) {
                paths.push_back(entry.path());
            }
        }
    }
    std::sort(paths.begin(), paths.end());
    return paths;
}

/// Fixture directories (each holding one factories/orders pair), sorted.
inline std::vector<std::filesystem::path> fixture_dirs() {
    std::vector<std::filesystem::path> dirs;
    auto root = data_dir() / "fixtures";
    if (std::filesystem::exists(root)) {
        for (const auto& entry : std::filesystem::directory_iterator(root)) {
            if (entry.is_directory()) {
                dirs.push_back(entry.path());
            }
        }
    }
    std::sort(dirs.begin(), dirs.end());
    return dirs;
}

} // namespace corpus
