#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "famdad/tabular.hpp"

namespace testutil {

// One scratch directory per test process, under the system temp dir.
inline std::filesystem::path scratch_dir() {
    static const std::filesystem::path dir = [] {
        const auto ticks = std::chrono::steady_clock::now().time_since_epoch().count();
        const auto salt = std::random_device{}();
        auto d = std::filesystem::temp_directory_path() /
                 ("famdad_unit_" + std::to_string(ticks) + "_" + std::to_string(salt));
        std::filesystem::create_directories(d);
        return d;
    }();
    return dir;
}

inline std::string scratch_path(const std::string& name) {
    return (scratch_dir() / name).string();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Fixture shared by the encode/weight/embed tests: one 3-level categorical
// column, one varying continuous column, one constant continuous column.
inline famdad::MixedTable mixed_fixture() {
    famdad::CategoricalColumn cat{"cat1", {"a", "b", "c"}, {0, 0, 1, 2, 0}};
    famdad::ContinuousColumn c1{"cont1", {1, 2, 3, 4, 10}};
    famdad::ContinuousColumn c2{"cont2", {5, 5, 5, 5, 5}};
    return famdad::MixedTable(5, {c1, c2}, {cat}, std::nullopt);
}

} // namespace testutil
