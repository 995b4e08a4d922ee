#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "graspsynth/cloud.hpp"

namespace graspsynth {

// ASCII PLY with `x y z` vertices; other vertex properties are skipped.
PointCloud read_ply(const std::filesystem::path& path);
void write_ply(const std::filesystem::path& path, const PointCloud& cloud);

// `.apc`: one point per line, `px py pz qx qy qz qw k1 k2`. Blank lines and
// lines starting with '#' are ignored.
AugmentedCloud read_apc(const std::filesystem::path& path);
void write_apc(const std::filesystem::path& path, const AugmentedCloud& cloud);

// Reads either format by extension (.ply or .apc).
PointCloud read_cloud(const std::filesystem::path& path);

// Depth file: text header line `width height fx fy cx cy px py pz qx qy qz qw`,
// then width*height little-endian float64 values, row-major.
DepthImage read_depth(const std::filesystem::path& path);
void write_depth(const std::filesystem::path& path, const DepthImage& image);

nlohmann::json read_json(const std::filesystem::path& path);
// Pretty-printed with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

// Shortest round-trip decimal form of a double.
std::string format_double(double x);

}  // namespace graspsynth
