#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace growthlab::io {

using Json = nlohmann::ordered_json;

// FNV-1a 64-bit content hash, reported in hex in manifests.
std::uint64_t fnv1a64(std::string_view data);
std::string fnv1a64_hex(std::string_view data);

// Fixed "%.12g" rendering so artifacts are byte-stable.
std::string format_double(double v);

struct Polyline {
    std::vector<std::array<double, 2>> pts;
    std::string stroke = "#1f77b4";
    double width = 0.0;  // 0 = auto from the bounding box
    bool closed = false;
};

struct PointSet {
    std::vector<std::array<double, 2>> pts;
    std::string fill = "#555555";
    double radius = 0.0;  // 0 = auto
};

// Standalone equal-aspect SVG with one path per polyline; byte-stable for
// identical inputs.
std::string render_svg(const std::vector<Polyline>& lines,
                       const std::vector<PointSet>& points = {},
                       int width_px = 640);

// Collects every file written to the output directory and emits a manifest
// with content hashes.
class ArtifactWriter {
public:
    explicit ArtifactWriter(std::filesystem::path dir);

    void write_text(const std::string& relpath, const std::string& content);
    void write_csv(const std::string& relpath, const std::string& header,
                   const std::vector<std::vector<double>>& rows);
    void write_json(const std::string& relpath, const Json& j);

    // Writes manifest.json listing every artifact with its hash.
    void write_manifest(const Json& config_echo);

    struct Entry {
        std::string path;
        std::size_t bytes;
        std::string hash;
    };
    const std::vector<Entry>& entries() const { return entries_; }
    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
    std::vector<Entry> entries_;
};

}  // namespace growthlab::io
