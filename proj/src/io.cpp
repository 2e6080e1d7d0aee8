#include "growthlab/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace growthlab::io {

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string fnv1a64_hex(std::string_view data) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(data)));
    return buf;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

struct Bounds {
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    bool any = false;
    void add(double x, double y) {
        if (!any) {
            x0 = x1 = x;
            y0 = y1 = y;
            any = true;
        } else {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    }
};

}  // namespace

std::string render_svg(const std::vector<Polyline>& lines,
                       const std::vector<PointSet>& points, int width_px) {
    if (lines.empty() && points.empty())
        throw std::invalid_argument("render_svg: nothing to draw");

    Bounds b;
    for (const auto& pl : lines)
        for (const auto& p : pl.pts) b.add(p[0], p[1]);
    for (const auto& ps : points)
        for (const auto& p : ps.pts) b.add(p[0], p[1]);
    if (!b.any) throw std::invalid_argument("render_svg: no points");

    double w = b.x1 - b.x0, h = b.y1 - b.y0;
    const double pad = 0.05 * std::max({w, h, 1e-9});
    b.x0 -= pad;
    b.x1 += pad;
    b.y0 -= pad;
    b.y1 += pad;
    w = b.x1 - b.x0;
    h = b.y1 - b.y0;
    const double auto_width = std::max(w, h) / 300.0;
    const int height_px = static_cast<int>(std::lround(width_px * h / w));

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           std::to_string(width_px) + "\" height=\"" + std::to_string(height_px) +
           "\" viewBox=\"" + format_double(b.x0) + " " + format_double(-b.y1) +
           " " + format_double(w) + " " + format_double(h) + "\">\n";
    // Data y points up; SVG y points down, so emit mirrored coordinates.
    for (const auto& ps : points) {
        const double r = ps.radius > 0 ? ps.radius : 1.5 * auto_width;
        for (const auto& p : ps.pts)
            svg += "<circle cx=\"" + format_double(p[0]) + "\" cy=\"" +
                   format_double(-p[1]) + "\" r=\"" + format_double(r) +
                   "\" fill=\"" + ps.fill + "\"/>\n";
    }
    for (const auto& pl : lines) {
        if (pl.pts.empty()) continue;
        std::string d = "M " + format_double(pl.pts[0][0]) + " " +
                        format_double(-pl.pts[0][1]);
        for (std::size_t i = 1; i < pl.pts.size(); ++i)
            d += " L " + format_double(pl.pts[i][0]) + " " +
                 format_double(-pl.pts[i][1]);
        if (pl.closed) d += " Z";
        svg += "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + pl.stroke +
               "\" stroke-width=\"" +
               format_double(pl.width > 0 ? pl.width : auto_width) + "\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

ArtifactWriter::ArtifactWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

void ArtifactWriter::write_text(const std::string& relpath,
                                const std::string& content) {
    const auto full = dir_ / relpath;
    std::filesystem::create_directories(full.parent_path());
    std::ofstream out(full, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + full.string());
    out << content;
    out.close();
    entries_.push_back({relpath, content.size(), fnv1a64_hex(content)});
}

void ArtifactWriter::write_csv(const std::string& relpath,
                               const std::string& header,
                               const std::vector<std::vector<double>>& rows) {
    std::string body = header + "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) body += ",";
            body += format_double(row[i]);
        }
        body += "\n";
    }
    write_text(relpath, body);
}

void ArtifactWriter::write_json(const std::string& relpath, const Json& j) {
    write_text(relpath, j.dump(2) + "\n");
}

void ArtifactWriter::write_manifest(const Json& config_echo) {
    Json m;
    m["config"] = config_echo;
    Json files = Json::array();
    for (const auto& e : entries_) {
        Json f;
        f["path"] = e.path;
        f["bytes"] = e.bytes;
        f["fnv1a64"] = e.hash;
        files.push_back(f);
    }
    m["files"] = files;
    const std::string text = m.dump(2) + "\n";
    const auto full = dir_ / "manifest.json";
    std::ofstream out(full, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + full.string());
    out << text;
}

}  // namespace growthlab::io
