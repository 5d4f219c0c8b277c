#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "voxsplat/geom.hpp"

namespace voxsplat {

struct Point {
    Vec3 p;
    double intensity = 0.0;  // in [0,1]
};

struct PointCloud {
    std::vector<Point> points;

    std::size_t size() const { return points.size(); }
};

// Keeps points inside the closed box that have at least `min_neighbors`
// other points within `radius`. Order is preserved.
inline PointCloud range_filter(const PointCloud& pc, const Box& bounds, int min_neighbors,
                               double radius) {
    if (min_neighbors > 0 && radius <= 0.0)
        throw std::invalid_argument("range_filter: radius must be > 0 when min_neighbors > 0");
    PointCloud out;
    double r2 = radius * radius;
    for (std::size_t i = 0; i < pc.points.size(); ++i) {
        const Point& a = pc.points[i];
        if (!bounds.contains(a.p)) continue;
        if (min_neighbors > 0) {
            int n = 0;
            for (std::size_t j = 0; j < pc.points.size(); ++j) {
                if (j == i) continue;
                if ((pc.points[j].p - a.p).norm2() <= r2 && ++n >= min_neighbors) break;
            }
            if (n < min_neighbors) continue;
        }
        out.points.push_back(a);
    }
    return out;
}

// one point per line: "x y z intensity"; '#' starts a comment
inline PointCloud read_pointcloud(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("read_pointcloud: cannot open " + path);
    PointCloud pc;
    std::string line;
    while (std::getline(f, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ss(line);
        Point pt;
        if (ss >> pt.p.x >> pt.p.y >> pt.p.z >> pt.intensity) pc.points.push_back(pt);
    }
    return pc;
}

inline void write_pointcloud(const PointCloud& pc, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_pointcloud: cannot open " + path);
    char buf[256];
    for (const Point& pt : pc.points) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g %.17g\n", pt.p.x, pt.p.y, pt.p.z,
                      pt.intensity);
        f << buf;
    }
}

}  // namespace voxsplat
