#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace voxsplat {

// RGB image, doubles in [0,1] row-major; values are only clamped at export
struct Image {
    int width = 0;
    int height = 0;
    std::vector<double> rgb;  // h*w*3

    Image() = default;
    Image(int w, int h, double fill = 0.0) : width(w), height(h), rgb(std::size_t(w) * h * 3, fill) {}

    double& at(int x, int y, int c) { return rgb[(std::size_t(y) * width + x) * 3 + c]; }
    double at(int x, int y, int c) const { return rgb[(std::size_t(y) * width + x) * 3 + c]; }
    std::size_t size() const { return rgb.size(); }
};

// binary PPM (P6), maxval 255, clamp then round half-up
inline void write_ppm(const Image& img, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_ppm: cannot open " + path);
    f << "P6\n" << img.width << " " << img.height << "\n255\n";
    for (double v : img.rgb) {
        double c = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
        unsigned char b = (unsigned char)std::floor(c * 255.0 + 0.5);
        f.write(reinterpret_cast<const char*>(&b), 1);
    }
}

inline Image read_ppm(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("read_ppm: cannot open " + path);
    std::string magic;
    f >> magic;
    if (magic != "P6") throw std::runtime_error("read_ppm: not a P6 file: " + path);
    auto next_token = [&f]() {
        std::string tok;
        while (f >> tok) {
            if (tok[0] == '#') {
                std::string rest;
                std::getline(f, rest);
                continue;
            }
            return tok;
        }
        throw std::runtime_error("read_ppm: truncated header");
    };
    int w = std::stoi(next_token());
    int h = std::stoi(next_token());
    int maxval = std::stoi(next_token());
    if (maxval != 255) throw std::runtime_error("read_ppm: expected maxval 255");
    f.get();  // single whitespace after header
    Image img(w, h);
    std::vector<unsigned char> buf(std::size_t(w) * h * 3);
    f.read(reinterpret_cast<char*>(buf.data()), std::streamsize(buf.size()));
    if (std::size_t(f.gcount()) != buf.size()) throw std::runtime_error("read_ppm: truncated data");
    for (std::size_t i = 0; i < buf.size(); ++i) img.rgb[i] = double(buf[i]) / 255.0;
    return img;
}

// Per-pixel camera-z depth; infinity marks background.
struct DepthMap {
    int width = 0;
    int height = 0;
    std::vector<double> z;

    DepthMap() = default;
    DepthMap(int w, int h) : width(w), height(h), z(std::size_t(w) * h, std::numeric_limits<double>::infinity()) {}

    double& at(int x, int y) { return z[std::size_t(y) * width + x]; }
    double at(int x, int y) const { return z[std::size_t(y) * width + x]; }
};

inline void write_depth(const DepthMap& d, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_depth: cannot open " + path);
    f << d.width << " " << d.height << "\n";
    char buf[64];
    for (double v : d.z) {
        if (std::isinf(v)) {
            f << "inf\n";
        } else {
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            f << buf << "\n";
        }
    }
}

inline DepthMap read_depth(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("read_depth: cannot open " + path);
    int w, h;
    f >> w >> h;
    DepthMap d(w, h);
    for (auto& v : d.z) {
        std::string tok;
        f >> tok;
        v = (tok == "inf") ? std::numeric_limits<double>::infinity() : std::stod(tok);
    }
    return d;
}

}  // namespace voxsplat
