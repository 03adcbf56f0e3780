#include "osmfix/prob_map.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <png.h>

#include "osmfix/errors.hpp"

namespace osmfix {

namespace {

void write_u32(std::ostream& os, uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t read_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

void write_f32(std::ostream& os, float v) {
    uint32_t u;
    std::memcpy(&u, &v, 4);
    write_u32(os, u);
}

float read_f32(std::istream& is) {
    const uint32_t u = read_u32(is);
    float v;
    std::memcpy(&v, &u, 4);
    return v;
}

float check_unit_range(float v, const std::string& path) {
    if (!(v >= -1e-6f && v <= 1.0f + 1e-6f))
        throw FormatError(path + ": raster value " + std::to_string(v) + " outside [0,1]");
    return std::clamp(v, 0.0f, 1.0f);
}

} // namespace

ProbMap load_pmap(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open raster file " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "PMAP", 4) != 0)
        throw FormatError(path + ": bad magic, expected PMAP");
    const uint32_t w = read_u32(is);
    const uint32_t h = read_u32(is);
    const float res = read_f32(is);
    if (!is || w == 0 || h == 0)
        throw FormatError(path + ": invalid raster dimensions");
    if (!(res > 0.0f)) throw FormatError(path + ": resolution must be positive");
    ProbMap map(static_cast<int>(w), static_cast<int>(h), res);
    for (size_t i = 0; i < map.values.size(); ++i) {
        map.values[i] = check_unit_range(read_f32(is), path);
        if (!is) throw FormatError(path + ": truncated raster payload");
    }
    return map;
}

void save_pmap(const ProbMap& map, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write raster file " + path);
    os.write("PMAP", 4);
    write_u32(os, static_cast<uint32_t>(map.width));
    write_u32(os, static_cast<uint32_t>(map.height));
    write_f32(os, map.resolution);
    for (float v : map.values) write_f32(os, v);
    if (!os) throw IoError("failed writing raster file " + path);
}

ProbMap load_png(const std::string& path, float resolution) {
    FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp) throw IoError("cannot open PNG file " + path);
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png) png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw IoError("libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw FormatError(path + ": PNG decode error");
    }
    png_init_io(png, fp);
    png_read_info(png, info);
    const int color = png_get_color_type(png, info);
    const int depth = png_get_bit_depth(png, info);
    if (color != PNG_COLOR_TYPE_GRAY || (depth != 8 && depth != 16)) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw FormatError(path + ": only 8/16-bit grayscale PNG is supported");
    }
    const int w = static_cast<int>(png_get_image_width(png, info));
    const int h = static_cast<int>(png_get_image_height(png, info));
    ProbMap map(w, h, resolution);
    std::vector<png_byte> row(png_get_rowbytes(png, info));
    const double denom = depth == 8 ? 255.0 : 65535.0;
    for (int y = 0; y < h; ++y) {
        png_read_row(png, row.data(), nullptr);
        for (int x = 0; x < w; ++x) {
            double v;
            if (depth == 8) {
                v = row[x] / denom;
            } else {
                v = ((static_cast<unsigned>(row[2 * x]) << 8) | row[2 * x + 1]) / denom;
            }
            map.set(x, y, static_cast<float>(v));
        }
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    return map;
}

ProbMap load_raster(const std::string& path, float png_resolution) {
    const auto dot = path.find_last_of('.');
    const std::string ext = dot == std::string::npos ? "" : path.substr(dot);
    if (ext == ".png" || ext == ".PNG") return load_png(path, png_resolution);
    return load_pmap(path);
}

PixelRect clip_rect(const PixelRect& r, const ProbMap& map) {
    const int x0 = std::max(r.x, 0);
    const int y0 = std::max(r.y, 0);
    const int x1 = std::min(r.x + r.w, map.width);
    const int y1 = std::min(r.y + r.h, map.height);
    return {x0, y0, x1 - x0, y1 - y0};
}

double mean_prob(const Mask& mask, const ProbMap& map) {
    double sum = 0.0;
    size_t n = 0;
    for (int ry = 0; ry < mask.height; ++ry) {
        const uint8_t* row = mask.bits.data() + static_cast<size_t>(ry) * mask.width;
        const int y = mask.y0 + ry;
        for (int rx = 0; rx < mask.width; ++rx) {
            if (!row[rx]) continue;
            sum += map.at_or_zero(mask.x0 + rx, y);
            ++n;
        }
    }
    if (n == 0) throw EmptyMask("mask has no set bits");
    return sum / static_cast<double>(n);
}

double abs_difference(const Mask& mask, const ProbMap& map, const PixelRect& window) {
    const PixelRect w = clip_rect(window, map);
    if (w.empty()) throw EmptyWindow("window is empty after clipping");
    double sum = 0.0;
    for (int y = w.y; y < w.y + w.h; ++y) {
        for (int x = w.x; x < w.x + w.w; ++x) {
            const double m = mask.test(x, y) ? 1.0 : 0.0;
            sum += std::abs(m - map.at(x, y));
        }
    }
    return sum;
}

double mutual_info(const Mask& mask, const ProbMap& map, const PixelRect& window, int bins) {
    const PixelRect w = clip_rect(window, map);
    if (w.empty()) throw EmptyWindow("window is empty after clipping");
    std::vector<double> joint(static_cast<size_t>(2) * bins, 0.0);
    for (int y = w.y; y < w.y + w.h; ++y) {
        for (int x = w.x; x < w.x + w.w; ++x) {
            const int m = mask.test(x, y) ? 1 : 0;
            const int b = std::min(bins - 1, static_cast<int>(map.at(x, y) * bins));
            joint[static_cast<size_t>(m) * bins + b] += 1.0;
        }
    }
    const double total = static_cast<double>(w.w) * w.h;
    std::vector<double> pm(2, 0.0), pb(bins, 0.0);
    for (int m = 0; m < 2; ++m)
        for (int b = 0; b < bins; ++b) {
            pm[m] += joint[static_cast<size_t>(m) * bins + b];
            pb[b] += joint[static_cast<size_t>(m) * bins + b];
        }
    double mi = 0.0;
    for (int m = 0; m < 2; ++m) {
        for (int b = 0; b < bins; ++b) {
            const double pj = joint[static_cast<size_t>(m) * bins + b] / total;
            if (pj <= 0.0) continue; // 0·log0 = 0
            mi += pj * std::log(pj * total * total / (pm[m] * pb[b]));
        }
    }
    return std::max(mi, 0.0);
}

} // namespace osmfix
