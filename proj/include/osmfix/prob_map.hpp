#pragma once

#include <string>
#include <vector>

#include "osmfix/geometry.hpp"

namespace osmfix {

// Single-band building probability raster, values in [0, 1], row-major.
struct ProbMap {
    int width = 0;
    int height = 0;
    float resolution = 0.3f; // meters per pixel
    std::vector<float> values;

    ProbMap() = default;
    ProbMap(int w, int h, float res, float fill = 0.0f)
        : width(w), height(h), resolution(res),
          values(static_cast<size_t>(w) * h, fill) {}

    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width && y >= 0 && y < height;
    }
    double at(int x, int y) const {
        return values[static_cast<size_t>(y) * width + x];
    }
    // Pixels outside the raster read as probability 0.
    double at_or_zero(int x, int y) const { return in_bounds(x, y) ? at(x, y) : 0.0; }
    void set(int x, int y, float v) { values[static_cast<size_t>(y) * width + x] = v; }
    PixelRect extent() const { return {0, 0, width, height}; }
};

// Binary raster format: magic "PMAP", little-endian u32 width, u32 height,
// f32 resolution, then width*height f32 values row-major.
ProbMap load_pmap(const std::string& path);
void save_pmap(const ProbMap& map, const std::string& path);

// 8- or 16-bit grayscale PNG mapped linearly to [0, 1].
ProbMap load_png(const std::string& path, float resolution);

// Loads .pmap or .png depending on the file extension.
ProbMap load_raster(const std::string& path, float png_resolution = 0.3f);

PixelRect clip_rect(const PixelRect& r, const ProbMap& map);

// Arithmetic mean of map values under the set bits of the mask; set bits
// outside the raster contribute 0. Throws EmptyMask.
double mean_prob(const Mask& mask, const ProbMap& map);

// Sum over the (clipped) window of |binary(mask) - value|.
double abs_difference(const Mask& mask, const ProbMap& map, const PixelRect& window);

// Mutual information (nats) between the binary mask variable and map values
// quantized into `bins` uniform bins over [0, 1], estimated from the joint
// histogram over the (clipped) window.
double mutual_info(const Mask& mask, const ProbMap& map, const PixelRect& window,
                   int bins = 32);

} // namespace osmfix
