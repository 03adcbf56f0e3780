#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace osmfix {

struct Point {
    double x = 0.0; // column, rightward, pixels
    double y = 0.0; // row, downward, pixels
};

// Closed simple ring; the first vertex is not repeated at the end.
struct Polygon {
    std::vector<Point> exterior;
};

enum class Source { original, aligned, added };

const char* to_string(Source s);
Source source_from_string(const std::string& s);

struct Footprint {
    std::string id;
    Polygon polygon;
    Source source = Source::original;
};

struct Displacement {
    int dx = 0;
    int dy = 0;
    bool operator==(const Displacement&) const = default;
};

// Axis-aligned integer pixel rectangle, half-open in both axes.
struct PixelRect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;
    bool empty() const { return w <= 0 || h <= 0; }
};

// Binary occupancy window. bits are row-major over [x0, x0+width) x [y0, y0+height);
// coordinates passed to test()/set() are absolute pixel coordinates.
struct Mask {
    int x0 = 0;
    int y0 = 0;
    int width = 0;
    int height = 0;
    std::vector<uint8_t> bits;

    Mask() = default;
    Mask(int ox, int oy, int w, int h)
        : x0(ox), y0(oy), width(w), height(h), bits(static_cast<size_t>(w) * h, 0) {}

    bool contains(int x, int y) const {
        return x >= x0 && x < x0 + width && y >= y0 && y < y0 + height;
    }
    bool test(int x, int y) const {
        return contains(x, y) && bits[static_cast<size_t>(y - y0) * width + (x - x0)] != 0;
    }
    void set(int x, int y) { bits[static_cast<size_t>(y - y0) * width + (x - x0)] = 1; }
    size_t count() const;

    // Absolute coordinates of all set pixels, row-major order.
    std::vector<std::pair<int, int>> pixels() const;
    PixelRect bounds() const { return {x0, y0, width, height}; }
};

// Shoelace area (absolute value) in square pixels.
double polygon_area(const Polygon& p);

// Area centroid.
Point polygon_centroid(const Polygon& p);

struct BoundingBox {
    double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
};
BoundingBox polygon_bounds(const Polygon& p);

// All vertices finite, >=3 of them, nonzero area, simple ring.
bool polygon_is_simple(const Polygon& p);
void validate_polygon(const Polygon& p); // throws DegenerateGeometry / FormatError

// Pixels whose centers (ix + 0.5, iy + 0.5) lie inside the polygon.
// Centers exactly on a boundary follow the half-open rule: top/left edges
// are inside, bottom/right outside. Throws DegenerateGeometry for
// polygons of area below one pixel.
Mask rasterize(const Polygon& polygon);

Polygon shift(const Polygon& polygon, const Displacement& d);
Polygon shift(const Polygon& polygon, double dx, double dy);
Mask shift(const Mask& mask, const Displacement& d);

// Raster IoU of the two polygons at 1-px resolution.
double iou(const Polygon& a, const Polygon& b);
double mask_iou(const Mask& a, const Mask& b);
bool masks_intersect(const Mask& a, const Mask& b);

// Average symmetric surface distance between the boundary pixel sets of the
// two rasterized polygons.
double assd(const Polygon& a, const Polygon& b);

// Set pixels with at least one unset 4-neighbor (window edges count as unset).
std::vector<std::pair<int, int>> boundary_pixels(const Mask& m);

} // namespace osmfix
