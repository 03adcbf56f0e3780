#include "osmfix/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "osmfix/errors.hpp"

namespace osmfix {

const char* to_string(Source s) {
    switch (s) {
        case Source::original: return "original";
        case Source::aligned: return "aligned";
        case Source::added: return "added";
    }
    return "original";
}

Source source_from_string(const std::string& s) {
    if (s == "original") return Source::original;
    if (s == "aligned") return Source::aligned;
    if (s == "added") return Source::added;
    throw FormatError("unknown footprint source '" + s + "'");
}

size_t Mask::count() const {
    size_t n = 0;
    for (uint8_t b : bits) n += b;
    return n;
}

std::vector<std::pair<int, int>> Mask::pixels() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(count());
    for (int ry = 0; ry < height; ++ry) {
        const uint8_t* row = bits.data() + static_cast<size_t>(ry) * width;
        for (int rx = 0; rx < width; ++rx) {
            if (row[rx]) out.emplace_back(x0 + rx, y0 + ry);
        }
    }
    return out;
}

double polygon_area(const Polygon& p) {
    const auto& v = p.exterior;
    const size_t n = v.size();
    if (n < 3) return 0.0;
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const Point& a = v[i];
        const Point& b = v[(i + 1) % n];
        s += a.x * b.y - b.x * a.y;
    }
    return std::abs(s) * 0.5;
}

Point polygon_centroid(const Polygon& p) {
    const auto& v = p.exterior;
    const size_t n = v.size();
    double s = 0.0, cx = 0.0, cy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const Point& a = v[i];
        const Point& b = v[(i + 1) % n];
        const double cross = a.x * b.y - b.x * a.y;
        s += cross;
        cx += (a.x + b.x) * cross;
        cy += (a.y + b.y) * cross;
    }
    if (s == 0.0) { // fall back to the vertex mean for zero-area rings
        for (const Point& q : v) { cx += q.x; cy += q.y; }
        return {cx / n, cy / n};
    }
    return {cx / (3.0 * s), cy / (3.0 * s)};
}

BoundingBox polygon_bounds(const Polygon& p) {
    BoundingBox b;
    b.min_x = b.min_y = std::numeric_limits<double>::infinity();
    b.max_x = b.max_y = -std::numeric_limits<double>::infinity();
    for (const Point& q : p.exterior) {
        b.min_x = std::min(b.min_x, q.x);
        b.min_y = std::min(b.min_y, q.y);
        b.max_x = std::max(b.max_x, q.x);
        b.max_y = std::max(b.max_y, q.y);
    }
    return b;
}

namespace {

bool segments_intersect(const Point& p1, const Point& p2, const Point& p3, const Point& p4) {
    auto cross = [](const Point& o, const Point& a, const Point& b) {
        return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    };
    const double d1 = cross(p3, p4, p1);
    const double d2 = cross(p3, p4, p2);
    const double d3 = cross(p1, p2, p3);
    const double d4 = cross(p1, p2, p4);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
        ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    auto on_segment = [](const Point& a, const Point& b, const Point& q) {
        return std::min(a.x, b.x) <= q.x && q.x <= std::max(a.x, b.x) &&
               std::min(a.y, b.y) <= q.y && q.y <= std::max(a.y, b.y);
    };
    if (d1 == 0 && on_segment(p3, p4, p1)) return true;
    if (d2 == 0 && on_segment(p3, p4, p2)) return true;
    if (d3 == 0 && on_segment(p1, p2, p3)) return true;
    if (d4 == 0 && on_segment(p1, p2, p4)) return true;
    return false;
}

} // namespace

bool polygon_is_simple(const Polygon& p) {
    const auto& v = p.exterior;
    const size_t n = v.size();
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            // skip adjacent edges (they share a vertex)
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]))
                return false;
        }
    }
    return true;
}

void validate_polygon(const Polygon& p) {
    if (p.exterior.size() < 3)
        throw DegenerateGeometry("polygon needs at least 3 vertices");
    for (const Point& q : p.exterior) {
        if (!std::isfinite(q.x) || !std::isfinite(q.y))
            throw DegenerateGeometry("polygon vertex is not finite");
    }
    if (polygon_area(p) <= 0.0)
        throw DegenerateGeometry("polygon has zero area");
    if (!polygon_is_simple(p))
        throw FormatError("polygon is self-intersecting");
}

Mask rasterize(const Polygon& polygon) {
    const auto& v = polygon.exterior;
    if (v.size() < 3) throw DegenerateGeometry("polygon needs at least 3 vertices");
    for (const Point& q : v) {
        if (!std::isfinite(q.x) || !std::isfinite(q.y))
            throw DegenerateGeometry("polygon vertex is not finite");
    }
    if (polygon_area(polygon) < 1.0)
        throw DegenerateGeometry("polygon area below one pixel");

    const BoundingBox bb = polygon_bounds(polygon);
    const int x0 = static_cast<int>(std::floor(bb.min_x));
    const int y0 = static_cast<int>(std::floor(bb.min_y));
    const int x1 = static_cast<int>(std::ceil(bb.max_x));
    const int y1 = static_cast<int>(std::ceil(bb.max_y));
    Mask m(x0, y0, std::max(x1 - x0, 1), std::max(y1 - y0, 1));

    std::vector<double> xs;
    const size_t n = v.size();
    for (int iy = y0; iy < y0 + m.height; ++iy) {
        const double yc = iy + 0.5;
        xs.clear();
        for (size_t i = 0; i < n; ++i) {
            const Point& a = v[i];
            const Point& b = v[(i + 1) % n];
            // half-open span in y: an edge contributes where min_y <= yc < max_y
            if ((a.y <= yc && b.y > yc) || (b.y <= yc && a.y > yc)) {
                xs.push_back(a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y));
            }
        }
        std::sort(xs.begin(), xs.end());
        for (size_t k = 0; k + 1 < xs.size(); k += 2) {
            // pixel centers in [xs[k], xs[k+1])
            const int first = static_cast<int>(std::ceil(xs[k] - 0.5));
            const int last = static_cast<int>(std::ceil(xs[k + 1] - 0.5)) - 1;
            for (int ix = std::max(first, x0); ix <= std::min(last, x0 + m.width - 1); ++ix)
                m.set(ix, iy);
        }
    }
    return m;
}

Polygon shift(const Polygon& polygon, const Displacement& d) {
    return shift(polygon, static_cast<double>(d.dx), static_cast<double>(d.dy));
}

Polygon shift(const Polygon& polygon, double dx, double dy) {
    Polygon out = polygon;
    for (Point& q : out.exterior) {
        q.x += dx;
        q.y += dy;
    }
    return out;
}

Mask shift(const Mask& mask, const Displacement& d) {
    Mask out = mask;
    out.x0 += d.dx;
    out.y0 += d.dy;
    return out;
}

bool masks_intersect(const Mask& a, const Mask& b) {
    const int x0 = std::max(a.x0, b.x0);
    const int y0 = std::max(a.y0, b.y0);
    const int x1 = std::min(a.x0 + a.width, b.x0 + b.width);
    const int y1 = std::min(a.y0 + a.height, b.y0 + b.height);
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x)
            if (a.test(x, y) && b.test(x, y)) return true;
    return false;
}

double mask_iou(const Mask& a, const Mask& b) {
    const int x0 = std::min(a.x0, b.x0);
    const int y0 = std::min(a.y0, b.y0);
    const int x1 = std::max(a.x0 + a.width, b.x0 + b.width);
    const int y1 = std::max(a.y0 + a.height, b.y0 + b.height);
    size_t inter = 0, uni = 0;
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            const bool ia = a.test(x, y);
            const bool ib = b.test(x, y);
            inter += ia && ib;
            uni += ia || ib;
        }
    }
    if (uni == 0) throw DegenerateGeometry("both masks are empty");
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double iou(const Polygon& a, const Polygon& b) {
    return mask_iou(rasterize(a), rasterize(b));
}

std::vector<std::pair<int, int>> boundary_pixels(const Mask& m) {
    std::vector<std::pair<int, int>> out;
    for (int y = m.y0; y < m.y0 + m.height; ++y) {
        for (int x = m.x0; x < m.x0 + m.width; ++x) {
            if (!m.test(x, y)) continue;
            if (!m.test(x - 1, y) || !m.test(x + 1, y) || !m.test(x, y - 1) || !m.test(x, y + 1))
                out.emplace_back(x, y);
        }
    }
    return out;
}

double assd(const Polygon& a, const Polygon& b) {
    const Mask ma = rasterize(a);
    const Mask mb = rasterize(b);
    const auto ba = boundary_pixels(ma);
    const auto bb = boundary_pixels(mb);
    if (ba.empty() || bb.empty())
        throw DegenerateGeometry("polygon covers no pixel centers");
    auto sum_nearest = [](const std::vector<std::pair<int, int>>& from,
                          const std::vector<std::pair<int, int>>& to) {
        double s = 0.0;
        for (const auto& [px, py] : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& [qx, qy] : to) {
                const double ddx = px - qx;
                const double ddy = py - qy;
                best = std::min(best, ddx * ddx + ddy * ddy);
            }
            s += std::sqrt(best);
        }
        return s;
    };
    const double total = sum_nearest(ba, bb) + sum_nearest(bb, ba);
    return total / static_cast<double>(ba.size() + bb.size());
}

} // namespace osmfix
