#pragma once

#include <cmath>
#include <vector>

#include "osmfix/geometry.hpp"
#include "osmfix/prob_map.hpp"
#include "osmfix/rng.hpp"

namespace testutil {

using osmfix::Point;
using osmfix::Polygon;

// Independent point-in-polygon oracle: crossing test with the same half-open
// convention as the rasterizer (top/left boundary inside).
inline bool pip_oracle(const Polygon& p, double x, double y) {
    const auto& v = p.exterior;
    const size_t n = v.size();
    int crossings = 0;
    for (size_t i = 0; i < n; ++i) {
        const Point& a = v[i];
        const Point& b = v[(i + 1) % n];
        if ((a.y <= y && b.y > y) || (b.y <= y && a.y > y)) {
            const double xc = a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (xc > x) ++crossings;
        }
    }
    return crossings % 2 == 1;
}

inline Polygon rect_poly(double x0, double y0, double w, double h) {
    return {{{x0, y0}, {x0 + w, y0}, {x0 + w, y0 + h}, {x0, y0 + h}}};
}

inline Polygon regular_poly(double cx, double cy, double radius, int sides) {
    Polygon p;
    for (int k = 0; k < sides; ++k) {
        const double a = 2.0 * 3.14159265358979323846 * k / sides;
        p.exterior.push_back({cx + radius * std::cos(a), cy + radius * std::sin(a)});
    }
    return p;
}

inline osmfix::ProbMap random_map(int w, int h, uint64_t seed, float resolution = 0.3f) {
    osmfix::ProbMap m(w, h, resolution);
    osmfix::Rng rng(seed);
    for (float& v : m.values) v = static_cast<float>(rng.uniform());
    return m;
}

} // namespace testutil
