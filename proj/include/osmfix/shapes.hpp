#pragma once

#include <string>
#include <vector>

#include "osmfix/geometry.hpp"
#include "osmfix/prob_map.hpp"

namespace osmfix {

enum class ShapeBase { circle, square, rect0, rect45, rect90, rect135 };

const char* to_string(ShapeBase b);

// One of the 18 prior shapes: 6 bases x 3 linear scales (1, sqrt 2, 2).
struct ShapeSpec {
    int id = 0;
    ShapeBase base = ShapeBase::circle;
    double scale = 1.0;
    Polygon polygon; // centered at (0,0), pixel units at the catalog resolution
};

// circle radius 3.3 m (as a regular 32-gon), square side 4.8 m, rectangle
// 3.6 x 6 m rotated by 0/45/90/135 degrees; meters converted at `resolution`.
std::vector<ShapeSpec> build_catalog(double resolution);

// Per-shape score planes on a stride-aligned candidate lattice. Cell (cx, cy)
// corresponds to the pixel center (cx * stride, cy * stride).
struct DetectionGrid {
    int shape_count = 0;
    int grid_w = 0;
    int grid_h = 0;
    int stride = 4;
    std::vector<float> planes; // shape-major, row-major per plane

    float at(int shape, int cx, int cy) const {
        return planes[(static_cast<size_t>(shape) * grid_h + cy) * grid_w + cx];
    }
    void set(int shape, int cx, int cy, float v) {
        planes[(static_cast<size_t>(shape) * grid_h + cy) * grid_w + cx] = v;
    }
};

// Matched-filter detector: s = clamp(0.5 * (mu_in + 1 - mu_ring), 0, 1) where
// mu_in is the mean probability inside the shape mask and mu_ring over its
// 2-px dilation ring.
DetectionGrid builtin_score(const ProbMap& map, const std::vector<ShapeSpec>& catalog,
                            int stride = 4);

// Binary format: magic "DGRD", little-endian u32 shape_count, u32 grid_w,
// u32 grid_h, u32 stride, then shape_count row-major f32 planes.
// expected_shapes >= 0 enforces the plane count.
DetectionGrid load_detection_grid(const std::string& path, int expected_shapes = -1);
void save_detection_grid(const DetectionGrid& grid, const std::string& path);

struct Candidate {
    int shape_id = 0;
    Point center;
    double detection_score = 0.0;
    double avg_prob = 0.0;
};

// Keep candidates with avg_prob >= t and detection_score >= t, discard any
// overlapping a retained existing footprint, then greedily accept by
// descending avg_prob + detection_score with pixel-disjointness. Accepted
// candidates become footprints with source = added.
std::vector<Footprint> select_candidates(const DetectionGrid& grid, const ProbMap& map,
                                         const std::vector<Footprint>& existing,
                                         const std::vector<ShapeSpec>& catalog,
                                         double t = 0.80);

enum class SampleLabel { positive, negative, ignore };

// Training labels for an external detector: per (cell, shape), IoU between
// the shape placed at the cell center and the best-overlapping truth polygon.
// > 0.75 positive, < 0.30 negative, otherwise ignore.
std::vector<std::vector<SampleLabel>> label_shape_samples(
    const std::vector<Footprint>& truth, const std::vector<ShapeSpec>& catalog, int grid_w,
    int grid_h, int stride = 4);

} // namespace osmfix
