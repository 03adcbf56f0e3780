#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "osmfix/alignment.hpp"
#include "osmfix/geometry.hpp"
#include "osmfix/prob_map.hpp"

namespace osmfix {

// Parameters of a deterministic synthetic scene. Buildings are catalog
// shapes placed in spatial clusters (cluster diameter below the grouping
// link distance); building centers sit on the stride-4 candidate lattice so
// shape-addition recovery is not limited by grid quantization. Group shifts
// are a shared scene-wide base shift plus an optional per-group jitter;
// misalignment errors of nearby groups are correlated in real annotation
// sets, and a fully independent draw would make the smoothness prior fight
// the data.
struct SceneSpec {
    uint64_t seed = 1;
    int group_count = 9;
    int min_buildings = 2;
    int max_buildings = 4;
    std::vector<double> shape_weights; // size 18; empty = uniform over the scale-1 shapes
    int max_shift = 25;                // base shift uniform over [-max_shift, max_shift]^2
    int shift_jitter = 0;              // per-group jitter uniform over [-jitter, jitter]^2
    int domain_halfwidth = 30;         // shifts are clamped into this domain
    double drop_fraction = 0.0;        // annotated but absent from the imagery
    double miss_fraction = 0.0;        // present in the imagery but not annotated
    double blur_sigma = 1.0;           // pixels
    double noise_sigma = 0.0;          // probability units
    double resolution = 0.3;           // meters per pixel
};

struct SyntheticScene {
    int width = 0;
    int height = 0;
    ProbMap map;
    std::vector<Footprint> truth;       // buildings present in the imagery
    std::vector<Footprint> annotations; // perturbed annotation set (input to the pipeline)
    std::vector<Displacement> group_shift;  // per generative group
    std::vector<int> group_of;              // building index -> generative group
    std::vector<std::string> building_ids;  // building index -> id
    std::vector<std::string> dropped_ids;   // annotated, no building
    std::vector<std::string> missing_ids;   // building, no annotation
};

SyntheticScene generate(const SceneSpec& spec);

// Writes scene.pmap, truth.geojson, annotations.geojson and shifts.txt.
void write_scene(const SyntheticScene& scene, const std::string& dir);

} // namespace osmfix
