#pragma once

#include <optional>
#include <string>

#include "osmfix/alignment.hpp"
#include "osmfix/geojson.hpp"
#include "osmfix/metrics.hpp"
#include "osmfix/removal.hpp"
#include "osmfix/shapes.hpp"

namespace osmfix {

struct PipelineConfig {
    AlignConfig align;
    int bins = 64;             // removal histogram bins
    double add_threshold = 0.80;
    int stride = 4;            // builtin detection grid stride
    std::string grid_path;     // detection grid file; empty runs the builtin scorer
    std::string annotations_path;
    std::string map_path;
    std::string truth_path;    // optional; enables the evaluation report
    std::string out_dir;
    float png_resolution = 0.3f; // used when the raster input is a PNG
};

// Stage functions shared by run_pipeline and the CLI subcommands so staged
// invocations produce byte-identical files.
AnnotationCollection stage_align(const AnnotationCollection& in, const ProbMap& map,
                                 const AlignConfig& config);

struct RemoveStage {
    AnnotationCollection kept;
    AnnotationCollection removed; // each footprint carries removed_reason=low_evidence
    double threshold = 0.0;
    bool unimodal = false;
};
RemoveStage stage_remove(const AnnotationCollection& in, const ProbMap& map, int bins);

// Returns only the added footprints.
AnnotationCollection stage_add(const AnnotationCollection& kept, const ProbMap& map,
                               const DetectionGrid& grid,
                               const std::vector<ShapeSpec>& catalog, double t);

AnnotationCollection merge_collections(const AnnotationCollection& a,
                                       const AnnotationCollection& b);

struct PipelineResult {
    std::optional<EvalReport> report;
};

// align -> remove -> add, writing aligned.geojson, kept.geojson,
// removed.geojson, added.geojson and final.geojson into out_dir (each flushed
// as its stage completes), plus report.txt when ground truth is provided.
// Errors carry a stage prefix.
PipelineResult run_pipeline(const PipelineConfig& config);

} // namespace osmfix
