#include "osmfix/pipeline.hpp"

#include <filesystem>
#include <fstream>

#include "osmfix/errors.hpp"
#include "osmfix/prob_map.hpp"

namespace osmfix {

AnnotationCollection stage_align(const AnnotationCollection& in, const ProbMap& map,
                                 const AlignConfig& config) {
    AnnotationCollection out;
    out.extras = in.extras;
    if (in.footprints.empty()) return out;
    out.footprints = align_footprints(in.footprints, map, config).aligned;
    return out;
}

RemoveStage stage_remove(const AnnotationCollection& in, const ProbMap& map, int bins) {
    RemoveStage out;
    const RemovalResult res = remove_footprints(in.footprints, map, bins);
    out.threshold = res.threshold;
    out.unimodal = res.unimodal;
    out.kept.footprints = res.kept;
    out.removed.footprints = res.removed;
    for (const Footprint& f : res.kept) {
        const auto it = in.extras.find(f.id);
        if (it != in.extras.end()) out.kept.extras[f.id] = it->second;
    }
    for (const Footprint& f : res.removed) {
        const auto it = in.extras.find(f.id);
        nlohmann::json extra = it != in.extras.end() ? it->second : nlohmann::json::object();
        extra["removed_reason"] = "low_evidence";
        out.removed.extras[f.id] = std::move(extra);
    }
    return out;
}

AnnotationCollection stage_add(const AnnotationCollection& kept, const ProbMap& map,
                               const DetectionGrid& grid,
                               const std::vector<ShapeSpec>& catalog, double t) {
    AnnotationCollection out;
    out.footprints = select_candidates(grid, map, kept.footprints, catalog, t);
    return out;
}

AnnotationCollection merge_collections(const AnnotationCollection& a,
                                       const AnnotationCollection& b) {
    AnnotationCollection out = a;
    for (const Footprint& f : b.footprints) out.footprints.push_back(f);
    for (const auto& [id, extra] : b.extras) out.extras[id] = extra;
    return out;
}

namespace {

template <typename Fn>
auto with_stage(const char* stage, Fn&& fn) {
    try {
        return fn();
    } catch (const IoError& e) {
        throw IoError(std::string(stage) + ": " + e.what());
    } catch (const FormatError& e) {
        throw FormatError(std::string(stage) + ": " + e.what());
    } catch (const Error& e) {
        throw InconsistentState(std::string(stage) + ": " + e.what());
    }
}

} // namespace

PipelineResult run_pipeline(const PipelineConfig& config) {
    if (config.out_dir.empty()) throw InconsistentState("pipeline needs an output directory");
    std::filesystem::create_directories(config.out_dir);
    const std::string out = config.out_dir + "/";

    const AnnotationCollection annotations =
        with_stage("input", [&] { return read_geojson(config.annotations_path); });
    const ProbMap map =
        with_stage("input", [&] { return load_raster(config.map_path, config.png_resolution); });

    const AnnotationCollection aligned =
        with_stage("align", [&] { return stage_align(annotations, map, config.align); });
    write_geojson(aligned, out + "aligned.geojson");

    const RemoveStage removed =
        with_stage("remove", [&] { return stage_remove(aligned, map, config.bins); });
    write_geojson(removed.kept, out + "kept.geojson");
    write_geojson(removed.removed, out + "removed.geojson");

    const AnnotationCollection added = with_stage("add", [&] {
        const auto catalog = build_catalog(map.resolution);
        const DetectionGrid grid =
            config.grid_path.empty()
                ? builtin_score(map, catalog, config.stride)
                : load_detection_grid(config.grid_path, static_cast<int>(catalog.size()));
        return stage_add(removed.kept, map, grid, catalog, config.add_threshold);
    });
    write_geojson(added, out + "added.geojson");

    const AnnotationCollection final_set = merge_collections(removed.kept, added);
    write_geojson(final_set, out + "final.geojson");

    PipelineResult result;
    if (!config.truth_path.empty()) {
        const AnnotationCollection truth =
            with_stage("eval", [&] { return read_geojson(config.truth_path); });
        result.report = with_stage("eval", [&] {
            return evaluate(final_set.footprints, truth.footprints, map.extent());
        });
        std::ofstream os(out + "report.txt", std::ios::binary);
        if (!os) throw IoError("cannot write " + out + "report.txt");
        os << report_to_text(*result.report);
    }
    return result;
}

} // namespace osmfix
