// Command-line frontend: corrects building-footprint annotation sets against
// a building-probability raster (align / remove / add), generates synthetic
// scenes and evaluates results.
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "osmfix/errors.hpp"
#include "osmfix/pipeline.hpp"
#include "osmfix/synth.hpp"

using namespace osmfix;

namespace {

struct AlignFlags {
    double beta = 2.0;
    int max_iters = 10;
    int domain = 30;
    double link_distance = 21.0;
    int knn = 5;
    std::string unary = "correlation";
    std::string sites = "groups";

    void attach(CLI::App* cmd) {
        cmd->add_option("--beta", beta, "spatial regularization weight");
        cmd->add_option("--max-iters", max_iters, "maximum ICM sweeps");
        cmd->add_option("--domain", domain, "displacement domain half-width in pixels");
        cmd->add_option("--link-distance", link_distance, "grouping link distance in meters");
        cmd->add_option("--knn", knn, "neighbor count in the group graph");
        cmd->add_option("--unary", unary, "unary term: correlation|absdiff|mi")
            ->check(CLI::IsMember({"correlation", "absdiff", "mi"}));
        cmd->add_option("--sites", sites, "MRF sites: groups|buildings")
            ->check(CLI::IsMember({"groups", "buildings"}));
    }

    AlignConfig to_config() const {
        AlignConfig c;
        c.beta = beta;
        c.max_iters = max_iters;
        c.domain = DisplacementDomain::symmetric(domain);
        c.link_distance_m = link_distance;
        c.knn = knn;
        if (unary == "correlation") c.unary = UnaryMode::correlation;
        else if (unary == "absdiff") c.unary = UnaryMode::abs_difference;
        else c.unary = UnaryMode::mutual_info;
        c.site_mode = sites == "groups" ? SiteMode::groups : SiteMode::buildings;
        return c;
    }
};

int run(int argc, char** argv) {
    CLI::App app{"Correct building footprint annotations against a probability raster"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic scene");
    SceneSpec spec;
    std::string synth_out = "scene";
    synth->add_option("--seed", spec.seed, "scene seed");
    synth->add_option("--groups", spec.group_count, "number of building groups");
    synth->add_option("--min-bpg", spec.min_buildings, "min buildings per group");
    synth->add_option("--max-bpg", spec.max_buildings, "max buildings per group");
    synth->add_option("--max-shift", spec.max_shift, "base shift half-range in pixels");
    synth->add_option("--jitter", spec.shift_jitter, "per-group shift jitter in pixels");
    synth->add_option("--drop", spec.drop_fraction, "fraction of annotations without a building");
    synth->add_option("--miss", spec.miss_fraction, "fraction of buildings without an annotation");
    synth->add_option("--blur", spec.blur_sigma, "probability map blur sigma in pixels");
    synth->add_option("--noise", spec.noise_sigma, "probability map noise sigma");
    synth->add_option("--resolution", spec.resolution, "meters per pixel");
    synth->add_option("--out", synth_out, "output directory")->required();

    // align
    auto* align = app.add_subcommand("align", "align annotations to the probability raster");
    std::string a_ann, a_map, a_out;
    AlignFlags a_flags;
    align->add_option("--annotations", a_ann, "input GeoJSON")->required();
    align->add_option("--map", a_map, "probability raster (.pmap or .png)")->required();
    align->add_option("--out", a_out, "aligned GeoJSON output")->required();
    a_flags.attach(align);

    // remove
    auto* remove = app.add_subcommand("remove", "drop annotations without raster evidence");
    std::string r_ann, r_map, r_kept, r_removed;
    int r_bins = 64;
    remove->add_option("--annotations", r_ann, "input GeoJSON (aligned)")->required();
    remove->add_option("--map", r_map, "probability raster")->required();
    remove->add_option("--out-kept", r_kept, "kept footprints output")->required();
    remove->add_option("--out-removed", r_removed, "removed footprints output")->required();
    remove->add_option("--bins", r_bins, "evidence histogram bins");

    // add
    auto* add = app.add_subcommand("add", "add missing buildings from the shape catalog");
    std::string d_ann, d_map, d_added, d_final, d_grid;
    double d_t = 0.80;
    int d_stride = 4;
    add->add_option("--annotations", d_ann, "kept footprints GeoJSON")->required();
    add->add_option("--map", d_map, "probability raster")->required();
    add->add_option("--out-added", d_added, "added footprints output")->required();
    add->add_option("--out-final", d_final, "merged kept+added output")->required();
    add->add_option("--grid", d_grid, "detection grid file (default: builtin scorer)");
    add->add_option("--threshold", d_t, "candidate filter threshold");
    add->add_option("--stride", d_stride, "builtin scorer grid stride");

    // pipeline
    auto* pipe = app.add_subcommand("pipeline", "align, remove and add in one run");
    PipelineConfig pc;
    AlignFlags p_flags;
    pipe->add_option("--annotations", pc.annotations_path, "input GeoJSON")->required();
    pipe->add_option("--map", pc.map_path, "probability raster")->required();
    pipe->add_option("--out-dir", pc.out_dir, "output directory")->required();
    pipe->add_option("--truth", pc.truth_path, "ground truth GeoJSON for the report");
    pipe->add_option("--grid", pc.grid_path, "detection grid file (default: builtin scorer)");
    pipe->add_option("--bins", pc.bins, "evidence histogram bins");
    pipe->add_option("--threshold", pc.add_threshold, "candidate filter threshold");
    pipe->add_option("--stride", pc.stride, "builtin scorer grid stride");
    p_flags.attach(pipe);

    // eval
    auto* eval = app.add_subcommand("eval", "score predictions against ground truth");
    std::string e_pred, e_truth, e_map, e_out;
    eval->add_option("--pred", e_pred, "predicted footprints GeoJSON")->required();
    eval->add_option("--truth", e_truth, "ground truth GeoJSON")->required();
    eval->add_option("--map", e_map, "raster defining the pixel extent")->required();
    eval->add_option("--out", e_out, "report output file (default: stdout)");

    // shapes
    auto* shapes = app.add_subcommand("shapes", "dump the 18-shape catalog as GeoJSON");
    double s_res = 0.3;
    std::string s_out;
    shapes->add_option("--resolution", s_res, "meters per pixel");
    shapes->add_option("--out", s_out, "output GeoJSON (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    if (*synth) {
        write_scene(generate(spec), synth_out);
        return 0;
    }
    if (*align) {
        const auto coll = read_geojson(a_ann);
        const ProbMap map = load_raster(a_map);
        write_geojson(stage_align(coll, map, a_flags.to_config()), a_out);
        return 0;
    }
    if (*remove) {
        const auto coll = read_geojson(r_ann);
        const ProbMap map = load_raster(r_map);
        const RemoveStage stage = stage_remove(coll, map, r_bins);
        write_geojson(stage.kept, r_kept);
        write_geojson(stage.removed, r_removed);
        return 0;
    }
    if (*add) {
        const auto kept = read_geojson(d_ann);
        const ProbMap map = load_raster(d_map);
        const auto catalog = build_catalog(map.resolution);
        const DetectionGrid grid =
            d_grid.empty() ? builtin_score(map, catalog, d_stride)
                           : load_detection_grid(d_grid, static_cast<int>(catalog.size()));
        const auto added = stage_add(kept, map, grid, catalog, d_t);
        write_geojson(added, d_added);
        write_geojson(merge_collections(kept, added), d_final);
        return 0;
    }
    if (*pipe) {
        pc.align = p_flags.to_config();
        run_pipeline(pc);
        return 0;
    }
    if (*eval) {
        const auto pred = read_geojson(e_pred);
        const auto truth = read_geojson(e_truth);
        const ProbMap map = load_raster(e_map);
        const std::string text = report_to_text(evaluate(pred.footprints, truth.footprints, map.extent()));
        if (e_out.empty()) {
            std::cout << text;
        } else {
            std::ofstream os(e_out, std::ios::binary);
            if (!os) throw IoError("cannot write " + e_out);
            os << text;
        }
        return 0;
    }
    if (*shapes) {
        AnnotationCollection coll;
        for (const ShapeSpec& s : build_catalog(s_res)) {
            Footprint f;
            f.id = "shape_" + std::to_string(s.id);
            f.polygon = s.polygon;
            coll.footprints.push_back(std::move(f));
            coll.extras[coll.footprints.back().id] = {{"base", to_string(s.base)},
                                                      {"scale", s.scale}};
        }
        if (s_out.empty())
            std::cout << geojson_to_string(coll);
        else
            write_geojson(coll, s_out);
        return 0;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InconsistentState& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
