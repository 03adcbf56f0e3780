#include "osmfix/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "osmfix/errors.hpp"
#include "osmfix/geojson.hpp"
#include "osmfix/rng.hpp"
#include "osmfix/shapes.hpp"

namespace osmfix {

namespace {

constexpr int kAnchorPitch = 210; // px between cluster anchors
constexpr int kMargin = 90;       // px border around the anchor grid
constexpr int kClusterRadius = 28; // building centers stay this close to the anchor
constexpr int kLattice = 4;        // building centers snap to this stride

struct Placement {
    int shape_id;
    int cx, cy;
    BoundingBox bbox;
};

bool bbox_clear(const BoundingBox& b, const std::vector<Placement>& placed, double margin) {
    for (const Placement& p : placed) {
        if (b.min_x - margin < p.bbox.max_x && p.bbox.min_x - margin < b.max_x &&
            b.min_y - margin < p.bbox.max_y && p.bbox.min_y - margin < b.max_y)
            return false;
    }
    return true;
}

void gaussian_blur(std::vector<float>& img, int w, int h, double sigma) {
    if (sigma <= 0.0) return;
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(2 * radius + 1);
    double ksum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
        ksum += kernel[i + radius];
    }
    for (double& k : kernel) k /= ksum;

    std::vector<float> tmp(img.size(), 0.0f);
    for (int y = 0; y < h; ++y) {
        const float* row = img.data() + static_cast<size_t>(y) * w;
        float* out = tmp.data() + static_cast<size_t>(y) * w;
        for (int x = 0; x < w; ++x) {
            double s = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                const int xx = x + i;
                if (xx >= 0 && xx < w) s += kernel[i + radius] * row[xx];
            }
            out[x] = static_cast<float>(s);
        }
    }
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) {
            double s = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                const int yy = y + i;
                if (yy >= 0 && yy < h) s += kernel[i + radius] * tmp[static_cast<size_t>(yy) * w + x];
            }
            img[static_cast<size_t>(y) * w + x] = static_cast<float>(s);
        }
    }
}

} // namespace

SyntheticScene generate(const SceneSpec& spec) {
    if (spec.group_count < 1) throw InconsistentState("scene needs at least one group");
    if (spec.min_buildings < 1 || spec.max_buildings < spec.min_buildings)
        throw InconsistentState("invalid buildings-per-group range");
    if (spec.drop_fraction < 0.0 || spec.drop_fraction >= 1.0 || spec.miss_fraction < 0.0 ||
        spec.miss_fraction >= 1.0)
        throw InconsistentState("fractions must lie in [0, 1)");
    if (spec.max_shift + spec.shift_jitter > spec.domain_halfwidth + spec.max_shift &&
        spec.max_shift > spec.domain_halfwidth)
        throw InconsistentState("max_shift exceeds the displacement domain");

    Rng rng(spec.seed);
    const auto catalog = build_catalog(spec.resolution);

    std::vector<double> weights = spec.shape_weights;
    if (weights.empty()) {
        weights.assign(catalog.size(), 0.0);
        for (size_t i = 0; i < catalog.size(); ++i)
            if (catalog[i].scale == 1.0) weights[i] = 1.0;
    }
    if (weights.size() != catalog.size())
        throw InconsistentState("shape_weights must have one entry per catalog shape");
    double wsum = 0.0;
    for (double w : weights) wsum += w;
    if (!(wsum > 0.0)) throw InconsistentState("shape_weights must have positive mass");
    auto pick_shape = [&]() {
        double u = rng.uniform() * wsum;
        for (size_t i = 0; i < weights.size(); ++i) {
            u -= weights[i];
            if (u < 0.0) return static_cast<int>(i);
        }
        return static_cast<int>(weights.size()) - 1;
    };

    const int gcols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(spec.group_count))));
    const int grows = (spec.group_count + gcols - 1) / gcols;

    SyntheticScene scene;
    scene.width = gcols * kAnchorPitch + 2 * kMargin;
    scene.height = grows * kAnchorPitch + 2 * kMargin;

    // shared base shift plus optional per-group jitter, clamped to the domain
    const int hw = spec.domain_halfwidth;
    const Displacement base{rng.uniform_int(-spec.max_shift, spec.max_shift),
                            rng.uniform_int(-spec.max_shift, spec.max_shift)};
    for (int g = 0; g < spec.group_count; ++g) {
        Displacement d = base;
        if (spec.shift_jitter > 0) {
            d.dx += rng.uniform_int(-spec.shift_jitter, spec.shift_jitter);
            d.dy += rng.uniform_int(-spec.shift_jitter, spec.shift_jitter);
        }
        d.dx = std::clamp(d.dx, -hw, hw);
        d.dy = std::clamp(d.dy, -hw, hw);
        scene.group_shift.push_back(d);
    }

    std::vector<Placement> placements;
    for (int g = 0; g < spec.group_count; ++g) {
        const int gr = g / gcols;
        const int gc = g % gcols;
        const int ax = kMargin + gc * kAnchorPitch + kAnchorPitch / 2 + rng.uniform_int(-15, 15);
        const int ay = kMargin + gr * kAnchorPitch + kAnchorPitch / 2 + rng.uniform_int(-15, 15);
        const int n = rng.uniform_int(spec.min_buildings, spec.max_buildings);
        std::vector<Placement> group_placed;
        bool group_ok = false;
        for (int retry = 0; retry < 30 && !group_ok; ++retry) {
            group_placed.clear();
            group_ok = true;
            for (int b = 0; b < n && group_ok; ++b) {
                bool placed = false;
                for (int attempt = 0; attempt < 60 && !placed; ++attempt) {
                    const int sid = pick_shape();
                    const double th = rng.uniform() * 6.28318530717958647692;
                    const double rr = kClusterRadius * std::sqrt(rng.uniform());
                    const int cx = kLattice * static_cast<int>(std::lround((ax + rr * std::cos(th)) / kLattice));
                    const int cy = kLattice * static_cast<int>(std::lround((ay + rr * std::sin(th)) / kLattice));
                    BoundingBox bb = polygon_bounds(catalog[sid].polygon);
                    bb.min_x += cx;
                    bb.max_x += cx;
                    bb.min_y += cy;
                    bb.max_y += cy;
                    if (!bbox_clear(bb, group_placed, 3.0)) continue;
                    group_placed.push_back({sid, cx, cy, bb});
                    placed = true;
                }
                if (!placed) group_ok = false;
            }
        }
        if (!group_ok)
            throw PackingError("could not place the buildings of group " + std::to_string(g));
        for (size_t b = 0; b < group_placed.size(); ++b) scene.group_of.push_back(g);
        placements.insert(placements.end(), group_placed.begin(), group_placed.end());
    }

    const size_t nb = placements.size();
    for (size_t i = 0; i < nb; ++i) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "b%04lu", static_cast<unsigned long>(i));
        scene.building_ids.emplace_back(buf);
    }

    // seeded shuffle, then the prefix drops and the next slice goes missing
    std::vector<size_t> order(nb);
    for (size_t i = 0; i < nb; ++i) order[i] = i;
    for (size_t i = nb; i > 1; --i) {
        const size_t j = static_cast<size_t>(rng.uniform_int(0, static_cast<int>(i) - 1));
        std::swap(order[i - 1], order[j]);
    }
    const size_t n_drop = static_cast<size_t>(std::lround(spec.drop_fraction * nb));
    const size_t n_miss = static_cast<size_t>(std::lround(spec.miss_fraction * nb));
    std::vector<uint8_t> dropped(nb, 0), missing(nb, 0);
    for (size_t i = 0; i < n_drop && i < nb; ++i) dropped[order[i]] = 1;
    for (size_t i = n_drop; i < n_drop + n_miss && i < nb; ++i) missing[order[i]] = 1;

    // truth raster: dropped buildings are erased before blurring
    scene.map = ProbMap(scene.width, scene.height, static_cast<float>(spec.resolution));
    std::vector<Mask> masks(nb);
    for (size_t i = 0; i < nb; ++i) {
        masks[i] = rasterize(shift(catalog[placements[i].shape_id].polygon,
                                   static_cast<double>(placements[i].cx),
                                   static_cast<double>(placements[i].cy)));
        if (dropped[i]) continue;
        for (const auto& [x, y] : masks[i].pixels())
            if (scene.map.in_bounds(x, y)) scene.map.set(x, y, 1.0f);
    }
    gaussian_blur(scene.map.values, scene.width, scene.height, spec.blur_sigma);
    if (spec.noise_sigma > 0.0) {
        for (float& v : scene.map.values)
            v = static_cast<float>(v + rng.normal(0.0, spec.noise_sigma));
    }
    for (float& v : scene.map.values) v = std::clamp(v, 0.0f, 1.0f);

    for (size_t i = 0; i < nb; ++i) {
        const Polygon poly = shift(catalog[placements[i].shape_id].polygon,
                                   static_cast<double>(placements[i].cx),
                                   static_cast<double>(placements[i].cy));
        if (!dropped[i])
            scene.truth.push_back({scene.building_ids[i], poly, Source::original});
        else
            scene.dropped_ids.push_back(scene.building_ids[i]);
        if (missing[i]) {
            scene.missing_ids.push_back(scene.building_ids[i]);
            continue;
        }
        const Displacement g = scene.group_shift[scene.group_of[i]];
        scene.annotations.push_back({scene.building_ids[i], shift(poly, g), Source::original});
    }
    return scene;
}

void write_scene(const SyntheticScene& scene, const std::string& dir) {
    std::filesystem::create_directories(dir);
    save_pmap(scene.map, dir + "/scene.pmap");
    write_geojson({scene.truth, {}}, dir + "/truth.geojson");
    write_geojson({scene.annotations, {}}, dir + "/annotations.geojson");
    std::ofstream os(dir + "/shifts.txt");
    if (!os) throw IoError("cannot write " + dir + "/shifts.txt");
    os << "# group dx dy\n";
    for (size_t g = 0; g < scene.group_shift.size(); ++g)
        os << g << ' ' << scene.group_shift[g].dx << ' ' << scene.group_shift[g].dy << '\n';
}

} // namespace osmfix
