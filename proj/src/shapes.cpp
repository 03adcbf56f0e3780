#include "osmfix/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>

#include "osmfix/errors.hpp"

namespace osmfix {

const char* to_string(ShapeBase b) {
    switch (b) {
        case ShapeBase::circle: return "circle";
        case ShapeBase::square: return "square";
        case ShapeBase::rect0: return "rect0";
        case ShapeBase::rect45: return "rect45";
        case ShapeBase::rect90: return "rect90";
        case ShapeBase::rect135: return "rect135";
    }
    return "circle";
}

namespace {

Polygon regular_polygon(double radius, int sides) {
    Polygon p;
    p.exterior.reserve(sides);
    for (int k = 0; k < sides; ++k) {
        const double a = 2.0 * 3.14159265358979323846 * k / sides;
        p.exterior.push_back({radius * std::cos(a), radius * std::sin(a)});
    }
    return p;
}

Polygon rectangle(double half_w, double half_h, double angle_deg) {
    const double t = angle_deg * 3.14159265358979323846 / 180.0;
    const double c = std::cos(t);
    const double s = std::sin(t);
    Polygon p;
    for (const auto& [x, y] : {std::pair{-half_w, -half_h}, {half_w, -half_h},
                               {half_w, half_h}, {-half_w, half_h}}) {
        p.exterior.push_back({x * c - y * s, x * s + y * c});
    }
    return p;
}

Polygon scaled(const Polygon& p, double factor) {
    Polygon out = p;
    for (Point& q : out.exterior) {
        q.x *= factor;
        q.y *= factor;
    }
    return out;
}

} // namespace

std::vector<ShapeSpec> build_catalog(double resolution) {
    if (!(resolution > 0.0)) throw InconsistentState("resolution must be positive");
    const double px = 1.0 / resolution; // pixels per meter
    const std::vector<std::pair<ShapeBase, Polygon>> bases = {
        {ShapeBase::circle, regular_polygon(3.3 * px, 32)},
        {ShapeBase::square, rectangle(2.4 * px, 2.4 * px, 0.0)},
        {ShapeBase::rect0, rectangle(1.8 * px, 3.0 * px, 0.0)},
        {ShapeBase::rect45, rectangle(1.8 * px, 3.0 * px, 45.0)},
        {ShapeBase::rect90, rectangle(1.8 * px, 3.0 * px, 90.0)},
        {ShapeBase::rect135, rectangle(1.8 * px, 3.0 * px, 135.0)},
    };
    const double scales[3] = {1.0, std::sqrt(2.0), 2.0};
    std::vector<ShapeSpec> catalog;
    catalog.reserve(18);
    for (size_t b = 0; b < bases.size(); ++b) {
        for (int s = 0; s < 3; ++s) {
            ShapeSpec spec;
            spec.id = static_cast<int>(b) * 3 + s;
            spec.base = bases[b].first;
            spec.scale = scales[s];
            spec.polygon = scaled(bases[b].second, scales[s]);
            catalog.push_back(std::move(spec));
        }
    }
    return catalog;
}

namespace {

std::vector<std::pair<int, int>> dilation_ring(const Mask& mask, int radius) {
    std::set<std::pair<int, int>> ring;
    for (const auto& [x, y] : mask.pixels()) {
        for (int dy = -radius; dy <= radius; ++dy)
            for (int dx = -radius; dx <= radius; ++dx) ring.insert({x + dx, y + dy});
    }
    std::vector<std::pair<int, int>> out;
    for (const auto& p : ring)
        if (!mask.test(p.first, p.second)) out.push_back(p);
    return out;
}

double mean_at_offsets(const ProbMap& map, const std::vector<std::pair<int, int>>& offsets,
                       int cx, int cy) {
    double sum = 0.0;
    for (const auto& [ox, oy] : offsets) sum += map.at_or_zero(cx + ox, cy + oy);
    return sum / static_cast<double>(offsets.size());
}

} // namespace

DetectionGrid builtin_score(const ProbMap& map, const std::vector<ShapeSpec>& catalog,
                            int stride) {
    if (stride < 1) throw InconsistentState("stride must be positive");
    DetectionGrid grid;
    grid.shape_count = static_cast<int>(catalog.size());
    grid.stride = stride;
    grid.grid_w = (map.width + stride - 1) / stride;
    grid.grid_h = (map.height + stride - 1) / stride;
    grid.planes.assign(static_cast<size_t>(grid.shape_count) * grid.grid_w * grid.grid_h, 0.0f);

    for (const ShapeSpec& spec : catalog) {
        const Mask mask = rasterize(spec.polygon);
        const auto inside = mask.pixels();
        const auto ring = dilation_ring(mask, 2);
        for (int cy = 0; cy < grid.grid_h; ++cy) {
            for (int cx = 0; cx < grid.grid_w; ++cx) {
                const int px = cx * stride;
                const int py = cy * stride;
                const double mu_in = mean_at_offsets(map, inside, px, py);
                const double mu_ring = mean_at_offsets(map, ring, px, py);
                const double s = std::clamp(0.5 * (mu_in + 1.0 - mu_ring), 0.0, 1.0);
                grid.set(spec.id, cx, cy, static_cast<float>(s));
            }
        }
    }
    return grid;
}

namespace {

void write_u32le(std::ostream& os, uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t read_u32le(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

} // namespace

DetectionGrid load_detection_grid(const std::string& path, int expected_shapes) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open detection grid " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "DGRD", 4) != 0)
        throw FormatError(path + ": bad magic, expected DGRD");
    DetectionGrid grid;
    grid.shape_count = static_cast<int>(read_u32le(is));
    grid.grid_w = static_cast<int>(read_u32le(is));
    grid.grid_h = static_cast<int>(read_u32le(is));
    grid.stride = static_cast<int>(read_u32le(is));
    if (!is || grid.shape_count <= 0 || grid.grid_w <= 0 || grid.grid_h <= 0 || grid.stride <= 0)
        throw FormatError(path + ": invalid detection grid header");
    if (expected_shapes >= 0 && grid.shape_count != expected_shapes)
        throw FormatError(path + ": grid has " + std::to_string(grid.shape_count) +
                          " shape planes, expected " + std::to_string(expected_shapes));
    grid.planes.resize(static_cast<size_t>(grid.shape_count) * grid.grid_w * grid.grid_h);
    for (float& v : grid.planes) {
        uint32_t u = read_u32le(is);
        if (!is) throw FormatError(path + ": truncated detection grid payload");
        std::memcpy(&v, &u, 4);
        if (!(v >= -1e-6f && v <= 1.0f + 1e-6f))
            throw FormatError(path + ": detection score outside [0,1]");
        v = std::clamp(v, 0.0f, 1.0f);
    }
    return grid;
}

void save_detection_grid(const DetectionGrid& grid, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write detection grid " + path);
    os.write("DGRD", 4);
    write_u32le(os, static_cast<uint32_t>(grid.shape_count));
    write_u32le(os, static_cast<uint32_t>(grid.grid_w));
    write_u32le(os, static_cast<uint32_t>(grid.grid_h));
    write_u32le(os, static_cast<uint32_t>(grid.stride));
    for (float v : grid.planes) {
        uint32_t u;
        std::memcpy(&u, &v, 4);
        write_u32le(os, u);
    }
    if (!os) throw IoError("failed writing detection grid " + path);
}

std::vector<Footprint> select_candidates(const DetectionGrid& grid, const ProbMap& map,
                                         const std::vector<Footprint>& existing,
                                         const std::vector<ShapeSpec>& catalog, double t) {
    if (grid.shape_count != static_cast<int>(catalog.size()))
        throw FormatError("detection grid shape count does not match the catalog");

    std::vector<Mask> shape_masks;
    shape_masks.reserve(catalog.size());
    for (const ShapeSpec& s : catalog) shape_masks.push_back(rasterize(s.polygon));

    std::vector<Mask> existing_masks;
    existing_masks.reserve(existing.size());
    for (const Footprint& f : existing) existing_masks.push_back(rasterize(f.polygon));

    struct Scored {
        Candidate c;
        Mask mask;
    };
    std::vector<Scored> pool;
    for (int sid = 0; sid < grid.shape_count; ++sid) {
        for (int cy = 0; cy < grid.grid_h; ++cy) {
            for (int cx = 0; cx < grid.grid_w; ++cx) {
                const double det = grid.at(sid, cx, cy);
                if (det < t) continue;
                const Displacement center{cx * grid.stride, cy * grid.stride};
                Mask m = shift(shape_masks[sid], center);
                const double avg = mean_prob(m, map);
                if (avg < t) continue;
                bool overlaps_existing = false;
                for (const Mask& em : existing_masks) {
                    if (masks_intersect(m, em)) {
                        overlaps_existing = true;
                        break;
                    }
                }
                if (overlaps_existing) continue;
                pool.push_back({{sid,
                                 {static_cast<double>(center.dx), static_cast<double>(center.dy)},
                                 det, avg},
                                std::move(m)});
            }
        }
    }

    std::sort(pool.begin(), pool.end(), [](const Scored& a, const Scored& b) {
        const double sa = a.c.avg_prob + a.c.detection_score;
        const double sb = b.c.avg_prob + b.c.detection_score;
        if (sa != sb) return sa > sb;
        if (a.c.shape_id != b.c.shape_id) return a.c.shape_id < b.c.shape_id;
        if (a.c.center.x != b.c.center.x) return a.c.center.x < b.c.center.x;
        return a.c.center.y < b.c.center.y;
    });

    std::set<std::string> used_ids;
    for (const Footprint& f : existing) used_ids.insert(f.id);

    std::vector<Footprint> out;
    std::vector<const Mask*> accepted;
    size_t serial = 0;
    for (const Scored& s : pool) {
        bool overlaps = false;
        for (const Mask* am : accepted) {
            if (masks_intersect(s.mask, *am)) {
                overlaps = true;
                break;
            }
        }
        if (overlaps) continue;
        std::string id = "added_" + std::to_string(serial++);
        while (used_ids.count(id)) id = "added_" + std::to_string(serial++);
        used_ids.insert(id);
        Footprint f;
        f.id = id;
        f.polygon = shift(catalog[s.c.shape_id].polygon, s.c.center.x, s.c.center.y);
        f.source = Source::added;
        out.push_back(std::move(f));
        accepted.push_back(&s.mask);
    }
    return out;
}

std::vector<std::vector<SampleLabel>> label_shape_samples(
    const std::vector<Footprint>& truth, const std::vector<ShapeSpec>& catalog, int grid_w,
    int grid_h, int stride) {
    std::vector<Mask> truth_masks;
    truth_masks.reserve(truth.size());
    for (const Footprint& f : truth) truth_masks.push_back(rasterize(f.polygon));

    std::vector<std::vector<SampleLabel>> labels(
        catalog.size(), std::vector<SampleLabel>(static_cast<size_t>(grid_w) * grid_h,
                                                 SampleLabel::negative));
    for (size_t sid = 0; sid < catalog.size(); ++sid) {
        const Mask base = rasterize(catalog[sid].polygon);
        for (int cy = 0; cy < grid_h; ++cy) {
            for (int cx = 0; cx < grid_w; ++cx) {
                const Mask m = shift(base, {cx * stride, cy * stride});
                double best = 0.0;
                for (const Mask& tm : truth_masks) {
                    if (!masks_intersect(m, tm)) continue;
                    best = std::max(best, mask_iou(m, tm));
                }
                SampleLabel label = SampleLabel::ignore;
                if (best > 0.75)
                    label = SampleLabel::positive;
                else if (best < 0.30)
                    label = SampleLabel::negative;
                labels[sid][static_cast<size_t>(cy) * grid_w + cx] = label;
            }
        }
    }
    return labels;
}

} // namespace osmfix
