#include "osmfix/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "osmfix/errors.hpp"

namespace osmfix {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

Mask union_mask_of(const std::vector<Footprint>& footprints, const std::vector<int>& indices) {
    std::vector<Mask> masks;
    masks.reserve(indices.size());
    int x0 = std::numeric_limits<int>::max(), y0 = x0;
    int x1 = std::numeric_limits<int>::min(), y1 = x1;
    for (int i : indices) {
        masks.push_back(rasterize(footprints[i].polygon));
        const Mask& m = masks.back();
        x0 = std::min(x0, m.x0);
        y0 = std::min(y0, m.y0);
        x1 = std::max(x1, m.x0 + m.width);
        y1 = std::max(y1, m.y0 + m.height);
    }
    Mask out(x0, y0, x1 - x0, y1 - y0);
    for (const Mask& m : masks) {
        for (int ry = 0; ry < m.height; ++ry) {
            for (int rx = 0; rx < m.width; ++rx) {
                if (m.bits[static_cast<size_t>(ry) * m.width + rx])
                    out.set(m.x0 + rx, m.y0 + ry);
            }
        }
    }
    return out;
}

// Components -> BuildingGroups with canonical ordering: groups are sorted by
// the minimal member centroid under (y, x) lexicographic order; members are
// sorted the same way. Ties fall back to the member id string.
std::vector<BuildingGroup> finalize_groups(const std::vector<Footprint>& footprints,
                                           const std::vector<Point>& centroids,
                                           std::vector<std::vector<int>> components) {
    auto member_less = [&](int a, int b) {
        const Point& pa = centroids[a];
        const Point& pb = centroids[b];
        if (pa.y != pb.y) return pa.y < pb.y;
        if (pa.x != pb.x) return pa.x < pb.x;
        return footprints[a].id < footprints[b].id;
    };
    for (auto& comp : components) std::sort(comp.begin(), comp.end(), member_less);
    std::sort(components.begin(), components.end(),
              [&](const std::vector<int>& a, const std::vector<int>& b) {
                  return member_less(a.front(), b.front());
              });

    std::vector<BuildingGroup> groups;
    groups.reserve(components.size());
    for (size_t g = 0; g < components.size(); ++g) {
        BuildingGroup bg;
        bg.id = static_cast<int>(g);
        bg.member_indices = components[g];
        double cx = 0.0, cy = 0.0;
        for (int i : bg.member_indices) {
            bg.member_ids.push_back(footprints[i].id);
            cx += centroids[i].x;
            cy += centroids[i].y;
        }
        bg.centroid = {cx / bg.member_indices.size(), cy / bg.member_indices.size()};
        bg.union_mask = union_mask_of(footprints, bg.member_indices);
        groups.push_back(std::move(bg));
    }
    return groups;
}

} // namespace

std::vector<BuildingGroup> group_buildings(const std::vector<Footprint>& footprints,
                                           const ProbMap& map, double link_distance_m) {
    if (footprints.empty()) return {};
    if (!(map.resolution > 0.0f))
        throw InconsistentState("probability map resolution must be positive");
    const double link_px = link_distance_m / map.resolution;
    const double link_sq = link_px * link_px;

    const size_t n = footprints.size();
    std::vector<Point> centroids(n);
    for (size_t i = 0; i < n; ++i) centroids[i] = polygon_centroid(footprints[i].polygon);

    UnionFind uf(n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            const double dx = centroids[i].x - centroids[j].x;
            const double dy = centroids[i].y - centroids[j].y;
            if (dx * dx + dy * dy < link_sq) uf.unite(static_cast<int>(i), static_cast<int>(j));
        }
    }
    std::vector<std::vector<int>> by_root(n);
    for (size_t i = 0; i < n; ++i) by_root[uf.find(static_cast<int>(i))].push_back(static_cast<int>(i));
    std::vector<std::vector<int>> components;
    for (auto& c : by_root)
        if (!c.empty()) components.push_back(std::move(c));
    return finalize_groups(footprints, centroids, std::move(components));
}

std::vector<BuildingGroup> singleton_groups(const std::vector<Footprint>& footprints) {
    if (footprints.empty()) return {};
    const size_t n = footprints.size();
    std::vector<Point> centroids(n);
    std::vector<std::vector<int>> components(n);
    for (size_t i = 0; i < n; ++i) {
        centroids[i] = polygon_centroid(footprints[i].polygon);
        components[i] = {static_cast<int>(i)};
    }
    return finalize_groups(footprints, centroids, std::move(components));
}

GroupGraph build_graph(std::vector<BuildingGroup> groups, int k) {
    GroupGraph graph;
    graph.groups = std::move(groups);
    const size_t n = graph.groups.size();
    graph.knn.assign(n, {});
    graph.neighbors.assign(n, {});
    if (n <= 1) return graph;

    const int kk = std::min<int>(k, static_cast<int>(n) - 1);
    for (size_t i = 0; i < n; ++i) {
        std::vector<std::pair<double, int>> dist;
        dist.reserve(n - 1);
        for (size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double dx = graph.groups[i].centroid.x - graph.groups[j].centroid.x;
            const double dy = graph.groups[i].centroid.y - graph.groups[j].centroid.y;
            dist.emplace_back(dx * dx + dy * dy, static_cast<int>(j));
        }
        std::sort(dist.begin(), dist.end()); // ties resolved by lower group id
        for (int t = 0; t < kk; ++t) graph.knn[i].push_back(dist[t].second);
    }
    // symmetric closure
    std::vector<std::vector<uint8_t>> adj(n, std::vector<uint8_t>(n, 0));
    for (size_t i = 0; i < n; ++i) {
        for (int j : graph.knn[i]) {
            adj[i][j] = 1;
            adj[j][i] = 1;
        }
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (adj[i][j]) graph.neighbors[i].push_back(static_cast<int>(j));
    return graph;
}

} // namespace osmfix
