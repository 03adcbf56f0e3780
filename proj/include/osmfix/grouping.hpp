#pragma once

#include <vector>

#include "osmfix/geometry.hpp"
#include "osmfix/prob_map.hpp"

namespace osmfix {

// One MRF site: a cluster of footprints.
struct BuildingGroup {
    int id = 0;
    std::vector<std::string> member_ids;
    std::vector<int> member_indices; // into the footprint list the group was built from
    Point centroid;                  // mean of member polygon centroids
    Mask union_mask;                 // all members rasterized into one window
};

struct GroupGraph {
    std::vector<BuildingGroup> groups;
    std::vector<std::vector<int>> knn;       // k nearest groups, pre-symmetrization
    std::vector<std::vector<int>> neighbors; // symmetric closure of knn
};

// Single-linkage clustering on polygon centroids: two footprints connect when
// their centroid distance is below link_distance (meters, converted at the
// map resolution). Group ids are canonical: ascending min member centroid
// (y, then x).
std::vector<BuildingGroup> group_buildings(const std::vector<Footprint>& footprints,
                                           const ProbMap& map,
                                           double link_distance_m = 21.0);

// One group per footprint, same canonical ordering. Used for the
// buildings-as-sites aligner mode.
std::vector<BuildingGroup> singleton_groups(const std::vector<Footprint>& footprints);

// Connect each group to its k nearest groups by centroid distance (ties by
// lower group id), then apply the symmetric closure.
GroupGraph build_graph(std::vector<BuildingGroup> groups, int k = 5);

} // namespace osmfix
