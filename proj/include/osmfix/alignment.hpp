#pragma once

#include <vector>

#include "osmfix/grouping.hpp"
#include "osmfix/prob_map.hpp"

namespace osmfix {

// Finite label set searched by the aligner; always contains (0,0).
struct DisplacementDomain {
    int min_x = -30, max_x = 30;
    int min_y = -30, max_y = 30;

    static DisplacementDomain symmetric(int halfwidth) {
        return {-halfwidth, halfwidth, -halfwidth, halfwidth};
    }
    bool contains(const Displacement& d) const {
        return d.dx >= min_x && d.dx <= max_x && d.dy >= min_y && d.dy <= max_y;
    }
    int width() const { return max_x - min_x + 1; }
    int height() const { return max_y - min_y + 1; }
    size_t size() const { return static_cast<size_t>(width()) * height(); }
    // Maximum possible distance between two displacements: the domain diagonal.
    double normalizer() const;
    void validate() const; // nonempty and contains (0,0)
};

enum class UnaryMode { correlation, abs_difference, mutual_info };
enum class SiteMode { groups, buildings };

struct AlignConfig {
    double beta = 2.0;
    int max_iters = 10;
    DisplacementDomain domain;
    UnaryMode unary = UnaryMode::correlation;
    SiteMode site_mode = SiteMode::groups;
    double link_distance_m = 21.0;
    int knn = 5;
};

struct AlignmentResult {
    std::vector<Displacement> displacement; // per site
    std::vector<double> unary;              // unary value at the final displacement
    double total_energy = 0.0;              // per-site sum; each edge counted from both endpoints
    std::vector<double> energy_trace;       // [0] = after initialization, then one per sweep
    int iterations_run = 0;
    bool converged = false;
};

// Data cost of placing `site` at displacement d. correlation mode:
// -log(mean_prob) with mean clamped to >= 1e-6; abs_difference and
// mutual_info are evaluated over the site window (union-mask bounding box
// dilated by the maximum displacement), negated for MI so lower is better.
double unary_energy(const BuildingGroup& site, const Displacement& d, const ProbMap& map,
                    const AlignConfig& config);

// beta * ||d_i - d_j||_2 / Z
double pairwise_energy(const Displacement& di, const Displacement& dj, double beta, double Z);

// unary_energy(i, d) + sum over graph neighbors j of pairwise(d, current[j]).
double site_energy(int i, const Displacement& d, const std::vector<Displacement>& current,
                   const GroupGraph& graph, const ProbMap& map, const AlignConfig& config);

// Exhaustive per-site scan for the best unary value; ties prefer the smaller
// displacement norm, then lexicographic (dx, dy).
std::vector<Displacement> init_alignment(const GroupGraph& graph, const ProbMap& map,
                                         const AlignConfig& config);

// Iterated conditional modes over the group graph: sweeps sites in ascending
// id, each site adopting the domain displacement with strictly lower site
// energy. Stops on a zero-change sweep or after max_iters sweeps.
AlignmentResult icm_align(const GroupGraph& graph, const ProbMap& map,
                          const AlignConfig& config);

// Shift every footprint by its group's displacement; source becomes aligned.
std::vector<Footprint> apply_alignment(const std::vector<Footprint>& footprints,
                                       const GroupGraph& graph, const AlignmentResult& result);

struct AlignOutcome {
    GroupGraph graph;
    AlignmentResult result;
    std::vector<Footprint> aligned;
};

// Convenience driver: builds sites per config.site_mode, runs ICM and applies
// the displacements.
AlignOutcome align_footprints(const std::vector<Footprint>& footprints, const ProbMap& map,
                              const AlignConfig& config);

} // namespace osmfix
