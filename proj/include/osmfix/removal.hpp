#pragma once

#include <vector>

#include "osmfix/geometry.hpp"
#include "osmfix/prob_map.hpp"

namespace osmfix {

// Histogram of per-footprint mean probability values over [0, 1].
struct EvidenceHistogram {
    int bin_count = 64;
    std::vector<double> counts;

    EvidenceHistogram() = default;
    explicit EvidenceHistogram(int bins) : bin_count(bins), counts(bins, 0.0) {}
};

// mean_prob of each footprint's rasterized mask.
std::vector<double> score_footprints(const std::vector<Footprint>& footprints,
                                     const ProbMap& map);

EvidenceHistogram build_histogram(const std::vector<double>& scores, int bins = 64);

// One pass of the [1,1,1]/3 box filter with replicated edges.
EvidenceHistogram smooth_once(const EvidenceHistogram& hist);

// Left-edge indices of the strict local maxima; a plateau counts once.
std::vector<int> local_maxima(const std::vector<double>& counts);

// Minimum-threshold method: smooth until exactly two local maxima remain,
// then return the center value of the lowest bin strictly between them
// (leftmost on ties). Throws UnimodalHistogram when bimodality is never
// reached (capped at 10000 smoothing passes).
double minimum_threshold(const EvidenceHistogram& hist);

struct RemovalResult {
    std::vector<Footprint> kept;
    std::vector<Footprint> removed;
    std::vector<double> scores;  // parallel to the input footprints
    double threshold = 0.0;      // meaningful only when !unimodal
    bool unimodal = false;       // histogram never reached bimodality; nothing removed
};

// Score, build the histogram, threshold and partition; a score strictly below
// the threshold removes the footprint.
RemovalResult remove_footprints(const std::vector<Footprint>& footprints, const ProbMap& map,
                                int bins = 64);

} // namespace osmfix
