#pragma once

#include <optional>
#include <string>
#include <vector>

#include "osmfix/geometry.hpp"
#include "osmfix/prob_map.hpp"

namespace osmfix {

struct Prf {
    double precision = 1.0;
    double recall = 1.0;
    double f1 = 1.0;
};

struct EvalReport {
    long pixel_tp = 0, pixel_fp = 0, pixel_fn = 0;
    Prf pixel;
    long object_matches = 0, object_pred = 0, object_truth = 0;
    Prf object;
    std::optional<double> mean_assd; // absent when no prediction overlaps the truth
    long assd_pairs = 0;
};

// Harmonic mean; 0 when both precision and recall are 0.
double f1_score(double precision, double recall);

// Rasterize both sets over the extent and count per-pixel TP/FP/FN.
// Empty-vs-empty scores (1,1,1).
Prf pixel_prf(const std::vector<Footprint>& pred, const std::vector<Footprint>& truth,
              const PixelRect& extent, long* tp = nullptr, long* fp = nullptr,
              long* fn = nullptr);

// Greedy one-to-one matching by descending pairwise IoU; a pair matches only
// when IoU is strictly above the threshold.
Prf object_prf(const std::vector<Footprint>& pred, const std::vector<Footprint>& truth,
               double iou_threshold = 0.5, long* matches = nullptr);

// Mean ASSD over predictions paired to their max-IoU truth polygon (only
// pairs with IoU > 0). Throws NoOverlap when no prediction overlaps.
double mean_assd(const std::vector<Footprint>& pred, const std::vector<Footprint>& truth,
                 long* pairs = nullptr);

EvalReport evaluate(const std::vector<Footprint>& pred, const std::vector<Footprint>& truth,
                    const PixelRect& extent);

// Flat key-value text document, one metric per line.
std::string report_to_text(const EvalReport& r);

} // namespace osmfix
