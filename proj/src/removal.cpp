#include "osmfix/removal.hpp"

#include <algorithm>
#include <cmath>

#include "osmfix/errors.hpp"

namespace osmfix {

std::vector<double> score_footprints(const std::vector<Footprint>& footprints,
                                     const ProbMap& map) {
    std::vector<double> out;
    out.reserve(footprints.size());
    for (const Footprint& f : footprints) out.push_back(mean_prob(rasterize(f.polygon), map));
    return out;
}

EvidenceHistogram build_histogram(const std::vector<double>& scores, int bins) {
    EvidenceHistogram h(bins);
    for (double s : scores) {
        const int b = std::clamp(static_cast<int>(s * bins), 0, bins - 1);
        h.counts[b] += 1.0;
    }
    return h;
}

EvidenceHistogram smooth_once(const EvidenceHistogram& hist) {
    const int n = hist.bin_count;
    EvidenceHistogram out(n);
    for (int i = 0; i < n; ++i) {
        const double a = hist.counts[std::max(i - 1, 0)];
        const double b = hist.counts[i];
        const double c = hist.counts[std::min(i + 1, n - 1)];
        out.counts[i] = (a + b + c) / 3.0;
    }
    return out;
}

std::vector<int> local_maxima(const std::vector<double>& counts) {
    const int n = static_cast<int>(counts.size());
    std::vector<int> out;
    int i = 0;
    while (i < n) {
        int j = i;
        while (j + 1 < n && counts[j + 1] == counts[i]) ++j;
        const bool left_lower = i == 0 || counts[i - 1] < counts[i];
        const bool right_lower = j == n - 1 || counts[j + 1] < counts[i];
        if (left_lower && right_lower) out.push_back(i); // plateau counted at its left edge
        i = j + 1;
    }
    return out;
}

double minimum_threshold(const EvidenceHistogram& hist) {
    constexpr int kMaxPasses = 10000;
    EvidenceHistogram h = hist;
    for (int pass = 0; pass <= kMaxPasses; ++pass) {
        const std::vector<int> maxima = local_maxima(h.counts);
        if (maxima.size() == 2) {
            const int p1 = maxima[0];
            const int p2 = maxima[1];
            int best = -1;
            for (int b = p1 + 1; b < p2; ++b) {
                if (best < 0 || h.counts[b] < h.counts[best]) best = b; // leftmost on ties
            }
            if (best < 0) throw UnimodalHistogram("no bin between the two maxima");
            return (best + 0.5) / h.bin_count;
        }
        if (maxima.size() < 2)
            throw UnimodalHistogram("histogram never reaches bimodality");
        if (pass == kMaxPasses)
            throw UnimodalHistogram("histogram did not smooth into a bimodal shape");
        h = smooth_once(h);
    }
    throw UnimodalHistogram("unreachable");
}

RemovalResult remove_footprints(const std::vector<Footprint>& footprints, const ProbMap& map,
                                int bins) {
    RemovalResult res;
    if (footprints.empty()) return res;
    res.scores = score_footprints(footprints, map);
    const EvidenceHistogram hist = build_histogram(res.scores, bins);
    try {
        res.threshold = minimum_threshold(hist);
    } catch (const UnimodalHistogram&) {
        res.unimodal = true;
        res.kept = footprints;
        return res;
    }
    for (size_t i = 0; i < footprints.size(); ++i) {
        if (res.scores[i] < res.threshold)
            res.removed.push_back(footprints[i]);
        else
            res.kept.push_back(footprints[i]);
    }
    return res;
}

} // namespace osmfix
