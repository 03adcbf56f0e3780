#include "osmfix/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "osmfix/errors.hpp"

namespace osmfix {

double f1_score(double precision, double recall) {
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

namespace {

std::vector<uint8_t> paint(const std::vector<Footprint>& fps, const PixelRect& extent) {
    std::vector<uint8_t> buf(static_cast<size_t>(extent.w) * extent.h, 0);
    for (const Footprint& f : fps) {
        const Mask m = rasterize(f.polygon);
        for (int ry = 0; ry < m.height; ++ry) {
            const int y = m.y0 + ry;
            if (y < extent.y || y >= extent.y + extent.h) continue;
            for (int rx = 0; rx < m.width; ++rx) {
                if (!m.bits[static_cast<size_t>(ry) * m.width + rx]) continue;
                const int x = m.x0 + rx;
                if (x < extent.x || x >= extent.x + extent.w) continue;
                buf[static_cast<size_t>(y - extent.y) * extent.w + (x - extent.x)] = 1;
            }
        }
    }
    return buf;
}

} // namespace

Prf pixel_prf(const std::vector<Footprint>& pred, const std::vector<Footprint>& truth,
              const PixelRect& extent, long* tp_out, long* fp_out, long* fn_out) {
    const auto pb = paint(pred, extent);
    const auto tb = paint(truth, extent);
    long tp = 0, fp = 0, fn = 0;
    for (size_t i = 0; i < pb.size(); ++i) {
        tp += pb[i] && tb[i];
        fp += pb[i] && !tb[i];
        fn += !pb[i] && tb[i];
    }
    if (tp_out) *tp_out = tp;
    if (fp_out) *fp_out = fp;
    if (fn_out) *fn_out = fn;
    Prf out;
    out.precision = (tp + fp) == 0 ? 1.0 : static_cast<double>(tp) / (tp + fp);
    out.recall = (tp + fn) == 0 ? 1.0 : static_cast<double>(tp) / (tp + fn);
    out.f1 = f1_score(out.precision, out.recall);
    return out;
}

Prf object_prf(const std::vector<Footprint>& pred, const std::vector<Footprint>& truth,
               double iou_threshold, long* matches_out) {
    struct Pair {
        double iou;
        int p, t;
    };
    std::vector<Mask> pm, tm;
    pm.reserve(pred.size());
    tm.reserve(truth.size());
    for (const Footprint& f : pred) pm.push_back(rasterize(f.polygon));
    for (const Footprint& f : truth) tm.push_back(rasterize(f.polygon));

    std::vector<Pair> pairs;
    for (size_t p = 0; p < pm.size(); ++p) {
        for (size_t t = 0; t < tm.size(); ++t) {
            if (!masks_intersect(pm[p], tm[t])) continue;
            const double v = mask_iou(pm[p], tm[t]);
            if (v > iou_threshold)
                pairs.push_back({v, static_cast<int>(p), static_cast<int>(t)});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.iou != b.iou) return a.iou > b.iou;
        if (a.p != b.p) return a.p < b.p;
        return a.t < b.t;
    });
    std::vector<uint8_t> pused(pred.size(), 0), tused(truth.size(), 0);
    long matches = 0;
    for (const Pair& pr : pairs) {
        if (pused[pr.p] || tused[pr.t]) continue;
        pused[pr.p] = tused[pr.t] = 1;
        ++matches;
    }
    if (matches_out) *matches_out = matches;
    Prf out;
    out.precision = pred.empty() ? 1.0 : static_cast<double>(matches) / pred.size();
    out.recall = truth.empty() ? 1.0 : static_cast<double>(matches) / truth.size();
    out.f1 = f1_score(out.precision, out.recall);
    return out;
}

double mean_assd(const std::vector<Footprint>& pred, const std::vector<Footprint>& truth,
                 long* pairs_out) {
    std::vector<Mask> tm;
    tm.reserve(truth.size());
    for (const Footprint& f : truth) tm.push_back(rasterize(f.polygon));

    double sum = 0.0;
    long pairs = 0;
    for (const Footprint& p : pred) {
        const Mask pmask = rasterize(p.polygon);
        double best_iou = 0.0;
        int best_t = -1;
        for (size_t t = 0; t < tm.size(); ++t) {
            if (!masks_intersect(pmask, tm[t])) continue;
            const double v = mask_iou(pmask, tm[t]);
            if (v > best_iou) {
                best_iou = v;
                best_t = static_cast<int>(t);
            }
        }
        if (best_t < 0) continue;
        sum += assd(p.polygon, truth[best_t].polygon);
        ++pairs;
    }
    if (pairs_out) *pairs_out = pairs;
    if (pairs == 0) throw NoOverlap("no prediction overlaps any truth polygon");
    return sum / static_cast<double>(pairs);
}

EvalReport evaluate(const std::vector<Footprint>& pred, const std::vector<Footprint>& truth,
                    const PixelRect& extent) {
    EvalReport r;
    r.pixel = pixel_prf(pred, truth, extent, &r.pixel_tp, &r.pixel_fp, &r.pixel_fn);
    r.object = object_prf(pred, truth, 0.5, &r.object_matches);
    r.object_pred = static_cast<long>(pred.size());
    r.object_truth = static_cast<long>(truth.size());
    try {
        r.mean_assd = mean_assd(pred, truth, &r.assd_pairs);
    } catch (const NoOverlap&) {
        r.mean_assd.reset();
        r.assd_pairs = 0;
    }
    return r;
}

std::string report_to_text(const EvalReport& r) {
    std::ostringstream os;
    char buf[64];
    auto line = [&](const char* key, double v) {
        std::snprintf(buf, sizeof(buf), "%.6f", v);
        os << key << ' ' << buf << '\n';
    };
    os << "pixel_tp " << r.pixel_tp << '\n';
    os << "pixel_fp " << r.pixel_fp << '\n';
    os << "pixel_fn " << r.pixel_fn << '\n';
    line("pixel_precision", r.pixel.precision);
    line("pixel_recall", r.pixel.recall);
    line("pixel_f1", r.pixel.f1);
    os << "object_matches " << r.object_matches << '\n';
    os << "object_pred " << r.object_pred << '\n';
    os << "object_truth " << r.object_truth << '\n';
    line("object_precision", r.object.precision);
    line("object_recall", r.object.recall);
    line("object_f1", r.object.f1);
    os << "assd_pairs " << r.assd_pairs << '\n';
    if (r.mean_assd) line("mean_assd", *r.mean_assd);
    return os.str();
}

} // namespace osmfix
