#include <doctest.h>

#include "helpers.hpp"
#include "osmfix/errors.hpp"
#include "osmfix/metrics.hpp"

using namespace osmfix;
using testutil::rect_poly;

TEST_SUITE_BEGIN("metrics");

namespace {

Footprint fp(const std::string& id, double x, double y, double w, double h) {
    return {id, rect_poly(x, y, w, h), Source::original};
}

const PixelRect kExtent{0, 0, 200, 200};

} // namespace

TEST_CASE("perfect prediction scores ones everywhere and ASSD zero") {
    const std::vector<Footprint> truth = {fp("a", 10, 10, 10, 10), fp("b", 50, 50, 12, 8)};
    const EvalReport r = evaluate(truth, truth, kExtent);
    CHECK(r.pixel.precision == doctest::Approx(1.0));
    CHECK(r.pixel.recall == doctest::Approx(1.0));
    CHECK(r.pixel.f1 == doctest::Approx(1.0));
    CHECK(r.object.precision == doctest::Approx(1.0));
    CHECK(r.object.recall == doctest::Approx(1.0));
    CHECK(r.object.f1 == doctest::Approx(1.0));
    REQUIRE(r.mean_assd.has_value());
    CHECK(*r.mean_assd == doctest::Approx(0.0));
}

TEST_CASE("pixel scores follow the count arithmetic") {
    // prediction covers the truth plus an equal-area disjoint region
    const std::vector<Footprint> truth = {fp("t", 10, 10, 10, 10)};
    const std::vector<Footprint> pred = {fp("p1", 10, 10, 10, 10), fp("p2", 100, 100, 10, 10)};
    long tp = 0, fpx = 0, fn = 0;
    const Prf p = pixel_prf(pred, truth, kExtent, &tp, &fpx, &fn);
    CHECK(tp == 100);
    CHECK(fpx == 100);
    CHECK(fn == 0);
    CHECK(p.precision == doctest::Approx(0.5));
    CHECK(p.recall == doctest::Approx(1.0));
    CHECK(p.f1 == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("pixel scores swap P and R when pred and truth swap") {
    const std::vector<Footprint> a = {fp("a", 10, 10, 10, 10)};
    const std::vector<Footprint> b = {fp("b", 14, 10, 10, 10)};
    const Prf ab = pixel_prf(a, b, kExtent);
    const Prf ba = pixel_prf(b, a, kExtent);
    CHECK(ab.precision == doctest::Approx(ba.recall));
    CHECK(ab.recall == doctest::Approx(ba.precision));
    CHECK(ab.f1 == doctest::Approx(ba.f1));
}

TEST_CASE("object matching: two of three truths found") {
    const std::vector<Footprint> truth = {fp("t1", 10, 10, 10, 10), fp("t2", 50, 50, 10, 10),
                                          fp("t3", 90, 90, 10, 10)};
    // each prediction overlaps its own truth at IoU 9*10/(11*10) ~ 0.82
    const std::vector<Footprint> pred = {fp("p1", 11, 10, 10, 10), fp("p2", 51, 50, 10, 10)};
    const Prf o = object_prf(pred, truth);
    CHECK(o.precision == doctest::Approx(1.0));
    CHECK(o.recall == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("IoU exactly 0.5 is not a detection") {
    // 3x10 rectangles offset by 1 px: intersection 20, union 40
    const std::vector<Footprint> truth = {fp("t", 10, 10, 3, 10)};
    const std::vector<Footprint> pred = {fp("p", 11, 10, 3, 10)};
    REQUIRE(iou(pred[0].polygon, truth[0].polygon) == doctest::Approx(0.5));
    long matches = -1;
    const Prf o = object_prf(pred, truth, 0.5, &matches);
    CHECK(matches == 0);
    CHECK(o.precision == doctest::Approx(0.0));
    CHECK(o.recall == doctest::Approx(0.0));
    CHECK(o.f1 == doctest::Approx(0.0));
}

TEST_CASE("matching is one-to-one under greedy descending IoU") {
    // two predictions over one truth: only the better one matches
    const std::vector<Footprint> truth = {fp("t", 10, 10, 10, 10)};
    const std::vector<Footprint> pred = {fp("p1", 11, 10, 10, 10), fp("p2", 12, 10, 10, 10)};
    long matches = 0;
    const Prf o = object_prf(pred, truth, 0.5, &matches);
    CHECK(matches == 1);
    CHECK(o.precision == doctest::Approx(0.5));
    CHECK(o.recall == doctest::Approx(1.0));
}

TEST_CASE("a disjoint false positive lowers precision and keeps recall") {
    const std::vector<Footprint> truth = {fp("t", 10, 10, 10, 10)};
    std::vector<Footprint> pred = {fp("p", 10, 10, 10, 10)};
    const Prf before = object_prf(pred, truth);
    pred.push_back(fp("junk", 150, 150, 10, 10));
    const Prf after = object_prf(pred, truth);
    CHECK(after.precision < before.precision);
    CHECK(after.recall == doctest::Approx(before.recall));
}

TEST_CASE("empty against empty is vacuously perfect") {
    const EvalReport r = evaluate({}, {}, kExtent);
    CHECK(r.pixel.precision == doctest::Approx(1.0));
    CHECK(r.pixel.recall == doctest::Approx(1.0));
    CHECK(r.object.f1 == doctest::Approx(1.0));
    CHECK_FALSE(r.mean_assd.has_value());
}

TEST_CASE("f1 is zero when precision and recall are zero") {
    CHECK(f1_score(0.0, 0.0) == 0.0);
}

TEST_CASE("mean ASSD pairs each overlapping prediction to its best truth") {
    const std::vector<Footprint> truth = {fp("t", 10, 10, 10, 10)};
    const std::vector<Footprint> pred = {fp("p", 13, 10, 10, 10)};
    long pairs = 0;
    const double v = mean_assd(pred, truth, &pairs);
    CHECK(pairs == 1);
    CHECK(v == doctest::Approx(assd(pred[0].polygon, truth[0].polygon)));

    const std::vector<Footprint> far = {fp("f", 100, 100, 10, 10)};
    CHECK_THROWS_AS(mean_assd(far, truth), NoOverlap);
}

TEST_CASE("report serialization is stable and complete") {
    const std::vector<Footprint> truth = {fp("t", 10, 10, 10, 10)};
    const EvalReport r = evaluate(truth, truth, kExtent);
    const std::string text = report_to_text(r);
    CHECK(text.find("pixel_precision 1.000000\n") != std::string::npos);
    CHECK(text.find("object_f1 1.000000\n") != std::string::npos);
    CHECK(text.find("mean_assd 0.000000\n") != std::string::npos);
    CHECK(text == report_to_text(r));

    const EvalReport r2 = evaluate({}, truth, kExtent);
    const std::string text2 = report_to_text(r2);
    CHECK(text2.find("assd_pairs 0\n") != std::string::npos);
    CHECK(text2.find("mean_assd ") == std::string::npos);
}

TEST_SUITE_END();
