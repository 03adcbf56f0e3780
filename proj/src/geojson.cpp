#include "osmfix/geojson.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "osmfix/errors.hpp"

namespace osmfix {

using nlohmann::json;

AnnotationCollection parse_geojson(const std::string& text, const std::string& context) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(context + ": " + e.what());
    }
    if (!doc.is_object() || doc.value("type", "") != "FeatureCollection")
        throw FormatError(context + ": expected a FeatureCollection");
    if (!doc.contains("features") || !doc["features"].is_array())
        throw FormatError(context + ": missing features array");

    AnnotationCollection coll;
    std::set<std::string> seen;
    for (const json& feat : doc["features"]) {
        if (!feat.is_object() || feat.value("type", "") != "Feature")
            throw FormatError(context + ": feature entries must have type Feature");
        const json& geom = feat.value("geometry", json());
        if (!geom.is_object() || geom.value("type", "") != "Polygon")
            throw FormatError(context + ": only Polygon geometry is supported");
        const json& coords = geom.value("coordinates", json());
        if (!coords.is_array() || coords.empty())
            throw FormatError(context + ": polygon has no rings");
        if (coords.size() > 1)
            throw FormatError(context + ": polygons with holes are not supported");

        Polygon poly;
        for (const json& pt : coords[0]) {
            if (!pt.is_array() || pt.size() < 2 || !pt[0].is_number() || !pt[1].is_number())
                throw FormatError(context + ": ring vertices must be [x, y] numbers");
            poly.exterior.push_back({pt[0].get<double>(), pt[1].get<double>()});
        }
        // GeoJSON rings repeat the first vertex; storage does not
        if (poly.exterior.size() >= 2) {
            const Point& a = poly.exterior.front();
            const Point& b = poly.exterior.back();
            if (a.x == b.x && a.y == b.y) poly.exterior.pop_back();
        }
        validate_polygon(poly);

        const json& props = feat.value("properties", json::object());
        if (!props.is_object() || !props.contains("id") || !props["id"].is_string())
            throw FormatError(context + ": every feature needs a string property 'id'");
        Footprint fp;
        fp.id = props["id"].get<std::string>();
        if (!seen.insert(fp.id).second)
            throw FormatError(context + ": duplicate footprint id '" + fp.id + "'");
        if (props.contains("source")) {
            if (!props["source"].is_string())
                throw FormatError(context + ": property 'source' must be a string");
            fp.source = source_from_string(props["source"].get<std::string>());
        }
        fp.polygon = std::move(poly);

        json extra = json::object();
        for (auto it = props.begin(); it != props.end(); ++it) {
            if (it.key() == "id" || it.key() == "source") continue;
            extra[it.key()] = it.value();
        }
        if (!extra.empty()) coll.extras[fp.id] = std::move(extra);
        coll.footprints.push_back(std::move(fp));
    }
    return coll;
}

AnnotationCollection read_geojson(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_geojson(buf.str(), path);
}

std::string geojson_to_string(const AnnotationCollection& coll) {
    json features = json::array();
    for (const Footprint& fp : coll.footprints) {
        json ring = json::array();
        for (const Point& p : fp.polygon.exterior) ring.push_back({p.x, p.y});
        ring.push_back({fp.polygon.exterior.front().x, fp.polygon.exterior.front().y});

        json props = json::object();
        const auto it = coll.extras.find(fp.id);
        if (it != coll.extras.end()) props = it->second;
        props["id"] = fp.id;
        props["source"] = to_string(fp.source);

        features.push_back({{"type", "Feature"},
                            {"properties", props},
                            {"geometry", {{"type", "Polygon"}, {"coordinates", {ring}}}}});
    }
    const json doc = {{"type", "FeatureCollection"}, {"features", features}};
    return doc.dump(2) + "\n";
}

void write_geojson(const AnnotationCollection& coll, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write " + path);
    os << geojson_to_string(coll);
    if (!os) throw IoError("failed writing " + path);
}

} // namespace osmfix
