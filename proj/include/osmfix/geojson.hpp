#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "osmfix/geometry.hpp"

namespace osmfix {

// Footprints plus any unrecognized feature properties, keyed by footprint id,
// so round-trips preserve them.
struct AnnotationCollection {
    std::vector<Footprint> footprints;
    std::map<std::string, nlohmann::json> extras;
};

// FeatureCollection of Polygon features in pixel coordinates. Every feature
// needs a unique string property "id"; "source" is optional. Non-polygon
// geometries, holes and duplicate ids raise FormatError.
AnnotationCollection read_geojson(const std::string& path);
AnnotationCollection parse_geojson(const std::string& text, const std::string& context);

void write_geojson(const AnnotationCollection& coll, const std::string& path);
std::string geojson_to_string(const AnnotationCollection& coll);

} // namespace osmfix
