#pragma once

// JSON schemas for the exchange types. All parsers throw input_error on
// malformed documents; emitters produce deterministic field order.
//
//   space    {"kind": "ray"}
//            {"kind": "interval", "a": .., "b": ..}
//            {"kind": "euclidean", "dim": n}
//            {"kind": "finite", "dist": [[..], ..]}        (row-major)
//            {"kind": "qproduct", "q": .., "left": {..}, "right": {..}}
//            {"kind": "suspension", "base": {..}, "strict": bool}
//   point    {"kind": "scalar", "value": ..}
//            {"kind": "vector", "coords": [..]}
//            {"kind": "index", "i": n}
//            {"kind": "pair", "left": {..}, "right": {..}}
//            {"kind": "suspension", "angle": .., "base": {..}}
//            {"kind": "suspension", "pole": "zero" | "pi"}
//   measure  {"space": {..}, "atoms": [{"point": {..}, "weight": ..}, ..]}
//            (weights must sum to 1 within 1e-9)
//   plan     {"p": .., "cost": .., "wp": .., "mu": {..}, "nu": {..},
//             "entries": [{"i": .., "j": .., "mass": ..}, ..]}

#include <json.hpp>

#include "otlab/report.hpp"
#include "otlab/transport.hpp"

namespace otlab {

using json = nlohmann::ordered_json;

json space_to_json(const SpaceDescriptor& space);
SpacePtr space_from_json(const json& j);

json point_to_json(const Point& p);
Point point_from_json(const json& j);

json measure_to_json(const AtomicMeasure& mu);
// fallback_space supplies the space when the document omits it.
AtomicMeasure measure_from_json(const json& j,
                                SpacePtr fallback_space = nullptr);

json plan_to_json(const TransportPlan& plan);
TransportPlan plan_from_json(const json& j);

json report_to_json_value(const RunReport& report);
RunReport report_from_json_value(const json& j);

json parse_json_text(const std::string& text);
json load_json_file(const std::string& path);

}  // namespace otlab
