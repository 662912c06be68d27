#pragma once

#include <json.hpp>

#include "odx/approx.hpp"
#include "odx/factorial.hpp"
#include "odx/model.hpp"
#include "odx/search.hpp"

namespace odx {

// {"layout":[2,3],"slides":[{"red":[1,1],"green":[0,1]},...]}
nlohmann::json design_to_json(const Design& d);
Design design_from_json(const nlohmann::json& j);

// {"criterion":"p/q","design":{...},"optima_count":k} plus "optima" when the
// search collected them.
nlohmann::json search_result_to_json(const SearchResult& r);

// {"layout":[...],"mass":[{"red":[...],"green":[...],"pi":0.2071},...]};
// zero-mass slides are dropped on output.
nlohmann::json measure_to_json(const DesignMeasure& m);
DesignMeasure measure_from_json(const nlohmann::json& j);

// {"red":["label",...],"green":["label",...]}
nlohmann::json plan_to_json(const ReplicationPlan& p);
ReplicationPlan plan_from_json(const nlohmann::json& j);

}  // namespace odx
