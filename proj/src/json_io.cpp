#include "odx/json_io.hpp"

#include <stdexcept>

namespace odx {

namespace {

nlohmann::json treatment_to_json(const Treatment& t) { return nlohmann::json(t); }

Treatment treatment_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("treatment must be an array of levels");
  return j.get<Treatment>();
}

FactorLayout layout_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("layout must list factor levels");
  return FactorLayout(j.get<std::vector<int>>());
}

}  // namespace

nlohmann::json design_to_json(const Design& d) {
  nlohmann::json slides = nlohmann::json::array();
  for (const Slide& s : d.slides)
    slides.push_back({{"red", treatment_to_json(s.red)}, {"green", treatment_to_json(s.green)}});
  return {{"layout", d.layout.levels()}, {"slides", slides}};
}

Design design_from_json(const nlohmann::json& j) {
  Design d{layout_from_json(j.at("layout")), {}};
  for (const nlohmann::json& s : j.at("slides"))
    d.slides.push_back({treatment_from_json(s.at("red")), treatment_from_json(s.at("green"))});
  validate_design(d);
  return d;
}

nlohmann::json search_result_to_json(const SearchResult& r) {
  nlohmann::json j = {{"criterion", r.criterion.str()},
                      {"design", design_to_json(r.design)},
                      {"optima_count", r.optima_count}};
  if (!r.optima.empty()) {
    nlohmann::json optima = nlohmann::json::array();
    for (const Design& d : r.optima) optima.push_back(design_to_json(d));
    j["optima"] = optima;
  }
  return j;
}

nlohmann::json measure_to_json(const DesignMeasure& m) {
  nlohmann::json mass = nlohmann::json::array();
  for (std::size_t i = 0; i < m.slides.size(); ++i) {
    if (m.mass[i] == 0.0) continue;
    mass.push_back({{"red", treatment_to_json(m.slides[i].red)},
                    {"green", treatment_to_json(m.slides[i].green)},
                    {"pi", m.mass[i]}});
  }
  return {{"layout", m.layout.levels()}, {"mass", mass}};
}

DesignMeasure measure_from_json(const nlohmann::json& j) {
  DesignMeasure m;
  m.layout = layout_from_json(j.at("layout"));
  for (const nlohmann::json& e : j.at("mass")) {
    m.slides.push_back({treatment_from_json(e.at("red")), treatment_from_json(e.at("green"))});
    m.mass.push_back(e.at("pi").get<double>());
  }
  validate_measure(m);
  return m;
}

nlohmann::json plan_to_json(const ReplicationPlan& p) {
  return {{"red", p.red}, {"green", p.green}};
}

ReplicationPlan plan_from_json(const nlohmann::json& j) {
  ReplicationPlan p;
  p.red = j.at("red").get<std::vector<std::string>>();
  p.green = j.at("green").get<std::vector<std::string>>();
  if (p.red.size() != p.green.size())
    throw std::invalid_argument("plan needs one red and one green label per slide");
  return p;
}

}  // namespace odx
