#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gibbsbounds/geometry.hpp"
#include "gibbsbounds/interaction.hpp"
#include "gibbsbounds/interval.hpp"

namespace gibbsbounds {

// Model schema:
//   {"d": int, "beta": float,
//    "interaction": {"type": "strauss"|"hardcore"|"hard_annulus"|"step",
//                    "params": {...}}}
// with params {"gamma","r"} for strauss, {"r"} for hardcore, {"r","R"} for
// hard_annulus and {"breakpoints": [...], "values": [...]} for step.
inline PairwiseModel model_from_json(const nlohmann::json& j) {
  const int d = j.at("d").get<int>();
  const double beta = j.at("beta").get<double>();
  const auto& inter = j.at("interaction");
  const std::string type = inter.at("type").get<std::string>();
  const auto& params = inter.at("params");

  if (type == "strauss") {
    return PairwiseModel(d, beta,
                         RadialStepInteraction::strauss(params.at("gamma").get<double>(),
                                                        params.at("r").get<double>()));
  }
  if (type == "hardcore") {
    return PairwiseModel(d, beta, RadialStepInteraction::hard_core(params.at("r").get<double>()));
  }
  if (type == "hard_annulus") {
    return PairwiseModel(d, beta,
                         RadialStepInteraction::hard_annulus(params.at("r").get<double>(),
                                                             params.at("R").get<double>()));
  }
  if (type == "step") {
    return PairwiseModel(d, beta,
                         RadialStepInteraction(params.at("breakpoints").get<std::vector<double>>(),
                                               params.at("values").get<std::vector<double>>()));
  }
  throw std::invalid_argument("model_from_json: unknown interaction type '" + type + "'");
}

inline nlohmann::json model_to_json(const PairwiseModel& model) {
  return {{"d", model.dim()},
          {"beta", model.beta()},
          {"interaction",
           {{"type", "step"},
            {"params",
             {{"breakpoints", model.interaction().breakpoints()},
              {"values", model.interaction().values()}}}}}};
}

inline Window window_from_json(const nlohmann::json& j) {
  return Window(j.at("lower").get<std::vector<double>>(),
                j.at("upper").get<std::vector<double>>());
}

inline nlohmann::json window_to_json(const Window& w) {
  return {{"lower", w.lower()}, {"upper", w.upper()}};
}

struct TGridSpec {
  double min = 0.0;
  double max = 0.0;
  int count = 2;

  std::vector<double> make() const {
    if (count < 2) throw std::invalid_argument("t_grid: count must be >= 2");
    if (!(max > min) || min < 0.0)
      throw std::invalid_argument("t_grid: need 0 <= min < max");
    return linspace(min, max, count);
  }
};

inline TGridSpec t_grid_from_json(const nlohmann::json& j) {
  return {j.at("min").get<double>(), j.at("max").get<double>(), j.at("count").get<int>()};
}

}  // namespace gibbsbounds
