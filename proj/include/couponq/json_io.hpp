#pragma once

#include <string>

#include <json.hpp>

#include "couponq/simulator.hpp"

namespace couponq {

/// One JSON object per simulation run. Field order is fixed so that equal
/// results serialise to identical bytes.
inline nlohmann::ordered_json to_json(const SimulationResult& r, bool with_histogram = false) {
  nlohmann::ordered_json j;
  j["spec"] = {{"a", r.spec.a()}, {"q", r.spec.q()}};
  j["reps"] = r.reps;
  j["seed"] = r.seed;
  j["mean"] = r.mean;
  j["variance"] = r.variance;
  j["std_error_mean"] = r.std_error_mean;
  j["min"] = r.min;
  j["max"] = r.max;
  j["generator_id"] = r.generator_id;
  if (with_histogram) {
    nlohmann::ordered_json h = nlohmann::ordered_json::object();
    for (const auto& [value, count] : r.histogram) h[std::to_string(value)] = count;
    j["histogram"] = h;
  }
  return j;
}

inline std::string to_json_line(const SimulationResult& r, bool with_histogram = false) {
  return to_json(r, with_histogram).dump() + "\n";
}

}  // namespace couponq
