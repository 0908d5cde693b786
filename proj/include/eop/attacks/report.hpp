#pragma once

#include <nlohmann/json.hpp>

#include "eop/attacks/matching.hpp"
#include "eop/attacks/passive.hpp"

namespace eop::attacks {

inline nlohmann::ordered_json attack_json(const AttackOutcome& o, const AttackConfig& cfg) {
  nlohmann::ordered_json j;
  j["strategy"] = to_string(o.strategy);
  j["budget"] = {{"max_guesses", cfg.max_guesses}, {"horizon", cfg.horizon}};
  j["outcome"] = to_string(o.result);
  j["violations"] = o.violations;
  j["guesses_used"] = o.guesses_used;
  if (o.mapping) {
    j["recovered_mapping"] = o.mapping->map;
  } else {
    j["recovered_mapping"] = nullptr;
  }
  if (auto a = o.prediction_accuracy()) {
    j["prediction_accuracy"] = *a;
  } else {
    j["prediction_accuracy"] = nullptr;
  }
  j["predicted_bits_correct"] = o.predicted_bits_correct;
  j["predicted_bits_total"] = o.predicted_bits_total;
  j["single_output_matches"] = o.single_output_matches;
  j["recovery_methods"] = o.recovery_methods;
  if (!o.reason.empty()) j["reason"] = o.reason;
  return j;
}

inline nlohmann::ordered_json passive_json(const PassiveStats& s) {
  return {{"pulses", s.pulses},
          {"ones_fraction", s.ones_fraction},
          {"max_bias", s.max_bias},
          {"max_lane_correlation", s.max_lane_correlation},
          {"tolerance", s.tolerance},
          {"indistinguishable", s.indistinguishable}};
}

}  // namespace eop::attacks
