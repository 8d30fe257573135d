#include "pqcdet/detector.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace pqcdet {

void DetectorParams::validate() const {
  if (!(spde >= 0.0 && spde <= 1.0))
    throw std::invalid_argument("spde must be in [0,1], got " + std::to_string(spde));
  if (!(dcr_hz >= 0.0))
    throw std::invalid_argument("dcr_hz must be >= 0, got " + std::to_string(dcr_hz));
  if (!(jitter_s >= 0.0))
    throw std::invalid_argument("jitter_s must be >= 0, got " + std::to_string(jitter_s));
  if (!(gate_s > 0.0))
    throw std::invalid_argument("gate_s must be > 0, got " + std::to_string(gate_s));
  if (gate_s < jitter_s)
    throw std::invalid_argument("gate_s must be >= jitter_s");
}

GateProbabilities gate_probabilities(const DetectorParams& params) {
  params.validate();
  return {-std::expm1(-params.dcr_hz * params.gate_s), params.spde};
}

DetectorParams gesi_300k() {
  return {0.95, 1.6e6, 0.0, 1e-9, "gesi-300k"};
}

DetectorParams snspd_4k() {
  return {0.91, 5886.0, 0.0, 1e-9, "snspd-4k"};
}

std::pair<DetectorParams, DetectorParams> canonical_detectors() {
  return {gesi_300k(), snspd_4k()};
}

std::string detector_to_json(const DetectorParams& params) {
  nlohmann::json j;
  j["spde"] = params.spde;
  j["dcr_hz"] = params.dcr_hz;
  j["jitter_s"] = params.jitter_s;
  j["gate_s"] = params.gate_s;
  j["label"] = params.label;
  return j.dump(2);
}

DetectorParams detector_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("detector JSON must be an object");
  static const std::set<std::string> known = {"spde", "dcr_hz", "jitter_s", "gate_s", "label"};
  std::string unknown;
  for (auto& [key, value] : j.items()) {
    (void)value;
    if (!known.count(key)) unknown += (unknown.empty() ? "" : ", ") + key;
  }
  if (!unknown.empty())
    throw std::invalid_argument("unknown detector JSON keys: " + unknown);
  DetectorParams p;
  p.spde = j.at("spde").get<double>();
  p.dcr_hz = j.at("dcr_hz").get<double>();
  p.jitter_s = j.value("jitter_s", 0.0);
  p.gate_s = j.at("gate_s").get<double>();
  p.label = j.value("label", std::string{});
  p.validate();
  return p;
}

}  // namespace pqcdet
