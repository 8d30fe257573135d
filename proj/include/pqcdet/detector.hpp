#pragma once

#include <string>
#include <utility>

namespace pqcdet {

// Physical parameters of one time-gated single-photon detector.
// All fields are SI: rates in Hz, times in seconds.
struct DetectorParams {
  double spde = 0.0;      // single-photon detection efficiency, in [0,1]
  double dcr_hz = 0.0;    // dark-count rate
  double jitter_s = 0.0;  // timing jitter; must not exceed the gate window
  double gate_s = 0.0;    // time-gating window, > 0
  std::string label;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// Per-gate dark-count and photo-count probabilities.
struct GateProbabilities {
  double p_dc = 0.0;
  double p_pc = 0.0;
};

// p_dc = 1 - exp(-dcr * gate), evaluated via expm1 so small rate-window
// products do not cancel; p_pc = spde. Pure and deterministic.
GateProbabilities gate_probabilities(const DetectorParams& params);

// The two benchmark detectors: GeSi SPAD at 300 K and SNSPD at 4 K.
DetectorParams gesi_300k();
DetectorParams snspd_4k();
std::pair<DetectorParams, DetectorParams> canonical_detectors();

// JSON object with exact keys {spde, dcr_hz, jitter_s, gate_s, label}.
// Unknown keys are rejected with an error listing them.
std::string detector_to_json(const DetectorParams& params);
DetectorParams detector_from_json(const std::string& text);

}  // namespace pqcdet
