#pragma once

#include <cstdint>
#include <string>

#include "pqcdet/npd.hpp"

namespace pqcdet {

// Exhaustive enumeration of the joint photon-placement / photo-detection /
// dark-count event space, independent of the closed forms it verifies.
struct PhotonEnumeration {
  double p_click = 0.0;
  double p_success = 0.0;
  double p_oo = 0.0;
  // Extension estimator: probability that exactly n detectors click, over
  // any occupancy. Reported separately; not the headline click event.
  double p_exactly_n_clicks = 0.0;
  double weight_sum = 0.0;  // must be 1 within 1e-12
};

// Enumerates all C(m+n-1,n) occupancy multisets x 2^n photo outcomes x
// 2^m dark outcomes. Bounded at m <= 8 (throws std::length_error above).
PhotonEnumeration enumerate_photon_events(const NpdConfig& cfg, int n);

struct QubitEnumeration {
  double p_click = 0.0;
  double p_success = 0.0;
  double weight_sum = 0.0;
};

// Enumerates the 8 joint outcomes per rail pair (photo on the occupied rail,
// dark on both rails) over all n qubits. Bounded at n <= 10.
QubitEnumeration enumerate_qubit_events(const DetectorParams& det, int n);

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

enum class OccupancySampler {
  StarsAndBars,      // uniform over the C(m+n-1,n) occupancy multisets
  IndependentModes,  // each photon picks a mode uniformly (sensitivity check)
};

struct McResult {
  McEstimate click;
  McEstimate success;
  std::string rng_name;
};

// Seeded Monte Carlo estimate of the click and success probabilities.
// Samples are drawn in fixed-size batches with per-batch derived substreams,
// so the result is bit-identical for a given (inputs, seed) regardless of
// how batches are scheduled.
McResult monte_carlo(const NpdConfig& cfg, int n, Scheme scheme, std::uint64_t samples,
                     std::uint64_t seed, OccupancySampler sampler = OccupancySampler::StarsAndBars);

// Exact binomial coefficient; throws std::overflow_error if it exceeds
// the 128-bit intermediate.
double binomial(int n, int k);

}  // namespace pqcdet
