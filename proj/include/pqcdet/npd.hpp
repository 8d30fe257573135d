#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pqcdet/detector.hpp"

namespace pqcdet {

enum class CouplerKind { StarCoupler, CascadedEvanescent };

// Optional physical dimensions of the multiplexing coupler. Recorded for
// reporting only; the detection statistics do not depend on them.
struct CouplerMetadata {
  double length_m = 0.0;
  double width_m = 0.0;
  double gap_m = 0.0;
};

// A spatially-multiplexed array of m identical waveguide detectors acting as
// one photon-number-resolving detector.
struct NpdConfig {
  int m = 1;
  DetectorParams detector;
  CouplerKind coupler = CouplerKind::StarCoupler;
  std::optional<CouplerMetadata> geometry;

  void validate() const;
};

struct DetectionReport {
  double p_oo = 0.0;
  double p_click = 0.0;
  double p_success = 0.0;
  double fidelity_exact = 0.0;
  double fidelity_approx = 0.0;
};

// Probability that n photons land one-per-detector across m detectors,
// assuming occupancies uniform over the C(m+n-1,n) multisets.
// Returns 0 when n > m (pigeonhole).
double p_one_to_one(int m, int n);

// Closed-form click/success/fidelity for n photons into an m-fold array.
// Requires 1 <= n <= cfg.m.
DetectionReport photon_detection(const NpdConfig& cfg, int n);

// Dual-rail qubit detection: n qubits, one photon per rail pair, one
// detector per rail. p_oo is reported as 1 (not applicable).
DetectionReport qubit_detection(const DetectorParams& det, int n);

enum class Scheme { Photon, Qubit };

std::string scheme_name(Scheme s);

struct SweepRow {
  Scheme scheme;
  std::string detector;
  int m = 0;
  int n = 0;
  DetectionReport report;
};

// Differences between consecutive detector entries at the same (m, n).
struct DeltaRow {
  Scheme scheme;
  std::string detector_a;
  std::string detector_b;
  int m = 0;
  int n = 0;
  double p_success_delta = 0.0;
  double fidelity_exact_delta = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<DeltaRow> deltas;
};

// One row per (detector, m, n). For the photon scheme only pairs with
// n <= m are emitted; for the qubit scheme m is fixed at 1 (single-waveguide
// SPDs) and only the n range applies. Rows may be computed in parallel
// (jobs > 1); ordering and content are independent of the degree.
SweepResult sweep(Scheme scheme, std::pair<int, int> m_range, std::pair<int, int> n_range,
                  const std::vector<DetectorParams>& detectors, int jobs = 1);

// CSV serialization. Columns, exact order:
//   scheme,detector,M,N,p_oo,p_click,p_success,fidelity_exact,fidelity_approx
// Delta tables use the _delta column suffix.
std::string sweep_rows_csv(const std::vector<SweepRow>& rows);
std::string sweep_deltas_csv(const std::vector<DeltaRow>& deltas);

}  // namespace pqcdet
