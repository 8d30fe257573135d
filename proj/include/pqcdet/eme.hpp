#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pqcdet/slab.hpp"

namespace pqcdet {

// Longitudinal geometry of the detector: step coupler section, absorber
// section, back gap, optional back-mirror amplitude reflectivity.
struct CouplerGeometry {
  double coupler_m = 0.0;
  double gap_m = 0.0;
  double ge_m = 0.0;
  std::optional<double> mirror_r;  // amplitude reflection, |r| <= 1

  void validate() const;
};

struct QeBreakdown {
  double absorbed = 0.0;     // all absorbing layers, both passes
  double transmitted = 0.0;  // power past the mirror plane
  double reflected = 0.0;    // power returned into the input waveguide
  double radiated = 0.0;     // residual: power outside the guided basis
};

struct QeResult {
  double qe = 0.0;  // fraction absorbed in Ge-flagged layers
  QeBreakdown breakdown;
  double capture = 0.0;  // guided-basis power capture at the input step
};

struct EmeOptions {
  double capture_threshold = 0.9;  // input-step basis capture below this errors
  int max_modes = 12;
  SolverOptions solver;
};

// Eigenmode-expansion estimate of detector quantum efficiency. The input
// stack's fundamental mode is launched across a step into the bare coupler
// cross-section (device stack with Ge layers stripped), beats along the
// coupler, crosses into the absorbing section, traverses the back gap, and
// optionally reflects off the back mirror for a reverse pass.
QeResult compute_qe(const LayerStack& input_stack, const LayerStack& device_stack,
                    const CouplerGeometry& geom, double wavelength_m, Polarization pol,
                    const EmeOptions& options = {});

// One sweep axis: values in meters (or meters for wavelength).
struct QeSweepAxes {
  std::vector<double> coupler_m;
  std::vector<double> gap_m;
  std::vector<double> ge_m;
  std::vector<double> wavelength_m;
  // Optional second band: when set, each row also evaluates this wavelength
  // and reports min(qe, qe2) as the joint dual-band objective.
  std::optional<double> second_band_m;
};

struct QeSweepRow {
  double wavelength_m = 0.0;
  double coupler_m = 0.0;
  double gap_m = 0.0;
  double ge_m = 0.0;
  QeResult result;
  double dual_band_objective = 0.0;
  std::string error;  // non-empty if this grid point failed
};

struct QeSweepResult {
  std::vector<QeSweepRow> rows;
  int argmax = -1;  // index of the best row (by objective, then qe)
  // Mean spacing of successive extrema of qe vs coupler length, when the
  // coupler axis has enough points to measure it; 0 otherwise.
  double coupler_oscillation_period_m = 0.0;
  // lambda/(2 dn) of the two lowest coupler-section modes, 0 if single-mode.
  double coupler_beat_length_m = 0.0;
};

QeSweepResult qe_sweep(const LayerStack& input_stack, const LayerStack& device_stack,
                       const CouplerGeometry& base, const QeSweepAxes& axes, Polarization pol,
                       const EmeOptions& options = {}, int jobs = 1);

// Scene JSON: input_layers / layers arrays of {t_nm, n, k, ge}, cladding
// indices, coupler_nm, gap_nm, ge_nm, mirror_r, lambda_nm, pol.
struct Scene {
  LayerStack input_stack;
  LayerStack device_stack;
  CouplerGeometry geometry;
  double wavelength_m = 0.0;
  Polarization pol = Polarization::TE;
};

Scene scene_from_json(const std::string& text);

std::string qe_sweep_csv(const QeSweepResult& result);

}  // namespace pqcdet
