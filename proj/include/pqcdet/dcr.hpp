#pragma once

#include <optional>
#include <string>
#include <vector>

namespace pqcdet {

// One reference photodiode: Ge mesa diameter and measured dark current.
struct DarkCurrentSample {
  double diameter_m = 0.0;
  double current_a = 0.0;
};

// The disc model I = J_bulk*pi*d^2/4 + J_surf*pi*d gives, after dividing by
// the circumference pi*d, a line with slope J_bulk/4 and intercept J_surf.
// SlopeTimesFour follows that model; SlopeAsBulk reads the slope directly
// as the bulk density, reproducing quoted literature pairings as-printed.
enum class FitConvention { SlopeTimesFour, SlopeAsBulk };

struct DensityFit {
  double bulk_a_per_cm2 = 0.0;
  double surface_a_per_cm = 0.0;
  double slope = 0.0;          // A/cm per cm of diameter
  double intercept = 0.0;      // A/cm
  double residual_rms = 0.0;   // A/cm
  double slope_stderr = 0.0;
  double intercept_stderr = 0.0;
  FitConvention convention = FitConvention::SlopeTimesFour;
  bool negative_intercept = false;  // unphysical surface density flag
};

// Least-squares line through (d_i, I_i / (pi d_i)), working in cm so the
// densities come out in the conventional A/cm^2 and A/cm units.
// Throws std::invalid_argument for < 2 samples and a singular-fit
// std::runtime_error when all diameters are equal.
DensityFit fit_dark_densities(const std::vector<DarkCurrentSample>& samples,
                              FitConvention convention = FitConvention::SlopeTimesFour);

struct DeviceGeometry {
  enum class Shape { Disc, Rectangle };
  Shape shape = Shape::Disc;
  double diameter_m = 0.0;  // Disc
  double length_m = 0.0;    // Rectangle
  double width_m = 0.0;     // Rectangle

  static DeviceGeometry disc(double diameter_m);
  static DeviceGeometry rectangle(double length_m, double width_m);
  double area_m2() const;
  double perimeter_m() const;
};

enum class ProjectionMode { AreaOnly, AreaPlusPerimeter };

// Scales a measured DCR from a reference geometry to a target geometry,
// either by the area ratio or by the ratio of J_bulk*A + J_surf*P using a
// supplied density fit.
double project_dcr(const DeviceGeometry& reference, double reference_dcr_hz,
                   const DeviceGeometry& target, ProjectionMode mode,
                   const std::optional<DensityFit>& fit = std::nullopt);

// Published GeSi dark-current densities, usable as a default AreaPlusPerimeter fit.
DensityFit reference_densities();

// Report JSON with keys bulk_a_per_cm2, surface_a_per_cm, slope, intercept,
// residual_rms, convention.
std::string density_fit_to_json(const DensityFit& fit);

// Parses rows of `diameter_um,current_na` (header required).
std::vector<DarkCurrentSample> samples_from_csv(const std::string& text);

}  // namespace pqcdet
