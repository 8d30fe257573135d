#include "pqcdet/dcr.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "pqcdet/format.hpp"

namespace pqcdet {

namespace {
constexpr double kMetersToCm = 100.0;
}

DensityFit fit_dark_densities(const std::vector<DarkCurrentSample>& samples,
                              FitConvention convention) {
  if (samples.size() < 2)
    throw std::invalid_argument("fit_dark_densities requires at least 2 samples");
  const size_t n = samples.size();

  // x: diameter in cm, y: current / circumference in A/cm.
  std::vector<double> x(n), y(n);
  for (size_t i = 0; i < n; ++i) {
    const auto& s = samples[i];
    if (!(s.diameter_m > 0.0)) throw std::invalid_argument("sample diameter must be > 0");
    if (!(s.current_a > 0.0)) throw std::invalid_argument("sample current must be > 0");
    x[i] = s.diameter_m * kMetersToCm;
    y[i] = (s.current_a / (std::numbers::pi * s.diameter_m)) / kMetersToCm;
  }

  double sx = 0, sy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / double(n), my = sy / double(n);
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::runtime_error("singular fit: all diameters equal");

  DensityFit fit;
  fit.convention = convention;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;

  double ss_res = 0;
  for (size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss_res += r * r;
  }
  fit.residual_rms = std::sqrt(ss_res / double(n));
  if (n > 2) {
    const double var = ss_res / double(n - 2);
    fit.slope_stderr = std::sqrt(var / sxx);
    fit.intercept_stderr = std::sqrt(var * (1.0 / double(n) + mx * mx / sxx));
  }

  fit.surface_a_per_cm = fit.intercept;
  fit.bulk_a_per_cm2 =
      convention == FitConvention::SlopeTimesFour ? 4.0 * fit.slope : fit.slope;
  fit.negative_intercept = fit.intercept < 0.0;
  return fit;
}

DeviceGeometry DeviceGeometry::disc(double diameter_m) {
  if (!(diameter_m > 0.0)) throw std::invalid_argument("disc diameter must be > 0");
  DeviceGeometry g;
  g.shape = Shape::Disc;
  g.diameter_m = diameter_m;
  return g;
}

DeviceGeometry DeviceGeometry::rectangle(double length_m, double width_m) {
  if (!(length_m > 0.0 && width_m > 0.0))
    throw std::invalid_argument("rectangle sides must be > 0");
  DeviceGeometry g;
  g.shape = Shape::Rectangle;
  g.length_m = length_m;
  g.width_m = width_m;
  return g;
}

double DeviceGeometry::area_m2() const {
  return shape == Shape::Disc ? std::numbers::pi * diameter_m * diameter_m / 4.0
                              : length_m * width_m;
}

double DeviceGeometry::perimeter_m() const {
  return shape == Shape::Disc ? std::numbers::pi * diameter_m : 2.0 * (length_m + width_m);
}

double project_dcr(const DeviceGeometry& reference, double reference_dcr_hz,
                   const DeviceGeometry& target, ProjectionMode mode,
                   const std::optional<DensityFit>& fit) {
  if (!(reference_dcr_hz > 0.0)) throw std::invalid_argument("reference DCR must be > 0");
  if (mode == ProjectionMode::AreaOnly)
    return reference_dcr_hz * target.area_m2() / reference.area_m2();
  if (!fit) throw std::invalid_argument("AreaPlusPerimeter projection requires a density fit");
  auto generation = [&](const DeviceGeometry& g) {
    const double area_cm2 = g.area_m2() * kMetersToCm * kMetersToCm;
    const double perimeter_cm = g.perimeter_m() * kMetersToCm;
    return fit->bulk_a_per_cm2 * area_cm2 + fit->surface_a_per_cm * perimeter_cm;
  };
  return reference_dcr_hz * generation(target) / generation(reference);
}

DensityFit reference_densities() {
  DensityFit fit;
  fit.convention = FitConvention::SlopeTimesFour;
  fit.bulk_a_per_cm2 = 4.12e-6;
  fit.surface_a_per_cm = 0.7e-9;
  fit.slope = fit.bulk_a_per_cm2 / 4.0;
  fit.intercept = fit.surface_a_per_cm;
  return fit;
}

std::string density_fit_to_json(const DensityFit& fit) {
  nlohmann::json j;
  j["bulk_a_per_cm2"] = fit.bulk_a_per_cm2;
  j["surface_a_per_cm"] = fit.surface_a_per_cm;
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["residual_rms"] = fit.residual_rms;
  j["convention"] =
      fit.convention == FitConvention::SlopeTimesFour ? "slope-times-four" : "slope-as-bulk";
  if (fit.negative_intercept) j["warning"] = "negative intercept: unphysical surface density";
  // The source prose pairs the density values in the opposite order from
  // what the units imply; this fit follows the units (slope -> bulk per
  // area, intercept -> surface per length).
  j["pairing_note"] = "slope maps to bulk density (A/cm^2), intercept to surface density (A/cm)";
  return j.dump(2);
}

std::vector<DarkCurrentSample> samples_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty dark-current CSV");
  if (line.find("diameter_um") == std::string::npos || line.find("current_na") == std::string::npos)
    throw std::invalid_argument("dark-current CSV header must be diameter_um,current_na");
  std::vector<DarkCurrentSample> samples;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("bad dark-current CSV row: " + line);
    DarkCurrentSample s;
    s.diameter_m = std::stod(line.substr(0, comma)) * 1e-6;
    s.current_a = std::stod(line.substr(comma + 1)) * 1e-9;
    samples.push_back(s);
  }
  return samples;
}

}  // namespace pqcdet
