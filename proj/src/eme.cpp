#include "pqcdet/eme.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "pqcdet/format.hpp"

namespace pqcdet {

void CouplerGeometry::validate() const {
  if (coupler_m < 0.0 || gap_m < 0.0 || ge_m < 0.0)
    throw std::invalid_argument("segment lengths must be >= 0");
  if (mirror_r && std::abs(*mirror_r) > 1.0)
    throw std::invalid_argument("mirror amplitude reflectivity must satisfy |r| <= 1");
}

namespace {

using Amps = std::vector<Complex>;
using Matrix = std::vector<std::vector<Complex>>;  // [row][col]

Matrix overlap_matrix(const ModeSet& a, const ModeSet& b) {
  Matrix o(a.modes.size(), std::vector<Complex>(b.modes.size()));
  for (size_t i = 0; i < a.modes.size(); ++i)
    for (size_t j = 0; j < b.modes.size(); ++j)
      o[i][j] = mode_overlap(a.modes[i], b.modes[j]);
  return o;
}

double power(const Amps& a) {
  double p = 0.0;
  for (const Complex& c : a) p += std::norm(c);
  return p;
}

// amp_b[j] = sum_i O[i][j] amp_a[i]; returns power not captured by b.
double step(const Matrix& o, const Amps& in, Amps& out) {
  const size_t cols = o.empty() ? 0 : o[0].size();
  out.assign(cols, Complex(0.0));
  for (size_t i = 0; i < in.size(); ++i)
    for (size_t j = 0; j < cols; ++j) out[j] += o[i][j] * in[i];
  return power(in) - power(out);
}

// Transposed contraction: amp_a[i] = sum_j O[i][j] amp_b[j].
double step_back(const Matrix& o, const Amps& in, Amps& out) {
  out.assign(o.size(), Complex(0.0));
  for (size_t i = 0; i < o.size(); ++i)
    for (size_t j = 0; j < in.size(); ++j) out[i] += o[i][j] * in[j];
  return power(in) - power(out);
}

// Advances each modal amplitude by exp(i beta L); modal power lost to
// absorption is split between Ge and non-Ge layers by the mode's
// dissipation profile.
void propagate(Amps& amps, const ModeSet& modes, double length_m,
               const std::vector<double>& ge_frac, double& absorbed_ge, double& absorbed_other) {
  if (length_m == 0.0) return;
  constexpr Complex i1(0.0, 1.0);
  for (size_t m = 0; m < amps.size(); ++m) {
    const double before = std::norm(amps[m]);
    amps[m] *= std::exp(i1 * modes.modes[m].beta() * length_m);
    const double loss = before - std::norm(amps[m]);
    absorbed_ge += loss * ge_frac[m];
    absorbed_other += loss * (1.0 - ge_frac[m]);
  }
}

std::vector<double> ge_fractions(const ModeSet& modes) {
  std::vector<double> f(modes.modes.size());
  for (size_t m = 0; m < modes.modes.size(); ++m) f[m] = ge_absorption_fraction(modes.modes[m]);
  return f;
}

}  // namespace

QeResult compute_qe(const LayerStack& input_stack, const LayerStack& device_stack,
                    const CouplerGeometry& geom, double wavelength_m, Polarization pol,
                    const EmeOptions& options) {
  input_stack.validate();
  device_stack.validate();
  geom.validate();

  const LayerStack coupler_stack = device_stack.without_ge();
  const ModeSet input = solve_slab_modes(input_stack, wavelength_m, pol, options.max_modes,
                                         options.solver);
  if (input.modes.empty()) throw std::runtime_error("input stack guides no modes");
  const ModeSet coupler =
      solve_slab_modes(coupler_stack, wavelength_m, pol, options.max_modes, options.solver);
  if (coupler.modes.empty()) throw std::runtime_error("coupler section guides no modes");
  const bool has_ge_section = coupler_stack.layers.size() != device_stack.layers.size();
  const ModeSet ge_section =
      has_ge_section
          ? solve_slab_modes(device_stack, wavelength_m, pol, options.max_modes, options.solver)
          : coupler;
  if (ge_section.modes.empty()) throw std::runtime_error("absorber section guides no modes");

  const Matrix o_in = overlap_matrix(input, coupler);
  const Matrix o_ge = overlap_matrix(coupler, ge_section);
  const std::vector<double> frac_coupler = ge_fractions(coupler);
  const std::vector<double> frac_ge = ge_fractions(ge_section);

  double absorbed_ge = 0.0, absorbed_other = 0.0, radiated = 0.0;

  // Forward pass: input -> coupler -> absorber -> gap -> mirror plane.
  Amps a(input.modes.size(), Complex(0.0));
  a[0] = 1.0;  // fundamental mode, unit power
  Amps b, c;
  radiated += step(o_in, a, b);
  const double capture = power(b);
  if (capture < options.capture_threshold)
    throw std::runtime_error("mode basis captures only " + format_double(capture) +
                             " of the launched power at the input step");
  propagate(b, coupler, geom.coupler_m, frac_coupler, absorbed_ge, absorbed_other);
  if (has_ge_section) {
    radiated += step(o_ge, b, c);
  } else {
    c = b;
  }
  propagate(c, ge_section, geom.ge_m, frac_ge, absorbed_ge, absorbed_other);
  Amps d;
  if (has_ge_section) {
    radiated += step_back(o_ge, c, d);
  } else {
    d = c;
  }
  propagate(d, coupler, geom.gap_m, frac_coupler, absorbed_ge, absorbed_other);

  QeResult out;
  out.capture = capture;
  const double at_mirror = power(d);
  if (!geom.mirror_r) {
    out.breakdown.transmitted = at_mirror;
  } else {
    const double r = *geom.mirror_r;
    out.breakdown.transmitted = (1.0 - r * r) * at_mirror;
    for (auto& amp : d) amp *= r;
    // Reverse pass back to the input waveguide.
    propagate(d, coupler, geom.gap_m, frac_coupler, absorbed_ge, absorbed_other);
    if (has_ge_section) {
      radiated += step(o_ge, d, c);
    } else {
      c = d;
    }
    propagate(c, ge_section, geom.ge_m, frac_ge, absorbed_ge, absorbed_other);
    if (has_ge_section) {
      radiated += step_back(o_ge, c, d);
    } else {
      d = c;
    }
    propagate(d, coupler, geom.coupler_m, frac_coupler, absorbed_ge, absorbed_other);
    Amps back;
    radiated += step_back(o_in, d, back);
    out.breakdown.reflected = power(back);
  }

  out.qe = absorbed_ge;
  out.breakdown.absorbed = absorbed_ge + absorbed_other;
  out.breakdown.radiated = 1.0 - out.breakdown.absorbed - out.breakdown.transmitted -
                           out.breakdown.reflected;
  if (out.breakdown.radiated < 0.0 && out.breakdown.radiated > -1e-9)
    out.breakdown.radiated = 0.0;
  return out;
}

QeSweepResult qe_sweep(const LayerStack& input_stack, const LayerStack& device_stack,
                       const CouplerGeometry& base, const QeSweepAxes& axes, Polarization pol,
                       const EmeOptions& options, int jobs) {
  auto axis = [](const std::vector<double>& values, double fallback) {
    return values.empty() ? std::vector<double>{fallback} : values;
  };
  const auto wavelengths = axes.wavelength_m;
  if (wavelengths.empty()) throw std::invalid_argument("qe_sweep requires a wavelength axis");
  const auto couplers = axis(axes.coupler_m, base.coupler_m);
  const auto gaps = axis(axes.gap_m, base.gap_m);
  const auto ges = axis(axes.ge_m, base.ge_m);
  if (jobs < 1) jobs = 1;

  QeSweepResult result;
  for (double wl : wavelengths)
    for (double lc : couplers)
      for (double lg : gaps)
        for (double lge : ges) {
          QeSweepRow row;
          row.wavelength_m = wl;
          row.coupler_m = lc;
          row.gap_m = lg;
          row.ge_m = lge;
          result.rows.push_back(row);
        }

  auto worker = [&](int offset) {
    for (size_t i = size_t(offset); i < result.rows.size(); i += size_t(jobs)) {
      QeSweepRow& row = result.rows[i];
      CouplerGeometry g = base;
      g.coupler_m = row.coupler_m;
      g.gap_m = row.gap_m;
      g.ge_m = row.ge_m;
      try {
        row.result = compute_qe(input_stack, device_stack, g, row.wavelength_m, pol, options);
        row.dual_band_objective = row.result.qe;
        if (axes.second_band_m) {
          const QeResult second =
              compute_qe(input_stack, device_stack, g, *axes.second_band_m, pol, options);
          row.dual_band_objective = std::min(row.result.qe, second.qe);
        }
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < jobs; ++t) threads.emplace_back(worker, t);
    for (auto& t : threads) t.join();
  }

  for (size_t i = 0; i < result.rows.size(); ++i) {
    const QeSweepRow& row = result.rows[i];
    if (!row.error.empty()) continue;
    if (result.argmax < 0 ||
        row.dual_band_objective > result.rows[size_t(result.argmax)].dual_band_objective)
      result.argmax = int(i);
  }

  // Oscillation period of qe vs coupler length, measured as the mean spacing
  // of successive extrema with parabolic refinement of each extremum.
  if (couplers.size() >= 8 && wavelengths.size() == 1 && gaps.size() == 1 && ges.size() == 1) {
    std::vector<double> xs, qs;
    for (const auto& row : result.rows)
      if (row.error.empty()) {
        xs.push_back(row.coupler_m);
        qs.push_back(row.result.qe);
      }
    std::vector<double> extrema;
    for (size_t i = 1; i + 1 < qs.size(); ++i) {
      const bool is_max = qs[i] > qs[i - 1] && qs[i] > qs[i + 1];
      const bool is_min = qs[i] < qs[i - 1] && qs[i] < qs[i + 1];
      if (!is_max && !is_min) continue;
      const double denom = qs[i - 1] - 2.0 * qs[i] + qs[i + 1];
      double x = xs[i];
      if (denom != 0.0) {
        const double h = xs[i + 1] - xs[i];
        x += 0.5 * h * (qs[i - 1] - qs[i + 1]) / denom;
      }
      extrema.push_back(x);
    }
    if (extrema.size() >= 2)
      result.coupler_oscillation_period_m =
          (extrema.back() - extrema.front()) / double(extrema.size() - 1);
  }

  const ModeSet coupler_modes = solve_slab_modes(device_stack.without_ge(), wavelengths.front(),
                                                 pol, options.max_modes, options.solver);
  if (coupler_modes.modes.size() >= 2)
    result.coupler_beat_length_m = beat_length(coupler_modes);
  return result;
}

namespace {

LayerStack stack_from_json(const nlohmann::json& layers, const nlohmann::json& root,
                           const std::string& prefix) {
  LayerStack stack;
  for (const auto& l : layers) {
    Layer layer;
    layer.thickness_m = l.at("t_nm").get<double>() * 1e-9;
    layer.index = Complex(l.at("n").get<double>(), l.value("k", 0.0));
    layer.ge = l.value("ge", false);
    stack.layers.push_back(layer);
  }
  const double both = root.value(prefix + "clad_n", 1.444);
  stack.clad_top = Complex(root.value(prefix + "clad_top_n", both), 0.0);
  stack.clad_bottom = Complex(root.value(prefix + "clad_bottom_n", both), 0.0);
  stack.validate();
  return stack;
}

}  // namespace

Scene scene_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Scene scene;
  scene.device_stack = stack_from_json(j.at("layers"), j, "");
  scene.input_stack = stack_from_json(j.at("input_layers"), j, "input_");
  scene.geometry.coupler_m = j.at("coupler_nm").get<double>() * 1e-9;
  scene.geometry.gap_m = j.at("gap_nm").get<double>() * 1e-9;
  scene.geometry.ge_m = j.at("ge_nm").get<double>() * 1e-9;
  if (j.contains("mirror_r") && !j["mirror_r"].is_null())
    scene.geometry.mirror_r = j["mirror_r"].get<double>();
  scene.wavelength_m = j.at("lambda_nm").get<double>() * 1e-9;
  const std::string pol = j.value("pol", "TE");
  if (pol == "TE")
    scene.pol = Polarization::TE;
  else if (pol == "TM")
    scene.pol = Polarization::TM;
  else
    throw std::invalid_argument("pol must be TE or TM, got " + pol);
  scene.geometry.validate();
  return scene;
}

std::string qe_sweep_csv(const QeSweepResult& result) {
  std::string out = "lambda_nm,coupler_nm,gap_nm,ge_nm,qe,absorbed,transmitted,reflected,radiated,error\n";
  for (const auto& row : result.rows) {
    out += format_double(row.wavelength_m * 1e9) + "," + format_double(row.coupler_m * 1e9) + "," +
           format_double(row.gap_m * 1e9) + "," + format_double(row.ge_m * 1e9) + ",";
    if (row.error.empty()) {
      out += format_double(row.result.qe) + "," + format_double(row.result.breakdown.absorbed) +
             "," + format_double(row.result.breakdown.transmitted) + "," +
             format_double(row.result.breakdown.reflected) + "," +
             format_double(row.result.breakdown.radiated) + ",";
    } else {
      std::string msg = row.error;
      std::replace(msg.begin(), msg.end(), ',', ';');
      out += "nan,nan,nan,nan,nan," + msg;
    }
    out += "\n";
  }
  return out;
}

}  // namespace pqcdet
