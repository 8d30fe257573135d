// Acceptance gate: every release-blocking criterion in one binary, one
// PASS/FAIL line each. Run with --cli <path> so the output-determinism checks
// can invoke the command-line tool.
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pqcdet/dcr.hpp"
#include "pqcdet/detector.hpp"
#include "pqcdet/eme.hpp"
#include "pqcdet/format.hpp"
#include "pqcdet/mesh.hpp"
#include "pqcdet/npd.hpp"
#include "pqcdet/oracle.hpp"
#include "pqcdet/slab.hpp"

using namespace pqcdet;

namespace {

int g_failures = 0;

void report(int idx, const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << idx << ": " << name << " (" << detail
            << ")\n";
  if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

DetectorParams stress_detector() {
  DetectorParams d;
  d.label = "stress";
  d.spde = 0.6;
  d.gate_s = 1e-9;
  d.dcr_hz = -std::log1p(-0.3) / d.gate_s;  // p_dc = 0.3
  return d;
}

// --- 1: qubit-scheme success delta at N=1 --------------------------------

void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  const double delta =
      qubit_detection(gesi_300k(), 1).p_success - qubit_detection(snspd_4k(), 1).p_success;
  const double elapsed = seconds_since(t0);
  const bool ok = std::abs(delta - 0.03848) <= 1e-5 && elapsed < 1.0;
  report(1, "qubit N=1 success delta", ok,
         "delta=" + format_double(delta) + " target 0.03848+-1e-5, " + format_double(elapsed) +
             " s");
}

// --- 2: fidelity delta at N=1, both schemes ------------------------------

void criterion_2() {
  NpdConfig g, s;
  g.m = s.m = 1;
  g.detector = gesi_300k();
  s.detector = snspd_4k();
  const double photon_delta =
      photon_detection(g, 1).fidelity_exact - photon_detection(s, 1).fidelity_exact;
  const double qubit_delta =
      qubit_detection(g.detector, 1).fidelity_exact - qubit_detection(s.detector, 1).fidelity_exact;
  const bool ok = std::abs(photon_delta - (-8.4e-5)) <= 1e-6 &&
                  std::abs(qubit_delta - (-8.4e-5)) <= 1e-6 &&
                  std::abs(photon_delta - qubit_delta) <= 1e-15;
  report(2, "fidelity delta at N=1 in both schemes", ok,
         "photon=" + format_double(photon_delta) + " qubit=" + format_double(qubit_delta) +
             " target -8.4e-5+-1e-6");
}

// --- 3: photon-scheme M=1, N=1 success delta -----------------------------

void criterion_3() {
  NpdConfig g, s;
  g.m = s.m = 1;
  g.detector = gesi_300k();
  s.detector = snspd_4k();
  const double delta = photon_detection(g, 1).p_success - photon_detection(s, 1).p_success;
  const bool ok = std::abs(delta - 0.04) <= 1e-12;
  report(3, "photon M=1 N=1 success delta", ok,
         "delta=" + format_double(delta) + " target 0.04 exactly");
}

// --- 4: DCR geometric projection -----------------------------------------

void criterion_4() {
  const auto ref = DeviceGeometry::disc(15e-6);
  const auto target = DeviceGeometry::rectangle(14.2e-6, 2e-6);
  const double a5 = project_dcr(ref, 5e6, target, ProjectionMode::AreaOnly);
  const double a10 = project_dcr(ref, 10e6, target, ProjectionMode::AreaOnly);
  const double p5 =
      project_dcr(ref, 5e6, target, ProjectionMode::AreaPlusPerimeter, reference_densities());
  const double p10 =
      project_dcr(ref, 10e6, target, ProjectionMode::AreaPlusPerimeter, reference_densities());
  const bool ok = std::abs(a5 / 0.8036e6 - 1.0) <= 1e-3 && std::abs(a10 / 1.607e6 - 1.0) <= 1e-3 &&
                  std::abs(p5 / 1.63e6 - 1.0) <= 0.01 && std::abs(p10 / 3.25e6 - 1.0) <= 0.01;
  report(4, "DCR projection disc->rect", ok,
         "area-only " + format_double(a5) + " / " + format_double(a10) +
             " Hz; area+perimeter alternative " + format_double(p5) + " / " + format_double(p10) +
             " Hz");
}

// --- 5: enumeration oracle equivalence -----------------------------------

void criterion_5() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (const auto& det : {gesi_300k(), snspd_4k(), stress_detector()}) {
    for (int m = 1; m <= 6; ++m)
      for (int n = 1; n <= m; ++n) {
        NpdConfig cfg;
        cfg.m = m;
        cfg.detector = det;
        const auto closed = photon_detection(cfg, n);
        const auto e = enumerate_photon_events(cfg, n);
        worst = std::max(worst, std::abs(closed.p_click - e.p_click));
        worst = std::max(worst, std::abs(closed.p_success - e.p_success));
        worst = std::max(worst, std::abs(closed.p_oo - e.p_oo));
      }
    for (int n = 1; n <= 6; ++n) {
      const auto closed = qubit_detection(det, n);
      const auto e = enumerate_qubit_events(det, n);
      worst = std::max(worst, std::abs(closed.p_click - e.p_click));
      worst = std::max(worst, std::abs(closed.p_success - e.p_success));
    }
  }
  const double elapsed = seconds_since(t0);
  const bool ok = worst <= 1e-12 && elapsed < 30.0;
  report(5, "brute-force oracle equivalence", ok,
         "worst |closed-oracle|=" + format_double(worst) + ", " + format_double(elapsed) + " s");
}

// --- 6: Monte Carlo coverage ---------------------------------------------

void criterion_6() {
  int photon_click = 0, photon_success = 0, qubit_click = 0, qubit_success = 0;
  NpdConfig photon_cfg;
  photon_cfg.m = 3;
  photon_cfg.detector = gesi_300k();
  const auto photon_closed = photon_detection(photon_cfg, 2);
  NpdConfig qubit_cfg;
  qubit_cfg.m = 1;
  qubit_cfg.detector = gesi_300k();
  const auto qubit_closed = qubit_detection(qubit_cfg.detector, 3);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto p = monte_carlo(photon_cfg, 2, Scheme::Photon, 1000000, seed);
    if (std::abs(p.click.value - photon_closed.p_click) <= 3.0 * p.click.std_error) ++photon_click;
    if (std::abs(p.success.value - photon_closed.p_success) <= 3.0 * p.success.std_error)
      ++photon_success;
    const auto q = monte_carlo(qubit_cfg, 3, Scheme::Qubit, 1000000, seed);
    if (std::abs(q.click.value - qubit_closed.p_click) <= 3.0 * q.click.std_error) ++qubit_click;
    if (std::abs(q.success.value - qubit_closed.p_success) <= 3.0 * q.success.std_error)
      ++qubit_success;
  }
  const bool ok =
      photon_click >= 19 && photon_success >= 19 && qubit_click >= 19 && qubit_success >= 19;
  report(6, "Monte Carlo 3-sigma coverage over 20 seeds", ok,
         "within: photon " + format_int(photon_click) + "/" + format_int(photon_success) +
             ", qubit " + format_int(qubit_click) + "/" + format_int(qubit_success) + " of 20");
}

// --- 7: one-to-one probability identity ----------------------------------

void criterion_7() {
  double worst = 0.0;
  for (int m = 1; m <= 30; ++m)
    for (int n = 1; n <= m; ++n) {
      const double product_form = p_one_to_one(m, n);
      const double ratio_form = binomial(m, n) / binomial(m + n - 1, n);
      worst = std::max(worst, std::abs(product_form - ratio_form) / ratio_form);
    }
  const bool ok = worst <= 1e-14;
  report(7, "one-to-one product vs binomial-ratio identity", ok,
         "worst relative diff=" + format_double(worst));
}

// --- 8: first-order fidelity approximation -------------------------------

void criterion_8() {
  double worst = 0.0;
  for (int n = 1; n <= 20; ++n) {
    const auto r = qubit_detection(gesi_300k(), n);
    worst = std::max(worst, std::abs(r.fidelity_exact - r.fidelity_approx));
  }
  const bool ok = worst <= 1e-5;
  report(8, "fidelity approximation error, N<=20", ok, "worst=" + format_double(worst));
}

// --- 9: dark-density fit round trip --------------------------------------

void criterion_9() {
  const double j_bulk = 4.12e-6, j_surf = 0.7e-9;
  auto synthesize = [&](std::mt19937_64* rng) {
    std::normal_distribution<double> noise(0.0, 0.02);
    std::vector<DarkCurrentSample> out;
    for (double d_um : {20., 35., 50., 70., 90., 110., 130., 150., 170., 190., 210., 230.}) {
      const double d_cm = d_um * 1e-4;
      DarkCurrentSample s;
      s.diameter_m = d_um * 1e-6;
      s.current_a = j_bulk * std::numbers::pi * d_cm * d_cm / 4.0 +
                    j_surf * std::numbers::pi * d_cm;
      if (rng) s.current_a *= 1.0 + noise(*rng);
      out.push_back(s);
    }
    return out;
  };

  const auto clean = fit_dark_densities(synthesize(nullptr));
  const bool exact_ok = std::abs(clean.bulk_a_per_cm2 / j_bulk - 1.0) <= 1e-9 &&
                        std::abs(clean.surface_a_per_cm / j_surf - 1.0) <= 1e-9;

  int covered = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    std::mt19937_64 rng(seed);
    const auto fit = fit_dark_densities(synthesize(&rng));
    const bool bulk_in = std::abs(fit.bulk_a_per_cm2 - j_bulk) <= 3.0 * 4.0 * fit.slope_stderr;
    const bool surf_in = std::abs(fit.surface_a_per_cm - j_surf) <= 3.0 * fit.intercept_stderr;
    if (bulk_in && surf_in) ++covered;
  }
  const bool ok = exact_ok && covered >= 95;
  report(9, "density fit round trip", ok,
         "zero-noise rel err bulk=" + format_double(std::abs(clean.bulk_a_per_cm2 / j_bulk - 1.0)) +
             " surf=" + format_double(std::abs(clean.surface_a_per_cm / j_surf - 1.0)) +
             "; 2% noise coverage " + format_int(covered) + "/100");
}

// --- 10: photonic-stack properties ---------------------------------------

double te0_symmetric_oracle(double t, double n_core, double n_clad, double lambda) {
  const double k0 = 2.0 * std::numbers::pi / lambda;
  auto f = [&](double neff) {
    const double kappa = k0 * std::sqrt(n_core * n_core - neff * neff);
    const double gamma = k0 * std::sqrt(neff * neff - n_clad * n_clad);
    return kappa * std::tan(kappa * t / 2.0) - gamma;
  };
  const double kappa_max = std::numbers::pi / t;
  double lo = std::sqrt(std::max(n_clad * n_clad,
                                 n_core * n_core - std::pow(kappa_max / k0, 2.0))) +
              1e-12;
  double hi = n_core - 1e-12;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void criterion_10() {
  const double lambda = 1.33e-6;
  LayerStack guide;
  guide.layers.push_back({400e-9, Complex(3.48, 0.0), false});
  guide.clad_bottom = guide.clad_top = Complex(1.444, 0.0);

  LayerStack multi;
  multi.layers.push_back({180e-9, Complex(3.48, 0.0), false});
  multi.layers.push_back({120e-9, Complex(3.60, 0.0), false});
  multi.layers.push_back({150e-9, Complex(3.48, 0.0), false});
  multi.clad_bottom = multi.clad_top = Complex(1.444, 0.0);

  LayerStack device;
  device.layers.push_back({400e-9, Complex(3.48, 0.0), false});
  device.layers.push_back({100e-9, Complex(4.275, 0.057), true});
  device.clad_bottom = device.clad_top = Complex(1.444, 0.0);

  LayerStack input;
  input.layers.push_back({260e-9, Complex(3.48, 0.0), false});
  input.clad_bottom = input.clad_top = Complex(1.444, 0.0);

  // Orthonormality over a lossless multi-layer stack, both polarizations.
  double ortho = 0.0;
  for (Polarization pol : {Polarization::TE, Polarization::TM}) {
    const auto modes = solve_slab_modes(multi, lambda, pol, 8);
    for (size_t i = 0; i < modes.modes.size(); ++i)
      for (size_t j = 0; j < modes.modes.size(); ++j)
        ortho = std::max(ortho, std::abs(mode_overlap(modes.modes[i], modes.modes[j]) -
                                         Complex(i == j ? 1.0 : 0.0)));
  }

  // Energy conservation through a lossless chain.
  CouplerGeometry lossless_geom;
  lossless_geom.coupler_m = 5e-6;
  lossless_geom.gap_m = 2e-6;
  const auto lossless = compute_qe(guide, guide, lossless_geom, lambda, Polarization::TE);
  const double energy_err =
      std::abs(lossless.breakdown.transmitted + lossless.breakdown.reflected - 1.0);

  // Fundamental-mode index vs the independent bisection oracle.
  const auto te = solve_slab_modes(guide, lambda, Polarization::TE, 8);
  const double neff_err =
      te.modes.empty()
          ? 1.0
          : std::abs(te.modes[0].n_eff.real() - te0_symmetric_oracle(400e-9, 3.48, 1.444, lambda));

  // Oscillation of QE vs coupler length against the two-mode beat length.
  EmeOptions options;
  options.capture_threshold = 0.5;
  QeSweepAxes axes;
  axes.wavelength_m = {lambda};
  axes.coupler_m.clear();
  for (int i = 0; i < 300; ++i) axes.coupler_m.push_back(0.2e-6 + i * (10.0e-6 - 0.2e-6) / 299.0);
  CouplerGeometry base;
  base.ge_m = 3e-6;
  const auto sweep_result =
      qe_sweep(input, device, base, axes, Polarization::TE, options, 8);
  int maxima = 0;
  for (size_t i = 1; i + 1 < sweep_result.rows.size(); ++i)
    if (sweep_result.rows[i].result.qe > sweep_result.rows[i - 1].result.qe &&
        sweep_result.rows[i].result.qe > sweep_result.rows[i + 1].result.qe)
      ++maxima;
  const double period = sweep_result.coupler_oscillation_period_m;
  const double beat = sweep_result.coupler_beat_length_m;
  const double period_err = beat > 0.0 ? std::abs(period / beat - 1.0) : 1.0;

  const bool ok = ortho <= 1e-8 && energy_err <= 1e-6 && neff_err <= 1e-9 && period_err <= 0.10;
  report(10, "photonic-stack properties", ok,
         "orthonormality=" + format_double(ortho) + " energy=" + format_double(energy_err) +
             " neff=" + format_double(neff_err) + " period=" + format_double(period * 1e9) +
             "nm vs beat=" + format_double(beat * 1e9) + "nm (err " + format_double(period_err) +
             "), " + format_int(maxima) + " maxima observed");
}

// --- 11: linear optics ----------------------------------------------------

Cx permanent_oracle(const CMatrix& m, std::vector<int> cols) {
  if (cols.empty()) return 1.0;
  const int row = m.rows - int(cols.size());
  Cx total = 0.0;
  for (size_t i = 0; i < cols.size(); ++i) {
    std::vector<int> rest = cols;
    rest.erase(rest.begin() + long(i));
    total += m.at(row, cols[i]) * permanent_oracle(m, rest);
  }
  return total;
}

void criterion_11() {
  CMatrix bs(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  bs.at(0, 0) = s;
  bs.at(0, 1) = Cx(0.0, s);
  bs.at(1, 0) = Cx(0.0, s);
  bs.at(1, 1) = s;
  const double hom = output_fock_probability(bs, {1, 1}, {1, 1});

  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double perm_err = 0.0;
  for (int n = 1; n <= 6; ++n) {
    CMatrix m(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) m.at(r, c) = Cx(u(rng), u(rng));
    std::vector<int> cols(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) cols[size_t(i)] = i;
    perm_err = std::max(perm_err, std::abs(permanent(m) - permanent_oracle(m, cols)));
  }

  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::uniform_int_distribution<int> mode(0, 6);
  MeshCircuit circuit;
  circuit.modes = 8;
  for (int i = 0; i < 1000; ++i)
    circuit.elements.push_back({MeshElement::Kind::Mzi, mode(rng), angle(rng), angle(rng), 0.0});
  const double unit_err = unitarity_error(compose(circuit));

  const bool ok = hom <= 1e-12 && perm_err <= 1e-12 && unit_err <= 1e-12;
  report(11, "linear optics", ok,
         "HOM=" + format_double(hom) + " permanent err=" + format_double(perm_err) +
             " mesh unitarity=" + format_double(unit_err));
}

// --- 12: CLI output determinism ------------------------------------------

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion_12(const std::string& cli) {
  if (cli.empty()) {
    report(12, "CLI output determinism", false, "no --cli path given");
    return;
  }
  const auto dir = std::filesystem::temp_directory_path() / "pqcdet_acceptance";
  std::filesystem::create_directories(dir);
  auto run = [&](const std::string& args, const std::filesystem::path& out) {
    const std::string cmd =
        "\"" + cli + "\" --out \"" + out.string() + "\" " + args + " > /dev/null";
    return std::system(cmd.c_str()) == 0;
  };
  bool ran = true;
  const std::string fom = "fom-sweep --scheme photon --m 1..6 --n 1..6 --detectors "
                          "gesi-300k,snspd-4k";
  ran &= run("--jobs 1 " + fom, dir / "fom_a");
  ran &= run("--jobs 1 " + fom, dir / "fom_b");
  ran &= run("--jobs 8 " + fom, dir / "fom_c");
  const std::string verify = "verify --max-m 3 --mc-samples 100000";
  ran &= run("--seed 7 --jobs 1 " + verify, dir / "ver_a");
  ran &= run("--seed 7 --jobs 1 " + verify, dir / "ver_b");
  ran &= run("--seed 7 --jobs 8 " + verify, dir / "ver_c");

  const std::string fom_a = slurp(dir / "fom_a");
  const std::string ver_a = slurp(dir / "ver_a");
  const bool ok = ran && !fom_a.empty() && !ver_a.empty() && fom_a == slurp(dir / "fom_b") &&
                  fom_a == slurp(dir / "fom_c") && ver_a == slurp(dir / "ver_b") &&
                  ver_a == slurp(dir / "ver_c");
  report(12, "CLI output determinism", ok,
         ran ? "byte-compared fom-sweep and verify across reruns and jobs 1/8"
             : "CLI invocation failed");
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--cli") cli = argv[i + 1];

  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12(cli);

  if (g_failures > 0) {
    std::cout << g_failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
