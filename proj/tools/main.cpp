#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pqcdet/dcr.hpp"
#include "pqcdet/detector.hpp"
#include "pqcdet/eme.hpp"
#include "pqcdet/format.hpp"
#include "pqcdet/mesh.hpp"
#include "pqcdet/npd.hpp"
#include "pqcdet/oracle.hpp"

namespace {

// Exit codes: 0 success, 2 usage, 3 I/O or parse, 4 numeric degenerate,
// 5 verification failure.
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumeric = 4;
constexpr int kExitVerify = 5;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write " + path);
  out << content;
}

pqcdet::DetectorParams resolve_detector(const std::string& name) {
  if (name == "gesi-300k") return pqcdet::gesi_300k();
  if (name == "snspd-4k") return pqcdet::snspd_4k();
  return pqcdet::detector_from_json(read_file(name));
}

std::vector<pqcdet::DetectorParams> resolve_detectors(const std::string& list) {
  std::vector<pqcdet::DetectorParams> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(resolve_detector(item));
  if (out.empty()) throw std::invalid_argument("--detectors is empty");
  return out;
}

// "a:b:steps" in nm -> values in meters.
std::vector<double> parse_axis_nm(const std::string& text) {
  std::vector<double> out;
  if (text.empty()) return out;
  double a = 0, b = 0;
  int steps = 0;
  if (sscanf(text.c_str(), "%lf:%lf:%d", &a, &b, &steps) == 3) {
    if (steps < 2) throw std::invalid_argument("axis needs >= 2 steps: " + text);
    for (int i = 0; i < steps; ++i)
      out.push_back((a + (b - a) * double(i) / double(steps - 1)) * 1e-9);
    return out;
  }
  if (sscanf(text.c_str(), "%lf", &a) == 1) {
    out.push_back(a * 1e-9);
    return out;
  }
  throw std::invalid_argument("bad axis spec: " + text);
}

struct GlobalFlags {
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 1;
  int jobs = 1;
};

int cmd_fom_sweep(const GlobalFlags& g, const std::string& scheme_name, const std::string& m_spec,
                  const std::string& n_spec, const std::string& detector_list) {
  try {
    const pqcdet::Scheme scheme =
        scheme_name == "photon" ? pqcdet::Scheme::Photon : pqcdet::Scheme::Qubit;
    const auto m_range = pqcdet::parse_int_range(m_spec);
    const auto n_range = pqcdet::parse_int_range(n_spec);
    const auto detectors = resolve_detectors(detector_list);
    const auto result = pqcdet::sweep(scheme, m_range, n_range, detectors, g.jobs);

    std::string text = pqcdet::sweep_rows_csv(result.rows);
    if (!result.deltas.empty()) text += "\n" + pqcdet::sweep_deltas_csv(result.deltas);
    write_output(g.out, text);

    if (!g.out.empty()) {
      for (const auto& d : result.deltas)
        if (d.n == 1 && (scheme == pqcdet::Scheme::Qubit || d.m == 1))
          std::cout << d.detector_a << " vs " << d.detector_b
                    << " at N=1: p_success delta = " << pqcdet::format_double(d.p_success_delta)
                    << ", fidelity delta = " << pqcdet::format_double(d.fidelity_exact_delta)
                    << "\n";
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "fom-sweep: " << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_dcr_fit(const GlobalFlags& g, const std::string& input, const std::string& convention) {
  std::vector<pqcdet::DarkCurrentSample> samples;
  try {
    samples = pqcdet::samples_from_csv(read_file(input));
  } catch (const std::exception& e) {
    std::cerr << "dcr fit: " << e.what() << "\n";
    return kExitIo;
  }
  try {
    const auto conv = convention == "slope-as-bulk" ? pqcdet::FitConvention::SlopeAsBulk
                                                    : pqcdet::FitConvention::SlopeTimesFour;
    const auto fit = pqcdet::fit_dark_densities(samples, conv);
    write_output(g.out, pqcdet::density_fit_to_json(fit) + "\n");
    return 0;
  } catch (const std::runtime_error& e) {
    std::cerr << "dcr fit: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "dcr fit: " << e.what() << "\n";
    return kExitUsage;
  }
}

pqcdet::DeviceGeometry parse_geometry(double disc_um, const std::string& rect_um,
                                      const std::string& which) {
  if (disc_um > 0.0 && !rect_um.empty())
    throw std::invalid_argument(which + ": give either a disc or a rectangle, not both");
  if (disc_um > 0.0) return pqcdet::DeviceGeometry::disc(disc_um * 1e-6);
  double l = 0, w = 0;
  if (sscanf(rect_um.c_str(), "%lfx%lf", &l, &w) != 2)
    throw std::invalid_argument(which + ": rectangle must be LxW in um, got '" + rect_um + "'");
  return pqcdet::DeviceGeometry::rectangle(l * 1e-6, w * 1e-6);
}

int cmd_dcr_project(const GlobalFlags& g, double ref_disc_um, const std::string& ref_rect_um,
                    double ref_dcr, double target_disc_um, const std::string& target_rect_um,
                    const std::string& mode, const std::string& fit_path) {
  try {
    const auto ref = parse_geometry(ref_disc_um, ref_rect_um, "--ref");
    const auto target = parse_geometry(target_disc_um, target_rect_um, "--target");

    pqcdet::DensityFit fit = pqcdet::reference_densities();
    if (!fit_path.empty()) {
      nlohmann::json j = nlohmann::json::parse(read_file(fit_path));
      fit.bulk_a_per_cm2 = j.at("bulk_a_per_cm2").get<double>();
      fit.surface_a_per_cm = j.at("surface_a_per_cm").get<double>();
    }
    const double area_only =
        pqcdet::project_dcr(ref, ref_dcr, target, pqcdet::ProjectionMode::AreaOnly);
    const double area_perimeter = pqcdet::project_dcr(
        ref, ref_dcr, target, pqcdet::ProjectionMode::AreaPlusPerimeter, fit);

    nlohmann::json j;
    j["mode"] = mode;
    j["dcr_hz"] = mode == "area-perimeter" ? area_perimeter : area_only;
    j["dcr_hz_area"] = area_only;
    j["dcr_hz_area_perimeter"] = area_perimeter;
    write_output(g.out, j.dump(2) + "\n");
    if (!g.out.empty())
      std::cout << "projected DCR: " << pqcdet::format_double(j["dcr_hz"].get<double>())
                << " Hz\n";
    return 0;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "dcr project: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "dcr project: " << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_qe_sweep(const GlobalFlags& g, const std::string& scene_path, const std::string& coupler,
                 const std::string& gap, const std::string& ge, const std::string& lambda,
                 const std::string& lambda2) {
  pqcdet::Scene scene;
  try {
    scene = pqcdet::scene_from_json(read_file(scene_path));
  } catch (const std::exception& e) {
    std::cerr << "qe sweep: " << e.what() << "\n";
    return kExitIo;
  }
  try {
    pqcdet::QeSweepAxes axes;
    axes.coupler_m = parse_axis_nm(coupler);
    axes.gap_m = parse_axis_nm(gap);
    axes.ge_m = parse_axis_nm(ge);
    axes.wavelength_m = parse_axis_nm(lambda);
    if (axes.wavelength_m.empty()) axes.wavelength_m = {scene.wavelength_m};
    if (!lambda2.empty()) axes.second_band_m = parse_axis_nm(lambda2).front();

    const auto result = pqcdet::qe_sweep(scene.input_stack, scene.device_stack, scene.geometry,
                                         axes, scene.pol, {}, g.jobs);
    write_output(g.out, pqcdet::qe_sweep_csv(result));

    std::ostream& info = g.out.empty() ? std::cerr : std::cout;
    if (result.argmax >= 0) {
      const auto& best = result.rows[size_t(result.argmax)];
      info << "argmax: lambda=" << pqcdet::format_double(best.wavelength_m * 1e9)
           << "nm coupler=" << pqcdet::format_double(best.coupler_m * 1e9)
           << "nm gap=" << pqcdet::format_double(best.gap_m * 1e9)
           << "nm ge=" << pqcdet::format_double(best.ge_m * 1e9)
           << "nm qe=" << pqcdet::format_double(best.result.qe) << "\n";
    }
    if (result.coupler_oscillation_period_m > 0.0)
      info << "oscillation period: "
           << pqcdet::format_double(result.coupler_oscillation_period_m * 1e9) << " nm\n";
    if (result.coupler_beat_length_m > 0.0)
      info << "two-mode beat length: "
           << pqcdet::format_double(result.coupler_beat_length_m * 1e9) << " nm\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "qe sweep: " << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_verify(const GlobalFlags& g, int max_m, double mc_samples, bool inject_bug) {
  if (mc_samples < 1) {
    std::cerr << "verify: --mc-samples must be >= 1\n";
    return kExitUsage;
  }
  if (max_m > 8) {
    std::cerr << "verify: --max-m is bounded at 8\n";
    return kExitUsage;
  }
  try {
    // Benchmark detectors plus a stress point with large dark probability.
    pqcdet::DetectorParams stress;
    stress.label = "stress";
    stress.spde = 0.6;
    stress.gate_s = 1e-9;
    stress.dcr_hz = -std::log1p(-0.3) / stress.gate_s;  // p_dc = 0.3
    const std::vector<pqcdet::DetectorParams> detectors = {pqcdet::gesi_300k(),
                                                           pqcdet::snspd_4k(), stress};
    const double bug = inject_bug ? 1e-6 : 0.0;

    std::string csv =
        "scheme,M,N,quantity,closed_form,oracle,abs_diff,mc_value,mc_stderr,mc_samples,mc_seed\n";
    bool failed = false;
    const auto samples = std::uint64_t(mc_samples);

    auto emit = [&](const std::string& scheme, int m, int n, const std::string& quantity,
                    double closed, double oracle, const pqcdet::McEstimate& mc) {
      const double diff = std::abs(closed - oracle);
      csv += scheme + "," + pqcdet::format_int(m) + "," + pqcdet::format_int(n) + "," + quantity +
             "," + pqcdet::format_double(closed) + "," + pqcdet::format_double(oracle) + "," +
             pqcdet::format_double(diff) + "," + pqcdet::format_double(mc.value) + "," +
             pqcdet::format_double(mc.std_error) + "," + pqcdet::format_int(int64_t(mc.samples)) +
             "," + pqcdet::format_int(int64_t(mc.seed)) + "\n";
      if (diff > 1e-12) {
        failed = true;
        std::cerr << "verify: " << scheme << " M=" << m << " N=" << n << " " << quantity
                  << " |closed - oracle| = " << pqcdet::format_double(diff) << "\n";
      }
      const double sigma = std::max(mc.std_error, 1e-12);
      if (std::abs(mc.value - closed) > 4.0 * sigma) {
        failed = true;
        std::cerr << "verify: " << scheme << " M=" << m << " N=" << n << " " << quantity
                  << " MC estimate " << pqcdet::format_double(mc.value) << " outside 4 sigma\n";
      }
    };

    for (const auto& det : detectors) {
      for (int m = 1; m <= max_m; ++m)
        for (int n = 1; n <= m; ++n) {
          pqcdet::NpdConfig cfg;
          cfg.m = m;
          cfg.detector = det;
          const auto closed = pqcdet::photon_detection(cfg, n);
          const auto oracle = pqcdet::enumerate_photon_events(cfg, n);
          const auto mc =
              pqcdet::monte_carlo(cfg, n, pqcdet::Scheme::Photon, samples, g.seed);
          emit("photon", m, n, "p_click", closed.p_click + bug, oracle.p_click, mc.click);
          emit("photon", m, n, "p_success", closed.p_success, oracle.p_success, mc.success);
        }
      for (int n = 1; n <= max_m; ++n) {
        const auto closed = pqcdet::qubit_detection(det, n);
        const auto oracle = pqcdet::enumerate_qubit_events(det, n);
        pqcdet::NpdConfig cfg;
        cfg.m = 1;
        cfg.detector = det;
        const auto mc = pqcdet::monte_carlo(cfg, n, pqcdet::Scheme::Qubit, samples, g.seed);
        emit("qubit", 2 * n, n, "p_click", closed.p_click + bug, oracle.p_click, mc.click);
        emit("qubit", 2 * n, n, "p_success", closed.p_success, oracle.p_success, mc.success);
      }
    }
    write_output(g.out, csv);
    return failed ? kExitVerify : 0;
  } catch (const std::exception& e) {
    std::cerr << "verify: " << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_experiment_run(const GlobalFlags& g, const std::string& circuit_path,
                       const std::string& fock, int dualrail_qubits,
                       const std::string& detector_name, const std::string& scheme_name,
                       const std::string& groups_spec, int npd_m) {
  pqcdet::MeshCircuit circuit;
  try {
    circuit = pqcdet::circuit_from_json(read_file(circuit_path));
  } catch (const std::exception& e) {
    std::cerr << "experiment run: " << e.what() << "\n";
    return kExitIo;
  }
  try {
    const auto det = resolve_detector(detector_name);
    const pqcdet::Scheme scheme =
        scheme_name == "qubit" ? pqcdet::Scheme::Qubit : pqcdet::Scheme::Photon;

    pqcdet::PhotonState state;
    if (!fock.empty()) {
      pqcdet::FockInput in;
      std::stringstream ss(fock);
      std::string item;
      while (std::getline(ss, item, ',')) in.occupation.push_back(std::stoi(item));
      state = in;
    } else if (dualrail_qubits > 0) {
      pqcdet::DualRailInput in;
      in.qubits = dualrail_qubits;
      in.amplitudes.assign(size_t(1) << dualrail_qubits, pqcdet::Cx(0.0));
      in.amplitudes[0] = 1.0;  // |0...0>
      state = in;
    } else {
      throw std::invalid_argument("give either --fock or --dualrail");
    }

    std::vector<pqcdet::PortGroup> groups;
    pqcdet::NpdConfig npd;
    npd.m = npd_m;
    npd.detector = det;
    if (groups_spec.empty()) {
      for (int m = 0; m < circuit.modes; ++m) groups.push_back({{m}, npd});
    } else {
      std::stringstream ss(groups_spec);
      std::string group;
      while (std::getline(ss, group, ';')) {
        pqcdet::PortGroup pg;
        pg.npd = npd;
        std::stringstream gs(group);
        std::string mode;
        while (std::getline(gs, mode, ',')) pg.modes.push_back(std::stoi(mode));
        groups.push_back(std::move(pg));
      }
    }

    const auto report = pqcdet::run_experiment(circuit, state, groups, scheme);
    write_output(g.out, pqcdet::experiment_report_json(report) + "\n");
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "experiment run: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detector statistics and simulation toolkit for photonic quantum computing"};
  app.require_subcommand(1);

  GlobalFlags g;
  app.add_option("--out", g.out, "Output file (default: stdout)");
  app.add_option("--format", g.format, "Output format (csv|json)");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--jobs", g.jobs, "Parallelism degree");

  auto* fom = app.add_subcommand("fom-sweep", "Click/success/fidelity sweeps over M and N");
  std::string scheme = "photon", m_spec = "1", n_spec = "1", detector_list = "gesi-300k";
  fom->add_option("--scheme", scheme, "photon|qubit")
      ->check(CLI::IsMember({"photon", "qubit"}));
  fom->add_option("--m", m_spec, "M range, e.g. 1..20");
  fom->add_option("--n", n_spec, "N range, e.g. 1..10");
  fom->add_option("--detectors", detector_list, "Comma list: gesi-300k, snspd-4k, or JSON paths");

  auto* dcr = app.add_subcommand("dcr", "Dark-count density fitting and geometric projection");
  dcr->require_subcommand(1);
  auto* fit = dcr->add_subcommand("fit", "Fit bulk/surface densities from a diameter series");
  std::string fit_input, convention = "slope-times-four";
  fit->add_option("--input", fit_input, "CSV with diameter_um,current_na")->required();
  fit->add_option("--convention", convention, "slope-times-four|slope-as-bulk")
      ->check(CLI::IsMember({"slope-times-four", "slope-as-bulk"}));
  auto* project = dcr->add_subcommand("project", "Scale a measured DCR to a new geometry");
  double ref_disc_um = 0.0, target_disc_um = 0.0, ref_dcr = 0.0;
  std::string ref_rect_um, target_rect_um, proj_mode = "area", fit_path;
  project->add_option("--ref-disc-um", ref_disc_um, "Reference disc diameter in um");
  project->add_option("--ref-rect-um", ref_rect_um, "Reference rectangle LxW in um");
  project->add_option("--ref-dcr", ref_dcr, "Reference DCR in Hz")->required();
  project->add_option("--target-disc-um", target_disc_um, "Target disc diameter in um");
  project->add_option("--target-rect-um", target_rect_um, "Target rectangle LxW in um");
  project->add_option("--mode", proj_mode, "area|area-perimeter")
      ->check(CLI::IsMember({"area", "area-perimeter"}));
  project->add_option("--fit", fit_path, "Density-fit JSON (default: published densities)");

  auto* qe = app.add_subcommand("qe", "Quantum-efficiency estimation");
  qe->require_subcommand(1);
  auto* qe_sweep_cmd = qe->add_subcommand("sweep", "Sweep geometry axes of a scene");
  std::string scene_path, ax_coupler, ax_gap, ax_ge, ax_lambda, ax_lambda2;
  qe_sweep_cmd->add_option("--scene", scene_path, "Scene JSON")->required();
  qe_sweep_cmd->add_option("--coupler-nm", ax_coupler, "a:b:steps or single value, nm");
  qe_sweep_cmd->add_option("--gap-nm", ax_gap, "a:b:steps or single value, nm");
  qe_sweep_cmd->add_option("--ge-nm", ax_ge, "a:b:steps or single value, nm");
  qe_sweep_cmd->add_option("--lambda-nm", ax_lambda, "a:b:steps or single value, nm");
  qe_sweep_cmd->add_option("--lambda2-nm", ax_lambda2, "Second band center for the joint objective");

  auto* verify = app.add_subcommand("verify", "Oracle equivalence gate for the closed forms");
  int max_m = 6;
  double mc_samples = 1e6;
  bool inject_bug = false;
  verify->add_option("--max-m", max_m, "Largest array size to enumerate (<= 8)");
  verify->add_option("--mc-samples", mc_samples, "Monte Carlo samples per configuration");
  verify->add_flag("--inject-bug", inject_bug, "Perturb the closed form (sensitivity check)")
      ->group("");

  auto* experiment = app.add_subcommand("experiment", "End-to-end mesh + detector runs");
  experiment->require_subcommand(1);
  auto* run = experiment->add_subcommand("run", "Propagate a state and apply detector statistics");
  std::string circuit_path, fock, detector_name = "gesi-300k", exp_scheme = "photon", groups_spec;
  int dualrail_qubits = 0, npd_m = 1;
  run->add_option("--circuit", circuit_path, "Circuit JSON")->required();
  run->add_option("--fock", fock, "Input occupation, e.g. 1,0,0");
  run->add_option("--dualrail", dualrail_qubits, "Dual-rail qubit count (state |0...0>)");
  run->add_option("--detector", detector_name, "gesi-300k, snspd-4k, or JSON path");
  run->add_option("--scheme", exp_scheme, "photon|qubit")
      ->check(CLI::IsMember({"photon", "qubit"}));
  run->add_option("--groups", groups_spec, "Port groups, e.g. 0,1;2,3 (default: one per mode)");
  run->add_option("--npd-m", npd_m, "Detectors per NPD group");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitUsage;
  }

  if (fom->parsed()) return cmd_fom_sweep(g, scheme, m_spec, n_spec, detector_list);
  if (fit->parsed()) return cmd_dcr_fit(g, fit_input, convention);
  if (project->parsed())
    return cmd_dcr_project(g, ref_disc_um, ref_rect_um, ref_dcr, target_disc_um, target_rect_um,
                           proj_mode, fit_path);
  if (qe_sweep_cmd->parsed())
    return cmd_qe_sweep(g, scene_path, ax_coupler, ax_gap, ax_ge, ax_lambda, ax_lambda2);
  if (verify->parsed()) return cmd_verify(g, max_m, mc_samples, inject_bug);
  if (run->parsed())
    return cmd_experiment_run(g, circuit_path, fock, dualrail_qubits, detector_name, exp_scheme,
                              groups_spec, npd_m);
  return kExitUsage;
}
