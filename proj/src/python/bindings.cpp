#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pqcdet/dcr.hpp"
#include "pqcdet/detector.hpp"
#include "pqcdet/eme.hpp"
#include "pqcdet/mesh.hpp"
#include "pqcdet/npd.hpp"
#include "pqcdet/oracle.hpp"
#include "pqcdet/slab.hpp"

namespace py = pybind11;
using namespace pqcdet;

PYBIND11_MODULE(_pqcdet, m) {
  m.doc() = "Detector statistics and simulation toolkit for photonic quantum computing";

  py::class_<DetectorParams>(m, "DetectorParams")
      .def(py::init<>())
      .def_readwrite("spde", &DetectorParams::spde)
      .def_readwrite("dcr_hz", &DetectorParams::dcr_hz)
      .def_readwrite("jitter_s", &DetectorParams::jitter_s)
      .def_readwrite("gate_s", &DetectorParams::gate_s)
      .def_readwrite("label", &DetectorParams::label)
      .def("validate", &DetectorParams::validate);

  py::class_<GateProbabilities>(m, "GateProbabilities")
      .def_readonly("p_dc", &GateProbabilities::p_dc)
      .def_readonly("p_pc", &GateProbabilities::p_pc);

  m.def("gesi_300k", &gesi_300k);
  m.def("snspd_4k", &snspd_4k);
  m.def("gate_probabilities", &gate_probabilities);
  m.def("detector_to_json", &detector_to_json);
  m.def("detector_from_json", &detector_from_json);

  py::enum_<Scheme>(m, "Scheme").value("Photon", Scheme::Photon).value("Qubit", Scheme::Qubit);

  py::class_<NpdConfig>(m, "NpdConfig")
      .def(py::init<>())
      .def_readwrite("m", &NpdConfig::m)
      .def_readwrite("detector", &NpdConfig::detector);

  py::class_<DetectionReport>(m, "DetectionReport")
      .def_readonly("p_oo", &DetectionReport::p_oo)
      .def_readonly("p_click", &DetectionReport::p_click)
      .def_readonly("p_success", &DetectionReport::p_success)
      .def_readonly("fidelity_exact", &DetectionReport::fidelity_exact)
      .def_readonly("fidelity_approx", &DetectionReport::fidelity_approx);

  m.def("p_one_to_one", &p_one_to_one, py::arg("m"), py::arg("n"));
  m.def("photon_detection", &photon_detection, py::arg("cfg"), py::arg("n"));
  m.def("qubit_detection", &qubit_detection, py::arg("detector"), py::arg("n"));
  m.def("binomial", &binomial, py::arg("n"), py::arg("k"));

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("detector", &SweepRow::detector)
      .def_readonly("m", &SweepRow::m)
      .def_readonly("n", &SweepRow::n)
      .def_readonly("report", &SweepRow::report);

  py::class_<DeltaRow>(m, "DeltaRow")
      .def_readonly("detector_a", &DeltaRow::detector_a)
      .def_readonly("detector_b", &DeltaRow::detector_b)
      .def_readonly("m", &DeltaRow::m)
      .def_readonly("n", &DeltaRow::n)
      .def_readonly("p_success_delta", &DeltaRow::p_success_delta)
      .def_readonly("fidelity_exact_delta", &DeltaRow::fidelity_exact_delta);

  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("rows", &SweepResult::rows)
      .def_readonly("deltas", &SweepResult::deltas);

  m.def("sweep", &sweep, py::arg("scheme"), py::arg("m_range"), py::arg("n_range"),
        py::arg("detectors"), py::arg("jobs") = 1);
  m.def("sweep_rows_csv", &sweep_rows_csv);
  m.def("sweep_deltas_csv", &sweep_deltas_csv);

  py::class_<PhotonEnumeration>(m, "PhotonEnumeration")
      .def_readonly("p_click", &PhotonEnumeration::p_click)
      .def_readonly("p_success", &PhotonEnumeration::p_success)
      .def_readonly("p_oo", &PhotonEnumeration::p_oo)
      .def_readonly("p_exactly_n_clicks", &PhotonEnumeration::p_exactly_n_clicks)
      .def_readonly("weight_sum", &PhotonEnumeration::weight_sum);
  py::class_<QubitEnumeration>(m, "QubitEnumeration")
      .def_readonly("p_click", &QubitEnumeration::p_click)
      .def_readonly("p_success", &QubitEnumeration::p_success)
      .def_readonly("weight_sum", &QubitEnumeration::weight_sum);
  py::class_<McEstimate>(m, "McEstimate")
      .def_readonly("value", &McEstimate::value)
      .def_readonly("std_error", &McEstimate::std_error)
      .def_readonly("samples", &McEstimate::samples)
      .def_readonly("seed", &McEstimate::seed);
  py::class_<McResult>(m, "McResult")
      .def_readonly("click", &McResult::click)
      .def_readonly("success", &McResult::success)
      .def_readonly("rng_name", &McResult::rng_name);

  m.def("enumerate_photon_events", &enumerate_photon_events, py::arg("cfg"), py::arg("n"));
  m.def("enumerate_qubit_events", &enumerate_qubit_events, py::arg("detector"), py::arg("n"));
  py::enum_<OccupancySampler>(m, "OccupancySampler")
      .value("StarsAndBars", OccupancySampler::StarsAndBars)
      .value("IndependentModes", OccupancySampler::IndependentModes);
  m.def("monte_carlo", &monte_carlo, py::arg("cfg"), py::arg("n"), py::arg("scheme"),
        py::arg("samples"), py::arg("seed"),
        py::arg("sampler") = OccupancySampler::StarsAndBars);

  py::enum_<FitConvention>(m, "FitConvention")
      .value("SlopeTimesFour", FitConvention::SlopeTimesFour)
      .value("SlopeAsBulk", FitConvention::SlopeAsBulk);

  py::class_<DarkCurrentSample>(m, "DarkCurrentSample")
      .def(py::init<>())
      .def_readwrite("diameter_m", &DarkCurrentSample::diameter_m)
      .def_readwrite("current_a", &DarkCurrentSample::current_a);

  py::class_<DensityFit>(m, "DensityFit")
      .def(py::init<>())
      .def_readwrite("bulk_a_per_cm2", &DensityFit::bulk_a_per_cm2)
      .def_readwrite("surface_a_per_cm", &DensityFit::surface_a_per_cm)
      .def_readonly("slope", &DensityFit::slope)
      .def_readonly("intercept", &DensityFit::intercept)
      .def_readonly("residual_rms", &DensityFit::residual_rms)
      .def_readonly("negative_intercept", &DensityFit::negative_intercept);

  m.def("fit_dark_densities", &fit_dark_densities, py::arg("samples"),
        py::arg("convention") = FitConvention::SlopeTimesFour);
  m.def("reference_densities", &reference_densities);
  m.def("samples_from_csv", &samples_from_csv);
  m.def("density_fit_to_json", &density_fit_to_json);

  py::class_<DeviceGeometry>(m, "DeviceGeometry")
      .def_static("disc", &DeviceGeometry::disc)
      .def_static("rectangle", &DeviceGeometry::rectangle)
      .def("area_m2", &DeviceGeometry::area_m2)
      .def("perimeter_m", &DeviceGeometry::perimeter_m);

  py::enum_<ProjectionMode>(m, "ProjectionMode")
      .value("AreaOnly", ProjectionMode::AreaOnly)
      .value("AreaPlusPerimeter", ProjectionMode::AreaPlusPerimeter);

  m.def("project_dcr", &project_dcr, py::arg("reference"), py::arg("reference_dcr_hz"),
        py::arg("target"), py::arg("mode"), py::arg("fit") = std::nullopt);

  py::enum_<Polarization>(m, "Polarization")
      .value("TE", Polarization::TE)
      .value("TM", Polarization::TM);

  py::class_<Layer>(m, "Layer")
      .def(py::init([](double t, Complex n, bool ge) {
             Layer l;
             l.thickness_m = t;
             l.index = n;
             l.ge = ge;
             return l;
           }),
           py::arg("thickness_m"), py::arg("index"), py::arg("ge") = false)
      .def_readwrite("thickness_m", &Layer::thickness_m)
      .def_readwrite("index", &Layer::index)
      .def_readwrite("ge", &Layer::ge);

  py::class_<LayerStack>(m, "LayerStack")
      .def(py::init<>())
      .def_readwrite("layers", &LayerStack::layers)
      .def_readwrite("clad_bottom", &LayerStack::clad_bottom)
      .def_readwrite("clad_top", &LayerStack::clad_top)
      .def("without_ge", &LayerStack::without_ge);

  py::class_<SlabMode>(m, "SlabMode")
      .def_readonly("n_eff", &SlabMode::n_eff)
      .def("beta", &SlabMode::beta)
      .def("field_at", &SlabMode::field_at)
      .def("sample", &SlabMode::sample, py::arg("points"), py::arg("pad_m"));

  py::class_<ModeSet>(m, "ModeSet").def_readonly("modes", &ModeSet::modes);

  m.def(
      "solve_slab_modes",
      [](const LayerStack& stack, double wavelength_m, Polarization pol, int max_modes) {
        return solve_slab_modes(stack, wavelength_m, pol, max_modes);
      },
      py::arg("stack"), py::arg("wavelength_m"), py::arg("pol"), py::arg("max_modes") = 16);
  m.def("mode_overlap", &mode_overlap);
  m.def("ge_absorption_fraction", &ge_absorption_fraction);
  m.def("beat_length", &beat_length);

  py::class_<CouplerGeometry>(m, "CouplerGeometry")
      .def(py::init<>())
      .def_readwrite("coupler_m", &CouplerGeometry::coupler_m)
      .def_readwrite("gap_m", &CouplerGeometry::gap_m)
      .def_readwrite("ge_m", &CouplerGeometry::ge_m)
      .def_readwrite("mirror_r", &CouplerGeometry::mirror_r);

  py::class_<QeBreakdown>(m, "QeBreakdown")
      .def_readonly("absorbed", &QeBreakdown::absorbed)
      .def_readonly("transmitted", &QeBreakdown::transmitted)
      .def_readonly("reflected", &QeBreakdown::reflected)
      .def_readonly("radiated", &QeBreakdown::radiated);

  py::class_<QeResult>(m, "QeResult")
      .def_readonly("qe", &QeResult::qe)
      .def_readonly("breakdown", &QeResult::breakdown)
      .def_readonly("capture", &QeResult::capture);

  m.def(
      "compute_qe",
      [](const LayerStack& input_stack, const LayerStack& device_stack,
         const CouplerGeometry& geom, double wavelength_m, Polarization pol) {
        return compute_qe(input_stack, device_stack, geom, wavelength_m, pol);
      },
      py::arg("input_stack"), py::arg("device_stack"), py::arg("geometry"),
      py::arg("wavelength_m"), py::arg("pol"));

  py::class_<Scene>(m, "Scene")
      .def_readonly("input_stack", &Scene::input_stack)
      .def_readonly("device_stack", &Scene::device_stack)
      .def_readonly("geometry", &Scene::geometry)
      .def_readonly("wavelength_m", &Scene::wavelength_m)
      .def_readonly("pol", &Scene::pol);
  m.def("scene_from_json", &scene_from_json);

  py::class_<CMatrix>(m, "CMatrix")
      .def(py::init<int, int>())
      .def_readonly("rows", &CMatrix::rows)
      .def_readonly("cols", &CMatrix::cols)
      .def("__getitem__",
           [](const CMatrix& u, std::pair<int, int> rc) { return u.at(rc.first, rc.second); })
      .def("__setitem__",
           [](CMatrix& u, std::pair<int, int> rc, Cx v) { u.at(rc.first, rc.second) = v; });

  m.def("mzi_unitary", &mzi_unitary, py::arg("theta"), py::arg("phi"));
  m.def("unitarity_error", &unitarity_error);
  m.def("permanent", &permanent);
  m.def("output_fock_probability", &output_fock_probability);
  m.def("output_distribution", &output_distribution);

  py::class_<MeshElement>(m, "MeshElement")
      .def(py::init<>())
      .def_readwrite("mode", &MeshElement::mode)
      .def_readwrite("theta", &MeshElement::theta)
      .def_readwrite("phi", &MeshElement::phi)
      .def_readwrite("phase", &MeshElement::phase);
  py::class_<MeshCircuit>(m, "MeshCircuit")
      .def(py::init<>())
      .def_readwrite("modes", &MeshCircuit::modes)
      .def_readwrite("elements", &MeshCircuit::elements);
  m.def("compose", &compose);
  m.def("circuit_from_json", &circuit_from_json);

  py::class_<OutcomeRow>(m, "OutcomeRow")
      .def_readonly("occupation", &OutcomeRow::occupation)
      .def_readonly("ideal", &OutcomeRow::ideal)
      .def_readonly("degraded", &OutcomeRow::degraded)
      .def_readonly("fidelity", &OutcomeRow::fidelity);
  py::class_<ExperimentReport>(m, "ExperimentReport")
      .def_readonly("outcomes", &ExperimentReport::outcomes)
      .def_readonly("total_ideal", &ExperimentReport::total_ideal)
      .def_readonly("total_degraded", &ExperimentReport::total_degraded)
      .def_readonly("detection_fidelity", &ExperimentReport::detection_fidelity);

  py::class_<PortGroup>(m, "PortGroup")
      .def(py::init<>())
      .def_readwrite("modes", &PortGroup::modes)
      .def_readwrite("npd", &PortGroup::npd);

  m.def(
      "run_experiment_fock",
      [](const MeshCircuit& circuit, const std::vector<int>& occupation,
         const std::vector<PortGroup>& groups, Scheme scheme) {
        FockInput in;
        in.occupation = occupation;
        return run_experiment(circuit, in, groups, scheme);
      },
      py::arg("circuit"), py::arg("occupation"), py::arg("groups"),
      py::arg("scheme") = Scheme::Photon);
  m.def(
      "run_experiment_dualrail",
      [](const MeshCircuit& circuit, int qubits, const std::vector<Cx>& amplitudes,
         const std::vector<PortGroup>& groups) {
        DualRailInput in;
        in.qubits = qubits;
        in.amplitudes = amplitudes;
        return run_experiment(circuit, in, groups, Scheme::Qubit);
      },
      py::arg("circuit"), py::arg("qubits"), py::arg("amplitudes"), py::arg("groups"));
  m.def("experiment_report_json", &experiment_report_json);
}
