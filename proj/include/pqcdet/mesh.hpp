#pragma once

#include <complex>
#include <string>
#include <variant>
#include <vector>

#include "pqcdet/npd.hpp"

namespace pqcdet {

using Cx = std::complex<double>;

// Small dense complex matrix, row-major.
struct CMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Cx> data;

  CMatrix() = default;
  CMatrix(int r, int c) : rows(r), cols(c), data(size_t(r) * size_t(c), Cx(0.0)) {}
  Cx& at(int r, int c) { return data[size_t(r) * size_t(cols) + size_t(c)]; }
  const Cx& at(int r, int c) const { return data[size_t(r) * size_t(cols) + size_t(c)]; }
  static CMatrix identity(int n);
};

// Convention: U = BS * P(theta) * BS * P(phi), BS = (1/sqrt2)[[1,i],[i,1]],
// P(x) = diag(e^{ix}, 1) on the upper arm. theta=0 is full cross, theta=pi bar.
CMatrix mzi_unitary(double theta, double phi);

struct MeshElement {
  enum class Kind { Mzi, Phase };
  Kind kind = Kind::Mzi;
  int mode = 0;  // Mzi acts on (mode, mode+1); Phase on mode
  double theta = 0.0;
  double phi = 0.0;
  double phase = 0.0;
};

struct MeshCircuit {
  int modes = 0;
  std::vector<MeshElement> elements;
};

// Ordered product of embedded 2x2 blocks (first element applied first).
// Throws on out-of-range or non-adjacent mode pairs.
CMatrix compose(const MeshCircuit& circuit);

double unitarity_error(const CMatrix& u);  // max |U^dag U - I|

// Matrix permanent via Ryser's formula with Gray-code updates, O(2^n n).
Cx permanent(const CMatrix& m);

// |Per(U_sub)|^2 / (prod s_i! prod t_j!) for input/output occupation lists.
// Photon totals must match; total N <= 10.
double output_fock_probability(const CMatrix& u, const std::vector<int>& input,
                               const std::vector<int>& output);

// All N-photon output occupations with their probabilities, in lexicographic
// occupation order.
std::vector<std::pair<std::vector<int>, double>> output_distribution(
    const CMatrix& u, const std::vector<int>& input);

// Input states: Fock occupation list, or dual-rail qubits (rail pairs
// (2i, 2i+1), 2^n amplitudes over computational basis, |0> = photon in the
// lower-indexed rail).
struct FockInput {
  std::vector<int> occupation;
};
struct DualRailInput {
  int qubits = 0;
  std::vector<Cx> amplitudes;  // size 2^qubits, unit norm
};
using PhotonState = std::variant<FockInput, DualRailInput>;

// One NPD per group of output ports; groups must partition the modes.
struct PortGroup {
  std::vector<int> modes;
  NpdConfig npd;
};

struct OutcomeRow {
  std::vector<int> occupation;
  double ideal = 0.0;
  double degraded = 0.0;  // ideal x success probability of the detector layer
  double fidelity = 0.0;
};

struct ExperimentReport {
  std::vector<OutcomeRow> outcomes;
  double total_ideal = 0.0;
  double total_degraded = 0.0;
  double detection_fidelity = 0.0;  // probability-weighted mean outcome fidelity
};

// Propagates the state through the mesh and composes per-outcome ideal
// probabilities with the detection statistics of the terminating NPDs.
ExperimentReport run_experiment(const MeshCircuit& circuit, const PhotonState& input,
                                const std::vector<PortGroup>& groups, Scheme scheme);

// Circuit JSON: {modes, elements: [{kind:"mzi", pair:[i,i+1], theta, phi} |
// {kind:"phase", mode, phase}]}.
MeshCircuit circuit_from_json(const std::string& text);
std::string experiment_report_json(const ExperimentReport& report);

}  // namespace pqcdet
