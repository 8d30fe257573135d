#include "pqcdet/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "pqcdet/format.hpp"

namespace pqcdet {

CMatrix CMatrix::identity(int n) {
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

CMatrix mzi_unitary(double theta, double phi) {
  constexpr Cx i1(0.0, 1.0);
  const Cx inv_sqrt2 = 1.0 / std::sqrt(2.0);
  auto bs = [&](CMatrix& m) {
    CMatrix r(2, 2);
    for (int c = 0; c < 2; ++c) {
      r.at(0, c) = inv_sqrt2 * (m.at(0, c) + i1 * m.at(1, c));
      r.at(1, c) = inv_sqrt2 * (i1 * m.at(0, c) + m.at(1, c));
    }
    m = r;
  };
  auto upper_phase = [&](CMatrix& m, double x) {
    for (int c = 0; c < 2; ++c) m.at(0, c) *= std::exp(i1 * x);
  };
  CMatrix u = CMatrix::identity(2);
  upper_phase(u, phi);
  bs(u);
  upper_phase(u, theta);
  bs(u);
  return u;
}

CMatrix compose(const MeshCircuit& circuit) {
  if (circuit.modes < 1) throw std::invalid_argument("circuit needs at least one mode");
  constexpr Cx i1(0.0, 1.0);
  CMatrix u = CMatrix::identity(circuit.modes);
  for (const auto& e : circuit.elements) {
    if (e.kind == MeshElement::Kind::Phase) {
      if (e.mode < 0 || e.mode >= circuit.modes)
        throw std::invalid_argument("phase element mode out of range");
      const Cx f = std::exp(i1 * e.phase);
      for (int c = 0; c < circuit.modes; ++c) u.at(e.mode, c) *= f;
      continue;
    }
    if (e.mode < 0 || e.mode + 1 >= circuit.modes)
      throw std::invalid_argument("mzi element needs adjacent in-range mode pair");
    const CMatrix block = mzi_unitary(e.theta, e.phi);
    for (int c = 0; c < circuit.modes; ++c) {
      const Cx top = u.at(e.mode, c), bot = u.at(e.mode + 1, c);
      u.at(e.mode, c) = block.at(0, 0) * top + block.at(0, 1) * bot;
      u.at(e.mode + 1, c) = block.at(1, 0) * top + block.at(1, 1) * bot;
    }
  }
  return u;
}

double unitarity_error(const CMatrix& u) {
  if (u.rows != u.cols) throw std::invalid_argument("unitarity_error needs a square matrix");
  double worst = 0.0;
  for (int i = 0; i < u.rows; ++i)
    for (int j = 0; j < u.cols; ++j) {
      Cx dot = 0.0;
      for (int k = 0; k < u.rows; ++k) dot += std::conj(u.at(k, i)) * u.at(k, j);
      worst = std::max(worst, std::abs(dot - (i == j ? Cx(1.0) : Cx(0.0))));
    }
  return worst;
}

Cx permanent(const CMatrix& m) {
  if (m.rows != m.cols) throw std::invalid_argument("permanent needs a square matrix");
  const int n = m.rows;
  if (n == 0) return 1.0;
  if (n > 30) throw std::length_error("permanent bounded at n <= 30");

  // Ryser with Gray-code subset updates.
  std::vector<Cx> row_sum(size_t(n), Cx(0.0));
  Cx total = 0.0;
  std::uint64_t gray = 0;
  double sign = 1.0;
  const std::uint64_t count = 1ULL << n;
  for (std::uint64_t s = 1; s < count; ++s) {
    const std::uint64_t next = s ^ (s >> 1);
    const std::uint64_t diff = gray ^ next;
    const int j = std::countr_zero(diff);
    const double add = (next & diff) ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) row_sum[size_t(i)] += add * m.at(i, j);
    gray = next;
    sign = -sign;
    Cx prod = 1.0;
    for (int i = 0; i < n; ++i) prod *= row_sum[size_t(i)];
    total += sign * prod;
  }
  return ((n % 2) ? 1.0 : -1.0) * -total;
}

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

int total_photons(const std::vector<int>& occ) {
  int n = 0;
  for (int c : occ) {
    if (c < 0) throw std::invalid_argument("occupation counts must be >= 0");
    n += c;
  }
  return n;
}

template <typename F>
void for_each_occupation(int modes, int n, std::vector<int>& occ, int pos, int left, F&& fn) {
  if (pos == modes - 1) {
    occ[size_t(pos)] = left;
    fn(occ);
    return;
  }
  for (int k = 0; k <= left; ++k) {
    occ[size_t(pos)] = k;
    for_each_occupation(modes, n, occ, pos + 1, left - k, fn);
  }
}

Cx transition_amplitude(const CMatrix& u, const std::vector<int>& input,
                        const std::vector<int>& output) {
  const int n = total_photons(input);
  CMatrix sub(n, n);
  int row = 0;
  for (size_t t = 0; t < output.size(); ++t)
    for (int r = 0; r < output[t]; ++r) {
      int col = 0;
      for (size_t s = 0; s < input.size(); ++s)
        for (int c = 0; c < input[s]; ++c) sub.at(row, col++) = u.at(int(t), int(s));
      ++row;
    }
  double norm = 1.0;
  for (int c : input) norm *= factorial(c);
  for (int c : output) norm *= factorial(c);
  return permanent(sub) / std::sqrt(norm);
}

}  // namespace

double output_fock_probability(const CMatrix& u, const std::vector<int>& input,
                               const std::vector<int>& output) {
  if (int(input.size()) != u.cols || int(output.size()) != u.rows)
    throw std::invalid_argument("occupation lists must match the matrix dimensions");
  const int n = total_photons(input);
  if (n != total_photons(output))
    throw std::invalid_argument("input and output photon totals must match");
  if (n > 10) throw std::length_error("output_fock_probability bounded at N <= 10");
  return std::norm(transition_amplitude(u, input, output));
}

std::vector<std::pair<std::vector<int>, double>> output_distribution(
    const CMatrix& u, const std::vector<int>& input) {
  const int n = total_photons(input);
  if (n > 10) throw std::length_error("output_distribution bounded at N <= 10");
  std::vector<std::pair<std::vector<int>, double>> rows;
  std::vector<int> occ(size_t(u.rows), 0);
  for_each_occupation(u.rows, n, occ, 0, n, [&](const std::vector<int>& out) {
    rows.emplace_back(out, output_fock_probability(u, input, out));
  });
  return rows;
}

namespace {

// Per-group click/success factors for a given photon count entering the
// group's NPD. A group that cannot resolve its photons (n > m) contributes
// zero to both.
void group_factors(const NpdConfig& cfg, int photons, double& click, double& success) {
  const GateProbabilities gp = gate_probabilities(cfg.detector);
  if (photons == 0) {
    click = success = std::exp(double(cfg.m) * std::log1p(-gp.p_dc));
    return;
  }
  if (photons > cfg.m) {
    click = success = 0.0;
    return;
  }
  const DetectionReport r = photon_detection(cfg, photons);
  click = r.p_click;
  success = r.p_success;
}

void validate_groups(const std::vector<PortGroup>& groups, int modes) {
  std::vector<bool> seen(size_t(modes), false);
  for (const auto& g : groups) {
    g.npd.validate();
    for (int m : g.modes) {
      if (m < 0 || m >= modes) throw std::invalid_argument("port group mode out of range");
      if (seen[size_t(m)]) throw std::invalid_argument("port groups must be disjoint");
      seen[size_t(m)] = true;
    }
  }
  for (bool s : seen)
    if (!s) throw std::invalid_argument("port groups must cover every output mode");
}

}  // namespace

ExperimentReport run_experiment(const MeshCircuit& circuit, const PhotonState& input,
                                const std::vector<PortGroup>& groups, Scheme scheme) {
  const CMatrix u = compose(circuit);
  validate_groups(groups, circuit.modes);
  ExperimentReport report;

  if (scheme == Scheme::Photon) {
    const auto* fock = std::get_if<FockInput>(&input);
    if (!fock) throw std::invalid_argument("photon scheme needs a Fock input state");
    if (int(fock->occupation.size()) != circuit.modes)
      throw std::invalid_argument("input occupation length must equal circuit modes");
    double click_weighted = 0.0;
    for (const auto& [occ, ideal] : output_distribution(u, fock->occupation)) {
      OutcomeRow row;
      row.occupation = occ;
      row.ideal = ideal;
      double click = 1.0, success = 1.0;
      for (const auto& g : groups) {
        int photons = 0;
        for (int m : g.modes) photons += occ[size_t(m)];
        double c = 0.0, s = 0.0;
        group_factors(g.npd, photons, c, s);
        click *= c;
        success *= s;
      }
      row.degraded = ideal * success;
      row.fidelity = click > 0.0 ? success / click : 0.0;
      report.total_ideal += ideal;
      report.total_degraded += row.degraded;
      click_weighted += ideal * click;
      report.outcomes.push_back(std::move(row));
    }
    report.detection_fidelity = click_weighted > 0.0 ? report.total_degraded / click_weighted : 0.0;
    return report;
  }

  const auto* dual = std::get_if<DualRailInput>(&input);
  if (!dual) throw std::invalid_argument("qubit scheme needs a dual-rail input state");
  const int n = dual->qubits;
  if (circuit.modes != 2 * n)
    throw std::invalid_argument("dual-rail input needs exactly 2 modes per qubit");
  if (dual->amplitudes.size() != (size_t(1) << n))
    throw std::invalid_argument("dual-rail amplitude vector must have 2^qubits entries");

  auto basis_occupation = [&](std::uint32_t bits) {
    std::vector<int> occ(size_t(2 * n), 0);
    for (int q = 0; q < n; ++q) occ[size_t(2 * q + ((bits >> q) & 1u))] = 1;
    return occ;
  };

  const DetectionReport det = qubit_detection(groups.front().npd.detector, n);
  for (std::uint32_t t = 0; t < (1u << n); ++t) {
    const auto out_occ = basis_occupation(t);
    Cx amp = 0.0;
    for (std::uint32_t s = 0; s < (1u << n); ++s) {
      if (dual->amplitudes[s] == Cx(0.0)) continue;
      amp += dual->amplitudes[s] * transition_amplitude(u, basis_occupation(s), out_occ);
    }
    OutcomeRow row;
    row.occupation = out_occ;
    row.ideal = std::norm(amp);
    row.degraded = row.ideal * det.p_success;
    row.fidelity = det.fidelity_exact;
    report.total_ideal += row.ideal;
    report.total_degraded += row.degraded;
    report.outcomes.push_back(std::move(row));
  }
  report.detection_fidelity = det.fidelity_exact;
  return report;
}

MeshCircuit circuit_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  MeshCircuit circuit;
  circuit.modes = j.at("modes").get<int>();
  for (const auto& e : j.at("elements")) {
    MeshElement el;
    const std::string kind = e.at("kind").get<std::string>();
    if (kind == "mzi") {
      el.kind = MeshElement::Kind::Mzi;
      const auto pair = e.at("pair").get<std::vector<int>>();
      if (pair.size() != 2 || pair[1] != pair[0] + 1)
        throw std::invalid_argument("mzi pair must be adjacent [i, i+1]");
      el.mode = pair[0];
      el.theta = e.at("theta").get<double>();
      el.phi = e.at("phi").get<double>();
    } else if (kind == "phase") {
      el.kind = MeshElement::Kind::Phase;
      el.mode = e.at("mode").get<int>();
      el.phase = e.at("phase").get<double>();
    } else {
      throw std::invalid_argument("unknown element kind: " + kind);
    }
    circuit.elements.push_back(el);
  }
  return circuit;
}

std::string experiment_report_json(const ExperimentReport& report) {
  nlohmann::json j;
  nlohmann::json ideal = nlohmann::json::array();
  nlohmann::json degraded = nlohmann::json::array();
  for (const auto& row : report.outcomes) {
    ideal.push_back({{"occupation", row.occupation}, {"p", row.ideal}});
    degraded.push_back(
        {{"occupation", row.occupation}, {"p", row.degraded}, {"fidelity", row.fidelity}});
  }
  j["ideal"] = std::move(ideal);
  j["degraded"] = std::move(degraded);
  j["fidelity"] = {{"detection_fidelity", report.detection_fidelity},
                   {"total_ideal", report.total_ideal},
                   {"total_degraded", report.total_degraded}};
  return j.dump(2);
}

}  // namespace pqcdet
