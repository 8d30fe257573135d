#include "pqcdet/npd.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

#include "pqcdet/format.hpp"

namespace pqcdet {

void NpdConfig::validate() const {
  if (m < 1) throw std::invalid_argument("NpdConfig.m must be >= 1, got " + std::to_string(m));
  detector.validate();
  if (geometry) {
    if (!(geometry->length_m > 0.0 && geometry->width_m > 0.0 && geometry->gap_m >= 0.0))
      throw std::invalid_argument("NpdConfig coupler geometry must be positive");
  }
}

double p_one_to_one(int m, int n) {
  if (m < 1) throw std::invalid_argument("p_one_to_one: m must be >= 1");
  if (n < 1) throw std::invalid_argument("p_one_to_one: n must be >= 1");
  if (n > m) return 0.0;
  double p = 1.0;
  for (int k = 1; k <= n; ++k) p *= double(m + 1 - k) / double(m + n - k);
  return p;
}

namespace {

// Per-detector click factor of an occupied detector: photo, dark, or both.
// Algebraically 1 - (1 - p_pc)(1 - p_dc).
double click_factor(const GateProbabilities& gp) {
  return 1.0 - (1.0 - gp.p_pc) * (1.0 - gp.p_dc);
}

// (1 - p_dc)^k computed as exp(k * log1p(-p_dc)) so large k stays accurate.
double silent_factor(const GateProbabilities& gp, int k) {
  if (k == 0) return 1.0;
  return std::exp(double(k) * std::log1p(-gp.p_dc));
}

double approx_fidelity(const DetectorParams& det, int n) {
  return 1.0 - double(n) * det.dcr_hz * det.gate_s * (1.0 - det.spde) / det.spde;
}

}  // namespace

DetectionReport photon_detection(const NpdConfig& cfg, int n) {
  cfg.validate();
  if (n < 1 || n > cfg.m)
    throw std::domain_error("photon_detection requires 1 <= n <= m, got n=" +
                            std::to_string(n) + ", m=" + std::to_string(cfg.m));
  const GateProbabilities gp = gate_probabilities(cfg.detector);
  DetectionReport r;
  r.p_oo = p_one_to_one(cfg.m, n);
  const double silent = silent_factor(gp, cfg.m - n);
  r.p_click = r.p_oo * std::pow(click_factor(gp), n) * silent;
  r.p_success = r.p_oo * std::pow(gp.p_pc, n) * silent;
  r.fidelity_exact = r.p_click > 0.0 ? r.p_success / r.p_click : 0.0;
  r.fidelity_approx = approx_fidelity(cfg.detector, n);
  return r;
}

DetectionReport qubit_detection(const DetectorParams& det, int n) {
  if (n < 1) throw std::domain_error("qubit_detection requires n >= 1");
  const GateProbabilities gp = gate_probabilities(det);
  DetectionReport r;
  r.p_oo = 1.0;
  const double silent = silent_factor(gp, n);
  r.p_click = std::pow(click_factor(gp), n) * silent;
  r.p_success = std::pow(gp.p_pc, n) * silent;
  r.fidelity_exact = r.p_click > 0.0 ? r.p_success / r.p_click : 0.0;
  r.fidelity_approx = approx_fidelity(det, n);
  return r;
}

std::string scheme_name(Scheme s) {
  return s == Scheme::Photon ? "photon" : "qubit";
}

SweepResult sweep(Scheme scheme, std::pair<int, int> m_range, std::pair<int, int> n_range,
                  const std::vector<DetectorParams>& detectors, int jobs) {
  if (detectors.empty()) throw std::invalid_argument("sweep: no detectors given");
  if (m_range.second < m_range.first || n_range.second < n_range.first)
    throw std::invalid_argument("sweep: empty range");
  if (jobs < 1) jobs = 1;

  struct Point {
    int det;
    int m;
    int n;
  };
  std::vector<Point> points;
  for (int d = 0; d < int(detectors.size()); ++d) {
    if (scheme == Scheme::Photon) {
      for (int m = m_range.first; m <= m_range.second; ++m)
        for (int n = std::max(1, n_range.first); n <= std::min(m, n_range.second); ++n)
          points.push_back({d, m, n});
    } else {
      for (int n = std::max(1, n_range.first); n <= n_range.second; ++n)
        points.push_back({d, 1, n});
    }
  }
  if (points.empty()) throw std::invalid_argument("sweep: ranges produce no rows");

  SweepResult result;
  result.rows.resize(points.size());
  auto worker = [&](int offset) {
    for (size_t i = offset; i < points.size(); i += size_t(jobs)) {
      const Point& p = points[i];
      SweepRow row;
      row.scheme = scheme;
      row.detector = detectors[p.det].label;
      row.m = p.m;
      row.n = p.n;
      if (scheme == Scheme::Photon) {
        NpdConfig cfg;
        cfg.m = p.m;
        cfg.detector = detectors[p.det];
        row.report = photon_detection(cfg, p.n);
      } else {
        row.report = qubit_detection(detectors[p.det], p.n);
      }
      result.rows[i] = std::move(row);
    }
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < jobs; ++t) threads.emplace_back(worker, t);
    for (auto& t : threads) t.join();
  }

  // Pairwise differences between consecutive detector entries at equal (m, n).
  const size_t per_det = points.size() / detectors.size();
  for (size_t d = 0; d + 1 < detectors.size(); ++d) {
    for (size_t i = 0; i < per_det; ++i) {
      const SweepRow& a = result.rows[d * per_det + i];
      const SweepRow& b = result.rows[(d + 1) * per_det + i];
      DeltaRow delta;
      delta.scheme = scheme;
      delta.detector_a = a.detector;
      delta.detector_b = b.detector;
      delta.m = a.m;
      delta.n = a.n;
      delta.p_success_delta = a.report.p_success - b.report.p_success;
      delta.fidelity_exact_delta = a.report.fidelity_exact - b.report.fidelity_exact;
      result.deltas.push_back(std::move(delta));
    }
  }
  return result;
}

std::string sweep_rows_csv(const std::vector<SweepRow>& rows) {
  std::string out = "scheme,detector,M,N,p_oo,p_click,p_success,fidelity_exact,fidelity_approx\n";
  for (const auto& r : rows) {
    out += scheme_name(r.scheme) + "," + r.detector + "," + format_int(r.m) + "," +
           format_int(r.n) + "," + format_double(r.report.p_oo) + "," +
           format_double(r.report.p_click) + "," + format_double(r.report.p_success) + "," +
           format_double(r.report.fidelity_exact) + "," + format_double(r.report.fidelity_approx) +
           "\n";
  }
  return out;
}

std::string sweep_deltas_csv(const std::vector<DeltaRow>& deltas) {
  std::string out = "scheme,detector_a,detector_b,M,N,p_success_delta,fidelity_exact_delta\n";
  for (const auto& d : deltas) {
    out += scheme_name(d.scheme) + "," + d.detector_a + "," + d.detector_b + "," +
           format_int(d.m) + "," + format_int(d.n) + "," + format_double(d.p_success_delta) + "," +
           format_double(d.fidelity_exact_delta) + "\n";
  }
  return out;
}

}  // namespace pqcdet
