#include "pqcdet/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "pqcdet/rng.hpp"

namespace pqcdet {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  if (k > n - k) k = n - k;
  __uint128_t c = 1;
  for (int i = 1; i <= k; ++i) {
    __uint128_t next = c * __uint128_t(n - k + i);
    if (next / __uint128_t(n - k + i) != c) throw std::overflow_error("binomial overflow");
    c = next / __uint128_t(i);
  }
  if (c > (__uint128_t(1) << 100)) throw std::overflow_error("binomial overflow");
  return double(std::uint64_t(c >> 64)) * 0x1.0p64 + double(std::uint64_t(c));
}

namespace {

// Generates every composition of n into m non-negative parts.
template <typename F>
void for_each_composition(int m, int n, std::vector<int>& counts, int pos, int left, F&& fn) {
  if (pos == m - 1) {
    counts[pos] = left;
    fn(counts);
    return;
  }
  for (int k = 0; k <= left; ++k) {
    counts[pos] = k;
    for_each_composition(m, n, counts, pos + 1, left - k, fn);
  }
}

}  // namespace

PhotonEnumeration enumerate_photon_events(const NpdConfig& cfg, int n) {
  cfg.validate();
  const int m = cfg.m;
  if (n < 1 || n > m) throw std::domain_error("enumerate_photon_events requires 1 <= n <= m");
  if (m > 8) throw std::length_error("enumerate_photon_events bounded at m <= 8");
  const GateProbabilities gp = gate_probabilities(cfg.detector);
  const double w_occ = 1.0 / binomial(m + n - 1, n);

  PhotonEnumeration out;
  std::vector<int> counts(m, 0);
  std::vector<int> photon_det(n);
  for_each_composition(m, n, counts, 0, n, [&](const std::vector<int>& occ) {
    bool one_to_one = true;
    for (int c : occ)
      if (c > 1) one_to_one = false;
    if (one_to_one) out.p_oo += w_occ;

    int idx = 0;
    for (int d = 0; d < m; ++d)
      for (int c = 0; c < occ[d]; ++c) photon_det[idx++] = d;

    for (unsigned photo = 0; photo < (1u << n); ++photo) {
      double w_photo = 1.0;
      for (int i = 0; i < n; ++i)
        w_photo *= (photo >> i & 1u) ? gp.p_pc : (1.0 - gp.p_pc);
      for (unsigned dark = 0; dark < (1u << m); ++dark) {
        double w = w_occ * w_photo;
        for (int d = 0; d < m; ++d) w *= (dark >> d & 1u) ? gp.p_dc : (1.0 - gp.p_dc);
        out.weight_sum += w;

        int clicked = 0;
        bool occupied_all_click = true;
        bool unoccupied_silent = true;
        for (int d = 0; d < m; ++d) {
          bool photo_hit = false;
          for (int i = 0; i < n; ++i)
            if (photon_det[i] == d && (photo >> i & 1u)) photo_hit = true;
          const bool is_dark = (dark >> d & 1u) != 0;
          const bool click = photo_hit || is_dark;
          if (click) ++clicked;
          if (occ[d] > 0 && !click) occupied_all_click = false;
          if (occ[d] == 0 && is_dark) unoccupied_silent = false;
        }
        if (clicked == n) out.p_exactly_n_clicks += w;
        if (one_to_one && unoccupied_silent) {
          if (occupied_all_click) out.p_click += w;
          if (photo == (1u << n) - 1u) out.p_success += w;
        }
      }
    }
  });
  return out;
}

QubitEnumeration enumerate_qubit_events(const DetectorParams& det, int n) {
  if (n < 1) throw std::domain_error("enumerate_qubit_events requires n >= 1");
  if (n > 10) throw std::length_error("enumerate_qubit_events bounded at n <= 10");
  const GateProbabilities gp = gate_probabilities(det);

  QubitEnumeration out;
  // Per rail pair: photo on the occupied rail, dark on both rails.
  struct Frame {
    double weight;
    bool click;
    bool success;
  };
  std::vector<Frame> stack{{1.0, true, true}};
  std::vector<int> depth{0};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    int d = depth.back();
    depth.pop_back();
    if (d == n) {
      out.weight_sum += f.weight;
      if (f.click) out.p_click += f.weight;
      if (f.success) out.p_success += f.weight;
      continue;
    }
    for (int photo = 0; photo < 2; ++photo)
      for (int dark_occ = 0; dark_occ < 2; ++dark_occ)
        for (int dark_un = 0; dark_un < 2; ++dark_un) {
          double w = f.weight;
          w *= photo ? gp.p_pc : (1.0 - gp.p_pc);
          w *= dark_occ ? gp.p_dc : (1.0 - gp.p_dc);
          w *= dark_un ? gp.p_dc : (1.0 - gp.p_dc);
          const bool occupied_clicks = photo || dark_occ;
          const bool unoccupied_silent = !dark_un;
          stack.push_back({w, f.click && occupied_clicks && unoccupied_silent,
                           f.success && photo != 0 && unoccupied_silent});
          depth.push_back(d + 1);
        }
  }
  return out;
}

namespace {

constexpr std::uint64_t kBatchSize = 1 << 16;

// Floyd's algorithm: uniform k-combination of [0, range).
void sample_combination(Xoshiro256StarStar& rng, int range, int k, std::vector<int>& out) {
  out.clear();
  for (int j = range - k; j < range; ++j) {
    int t = int(rng.below(std::uint64_t(j) + 1));
    if (std::find(out.begin(), out.end(), t) == out.end())
      out.push_back(t);
    else
      out.push_back(j);
  }
  std::sort(out.begin(), out.end());
}

}  // namespace

McResult monte_carlo(const NpdConfig& cfg, int n, Scheme scheme, std::uint64_t samples,
                     std::uint64_t seed, OccupancySampler sampler) {
  cfg.validate();
  if (samples < 1) throw std::invalid_argument("monte_carlo requires samples >= 1");
  if (n < 1) throw std::domain_error("monte_carlo requires n >= 1");
  if (scheme == Scheme::Photon && n > cfg.m)
    throw std::domain_error("monte_carlo photon scheme requires n <= m");
  const GateProbabilities gp = gate_probabilities(cfg.detector);
  const int m = cfg.m;

  std::uint64_t clicks = 0, successes = 0;
  std::vector<int> stars;
  std::vector<int> counts(size_t(m), 0);
  std::vector<int> photon_det(size_t(n), 0);

  const std::uint64_t batches = (samples + kBatchSize - 1) / kBatchSize;
  for (std::uint64_t b = 0; b < batches; ++b) {
    Xoshiro256StarStar rng(seed, b);
    const std::uint64_t count = std::min(kBatchSize, samples - b * kBatchSize);
    for (std::uint64_t s = 0; s < count; ++s) {
      bool click = false, success = false;
      if (scheme == Scheme::Photon) {
        if (sampler == OccupancySampler::StarsAndBars) {
          sample_combination(rng, m + n - 1, n, stars);
          for (int i = 0; i < n; ++i) photon_det[size_t(i)] = stars[size_t(i)] - i;
        } else {
          for (int i = 0; i < n; ++i) photon_det[size_t(i)] = int(rng.below(std::uint64_t(m)));
        }
        std::fill(counts.begin(), counts.end(), 0);
        for (int i = 0; i < n; ++i) ++counts[size_t(photon_det[size_t(i)])];
        bool one_to_one = true;
        for (int c : counts)
          if (c > 1) one_to_one = false;

        bool all_photo = true;
        std::vector<bool> photo_hit(size_t(m), false);
        for (int i = 0; i < n; ++i) {
          const bool hit = rng.bernoulli(gp.p_pc);
          if (hit)
            photo_hit[size_t(photon_det[size_t(i)])] = true;
          else
            all_photo = false;
        }
        bool occupied_all_click = true, unoccupied_silent = true;
        for (int d = 0; d < m; ++d) {
          const bool dark = rng.bernoulli(gp.p_dc);
          if (counts[size_t(d)] > 0 && !(photo_hit[size_t(d)] || dark)) occupied_all_click = false;
          if (counts[size_t(d)] == 0 && dark) unoccupied_silent = false;
        }
        click = one_to_one && occupied_all_click && unoccupied_silent;
        success = one_to_one && all_photo && unoccupied_silent;
      } else {
        click = success = true;
        for (int q = 0; q < n; ++q) {
          const bool photo = rng.bernoulli(gp.p_pc);
          const bool dark_occ = rng.bernoulli(gp.p_dc);
          const bool dark_un = rng.bernoulli(gp.p_dc);
          click = click && (photo || dark_occ) && !dark_un;
          success = success && photo && !dark_un;
        }
      }
      if (click) ++clicks;
      if (success) ++successes;
    }
  }

  auto estimate = [&](std::uint64_t hits) {
    McEstimate e;
    e.samples = samples;
    e.seed = seed;
    e.value = double(hits) / double(samples);
    e.std_error = std::sqrt(e.value * (1.0 - e.value) / double(samples));
    return e;
  };
  return {estimate(clicks), estimate(successes), Xoshiro256StarStar::name()};
}

}  // namespace pqcdet
