#pragma once

#include <complex>
#include <string>
#include <vector>

namespace pqcdet {

using Complex = std::complex<double>;

// One film of the vertical layer structure. `ge` marks absorption that
// counts toward quantum efficiency.
struct Layer {
  double thickness_m = 0.0;
  Complex index;  // n + ik, k >= 0
  bool ge = false;
};

struct LayerStack {
  std::vector<Layer> layers;  // bottom to top
  Complex clad_bottom = 1.0;  // semi-infinite
  Complex clad_top = 1.0;

  void validate() const;
  bool lossless() const;
  double total_thickness_m() const;
  // Same stack with all Ge-flagged layers removed (the bare coupler/gap
  // cross-section of the device).
  LayerStack without_ge() const;
};

enum class Polarization { TE, TM };

// A guided slab mode. The transverse field (Ey for TE, Hy for TM) is stored
// as cos/sin coefficients per layer plus decaying cladding tails, so overlap
// integrals are evaluated in closed form rather than by quadrature.
struct SlabMode {
  Complex n_eff;
  Polarization pol = Polarization::TE;
  double wavelength_m = 0.0;

  struct LayerField {
    Complex a, b;    // field = a*cos(kappa u) + b*sin(kappa u), u in [0, t]
    Complex kappa;
    double x0 = 0.0;
    double t = 0.0;
    Complex index;
    bool ge = false;
  };
  std::vector<LayerField> fields;
  Complex bottom_amp, gamma_bottom, bottom_index;  // amp * exp(-gamma u) below
  Complex top_amp, gamma_top, top_index;           // amp * exp(-gamma u) above
  double x_top = 0.0;

  Complex beta() const;
  Complex field_at(double x) const;
  // Field sampled on a uniform vertical grid spanning [-pad, x_top + pad].
  std::vector<Complex> sample(int points, double pad_m) const;
};

struct ModeSet {
  double wavelength_m = 0.0;
  Polarization pol = Polarization::TE;
  std::vector<SlabMode> modes;  // sorted by descending Re(n_eff)
};

struct SolverOptions {
  int grid_points = 2000;    // dispersion scan density over Re(n_eff)
  double tolerance = 1e-12;  // bisection / refinement tolerance on n_eff
  int max_modes = 16;
};

// Finds guided modes by transfer-matrix dispersion root search: dense real
// scan with sign-change bracketing, bisection, then complex secant
// refinement when the stack absorbs. Returns an empty set for non-guiding
// stacks. Modes come back power-orthonormalized.
ModeSet solve_slab_modes(const LayerStack& stack, double wavelength_m, Polarization pol,
                         int max_modes, const SolverOptions& options = {});

// Unconjugated cross-power ((beta_a + beta_b)/2) * integral(f_a f_b / w),
// with w = 1 for TE and n^2 for TM. Equals delta_ij for modes of one stack.
Complex mode_overlap(const SlabMode& a, const SlabMode& b);

// Fraction of the mode's absorbed power dissipated in Ge-flagged layers
// (Im(n^2)-weighted |field|^2 partition). Zero for lossless modes.
double ge_absorption_fraction(const SlabMode& mode);

// Two-mode MMI beat length lambda / (2 |Re(n_eff0 - n_eff1)|).
// Requires at least two modes.
double beat_length(const ModeSet& modes);

}  // namespace pqcdet
