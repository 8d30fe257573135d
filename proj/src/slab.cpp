#include "pqcdet/slab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pqcdet {

void LayerStack::validate() const {
  for (const auto& layer : layers) {
    if (!(layer.thickness_m > 0.0))
      throw std::invalid_argument("layer thickness must be > 0");
    if (layer.index.real() <= 0.0 || layer.index.imag() < 0.0)
      throw std::invalid_argument("layer index must have n > 0 and k >= 0");
  }
  if (clad_bottom.real() <= 0.0 || clad_bottom.imag() < 0.0 || clad_top.real() <= 0.0 ||
      clad_top.imag() < 0.0)
    throw std::invalid_argument("cladding index must have n > 0 and k >= 0");
}

bool LayerStack::lossless() const {
  if (clad_bottom.imag() != 0.0 || clad_top.imag() != 0.0) return false;
  for (const auto& layer : layers)
    if (layer.index.imag() != 0.0) return false;
  return true;
}

double LayerStack::total_thickness_m() const {
  double t = 0.0;
  for (const auto& layer : layers) t += layer.thickness_m;
  return t;
}

LayerStack LayerStack::without_ge() const {
  LayerStack s = *this;
  std::erase_if(s.layers, [](const Layer& l) { return l.ge; });
  return s;
}

namespace {

// Principal sqrt with Re >= 0, so decay/oscillation signs stay consistent.
Complex sqrt_re_pos(Complex z) {
  Complex r = std::sqrt(z);
  return r.real() < 0.0 ? -r : r;
}

Complex region_weight(Polarization pol, Complex index) {
  return pol == Polarization::TE ? Complex(1.0) : index * index;
}

// Transfer-matrix dispersion function. Zero at guided-mode effective
// indices. Rescaled layer by layer so thick claddings cannot overflow;
// rescaling by a positive real factor preserves root locations.
Complex dispersion(const LayerStack& stack, double k0, Polarization pol, Complex nu) {
  const Complex nu2 = nu * nu;
  const Complex gb = k0 * sqrt_re_pos(nu2 - stack.clad_bottom * stack.clad_bottom);
  Complex phi = 1.0;
  Complex slope = gb / region_weight(pol, stack.clad_bottom);  // (1/w) dphi/dx
  for (const auto& layer : stack.layers) {
    const Complex w = region_weight(pol, layer.index);
    const Complex kappa = k0 * sqrt_re_pos(layer.index * layer.index - nu2);
    const Complex a = phi;
    const Complex b = slope * w / kappa;
    const Complex u = kappa * layer.thickness_m;
    phi = a * std::cos(u) + b * std::sin(u);
    slope = kappa * (-a * std::sin(u) + b * std::cos(u)) / w;
    const double s = std::max(std::abs(phi), std::abs(slope) / k0);
    if (s > 0.0) {
      phi /= s;
      slope /= s;
    }
  }
  const Complex gt = k0 * sqrt_re_pos(nu2 - stack.clad_top * stack.clad_top);
  return slope + gt / region_weight(pol, stack.clad_top) * phi;
}

LayerStack realified(const LayerStack& stack) {
  LayerStack s = stack;
  s.clad_bottom = Complex(s.clad_bottom.real(), 0.0);
  s.clad_top = Complex(s.clad_top.real(), 0.0);
  for (auto& layer : s.layers) layer.index = Complex(layer.index.real(), 0.0);
  return s;
}

// Exponential-basis field representation used for closed-form integrals.
struct ExpTerm {
  Complex coeff;
  Complex expo;  // field term = coeff * exp(expo * u)
};

struct Region {
  ExpTerm terms[2];
  int n_terms = 0;
  double t = 0.0;
  bool semi_infinite = false;
  Complex index;
  bool ge = false;
};

std::vector<Region> regions_of(const SlabMode& mode) {
  std::vector<Region> regions;
  {
    Region r;
    r.terms[0] = {mode.bottom_amp, -mode.gamma_bottom};
    r.n_terms = 1;
    r.semi_infinite = true;
    r.index = mode.bottom_index;
    regions.push_back(r);
  }
  constexpr Complex i1(0.0, 1.0);
  for (const auto& f : mode.fields) {
    Region r;
    r.terms[0] = {(f.a - i1 * f.b) / 2.0, i1 * f.kappa};
    r.terms[1] = {(f.a + i1 * f.b) / 2.0, -i1 * f.kappa};
    r.n_terms = 2;
    r.t = f.t;
    r.index = f.index;
    r.ge = f.ge;
    regions.push_back(r);
  }
  {
    Region r;
    r.terms[0] = {mode.top_amp, -mode.gamma_top};
    r.n_terms = 1;
    r.semi_infinite = true;
    r.index = mode.top_index;
    regions.push_back(r);
  }
  return regions;
}

// integral over [0,t] (or [0,inf)) of exp(mu*u)
Complex exp_integral(Complex mu, double t, bool semi_infinite) {
  if (semi_infinite) {
    if (mu.real() >= 0.0) throw std::runtime_error("divergent cladding integral");
    return -1.0 / mu;
  }
  const Complex mt = mu * t;
  if (std::abs(mt) < 1e-8) return t * (1.0 + mt / 2.0 + mt * mt / 6.0);
  return (std::exp(mt) - 1.0) / mu;
}

Complex region_product(const Region& a, const Region& b, bool conjugate_b) {
  Complex sum = 0.0;
  for (int i = 0; i < a.n_terms; ++i)
    for (int j = 0; j < b.n_terms; ++j) {
      Complex cb = b.terms[j].coeff;
      Complex eb = b.terms[j].expo;
      if (conjugate_b) {
        cb = std::conj(cb);
        eb = std::conj(eb);
      }
      sum += a.terms[i].coeff * cb * exp_integral(a.terms[i].expo + eb, a.t, a.semi_infinite);
    }
  return sum;
}

// Builds the unnormalized field for a converged effective index.
SlabMode build_mode(const LayerStack& stack, double k0, Polarization pol, Complex nu,
                    double wavelength_m) {
  SlabMode mode;
  mode.n_eff = nu;
  mode.pol = pol;
  mode.wavelength_m = wavelength_m;
  mode.bottom_index = stack.clad_bottom;
  mode.top_index = stack.clad_top;

  const Complex nu2 = nu * nu;
  mode.gamma_bottom = k0 * sqrt_re_pos(nu2 - stack.clad_bottom * stack.clad_bottom);
  mode.bottom_amp = 1.0;
  Complex phi = 1.0;
  Complex slope = mode.gamma_bottom / region_weight(pol, stack.clad_bottom);
  double x = 0.0;
  for (const auto& layer : stack.layers) {
    const Complex w = region_weight(pol, layer.index);
    const Complex kappa = k0 * sqrt_re_pos(layer.index * layer.index - nu2);
    SlabMode::LayerField f;
    f.a = phi;
    f.b = slope * w / kappa;
    f.kappa = kappa;
    f.x0 = x;
    f.t = layer.thickness_m;
    f.index = layer.index;
    f.ge = layer.ge;
    mode.fields.push_back(f);
    const Complex u = kappa * layer.thickness_m;
    phi = f.a * std::cos(u) + f.b * std::sin(u);
    slope = kappa * (-f.a * std::sin(u) + f.b * std::cos(u)) / w;
    x += layer.thickness_m;
  }
  mode.x_top = x;
  mode.gamma_top = k0 * sqrt_re_pos(nu2 - stack.clad_top * stack.clad_top);
  mode.top_amp = phi;
  return mode;
}

void scale_mode(SlabMode& mode, Complex factor) {
  mode.bottom_amp *= factor;
  mode.top_amp *= factor;
  for (auto& f : mode.fields) {
    f.a *= factor;
    f.b *= factor;
  }
}

}  // namespace

Complex SlabMode::beta() const {
  return 2.0 * std::numbers::pi / wavelength_m * n_eff;
}

Complex SlabMode::field_at(double x) const {
  if (x < 0.0) return bottom_amp * std::exp(gamma_bottom * x);
  if (x >= x_top) return top_amp * std::exp(-gamma_top * (x - x_top));
  for (const auto& f : fields) {
    if (x <= f.x0 + f.t) {
      const Complex u = f.kappa * (x - f.x0);
      return f.a * std::cos(u) + f.b * std::sin(u);
    }
  }
  return top_amp;
}

std::vector<Complex> SlabMode::sample(int points, double pad_m) const {
  if (points < 2) throw std::invalid_argument("sample requires >= 2 points");
  std::vector<Complex> out(static_cast<size_t>(points));
  const double lo = -pad_m, hi = x_top + pad_m;
  for (int i = 0; i < points; ++i)
    out[size_t(i)] = field_at(lo + (hi - lo) * double(i) / double(points - 1));
  return out;
}

namespace {

// Exponential-basis representation of a mode's field on the interval
// starting at x1, selected by the interval midpoint xm. Valid until the
// mode's next interface beyond xm.
int local_terms(const SlabMode& m, double x1, double xm, ExpTerm out[2]) {
  if (xm < 0.0) {
    out[0] = {m.bottom_amp * std::exp(m.gamma_bottom * x1), m.gamma_bottom};
    return 1;
  }
  if (xm >= m.x_top) {
    out[0] = {m.top_amp * std::exp(-m.gamma_top * (x1 - m.x_top)), -m.gamma_top};
    return 1;
  }
  constexpr Complex i1(0.0, 1.0);
  for (const auto& f : m.fields) {
    if (xm <= f.x0 + f.t) {
      const Complex p = (f.a - i1 * f.b) / 2.0;
      const Complex q = (f.a + i1 * f.b) / 2.0;
      const Complex phase = i1 * f.kappa * (x1 - f.x0);
      out[0] = {p * std::exp(phase), i1 * f.kappa};
      out[1] = {q * std::exp(-phase), -i1 * f.kappa};
      return 2;
    }
  }
  out[0] = {m.top_amp * std::exp(-m.gamma_top * (x1 - m.x_top)), -m.gamma_top};
  return 1;
}

Complex local_index(const SlabMode& m, double xm) {
  if (xm < 0.0) return m.bottom_index;
  for (const auto& f : m.fields)
    if (xm <= f.x0 + f.t) return f.index;
  return m.top_index;
}

}  // namespace

Complex mode_overlap(const SlabMode& a, const SlabMode& b) {
  if (a.pol != b.pol || a.wavelength_m != b.wavelength_m)
    throw std::invalid_argument("mode_overlap requires equal polarization and wavelength");

  // Union partition of both stacks' interfaces; the two stacks are aligned
  // at x = 0 (common bottom surface) and may differ above it.
  std::vector<double> cuts{0.0};
  for (const auto& f : a.fields) cuts.push_back(f.x0 + f.t);
  for (const auto& f : b.fields) cuts.push_back(f.x0 + f.t);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double u, double v) { return std::abs(u - v) < 1e-15; }),
             cuts.end());

  // For TM the cross-power weight 1/n^2 is symmetrized between the two
  // stacks so step transmission matrices satisfy t_AB = t_BA^T.
  auto inv_weight = [&](double xm) {
    if (a.pol == Polarization::TE) return Complex(1.0);
    const Complex na2 = local_index(a, xm) * local_index(a, xm);
    const Complex nb2 = local_index(b, xm) * local_index(b, xm);
    return (1.0 / na2 + 1.0 / nb2) / 2.0;
  };

  Complex integral = 0.0;
  ExpTerm ta[2], tb[2];
  // Bottom tail: both modes decay below x = 0.
  {
    const int na = local_terms(a, 0.0, -1.0, ta);
    const int nb = local_terms(b, 0.0, -1.0, tb);
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < nb; ++j)
        integral += ta[i].coeff * tb[j].coeff / (ta[i].expo + tb[j].expo) * inv_weight(-1.0);
  }
  // Finite cells between consecutive interfaces.
  for (size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double x1 = cuts[c], x2 = cuts[c + 1];
    const double xm = 0.5 * (x1 + x2);
    const int na = local_terms(a, x1, xm, ta);
    const int nb = local_terms(b, x1, xm, tb);
    const Complex w = inv_weight(xm);
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < nb; ++j)
        integral +=
            ta[i].coeff * tb[j].coeff * exp_integral(ta[i].expo + tb[j].expo, x2 - x1, false) * w;
  }
  // Top tail: both modes decay above the larger stack height.
  {
    const double x1 = cuts.back();
    const int na = local_terms(a, x1, x1 + 1.0, ta);
    const int nb = local_terms(b, x1, x1 + 1.0, tb);
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < nb; ++j)
        integral -= ta[i].coeff * tb[j].coeff / (ta[i].expo + tb[j].expo) * inv_weight(x1 + 1.0);
  }
  return (a.beta() + b.beta()) / 2.0 * integral;
}

double ge_absorption_fraction(const SlabMode& mode) {
  const auto regions = regions_of(mode);
  double total = 0.0, ge = 0.0;
  for (const auto& r : regions) {
    const double eps_im = (r.index * r.index).imag();
    if (eps_im <= 0.0) continue;
    const double p = eps_im * region_product(r, r, true).real();
    total += p;
    if (r.ge) ge += p;
  }
  return total > 0.0 ? ge / total : 0.0;
}

double beat_length(const ModeSet& modes) {
  if (modes.modes.size() < 2)
    throw std::invalid_argument("beat_length requires at least two modes");
  const double dn = std::abs(modes.modes[0].n_eff.real() - modes.modes[1].n_eff.real());
  if (dn == 0.0) throw std::runtime_error("degenerate modes: beat length undefined");
  return modes.wavelength_m / (2.0 * dn);
}

ModeSet solve_slab_modes(const LayerStack& stack, double wavelength_m, Polarization pol,
                         int max_modes, const SolverOptions& options) {
  stack.validate();
  if (!(wavelength_m > 0.0)) throw std::invalid_argument("wavelength must be > 0");
  if (max_modes < 1) throw std::invalid_argument("max_modes must be >= 1");

  ModeSet result;
  result.wavelength_m = wavelength_m;
  result.pol = pol;
  if (stack.layers.empty()) return result;

  const double k0 = 2.0 * std::numbers::pi / wavelength_m;
  const LayerStack real_stack = realified(stack);
  const double lo =
      std::max(real_stack.clad_bottom.real(), real_stack.clad_top.real()) * (1.0 + 1e-9);
  double hi = 0.0;
  for (const auto& layer : real_stack.layers) hi = std::max(hi, layer.index.real());
  hi *= 1.0 - 1e-9;
  if (hi <= lo) return result;  // no index contrast: nothing guided

  auto g = [&](double nu) { return dispersion(real_stack, k0, pol, Complex(nu, 0.0)).real(); };

  // Dense scan with sign-change bracketing, then bisection.
  std::vector<double> roots;
  const int np = std::max(16, options.grid_points);
  double prev_nu = lo, prev_g = g(lo);
  for (int i = 1; i <= np; ++i) {
    const double nu = lo + (hi - lo) * double(i) / double(np);
    const double gv = g(nu);
    if (prev_g == 0.0) {
      roots.push_back(prev_nu);
    } else if (std::isfinite(prev_g) && std::isfinite(gv) && prev_g * gv < 0.0) {
      double a = prev_nu, b = nu, fa = prev_g;
      while (b - a > options.tolerance) {
        const double mid = 0.5 * (a + b);
        const double fm = g(mid);
        if (fm == 0.0) {
          a = b = mid;
          break;
        }
        if (fa * fm < 0.0)
          b = mid;
        else {
          a = mid;
          fa = fm;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    prev_nu = nu;
    prev_g = gv;
  }
  std::sort(roots.begin(), roots.end(), std::greater<>());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [&](double a, double b) { return std::abs(a - b) < 64.0 * options.tolerance; }),
              roots.end());
  if (int(roots.size()) > max_modes) roots.resize(size_t(max_modes));

  const bool absorbing = !stack.lossless();
  for (double root : roots) {
    Complex nu(root, 0.0);
    if (absorbing) {
      // Complex secant refinement from the lossless root.
      Complex x0 = nu, x1 = nu + Complex(0.0, 1e-6);
      Complex f0 = dispersion(stack, k0, pol, x0);
      Complex f1 = dispersion(stack, k0, pol, x1);
      for (int it = 0; it < 80; ++it) {
        const Complex denom = f1 - f0;
        if (std::abs(denom) == 0.0) break;
        const Complex x2 = x1 - f1 * (x1 - x0) / denom;
        if (!std::isfinite(x2.real()) || !std::isfinite(x2.imag())) break;
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = dispersion(stack, k0, pol, x1);
        if (std::abs(x1 - x0) < options.tolerance) break;
      }
      if (std::isfinite(x1.real()) && std::isfinite(x1.imag()) &&
          std::abs(x1.real() - root) < 0.1 * (hi - lo) + 1e-3)
        nu = x1;
    }
    SlabMode mode = build_mode(stack, k0, pol, nu, wavelength_m);
    const Complex self = mode_overlap(mode, mode);
    if (std::abs(self) == 0.0) continue;
    scale_mode(mode, 1.0 / std::sqrt(self));
    result.modes.push_back(std::move(mode));
  }
  std::sort(result.modes.begin(), result.modes.end(),
            [](const SlabMode& a, const SlabMode& b) { return a.n_eff.real() > b.n_eff.real(); });
  return result;
}

}  // namespace pqcdet
