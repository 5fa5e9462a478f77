#pragma once

// Conformable WKB: phase integrals, turning points and the semiclassical
// wavefunction
//
//   classical  psi = (C1 sin phi + C2 cos phi) / sqrt(p),  phi = (1/hbar) int p d^a x
//   forbidden  psi = C exp(-+ (1/hbar) int |p| d^a x) / sqrt(|p|)

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "cwkb/conformable.hpp"
#include "cwkb/errors.hpp"
#include "cwkb/quantum_model.hpp"

namespace cwkb {

inline Complex plane_wave(double x, double k, AlphaOrder alpha, int sign = +1) {
  if (!(x > 0.0)) throw DomainError("plane wave requires x > 0");
  const double phase = (sign >= 0 ? 1.0 : -1.0) * k * std::pow(x, alpha.value()) / alpha.value();
  return std::polar(1.0, phase);
}

inline double evanescent_wave(double x, double q, AlphaOrder alpha, int sign = -1) {
  if (!(x > 0.0)) throw DomainError("evanescent wave requires x > 0");
  return std::exp((sign >= 0 ? 1.0 : -1.0) * q * std::pow(x, alpha.value()) / alpha.value());
}

/// sqrt(2a / L^a) sin(n pi x^a / L^a) on [0, L], zero outside.
inline double normalized_well_wavefunction(int n, double x, AlphaOrder alpha, double length) {
  if (n < 1) throw DomainError("well quantum number must be >= 1");
  if (!(length > 0.0)) throw DomainError("well length must be positive");
  if (x <= 0.0 || x >= length) return 0.0;
  const double a = alpha.value();
  const double la = std::pow(length, a);
  return std::sqrt(2.0 * a / la) * std::sin(n * std::numbers::pi * std::pow(x, a) / la);
}

// ---------------------------------------------------------------------------
// Phase integrals

struct PhaseIntegral {
  double value = 0.0;  ///< phi = (1/hbar) int p d^a x
  double x1 = 0.0;
  double x2 = 0.0;
  double energy = 0.0;
  double error = 0.0;
};

namespace detail {

/// (1/hbar) int_{x1}^{x2} sqrt(2m max(0, +-(E - V))) d^a x, no region check.
inline QuadratureResult<double> momentum_integral(const Potential& potential, double energy, double x1, double x2,
                                                  const PhysicalContext& ctx, const QuadratureSpec& spec,
                                                  bool forbidden) {
  const double two_m = 2.0 * ctx.mass_alpha();
  RealFunction p([&](double x) {
    const double gap = energy - potential_value(potential, x, ctx);
    return std::sqrt(two_m * std::max(0.0, forbidden ? -gap : gap));
  });
  auto r = conf_integral_estimate(p, x1, x2, ctx.alpha(), spec);
  r.value /= ctx.hbar_alpha();
  r.error /= ctx.hbar_alpha();
  return r;
}

inline void require_region(const Potential& potential, double energy, double x1, double x2,
                           const PhysicalContext& ctx, RegionTag wanted) {
  constexpr int kSamples = 64;
  const AlphaOrder alpha = ctx.alpha();
  const double u1 = u_endpoint(x1, alpha), u2 = u_endpoint(x2, alpha);
  for (int i = 1; i < kSamples; ++i) {
    const double x = x_of_u(u1 + (u2 - u1) * i / kSamples, alpha);
    const RegionTag tag = local_momentum(potential, energy, x, ctx).region;
    if (tag != wanted && tag != RegionTag::TurningPoint) {
      std::ostringstream msg;
      msg << "interval [" << x1 << ", " << x2 << "] is not " << to_string(wanted) << " at x = " << x
          << " for E = " << energy;
      throw RegionError(msg.str());
    }
  }
}

}  // namespace detail

/// phi over a classically allowed interval; turning points may be the endpoints.
inline PhaseIntegral phase_integral(const Potential& potential, double energy, double x1, double x2,
                                    const PhysicalContext& ctx, const QuadratureSpec& spec = {}) {
  if (!(x1 >= 0.0) || !(x2 >= x1)) throw DomainError("phase integral requires 0 <= x1 <= x2");
  if (x1 == x2) return {0.0, x1, x2, energy, 0.0};
  detail::require_region(potential, energy, x1, x2, ctx, RegionTag::Classical);
  const auto r = detail::momentum_integral(potential, energy, x1, x2, ctx, spec, false);
  return {r.value, x1, x2, energy, r.error};
}

/// (1/hbar) int |p| d^a x over a forbidden interval (the Gamow integral).
inline PhaseIntegral barrier_integral(const Potential& potential, double energy, double x1, double x2,
                                      const PhysicalContext& ctx, const QuadratureSpec& spec = {}) {
  if (!(x1 >= 0.0) || !(x2 >= x1)) throw DomainError("barrier integral requires 0 <= x1 <= x2");
  if (x1 == x2) return {0.0, x1, x2, energy, 0.0};
  detail::require_region(potential, energy, x1, x2, ctx, RegionTag::Forbidden);
  const auto r = detail::momentum_integral(potential, energy, x1, x2, ctx, spec, true);
  return {r.value, x1, x2, energy, r.error};
}

// ---------------------------------------------------------------------------
// Turning points

/// Sign changes of E - V_a(x) on a u-uniform scan, each bisected to round-off.
inline std::vector<double> turning_points(const Potential& potential, double energy, Interval search,
                                          const PhysicalContext& ctx, int scan_points = 4096) {
  if (!(search.hi > search.lo) || !std::isfinite(search.hi) || search.lo < 0.0) {
    throw DomainError("turning-point search needs a finite interval inside x >= 0");
  }
  const AlphaOrder alpha = ctx.alpha();
  const double u_lo = detail::u_endpoint(search.lo, alpha);
  const double u_hi = u_of_x(search.hi, alpha);
  auto gap = [&](double x) {
    const double v = potential_value(potential, x, ctx);
    return std::isinf(v) ? -std::numeric_limits<double>::infinity() : energy - v;
  };
  auto sample = [&](int i) {
    if (i == 0 && search.lo == 0.0) return x_of_u(u_lo + (u_hi - u_lo) * 1e-9, alpha);
    return i == scan_points ? search.hi : x_of_u(u_lo + (u_hi - u_lo) * i / scan_points, alpha);
  };

  std::vector<double> roots;
  double x_prev = sample(0);
  double g_prev = gap(x_prev);
  if (g_prev == 0.0) roots.push_back(x_prev);
  for (int i = 1; i <= scan_points; ++i) {
    const double x = sample(i);
    const double g = gap(x);
    if (g == 0.0) {
      roots.push_back(x);
    } else if (g_prev != 0.0 && (g > 0.0) != (g_prev > 0.0)) {
      double lo = x_prev, hi = x;
      const bool lo_positive = g_prev > 0.0;
      for (int it = 0; it < 200 && hi - lo > 2.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = gap(mid);
        if (gm == 0.0) {
          lo = hi = mid;
          break;
        }
        ((gm > 0.0) == lo_positive ? lo : hi) = mid;
      }
      roots.push_back(0.5 * (lo + hi));
    }
    x_prev = x;
    g_prev = g;
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

// ---------------------------------------------------------------------------
// Hamilton principal function, truncated at first order in hbar

struct HamiltonTerms {
  double s0 = 0.0;  ///< int_{x0}^{x} p d^a x
  Complex s1;       ///< (i/2) ln p(x)
};

inline HamiltonTerms hamilton_principal_terms(const Potential& potential, double energy, double x0, double x,
                                              const PhysicalContext& ctx, const QuadratureSpec& spec = {}) {
  const auto phi = phase_integral(potential, energy, std::min(x0, x), std::max(x0, x), ctx, spec);
  const double s0 = (x >= x0 ? 1.0 : -1.0) * ctx.hbar_alpha() * phi.value;
  const auto p = local_momentum(potential, energy, x, ctx);
  if (p.region != RegionTag::Classical) throw RegionError("S1 requires a classical evaluation point");
  return {s0, Complex(0.0, 0.5) * std::log(p.magnitude)};
}

/// exp(i (S0 + hbar S1) / hbar) = exp(i phi) / sqrt(p)
inline Complex reconstruct_wavefunction(const HamiltonTerms& terms, double hbar_alpha) {
  return std::exp(Complex(0.0, 1.0) * (Complex(terms.s0) + hbar_alpha * terms.s1) / hbar_alpha);
}

// ---------------------------------------------------------------------------
// Wavefunction

/// Which end of a classical span the phase is measured from.
enum class PhaseAnchor { Left, Right };

struct WkbCoefficients {
  double c1 = 1.0;         ///< sin coefficient, classical spans
  double c2 = 0.0;         ///< cos coefficient, classical spans
  double decaying = 1.0;   ///< forbidden spans
  double growing = 0.0;    ///< forbidden spans bounded on both sides only
  PhaseAnchor anchor = PhaseAnchor::Left;
};

struct RegionSpan {
  Interval span;
  RegionTag tag;
};

class WkbWavefunction {
 public:
  WkbWavefunction(Potential potential, double energy, PhysicalContext ctx, Interval domain,
                  WkbCoefficients coefficients = {}, QuadratureSpec spec = {})
      : potential_(std::move(potential)),
        energy_(energy),
        ctx_(ctx),
        domain_(domain),
        coefficients_(coefficients),
        spec_(spec) {
    const auto roots = turning_points(potential_, energy_, domain_, ctx_);
    std::vector<double> edges{domain_.lo};
    for (double r : roots) {
      if (r > domain_.lo && r < domain_.hi) edges.push_back(r);
    }
    edges.push_back(domain_.hi);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      const double mid = midpoint_u(edges[i], edges[i + 1]);
      RegionTag tag = local_momentum(potential_, energy_, mid, ctx_).region;
      if (tag == RegionTag::TurningPoint) tag = RegionTag::Classical;
      if (!regions_.empty() && regions_.back().tag == tag) {
        regions_.back().span.hi = edges[i + 1];
      } else {
        regions_.push_back({{edges[i], edges[i + 1]}, tag});
      }
    }
  }

  const std::vector<RegionSpan>& regions() const noexcept { return regions_; }
  double energy() const noexcept { return energy_; }
  const PhysicalContext& context() const noexcept { return ctx_; }

  const RegionSpan& span_of(double x) const {
    for (const auto& r : regions_) {
      if (x >= r.span.lo && x <= r.span.hi) return r;
    }
    throw DomainError("x outside the wavefunction domain");
  }

  /// phi(x) measured from the anchor end of its classical span.
  double phase(double x) const {
    const auto& r = span_of(x);
    if (r.tag != RegionTag::Classical) throw RegionError("phase is defined in classical spans only");
    const double from = coefficients_.anchor == PhaseAnchor::Left ? r.span.lo : r.span.hi;
    return detail::momentum_integral(potential_, energy_, std::min(from, x), std::max(from, x), ctx_, spec_, false)
        .value;
  }

  Complex operator()(double x) const {
    if (!(x > 0.0)) throw DomainError("WKB wavefunction requires x > 0");
    if (x < domain_.lo || x > domain_.hi) {
      const double v = potential_value(potential_, x, ctx_);
      if (std::isinf(v)) return 0.0;
      throw DomainError("x outside the wavefunction domain");
    }
    const auto p = local_momentum(potential_, energy_, x, ctx_);
    if (std::isinf(p.magnitude)) return 0.0;
    if (p.region == RegionTag::TurningPoint) {
      std::ostringstream msg;
      msg << "WKB wavefunction is singular at turning point x = " << x;
      throw SingularityError(msg.str());
    }
    const auto& r = span_of(x);
    const double amplitude = 1.0 / std::sqrt(p.magnitude);
    if (p.region == RegionTag::Classical) {
      const double phi = phase(x);
      return amplitude * (coefficients_.c1 * std::sin(phi) + coefficients_.c2 * std::cos(phi));
    }

    const bool first = r.span.lo == domain_.lo;
    const bool last = r.span.hi == domain_.hi;
    if (first && !last) {
      const double decay = detail::momentum_integral(potential_, energy_, x, r.span.hi, ctx_, spec_, true).value;
      return amplitude * coefficients_.decaying * std::exp(-decay);
    }
    const double rise = detail::momentum_integral(potential_, energy_, r.span.lo, x, ctx_, spec_, true).value;
    const double growing = last ? 0.0 : coefficients_.growing;
    return amplitude * (coefficients_.decaying * std::exp(-rise) + growing * std::exp(rise));
  }

 private:
  double midpoint_u(double a, double b) const {
    const AlphaOrder alpha = ctx_.alpha();
    return x_of_u(0.5 * (detail::u_endpoint(a, alpha) + u_of_x(b, alpha)), alpha);
  }

  Potential potential_;
  double energy_;
  PhysicalContext ctx_;
  Interval domain_;
  WkbCoefficients coefficients_;
  QuadratureSpec spec_;
  std::vector<RegionSpan> regions_;
};

inline Complex wkb_eval(const WkbWavefunction& w, double x) { return w(x); }

}  // namespace cwkb
