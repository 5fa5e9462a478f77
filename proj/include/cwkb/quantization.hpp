#pragma once

// WKB energy levels.
//
//   hard walls:          phi(L; E)        = n pi,         n = 1, 2, ...
//   connection formula:  phi(x1, x2; E)   = (n + 1/2) pi, n = 0, 1, ...
//
// phi is strictly increasing in E for a fixed confining potential, so each
// level is bracketed on a geometric energy scan and bisected.

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "cwkb/errors.hpp"
#include "cwkb/quantum_model.hpp"
#include "cwkb/wkb.hpp"

namespace cwkb {

enum class LevelMethod { ClosedForm, HardWallSolver, ConnectionSolver, Oracle };

inline std::string to_string(LevelMethod m) {
  switch (m) {
    case LevelMethod::ClosedForm: return "closed-form";
    case LevelMethod::HardWallSolver: return "hard-wall-solver";
    case LevelMethod::ConnectionSolver: return "connection-solver";
    case LevelMethod::Oracle: return "oracle";
  }
  return "?";
}

struct EnergyLevel {
  int n = 0;
  double energy = 0.0;  ///< E^a
  LevelMethod method = LevelMethod::ClosedForm;
  double residual = 0.0;  ///< |phi(E) / target - 1|
};

/// Energy bracketing controls. Unset bounds are derived from the potential.
struct EnergySearch {
  std::optional<double> e_min;
  std::optional<double> e_max;
  int scan_points = 64;
  int expansions = 3;
  double rel_tol = 1e-13;
  /// Position window for turning points (Custom potentials must set it).
  std::optional<Interval> window;
};

// ---------------------------------------------------------------------------
// Closed forms

/// E^a = n^2 a^2 pi^2 hbar^{2a} / (2 m^a L^{2a})
inline double well_energy_closed(int n, double length, const PhysicalContext& ctx) {
  if (n < 1) throw DomainError("well quantum number must be >= 1");
  const double a = ctx.alpha().value();
  const double hbar = ctx.hbar_alpha();
  return n * n * a * a * std::numbers::pi * std::numbers::pi * hbar * hbar /
         (2.0 * ctx.mass_alpha() * std::pow(length, 2.0 * a));
}

/// E^a = hbar a sqrt(w^{2a} - l^2/4) (n + 1/2)
inline double oscillator_energy_closed(int n, const DampedOscillator& osc, const PhysicalContext& ctx) {
  if (n < 0) throw DomainError("oscillator quantum number must be >= 0");
  detail::require_alpha(osc.alpha, ctx, "DampedOscillator");
  return ctx.hbar_alpha() * ctx.alpha().value() * std::sqrt(osc.effective_frequency_squared()) * (n + 0.5);
}

namespace detail {

/// Smallest E with phi(E) >= target, phi increasing, searched above e_lo.
inline double solve_monotone(const std::function<double(double)>& phi, double target, double e_lo, double e_hi,
                             const EnergySearch& search) {
  if (!(e_hi > e_lo)) throw DomainError("energy search requires e_max > e_min");
  double span = e_hi - e_lo;
  double lo = e_lo, hi = std::numeric_limits<double>::quiet_NaN();
  for (int expansion = 0; expansion <= search.expansions && std::isnan(hi); ++expansion) {
    const int m = std::max(search.scan_points, 2);
    for (int k = 0; k < m; ++k) {
      // Geometric offsets from span * 1e-9 up to span.
      const double e = e_lo + span * std::pow(1e-9, double(m - 1 - k) / (m - 1));
      if (phi(e) >= target) {
        hi = e;
        break;
      }
      lo = e;
    }
    if (std::isnan(hi)) span *= 4.0;
  }
  if (std::isnan(hi)) {
    std::ostringstream msg;
    msg << "no energy below " << e_lo + span / 4.0 << " reaches phase " << target;
    throw UnboundedSearchError(msg.str());
  }
  while (hi - lo > search.rel_tol * std::abs(hi)) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (phi(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Lowest sampled floor value.
inline double min_on_well(const InfiniteWell& well, const PhysicalContext& ctx) {
  if (!well.inner) return 0.0;
  const AlphaOrder alpha = ctx.alpha();
  const double u_end = u_of_x(well.length, alpha);
  double vmin = std::numeric_limits<double>::infinity();
  constexpr int kSamples = 2048;
  for (int i = 1; i <= kSamples; ++i) vmin = std::min(vmin, (*well.inner)(x_of_u(u_end * i / kSamples, alpha)));
  return vmin;
}

}  // namespace detail

/// phi(L; E) for an infinite well (floor clamped where E dips below v).
inline double hard_wall_phase(const InfiniteWell& well, double energy, const PhysicalContext& ctx,
                              const QuadratureSpec& spec = {}) {
  return detail::momentum_integral(Potential{well}, energy, 0.0, well.length, ctx, spec, false).value;
}

/// Solves phi(L; E) = n pi for the n-th level of an infinite well.
inline EnergyLevel quantize_hard_wall(const Potential& potential, int n, const PhysicalContext& ctx,
                                      const QuadratureSpec& spec = {}, const EnergySearch& search = {}) {
  const auto* well = std::get_if<InfiniteWell>(&potential);
  if (!well) throw ShapeError("hard-wall quantization needs an InfiniteWell potential");
  if (n < 1) throw DomainError("well quantum number must be >= 1");

  const double target = n * std::numbers::pi;
  auto phi = [&](double e) { return hard_wall_phase(*well, e, ctx, spec); };
  const double e_lo = search.e_min.value_or(detail::min_on_well(*well, ctx));
  const double u_len = u_of_x(well->length, ctx.alpha());
  const double scale = std::pow(std::numbers::pi * ctx.hbar_alpha() / u_len, 2) / (2.0 * ctx.mass_alpha());
  const double e_hi = search.e_max.value_or(e_lo + 4.0 * (n + 1) * (n + 1) * scale);

  const double e = detail::solve_monotone(phi, target, e_lo, e_hi, search);
  return {n, e, LevelMethod::HardWallSolver, std::abs(phi(e) / target - 1.0)};
}

/// Classically allowed interval of a confining potential at energy E.
/// Symmetric potentials return the half-line [0, x2].
inline Interval classical_interval(const Potential& potential, double energy, const PhysicalContext& ctx,
                                   const EnergySearch& search = {}) {
  if (const auto* osc = std::get_if<DampedOscillator>(&potential)) {
    detail::require_alpha(osc->alpha, ctx, "DampedOscillator");
    // Window reaching V = 4E, comfortably past the turning point.
    const double stiffness = 0.5 * ctx.mass_alpha() * osc->effective_frequency_squared();
    const double x_far = std::pow(4.0 * std::max(energy, 0.0) / stiffness, 0.5 / ctx.alpha().value());
    const Interval window = search.window.value_or(Interval{0.0, x_far});
    const auto roots = turning_points(potential, energy, window, ctx);
    if (roots.empty()) throw ShapeError("oscillator has no turning point in the search window");
    return {0.0, roots.front()};
  }
  if (!search.window) throw ShapeError("connection quantization needs a turning-point search window");
  const auto roots = turning_points(potential, energy, *search.window, ctx);
  for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
    const double mid = 0.5 * (roots[i] + roots[i + 1]);
    if (local_momentum(potential, energy, mid, ctx).region == RegionTag::Classical) return {roots[i], roots[i + 1]};
  }
  std::ostringstream msg;
  msg << "fewer than two turning points bracket a classical region at E = " << energy;
  throw ShapeError(msg.str());
}

/// phi between the turning points; symmetric potentials use 2 x (0, x2).
inline double connection_phase(const Potential& potential, double energy, const PhysicalContext& ctx,
                               const QuadratureSpec& spec = {}, const EnergySearch& search = {}) {
  const Interval range = classical_interval(potential, energy, ctx, search);
  const double half = detail::momentum_integral(potential, energy, range.lo, range.hi, ctx, spec, false).value;
  return is_symmetric(potential) ? 2.0 * half : half;
}

/// Solves phi(E) = (n + 1/2) pi for a potential with two turning points.
inline EnergyLevel quantize_connection(const Potential& potential, int n, const PhysicalContext& ctx,
                                       const QuadratureSpec& spec = {}, const EnergySearch& search = {}) {
  if (n < 0) throw DomainError("quantum number must be >= 0");
  if (std::holds_alternative<InfiniteWell>(potential)) {
    throw ShapeError("infinite wells use hard-wall quantization");
  }
  const double target = (n + 0.5) * std::numbers::pi;
  auto phi = [&](double e) { return connection_phase(potential, e, ctx, spec, search); };

  double e_lo = 0.0, e_hi = 1.0;
  if (const auto* osc = std::get_if<DampedOscillator>(&potential)) {
    detail::require_alpha(osc->alpha, ctx, "DampedOscillator");
    const double scale = ctx.hbar_alpha() * ctx.alpha().value() * std::sqrt(osc->effective_frequency_squared());
    e_lo = search.e_min.value_or(0.0);
    e_hi = search.e_max.value_or(e_lo + 4.0 * (n + 1) * scale);
  } else {
    if (!search.window) throw ShapeError("connection quantization needs a turning-point search window");
    const AlphaOrder alpha = ctx.alpha();
    const double u_lo = detail::u_endpoint(search.window->lo, alpha);
    const double u_hi = u_of_x(search.window->hi, alpha);
    double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
    constexpr int kSamples = 2048;
    for (int i = 1; i < kSamples; ++i) {
      const double v = potential_value(potential, x_of_u(u_lo + (u_hi - u_lo) * i / kSamples, alpha), ctx);
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
    e_lo = search.e_min.value_or(vmin);
    e_hi = search.e_max.value_or(vmax);
    // Shape check at mid-depth; below it an unresolved sliver of classical
    // region just counts as zero phase.
    classical_interval(potential, 0.5 * (e_lo + e_hi), ctx, search);
    auto guarded = [&](double e) {
      try {
        return phi(e);
      } catch (const ShapeError&) {
        if (e < 0.5 * (e_lo + e_hi)) return 0.0;
        throw;
      }
    };
    EnergySearch bounded = search;
    bounded.expansions = search.e_max ? search.expansions : 0;
    const double e = detail::solve_monotone(guarded, target, e_lo, e_hi, bounded);
    return {n, e, LevelMethod::ConnectionSolver, std::abs(phi(e) / target - 1.0)};
  }

  const double e = detail::solve_monotone(phi, target, e_lo, e_hi, search);
  return {n, e, LevelMethod::ConnectionSolver, std::abs(phi(e) / target - 1.0)};
}

}  // namespace cwkb
