#pragma once

// Alpha-decay tunneling through the conformable Coulomb barrier.
//
//   gamma = (1/hbar) int_{r1}^{r2} sqrt(2m (A/(a r^a) - E)) r^{a-1} dr,   T = exp(-2 gamma)
//
// With rho = r^a the integral is elementary:
//
//   gamma = sqrt(2mE) / (a hbar) [rho2 arccos sqrt(rho1/rho2) - sqrt(rho1 (rho2 - rho1))]

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cwkb/errors.hpp"
#include "cwkb/quantum_model.hpp"
#include "cwkb/wkb.hpp"

namespace cwkb {

enum class TunnelingMethod { Quadrature, ClosedForm, ThinBarrier };

inline std::string to_string(TunnelingMethod m) {
  switch (m) {
    case TunnelingMethod::Quadrature: return "quadrature";
    case TunnelingMethod::ClosedForm: return "closed-form";
    case TunnelingMethod::ThinBarrier: return "thin-barrier";
  }
  return "?";
}

/// r1^a / r2^a above which the thin-barrier expansion is flagged.
inline constexpr double kThinBarrierRatioLimit = 0.01;

struct TunnelingResult {
  double r1 = 0.0;
  double r2 = 0.0;
  double gamma = 0.0;
  double transmission = 1.0;
  TunnelingMethod method = TunnelingMethod::Quadrature;
  double error = 0.0;  ///< quadrature error estimate on gamma
  /// r1^a / r2^a
  double ratio = 0.0;
  bool thin_barrier_valid = true;
};

namespace detail {

inline TunnelingResult finish(double r1, double r2, double gamma, TunnelingMethod method, AlphaOrder alpha) {
  TunnelingResult out;
  out.r1 = r1;
  out.r2 = r2;
  out.gamma = gamma;
  out.transmission = std::exp(-2.0 * gamma);
  out.method = method;
  out.ratio = r2 > 0.0 ? std::pow(r1 / r2, alpha.value()) : 0.0;
  out.thin_barrier_valid = out.ratio <= kThinBarrierRatioLimit;
  return out;
}

inline void require_energy(double energy) {
  if (!(energy > 0.0) || !std::isfinite(energy)) throw DomainError("tunneling energy must be positive");
}

}  // namespace detail

/// Gamow factor by quadrature of the conformable barrier integral.
inline TunnelingResult gamow_factor(const CoulombBarrier& barrier, double energy, const PhysicalContext& ctx,
                                    const QuadratureSpec& spec = {}) {
  detail::require_energy(energy);
  detail::require_alpha(barrier.alpha, ctx, "CoulombBarrier");
  const double top = barrier.height();
  if (is_turning_point(energy, top)) {
    return detail::finish(barrier.r1, barrier.r1, 0.0, TunnelingMethod::Quadrature, ctx.alpha());
  }
  if (energy > top) {
    std::ostringstream msg;
    msg << "E = " << energy << " is above the barrier top " << top << " at r1 = " << barrier.r1;
    throw NoBarrierError(msg.str());
  }
  const double r2 = barrier.outer_radius(energy);
  const auto integral = barrier_integral(Potential{barrier}, energy, barrier.r1, r2, ctx, spec);
  auto out = detail::finish(barrier.r1, r2, integral.value, TunnelingMethod::Quadrature, ctx.alpha());
  out.error = integral.error;
  return out;
}

/// Closed-form Gamow factor for turning radii r1 <= r2.
inline TunnelingResult gamow_closed(double energy, double r1, double r2, const PhysicalContext& ctx) {
  detail::require_energy(energy);
  if (!(r1 > 0.0)) throw DomainError("r1 must be positive");
  if (r1 > r2) throw OrderingError("gamow_closed requires r1 <= r2");
  const double a = ctx.alpha().value();
  const double rho1 = std::pow(r1, a);
  const double rho2 = std::pow(r2, a);
  const double cosine = std::clamp(std::sqrt(rho1 / rho2), 0.0, 1.0);
  const double bracket = rho2 * std::acos(cosine) - std::sqrt(rho1 * std::max(0.0, rho2 - rho1));
  const double gamma = std::sqrt(2.0 * ctx.mass_alpha() * energy) / (a * ctx.hbar_alpha()) * bracket;
  return detail::finish(r1, r2, gamma, TunnelingMethod::ClosedForm, ctx.alpha());
}

/// Thin-barrier (r1^a << r2^a) Gamow factor in nuclear units:
///   gamma = [K1^a (pi sqrt2)^{1-a} z^a / (a sqrt(E)) - K2^a 4^{1-a} sqrt(r1^a z^a / a)] / a
/// which is K1 z / sqrt(E) - K2 sqrt(r1 z) at a = 1.
inline TunnelingResult gamow_thin_barrier(double energy, double z, double r1, AlphaOrder alpha) {
  detail::require_energy(energy);
  if (!(z >= 0.0)) throw DomainError("charge must be non-negative");
  if (!(r1 > 0.0)) throw DomainError("r1 must be positive");
  if (z == 0.0) return detail::finish(r1, r1, 0.0, TunnelingMethod::ThinBarrier, alpha);

  const double a = alpha.value();
  const double coulomb = std::pow(nuclear::kK1, a) * std::pow(std::numbers::pi * std::numbers::sqrt2, 1.0 - a) *
                         std::pow(z, a) / (a * std::sqrt(energy));
  const double surface = std::pow(nuclear::kK2, a) * std::pow(4.0, 1.0 - a) * std::sqrt(std::pow(r1 * z, a) / a);
  const double gamma = (coulomb - surface) / a;
  const double r2 = std::pow(2.0 * std::pow(z * nuclear::coupling(), a) / (a * energy), 1.0 / a);
  return detail::finish(r1, r2, gamma, TunnelingMethod::ThinBarrier, alpha);
}

}  // namespace cwkb
