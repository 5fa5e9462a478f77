#pragma once

// Physical constants, potential models and local momentum for the
// conformable Schroedinger equation
//
//   -(hbar_a^2 / 2 m^a) T_a T_a psi + V_a(x) psi = E^a psi.
//
// Energies, masses and hbar appear only through the alpha-deformed symbols
// (E^a, m^a, hbar_a^a); the library stores those values directly.

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

#include "cwkb/conformable.hpp"
#include "cwkb/errors.hpp"

namespace cwkb {

enum class UnitSystem { Natural, NuclearMeVFm };

inline std::string to_string(UnitSystem u) { return u == UnitSystem::Natural ? "natural" : "nuclear"; }

/// Constants for the alpha-decay model in MeV / fm with hbar = 1.
namespace nuclear {

inline constexpr double kK1 = 1.986;  ///< e^2 pi sqrt(2m) / (4 pi eps0 hbar), MeV^{1/2}
inline constexpr double kK2 = 1.485;  ///< sqrt(e^2 m / 4 pi eps0) 4 / hbar, MeV^{1/2} fm^{-1/2}

/// e^2 / 4 pi eps0 in MeV fm, solved from K1 and K2.
inline double coupling() {
  const double root = 4.0 * kK1 / (std::numbers::pi * std::numbers::sqrt2 * kK2);
  return root * root;
}

/// Alpha-particle mass in MeV^{-1} fm^{-2} (hbar = 1), solved from K1 and K2.
inline double mass() {
  const double root = kK2 / (4.0 * std::sqrt(coupling()));
  return root * root;
}

}  // namespace nuclear

class PhysicalContext {
 public:
  /// From Planck's constant h; hbar_a^a = h / (2 pi)^{1/a}.
  static PhysicalContext from_h(double h, double mass_alpha, AlphaOrder alpha,
                                UnitSystem units = UnitSystem::Natural) {
    return PhysicalContext(h, mass_alpha, alpha, units);
  }

  /// From hbar_a^a directly (h is back-computed and stored).
  static PhysicalContext from_hbar(double hbar_alpha, double mass_alpha, AlphaOrder alpha,
                                   UnitSystem units = UnitSystem::Natural) {
    return PhysicalContext(hbar_alpha * two_pi_root(alpha), mass_alpha, alpha, units);
  }

  static PhysicalContext natural(AlphaOrder alpha) { return from_hbar(1.0, 1.0, alpha); }

  static PhysicalContext nuclear(AlphaOrder alpha) {
    return from_hbar(1.0, std::pow(nuclear::mass(), alpha.value()), alpha, UnitSystem::NuclearMeVFm);
  }

  double h() const noexcept { return h_; }
  double hbar_alpha() const noexcept { return hbar_alpha_; }
  double mass_alpha() const noexcept { return mass_alpha_; }
  AlphaOrder alpha() const noexcept { return alpha_; }
  UnitSystem units() const noexcept { return units_; }

 private:
  PhysicalContext(double h, double mass_alpha, AlphaOrder alpha, UnitSystem units)
      : h_(h), hbar_alpha_(h / two_pi_root(alpha)), mass_alpha_(mass_alpha), alpha_(alpha), units_(units) {
    if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("h must be positive");
    if (!(mass_alpha > 0.0) || !std::isfinite(mass_alpha)) throw DomainError("mass must be positive");
  }

  static double two_pi_root(AlphaOrder alpha) { return std::pow(2.0 * std::numbers::pi, 1.0 / alpha.value()); }

  double h_;
  double hbar_alpha_;
  double mass_alpha_;
  AlphaOrder alpha_;
  UnitSystem units_;
};

// ---------------------------------------------------------------------------
// Potentials

struct ConstantPotential {
  double value = 0.0;  ///< V^a
};

/// Hard walls at 0 and L with an optional slowly varying floor v_a(x).
struct InfiniteWell {
  double length = 1.0;
  std::optional<RealFunction> inner;

  explicit InfiniteWell(double L, std::optional<RealFunction> v = std::nullopt) : length(L), inner(std::move(v)) {
    if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("well length must be positive");
  }
};

/// Bateman damped oscillator, (m^a/2)(w^{2a} - l^2/4) x^{2a}, even in x.
struct DampedOscillator {
  double omega;
  double damping;
  AlphaOrder alpha;

  DampedOscillator(double w, double l, AlphaOrder a) : omega(w), damping(l), alpha(a) {
    if (!(w > 0.0)) throw DomainError("oscillator frequency must be positive");
    if (!(l >= 0.0)) throw DomainError("damping constant must be non-negative");
    if (!(effective_frequency_squared() > 0.0)) {
      std::ostringstream msg;
      msg << "overdamped oscillator: omega^(2 alpha) - lambda^2/4 = " << effective_frequency_squared()
          << " must be > 0";
      throw DomainError(msg.str());
    }
  }

  /// w^{2a} - l^2/4
  double effective_frequency_squared() const { return std::pow(omega, 2.0 * alpha.value()) - 0.25 * damping * damping; }
};

/// Coulomb barrier A^a / (a r^a) outside the nuclear radius r1, zero inside.
struct CoulombBarrier {
  double z;
  double r1;
  AlphaOrder alpha;
  double coupling = nuclear::coupling();  ///< e^2 / 4 pi eps0

  CoulombBarrier(double charge, double inner_radius, AlphaOrder a, double e2 = nuclear::coupling())
      : z(charge), r1(inner_radius), alpha(a), coupling(e2) {
    if (!(charge >= 1.0)) throw DomainError("daughter charge z must be >= 1");
    if (!(inner_radius > 0.0)) throw DomainError("inner radius r1 must be positive");
    if (!(e2 > 0.0)) throw DomainError("Coulomb coupling must be positive");
  }

  /// A^a = 2 (z e^2/4 pi eps0)^a
  double strength() const { return 2.0 * std::pow(z * coupling, alpha.value()); }

  /// Barrier height just outside r1.
  double height() const { return strength() / (alpha.value() * std::pow(r1, alpha.value())); }

  /// Outer turning radius r2 with E^a = A^a / (a r2^a).
  double outer_radius(double energy) const {
    if (!(energy > 0.0)) throw DomainError("turning radius requires E > 0");
    return std::pow(strength() / (alpha.value() * energy), 1.0 / alpha.value());
  }
};

struct CustomPotential {
  RealFunction f;
  Interval domain{0.0, std::numeric_limits<double>::infinity()};
};

using Potential = std::variant<ConstantPotential, InfiniteWell, DampedOscillator, CoulombBarrier, CustomPotential>;

namespace detail {

inline void require_alpha(AlphaOrder stored, const PhysicalContext& ctx, const char* what) {
  if (!(stored == ctx.alpha())) {
    std::ostringstream msg;
    msg << what << " was built for alpha = " << stored.value() << " but the context has alpha = "
        << ctx.alpha().value();
    throw DomainError(msg.str());
  }
}

}  // namespace detail

/// V_a(x); +infinity outside a hard-walled region.
inline double potential_value(const Potential& potential, double x, const PhysicalContext& ctx) {
  if (!(x > 0.0)) throw DomainError("potential requires x > 0");
  const double a = ctx.alpha().value();
  return std::visit(
      [&](const auto& v) -> double {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, ConstantPotential>) {
          return v.value;
        } else if constexpr (std::is_same_v<V, InfiniteWell>) {
          if (x > v.length) return std::numeric_limits<double>::infinity();
          return v.inner ? (*v.inner)(x) : 0.0;
        } else if constexpr (std::is_same_v<V, DampedOscillator>) {
          detail::require_alpha(v.alpha, ctx, "DampedOscillator");
          return 0.5 * ctx.mass_alpha() * v.effective_frequency_squared() * std::pow(x, 2.0 * a);
        } else if constexpr (std::is_same_v<V, CoulombBarrier>) {
          detail::require_alpha(v.alpha, ctx, "CoulombBarrier");
          if (x <= v.r1) return 0.0;
          return v.strength() / (a * std::pow(x, a));
        } else {
          if (!v.domain.contains(x)) throw DomainError("x outside custom potential domain");
          return v.f(x);
        }
      },
      potential);
}

/// Natural-units overload (m^a = hbar_a^a = 1).
inline double potential_value(const Potential& potential, double x, AlphaOrder alpha) {
  return potential_value(potential, x, PhysicalContext::natural(alpha));
}

/// Whether the potential is even under x -> -x and is solved on the half-line.
inline bool is_symmetric(const Potential& potential) { return std::holds_alternative<DampedOscillator>(potential); }

// ---------------------------------------------------------------------------
// Local momentum

enum class RegionTag { Classical, Forbidden, TurningPoint };

inline std::string to_string(RegionTag r) {
  switch (r) {
    case RegionTag::Classical: return "classical";
    case RegionTag::Forbidden: return "forbidden";
    case RegionTag::TurningPoint: return "turning";
  }
  return "?";
}

struct LocalMomentum {
  double magnitude;  ///< |p^a(x)|; +infinity behind a hard wall
  RegionTag region;
};

inline constexpr double kTurningPointTolerance = 1e-9;

inline bool is_turning_point(double energy, double potential) {
  return std::abs(energy - potential) <= kTurningPointTolerance * std::max(std::abs(energy), 1.0);
}

inline RegionTag classify(double energy, double potential) {
  if (std::isinf(potential) && potential > 0) return RegionTag::Forbidden;
  if (is_turning_point(energy, potential)) return RegionTag::TurningPoint;
  return energy > potential ? RegionTag::Classical : RegionTag::Forbidden;
}

/// |p^a(x)| = sqrt(2 m^a |E^a - V_a(x)|) and the region it lies in.
inline LocalMomentum local_momentum(const Potential& potential, double energy, double x, const PhysicalContext& ctx) {
  const double v = potential_value(potential, x, ctx);
  if (std::isinf(v) && v > 0) return {std::numeric_limits<double>::infinity(), RegionTag::Forbidden};
  const RegionTag region = classify(energy, v);
  if (region == RegionTag::TurningPoint) return {0.0, region};
  return {std::sqrt(2.0 * ctx.mass_alpha() * std::abs(energy - v)), region};
}

// ---------------------------------------------------------------------------
// Probability flux

/// j_a = (hbar_a^a / 2 i m^a)(psi* T_a psi - psi T_a psi*) = (hbar_a^a / m^a) Im(psi* T_a psi).
inline double probability_flux(const ComplexFunction& psi, double x, const PhysicalContext& ctx) {
  if (!(x > 0.0)) throw DomainError("probability flux requires x > 0");
  const Complex value = psi(x);
  const Complex derivative = conf_derivative(psi, x, ctx.alpha());
  return ctx.hbar_alpha() / ctx.mass_alpha() * std::imag(std::conj(value) * derivative);
}

}  // namespace cwkb
