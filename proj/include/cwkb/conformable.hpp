#pragma once

// Conformable calculus of order alpha on the positive half-line.
//
//   T_a f(x) = lim_{eps->0} [f(x + eps x^{1-a}) - f(x)] / eps = x^{1-a} f'(x)
//   I_a f(x) = int_a^x f(t) t^{a-1} dt
//
// Under u = x^a / a the weight t^{a-1} dt becomes du and T_a becomes d/du,
// which is how every integral here is evaluated.

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <sstream>
#include <type_traits>

#include "cwkb/errors.hpp"
#include "cwkb/quadrature.hpp"

namespace cwkb {

using Complex = std::complex<double>;

/// Deformation order alpha, 0 < alpha <= 1.
class AlphaOrder {
 public:
  explicit AlphaOrder(double value) : value_(value) {
    if (!(value > 0.0 && value <= 1.0)) {
      std::ostringstream msg;
      msg << "alpha must lie in (0, 1], got " << value;
      throw DomainError(msg.str());
    }
  }

  double value() const noexcept { return value_; }
  bool is_classical() const noexcept { return value_ == 1.0; }

  friend bool operator==(AlphaOrder, AlphaOrder) = default;

 private:
  double value_;
};

struct Interval {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
  double length() const noexcept { return hi - lo; }
};

/// Function of a positive real variable with an optional analytic derivative.
template <class T>
struct Function {
  std::function<T(double)> value;
  std::function<T(double)> derivative;
  Interval domain{0.0, std::numeric_limits<double>::infinity()};

  Function() = default;

  template <class F, class = std::enable_if_t<std::is_invocable_r_v<T, F, double> &&
                                             !std::is_same_v<std::decay_t<F>, Function>>>
  Function(F f) : value(std::move(f)) {}  // NOLINT(google-explicit-constructor)

  template <class F, class D>
  Function(F f, D df, Interval dom = {0.0, std::numeric_limits<double>::infinity()})
      : value(std::move(f)), derivative(std::move(df)), domain(dom) {}

  bool has_derivative() const noexcept { return static_cast<bool>(derivative); }

  T operator()(double x) const {
    if (!value) throw EvaluationError("function has no value channel");
    T y = value(x);
    if (!is_finite(y)) {
      std::ostringstream msg;
      msg << "function is not finite at x = " << x;
      throw EvaluationError(msg.str());
    }
    return y;
  }

  static bool is_finite(double y) { return std::isfinite(y); }
  static bool is_finite(Complex y) { return std::isfinite(y.real()) && std::isfinite(y.imag()); }
};

using RealFunction = Function<double>;
using ComplexFunction = Function<Complex>;

// ---------------------------------------------------------------------------
// Coordinate substitution

inline double u_of_x(double x, AlphaOrder alpha) {
  if (!(x > 0.0)) throw DomainError("u_of_x requires x > 0");
  const double a = alpha.value();
  return std::pow(x, a) / a;
}

inline double x_of_u(double u, AlphaOrder alpha) {
  if (!(u > 0.0)) throw DomainError("x_of_u requires u > 0");
  const double a = alpha.value();
  return std::pow(a * u, 1.0 / a);
}

namespace detail {

// u-image of an integration endpoint; x = 0 maps to u = 0.
inline double u_endpoint(double x, AlphaOrder alpha) {
  if (x == 0.0) return 0.0;
  return u_of_x(x, alpha);
}

inline double x_endpoint(double u, AlphaOrder alpha) {
  if (u == 0.0) return 0.0;
  return x_of_u(u, alpha);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Derivative

enum class DerivativeMethod { ChainIdentity, Limit };

/// Conformable derivative T_alpha f at x > 0.
template <class T>
T conf_derivative(const Function<T>& f, double x, AlphaOrder alpha,
                  DerivativeMethod method = DerivativeMethod::ChainIdentity) {
  if (!(x > 0.0)) throw DomainError("conformable derivative requires x > 0");
  const double a = alpha.value();
  const double weight = std::pow(x, 1.0 - a);

  if (method == DerivativeMethod::ChainIdentity) {
    if (f.has_derivative()) return weight * f.derivative(x);
    double h = std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(x, 1.0);
    if (x - h <= f.domain.lo) h = 0.5 * (x - f.domain.lo);
    // Make the step exactly representable so (x+h)-(x-h) == 2h.
    volatile double xp = x + h;
    h = xp - x;
    const T slope = (f(x + h) - f(x - h)) / (2.0 * h);
    return weight * slope;
  }

  // Forward difference quotient of the limit definition at eps = c x^alpha,
  // c in {1e-2, 1e-3, 1e-4}, followed by two Richardson levels (ratio 10).
  const double scale = std::pow(x, a);
  const T fx = f(x);
  auto quotient = [&](double c) {
    const double eps = c * scale;
    return (f(x + eps * weight) - fx) / eps;
  };
  const T q1 = quotient(1e-2);
  const T q2 = quotient(1e-3);
  const T q3 = quotient(1e-4);
  const T r1 = (10.0 * q2 - q1) / 9.0;
  const T r2 = (10.0 * q3 - q2) / 9.0;
  return (100.0 * r2 - r1) / 99.0;
}

// ---------------------------------------------------------------------------
// Integral

/// int_a^b f(x) x^{alpha-1} dx with an error estimate, 0 <= a < b.
template <class T>
QuadratureResult<T> conf_integral_estimate(const Function<T>& f, double a, double b, AlphaOrder alpha,
                                           const QuadratureSpec& spec = {}) {
  if (!(a >= 0.0) || !(b > a)) {
    if (a == b && a >= 0.0) return {};
    throw DomainError("conformable integral requires 0 <= a < b");
  }
  const double ua = detail::u_endpoint(a, alpha);
  const double ub = detail::u_endpoint(b, alpha);
  auto g = [&](double u) { return f(x_of_u(u, alpha)); };
  if constexpr (std::is_same_v<T, Complex>) {
    return integrate_complex(g, ua, ub, spec);
  } else {
    return integrate(g, ua, ub, spec);
  }
}

template <class T>
T conf_integral(const Function<T>& f, double a, double b, AlphaOrder alpha, const QuadratureSpec& spec = {}) {
  return conf_integral_estimate(f, a, b, alpha, spec).value;
}

// ---------------------------------------------------------------------------
// Hilbert-space structure

/// <g|f> = int conj(g) f |x|^{alpha-1} dx over a domain inside x >= 0.
template <class F, class G>
Complex inner_product(const F& f, const G& g, Interval domain, AlphaOrder alpha, const QuadratureSpec& spec = {}) {
  ComplexFunction integrand([&](double x) { return std::conj(Complex(g(x))) * Complex(f(x)); });
  return conf_integral(integrand, domain.lo, domain.hi, alpha, spec);
}

/// <psi|A psi> where `applied` is A acting on psi.
template <class F, class G>
Complex expectation(const F& psi, const G& applied, Interval domain, AlphaOrder alpha,
                    const QuadratureSpec& spec = {}) {
  return inner_product(applied, psi, domain, alpha, spec);
}

/// ([x, p] psi)(x) - i hbar |x|^{1-alpha} psi(x), with p = -i hbar T_alpha.
template <class T>
Complex commutator_residual(const Function<T>& psi, double x, AlphaOrder alpha, double hbar_alpha) {
  if (!(x > 0.0)) throw DomainError("commutator residual requires x > 0");
  const Complex i(0.0, 1.0);
  const auto momentum = [&](const ComplexFunction& f) { return -i * hbar_alpha * conf_derivative(f, x, alpha); };

  ComplexFunction psi_c([&](double t) { return Complex(psi(t)); });
  ComplexFunction x_psi([&](double t) { return t * Complex(psi(t)); });
  x_psi.domain = psi_c.domain = psi.domain;
  if (psi.has_derivative()) {
    psi_c.derivative = [&](double t) { return Complex(psi.derivative(t)); };
    x_psi.derivative = [&](double t) { return Complex(psi(t)) + t * Complex(psi.derivative(t)); };
  }

  const Complex commutator = x * momentum(psi_c) - momentum(x_psi);
  return commutator - i * hbar_alpha * std::pow(x, 1.0 - alpha.value()) * Complex(psi(x));
}

}  // namespace cwkb
