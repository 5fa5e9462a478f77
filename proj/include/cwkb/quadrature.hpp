#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature.
//
// Panels are bisected worst-first until the summed error estimate meets the
// tolerance. Kronrod nodes never touch the panel ends, so integrable
// endpoint singularities (square-root zeros at WKB turning points, u^{-1/2}
// weights) are resolved by repeated halving of the end panels.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "cwkb/errors.hpp"

namespace cwkb {

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  /// Maximum bisection depth of any single panel.
  int max_subdivisions = 60;
  /// Hard cap on the number of live panels.
  int max_panels = 20000;

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw DomainError("quadrature tolerances must be positive");
    if (max_subdivisions < 1 || max_panels < 1) throw DomainError("quadrature limits must be >= 1");
  }
};

template <class T>
struct QuadratureResult {
  T value{};
  double error = 0.0;
  int panels = 0;
};

namespace detail {

// Abscissae and weights from QUADPACK (qk15).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  double value, error;
  int depth;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel gauss_kronrod_15(F&& f, double a, double b, int depth) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[j] * sum;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  if (!std::isfinite(kronrod)) {
    throw EvaluationError("integrand is not finite on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  // Floor at round-off of the panel magnitude so converged panels stop splitting.
  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * std::abs(kronrod);
  return {a, b, kronrod, std::max(std::abs(kronrod - gauss), roundoff), depth};
}

}  // namespace detail

/// Integrates a real integrand over [a, b].
template <class F>
QuadratureResult<double> integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
  spec.validate();
  if (a == b) return {};
  if (!(std::isfinite(a) && std::isfinite(b))) throw DomainError("integration limits must be finite");
  const double sign = a < b ? 1.0 : -1.0;
  if (a > b) std::swap(a, b);

  std::priority_queue<detail::Panel> panels;
  panels.push(detail::gauss_kronrod_15(f, a, b, 0));
  double total = panels.top().value;
  double error = panels.top().error;
  std::vector<detail::Panel> frozen;  // panels at maximum depth

  while (error > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
    if (panels.empty() || static_cast<int>(panels.size() + frozen.size()) >= spec.max_panels) {
      std::ostringstream msg;
      msg << "quadrature did not converge on [" << a << ", " << b << "]: estimate " << total
          << ", error bound " << error;
      throw AccuracyError(msg.str(), sign * total, error);
    }
    detail::Panel worst = panels.top();
    panels.pop();
    if (worst.depth >= spec.max_subdivisions) {
      frozen.push_back(worst);
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = detail::gauss_kronrod_15(f, worst.a, mid, worst.depth + 1);
    auto right = detail::gauss_kronrod_15(f, mid, worst.b, worst.depth + 1);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }

  // Re-sum from scratch; the running total accumulates cancellation error.
  double sum = 0.0, err = 0.0;
  int count = static_cast<int>(panels.size() + frozen.size());
  for (const auto& p : frozen) sum += p.value, err += p.error;
  while (!panels.empty()) {
    sum += panels.top().value;
    err += panels.top().error;
    panels.pop();
  }
  return {sign * sum, err, count};
}

/// Complex integrand: real and imaginary parts are integrated independently.
template <class F>
QuadratureResult<std::complex<double>> integrate_complex(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
  auto re = integrate([&](double x) { return std::real(f(x)); }, a, b, spec);
  auto im = integrate([&](double x) { return std::imag(f(x)); }, a, b, spec);
  return {{re.value, im.value}, std::hypot(re.error, im.error), re.panels + im.panels};
}

}  // namespace cwkb
