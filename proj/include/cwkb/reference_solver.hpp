#pragma once

// Numerov shooting oracle for the conformable Schroedinger equation.
//
// With u = x^a / a the conformable operator T_a becomes d/du exactly, so
//
//   -(hbar_a^{2a} / 2 m^a) psi''(u) + W(u) psi(u) = E^a psi(u),  W(u) = V_a(x(u)),
//
// is an ordinary Sturm-Liouville problem. Eigenvalues are located by node
// counting (oscillation theorem) and bisection; eigenvectors are built by
// outward/inward integration glued at the outer turning point.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <vector>

#include "cwkb/conformable.hpp"
#include "cwkb/errors.hpp"
#include "cwkb/quantum_model.hpp"

namespace cwkb {

enum class LeftBoundary { Dirichlet, Even, Odd };

struct TransformedProblem {
  std::function<double(double)> effective_potential;  ///< W(u)
  double u_lo = 0.0;
  double u_hi = 0.0;  ///< 0 with open_right: chosen by the solver
  bool open_right = false;  ///< decaying states truncated by a far Dirichlet wall
  bool symmetric = false;   ///< even in x; solved on u >= 0 with parity conditions
  AlphaOrder alpha{1.0};
};

struct OracleOptions {
  double rel_tol = 1e-12;
  std::size_t points = 20001;
  /// Required int kappa du between the outermost turning point and the far wall.
  double decay_exponent = 20.0;
};

struct OracleEigenpair {
  int n = 0;  ///< node count on the full domain
  double energy = 0.0;
  std::vector<double> u;
  std::vector<double> psi;  ///< trapezoid-normalized on the stored grid
};

/// Maps a potential on an x-domain to the equivalent ordinary problem in u.
inline TransformedProblem transform(const Potential& potential, const PhysicalContext& ctx, Interval x_domain = {}) {
  const AlphaOrder alpha = ctx.alpha();
  TransformedProblem out;
  out.alpha = alpha;
  auto w_of = [potential, ctx, alpha](double u) {
    // u = 0 is x = 0, where every supported potential is continuous.
    const double x = u > 0.0 ? x_of_u(u, alpha) : std::numeric_limits<double>::min();
    return potential_value(potential, x, ctx);
  };
  out.effective_potential = w_of;

  if (const auto* well = std::get_if<InfiniteWell>(&potential)) {
    out.u_lo = 0.0;
    out.u_hi = u_of_x(well->length, alpha);
    return out;
  }
  if (std::holds_alternative<DampedOscillator>(potential)) {
    out.u_lo = 0.0;
    out.u_hi = std::isfinite(x_domain.hi) ? u_of_x(x_domain.hi, alpha) : 0.0;
    out.open_right = true;
    out.symmetric = true;
    return out;
  }
  if (std::holds_alternative<CoulombBarrier>(potential)) {
    throw ShapeError("the Coulomb barrier has no bound states to solve for");
  }
  if (!(x_domain.hi > x_domain.lo) || !std::isfinite(x_domain.hi) || x_domain.lo < 0.0) {
    throw DomainError("transform needs a finite x-domain inside x >= 0 for this potential");
  }
  out.u_lo = detail::u_endpoint(x_domain.lo, alpha);
  out.u_hi = u_of_x(x_domain.hi, alpha);
  return out;
}

/// Strict sign changes, ignoring samples below 1e-12 of the peak magnitude.
inline int node_count(std::span<const double> psi) {
  if (psi.empty()) return 0;
  double peak = 0.0;
  for (double v : psi) peak = std::max(peak, std::abs(v));
  const double floor = 1e-12 * peak;
  int nodes = 0;
  int last_sign = 0;
  for (double v : psi) {
    if (std::abs(v) <= floor) continue;
    const int s = v > 0.0 ? 1 : -1;
    if (last_sign != 0 && s != last_sign) ++nodes;
    last_sign = s;
  }
  return nodes;
}

namespace detail {

class NumerovGrid {
 public:
  NumerovGrid(const TransformedProblem& problem, double u_hi, std::size_t points, const PhysicalContext& ctx)
      : u_lo_(problem.u_lo), step_((u_hi - problem.u_lo) / double(points - 1)), w_(points) {
    for (std::size_t i = 0; i < points; ++i) w_[i] = problem.effective_potential(u_lo_ + step_ * double(i));
    coupling_ = 2.0 * ctx.mass_alpha() / (ctx.hbar_alpha() * ctx.hbar_alpha());
  }

  std::size_t size() const { return w_.size(); }
  double step() const { return step_; }
  double u(std::size_t i) const { return u_lo_ + step_ * double(i); }
  double w(std::size_t i) const { return w_[i]; }
  double w_min() const { return *std::min_element(w_.begin(), w_.end()); }
  double coupling() const { return coupling_; }

  /// Sign changes of the outward solution over the whole grid (Sturm count).
  int count_nodes(double energy, LeftBoundary left) const {
    double y0, y1;
    start(energy, left, y0, y1);
    long double y_prev = y0, y = y1;
    int nodes = 0;
    int last_sign = y > 0.0L ? 1 : (y < 0.0L ? -1 : 0);
    long double f_prev = factor(0, energy), f = factor(1, energy);
    for (std::size_t i = 1; i + 1 < size(); ++i) {
      const long double f_next = factor(i + 1, energy);
      const long double y_next = ((12.0L - 10.0L * f) * y - f_prev * y_prev) / f_next;
      if (y_next != 0.0L) {
        const int s = y_next > 0.0L ? 1 : -1;
        if (last_sign != 0 && s != last_sign) ++nodes;
        last_sign = s;
      }
      y_prev = y;
      y = y_next;
      f_prev = f;
      f = f_next;
      if (std::abs(y) > 1e200L) {
        y *= 1e-200L;
        y_prev *= 1e-200L;
      }
    }
    return nodes;
  }

  /// Outward solution on [0, last], recursed in long double.
  std::vector<double> outward(double energy, LeftBoundary left, std::size_t last) const {
    std::vector<long double> y(last + 1, 0.0L);
    double y0, y1;
    start(energy, left, y0, y1);
    y[0] = y0;
    y[1] = y1;
    for (std::size_t i = 1; i < last; ++i) {
      y[i + 1] = ((12.0L - 10.0L * factor(i, energy)) * y[i] - factor(i - 1, energy) * y[i - 1]) /
                 factor(i + 1, energy);
      if (std::abs(y[i + 1]) > 1e200L) {
        for (std::size_t j = 0; j <= i + 1; ++j) y[j] *= 1e-200L;
      }
    }
    return {y.begin(), y.end()};
  }

  /// Inward solution on [first, end] from a Dirichlet wall at the end.
  std::vector<double> inward(double energy, std::size_t first) const {
    const std::size_t n = size();
    std::vector<long double> y(n, 0.0L);
    y[n - 2] = step_;
    for (std::size_t i = n - 2; i > first; --i) {
      y[i - 1] = ((12.0L - 10.0L * factor(i, energy)) * y[i] - factor(i + 1, energy) * y[i + 1]) /
                 factor(i - 1, energy);
      if (std::abs(y[i - 1]) > 1e200L) {
        for (std::size_t j = i - 1; j < n; ++j) y[j] *= 1e-200L;
      }
    }
    return {y.begin(), y.end()};
  }

 private:
  void start(double energy, LeftBoundary left, double& y0, double& y1) const {
    if (left == LeftBoundary::Even) {
      y0 = 1.0;
      y1 = double((12.0L - 10.0L * factor(0, energy)) * y0 / (2.0L * factor(1, energy)));
    } else {
      y0 = 0.0;
      y1 = step_;
    }
  }

  /// 1 + h^2 k^2(u_i) / 12 with k^2 = 2m(E - W)/hbar^2.
  long double factor(std::size_t i, double energy) const {
    const long double h = step_;
    return 1.0L + h * h * coupling_ * ((long double)energy - w_[i]) / 12.0L;
  }

  double u_lo_;
  double step_;
  std::vector<double> w_;
  double coupling_ = 1.0;
};

/// Energy at which the Sturm count steps from k to k + 1.
inline double sturm_eigenvalue(const NumerovGrid& grid, LeftBoundary left, int k, double rel_tol) {
  const double lo0 = grid.w_min();
  const double span = grid.u(grid.size() - 1) - grid.u(0);
  double offset = std::pow(std::numbers::pi / span, 2) / grid.coupling();
  double lo = lo0, hi = lo0 + offset;
  int guard = 0;
  while (grid.count_nodes(hi, left) < k + 1) {
    lo = hi;
    offset *= 2.0;
    hi = lo0 + offset;
    if (++guard > 200) throw UnboundedSearchError("oracle could not bracket eigenvalue");
  }
  while (hi - lo > rel_tol * std::max(std::abs(hi), std::numeric_limits<double>::min())) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (grid.count_nodes(mid, left) >= k + 1 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

inline std::vector<double> eigenvector(const NumerovGrid& grid, LeftBoundary left, double energy, bool open_right) {
  const std::size_t n = grid.size();
  std::vector<double> psi;
  if (!open_right) {
    psi = grid.outward(energy, left, n - 1);
    psi.back() = 0.0;
  } else {
    // Glue at the outermost classical point.
    std::size_t match = n / 2;
    for (std::size_t i = n - 1; i > 0; --i) {
      if (grid.w(i) < energy) {
        match = i;
        break;
      }
    }
    match = std::clamp<std::size_t>(match, 2, n - 3);
    auto outer = grid.outward(energy, left, match);
    auto inner = grid.inward(energy, match);
    if (inner[match] == 0.0) throw ResolutionError("inward solution vanishes at the matching point");
    const double scale = outer[match] / inner[match];
    psi.assign(n, 0.0);
    for (std::size_t i = 0; i <= match; ++i) psi[i] = outer[i];
    for (std::size_t i = match + 1; i < n; ++i) psi[i] = scale * inner[i];
  }

  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) norm += (i == 0 || i + 1 == n ? 0.5 : 1.0) * psi[i] * psi[i];
  norm = std::sqrt(norm * grid.step());
  // First significant lobe positive.
  double peak = 0.0;
  for (double v : psi) peak = std::max(peak, std::abs(v));
  double sign = 1.0;
  for (double v : psi) {
    if (std::abs(v) > 1e-3 * peak) {
      sign = v > 0.0 ? 1.0 : -1.0;
      break;
    }
  }
  for (double& v : psi) v *= sign / norm;
  return psi;
}

struct StateSlot {
  LeftBoundary left;
  int k;  ///< Sturm index within its boundary condition
  int n;  ///< full-domain node count
};

inline std::vector<StateSlot> state_slots(const TransformedProblem& problem, int n_max) {
  std::vector<StateSlot> slots;
  for (int n = 0; n <= n_max; ++n) {
    if (problem.symmetric) {
      slots.push_back({n % 2 == 0 ? LeftBoundary::Even : LeftBoundary::Odd, n / 2, n});
    } else {
      slots.push_back({LeftBoundary::Dirichlet, n, n});
    }
  }
  return slots;
}

/// int kappa du from the last classical grid point to the far wall.
inline double decay_exponent(const NumerovGrid& grid, double energy) {
  double total = 0.0;
  for (std::size_t i = grid.size() - 1; i > 0; --i) {
    const double gap = grid.w(i) - energy;
    if (gap <= 0.0) return total;
    total += std::sqrt(grid.coupling() * gap) * grid.step();
  }
  return 0.0;  // nowhere classical: wall far too close
}

}  // namespace detail

/// The n_max + 1 lowest bound states, ordered by node count.
inline std::vector<OracleEigenpair> solve_bound_states(const TransformedProblem& problem, int n_max,
                                                       const PhysicalContext& ctx, const OracleOptions& options = {}) {
  if (n_max < 0) throw DomainError("n_max must be >= 0");
  if (options.points < 16) throw DomainError("oracle grid needs at least 16 points");
  if (!(problem.alpha == ctx.alpha())) throw DomainError("problem and context disagree on alpha");
  const auto slots = detail::state_slots(problem, n_max);
  if (slots.back().k + 2 >= int(options.points)) {
    std::ostringstream msg;
    msg << options.points << " grid points cannot hold " << slots.back().k << " nodes; halve the grid spacing";
    throw ResolutionError(msg.str());
  }

  double u_hi = problem.u_hi;
  const bool adaptive = problem.open_right && !(u_hi > problem.u_lo);
  if (adaptive) u_hi = problem.u_lo + 1.0;

  for (int attempt = 0; attempt < 80; ++attempt) {
    detail::NumerovGrid grid(problem, u_hi, options.points, ctx);
    std::vector<double> energies;
    for (const auto& s : slots) energies.push_back(detail::sturm_eigenvalue(grid, s.left, s.k, options.rel_tol));
    const double top = *std::max_element(energies.begin(), energies.end());
    if (adaptive && detail::decay_exponent(grid, top) < options.decay_exponent) {
      u_hi = problem.u_lo + 1.5 * (u_hi - problem.u_lo);
      continue;
    }

    std::vector<OracleEigenpair> out;
    for (std::size_t j = 0; j < slots.size(); ++j) {
      OracleEigenpair pair;
      pair.n = slots[j].n;
      pair.energy = energies[j];
      pair.psi = detail::eigenvector(grid, slots[j].left, energies[j], problem.open_right);
      pair.u.resize(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) pair.u[i] = grid.u(i);
      const int nodes = node_count(pair.psi);
      if (nodes != slots[j].k || (j > 0 && !(energies[j] > energies[j - 1]))) {
        std::ostringstream msg;
        msg << "state " << pair.n << " has " << nodes << " nodes (expected " << slots[j].k
            << "); halve the grid spacing";
        throw ResolutionError(msg.str());
      }
      out.push_back(std::move(pair));
    }
    return out;
  }
  throw ResolutionError("could not place the far wall deep enough in the forbidden region");
}

/// Cubic interpolation of an eigenvector at u (zero outside the grid).
inline double interpolate(const OracleEigenpair& state, double u) {
  const auto& grid = state.u;
  if (grid.size() < 4 || u < grid.front() || u > grid.back()) return 0.0;
  const double h = grid[1] - grid[0];
  const double t = (u - grid.front()) / h;
  auto i = static_cast<std::ptrdiff_t>(std::floor(t)) - 1;
  i = std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(grid.size()) - 4);
  const double s = t - double(i);
  const double* y = state.psi.data() + i;
  // Lagrange through nodes s = 0, 1, 2, 3.
  return -y[0] * (s - 1) * (s - 2) * (s - 3) / 6.0 + y[1] * s * (s - 2) * (s - 3) / 2.0 -
         y[2] * s * (s - 1) * (s - 3) / 2.0 + y[3] * s * (s - 1) * (s - 2) / 6.0;
}

}  // namespace cwkb
