#pragma once

// Self-check suite run by `cwkb validate`. Every check reports the measured
// value next to its threshold. Closed-form references can be scaled by
// `closed_form_scale` to confirm that a wrong constant is caught.

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "cwkb/commands.hpp"
#include "cwkb/conformable.hpp"
#include "cwkb/quantization.hpp"
#include "cwkb/quantum_model.hpp"
#include "cwkb/reference_solver.hpp"
#include "cwkb/table.hpp"
#include "cwkb/tunneling.hpp"
#include "cwkb/wkb.hpp"

namespace cwkb {

struct CheckResult {
  std::string name;
  std::string scope;
  double measured = 0.0;
  double threshold = 0.0;
  bool passed = false;
  std::string note;
};

struct ValidationOptions {
  double closed_form_scale = 1.0;
};

namespace detail {

class CheckRunner {
 public:
  CheckRunner(std::string scope, std::string filter) : scope_(std::move(scope)), filter_(std::move(filter)) {}

  bool enabled() const { return filter_ == "all" || filter_ == scope_; }

  /// measured <= threshold passes; exceptions are reported as failures.
  void run(std::vector<CheckResult>& out, const std::string& name, double threshold,
           const std::function<double()>& measure) const {
    if (!enabled()) return;
    CheckResult r{name, scope_, 0.0, threshold, false, ""};
    try {
      r.measured = measure();
      r.passed = std::isfinite(r.measured) && r.measured <= threshold;
    } catch (const std::exception& e) {
      r.measured = std::numeric_limits<double>::infinity();
      r.note = e.what();
    }
    out.push_back(std::move(r));
  }

 private:
  std::string scope_;
  std::string filter_;
};

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace detail

inline std::vector<CheckResult> run_validation(const std::string& scope, const ValidationOptions& options = {}) {
  using detail::rel;
  std::vector<CheckResult> out;
  const double scale = options.closed_form_scale;
  const std::vector<double> alphas{0.25, 0.5, 0.75, 1.0};

  // ---------------------------------------------------------------- core
  const detail::CheckRunner core("core", scope);

  core.run(out, "u/x substitution round trip", 1e-12, [] {
    double worst = 0.0;
    for (double a : {0.3, 0.8}) {
      for (double x : {0.1, 1.0, 7.0}) worst = std::max(worst, rel(x_of_u(u_of_x(x, AlphaOrder(a)), AlphaOrder(a)), x));
    }
    return worst;
  });

  core.run(out, "derivative methods agree (limit vs chain identity)", 1e-6, [&] {
    double worst = 0.0;
    const std::vector<RealFunction> fs{RealFunction([](double x) { return std::sin(x); }),
                                       RealFunction([](double x) { return std::exp(-x); }),
                                       RealFunction([](double x) { return x * x * x; })};
    for (double a : alphas) {
      for (const auto& f : fs) {
        for (double x : {0.5, 1.0, 2.0, 4.0}) {
          const double chain = conf_derivative(f, x, AlphaOrder(a));
          const double limit = conf_derivative(f, x, AlphaOrder(a), DerivativeMethod::Limit);
          worst = std::max(worst, std::abs(chain - limit) / std::max(std::abs(chain), 1e-3));
        }
      }
    }
    return worst;
  });

  core.run(out, "inversion D(I f) = f", 1e-7, [&] {
    double worst = 0.0;
    QuadratureSpec tight;
    tight.rel_tol = 1e-13;
    tight.abs_tol = 1e-15;
    for (double a : alphas) {
      const AlphaOrder alpha(a);
      const RealFunction f([](double x) { return std::cos(x) + x; });
      const RealFunction integral([&](double x) { return conf_integral(f, 0.0, x, alpha, tight); });
      for (double x : {0.2, 0.7, 1.5, 3.0}) {
        worst = std::max(worst, std::abs(conf_derivative(integral, x, alpha) - f(x)));
      }
    }
    return worst;
  });

  core.run(out, "commutator residual (scaled)", 1e-6, [&] {
    double worst = 0.0;
    for (double a : alphas) {
      const AlphaOrder alpha(a);
      const RealFunction psi([](double x) { return x * x * std::exp(-0.3 * x); });
      for (double x : {0.5, 1.0, 2.5, 5.0}) {
        const double scale_ref = std::abs(psi(x)) + 1.0;
        worst = std::max(worst, std::abs(commutator_residual(psi, x, alpha, 1.0)) / scale_ref);
      }
    }
    return worst;
  });

  core.run(out, "alpha = 1 reduces to classical derivative and integral", 1e-9, [] {
    const AlphaOrder one(1.0);
    const RealFunction f([](double x) { return std::sin(x) * x; });
    double worst = 0.0;
    for (double x : {0.5, 1.0, 2.0}) {
      worst = std::max(worst, std::abs(conf_derivative(f, x, one) - (std::cos(x) * x + std::sin(x))));
      worst = std::max(worst, std::abs(conf_integral(f, 0.0, x, one) - (std::sin(x) - x * std::cos(x))));
    }
    const auto ctx = PhysicalContext::natural(one);
    worst = std::max(worst, std::abs(well_energy_closed(2, 1.0, ctx) - 2.0 * std::numbers::pi * std::numbers::pi));
    return worst;
  });

  core.run(out, "well eigenfunctions orthonormal (weighted inner product)", 1e-8, [&] {
    double worst = 0.0;
    for (double a : alphas) {
      const AlphaOrder alpha(a);
      for (int m = 1; m <= 4; ++m) {
        for (int n = m; n <= 4; ++n) {
          const auto ip = inner_product([&](double x) { return normalized_well_wavefunction(m, x, alpha, 1.0); },
                                        [&](double x) { return normalized_well_wavefunction(n, x, alpha, 1.0); },
                                        {0.0, 1.0}, alpha);
          worst = std::max(worst, std::abs(ip - Complex(m == n ? 1.0 : 0.0)));
        }
      }
    }
    return worst;
  });

  core.run(out, "plane-wave flux equals hbar k / m", 1e-8, [&] {
    double worst = 0.0;
    for (double a : alphas) {
      const AlphaOrder alpha(a);
      const auto ctx = PhysicalContext::from_hbar(0.7, 1.3, alpha);
      const double k = 2.0;
      const ComplexFunction psi([&](double x) { return plane_wave(x, k, alpha); });
      for (double x : {0.3, 1.0, 3.0}) {
        worst = std::max(worst, rel(probability_flux(psi, x, ctx), ctx.hbar_alpha() * k / ctx.mass_alpha()));
      }
    }
    return worst;
  });

  core.run(out, "hbar(h = 2 pi, alpha = 1) == 1", 0.0, [] {
    return std::abs(PhysicalContext::from_h(2.0 * std::numbers::pi, 1.0, AlphaOrder(1.0)).hbar_alpha() - 1.0);
  });

  // ----------------------------------------------------------------- wkb
  const detail::CheckRunner wkb("wkb", scope);

  wkb.run(out, "hard-wall solver vs closed form (n 1..10)", 1e-9, [&] {
    double worst = 0.0;
    for (double a : alphas) {
      const auto ctx = PhysicalContext::natural(AlphaOrder(a));
      const Potential well{InfiniteWell(1.0)};
      for (int n = 1; n <= 10; ++n) {
        worst = std::max(worst, rel(quantize_hard_wall(well, n, ctx).energy, scale * well_energy_closed(n, 1.0, ctx)));
      }
    }
    return worst;
  });

  wkb.run(out, "connection solver vs closed form (n 0..5)", 1e-8, [&] {
    double worst = 0.0;
    for (double a : {0.5, 1.0}) {
      const auto ctx = PhysicalContext::natural(AlphaOrder(a));
      const DampedOscillator osc(2.0, 2.0, AlphaOrder(a));
      for (int n = 0; n <= 5; ++n) {
        worst = std::max(worst, rel(quantize_connection(Potential{osc}, n, ctx).energy,
                                    scale * oscillator_energy_closed(n, osc, ctx)));
      }
    }
    return worst;
  });

  wkb.run(out, "oscillator at alpha = 1 equals sqrt(3)(n + 1/2)", 1e-9, [&] {
    double worst = 0.0;
    const auto ctx = PhysicalContext::natural(AlphaOrder(1.0));
    const Potential osc{DampedOscillator(2.0, 2.0, AlphaOrder(1.0))};
    for (int n = 0; n <= 5; ++n) {
      worst = std::max(worst, rel(quantize_connection(osc, n, ctx).energy, scale * std::sqrt(3.0) * (n + 0.5)));
    }
    return worst;
  });

  wkb.run(out, "Gamow quadrature vs closed form (3x3x3 grid)", 1e-6, [&] {
    double worst = 0.0;
    for (double a : {0.5, 0.75, 1.0}) {
      const AlphaOrder alpha(a);
      const auto ctx = PhysicalContext::nuclear(alpha);
      for (double e : {4.0, 6.0, 8.0}) {
        for (double r1 : {5.0, 7.0, 9.0}) {
          const auto q = gamow_factor(CoulombBarrier(90.0, r1, alpha), e, ctx);
          worst = std::max(worst, rel(q.gamma, scale * gamow_closed(e, q.r1, q.r2, ctx).gamma));
        }
      }
    }
    return worst;
  });

  wkb.run(out, "thin-barrier vs closed form where r1^a/r2^a <= 1e-3", 1e-2, [&] {
    double worst = 0.0;
    for (double a : {0.5, 0.75, 1.0}) {
      const AlphaOrder alpha(a);
      const auto ctx = PhysicalContext::nuclear(alpha);
      for (double e : {2.0, 5.0}) {
        for (double r1 : {1e-4, 1e-3, 1e-2}) {
          const double r2 = CoulombBarrier(90.0, r1, alpha).outer_radius(e);
          if (std::pow(r1 / r2, a) > 1e-3) continue;
          worst = std::max(worst, rel(gamow_thin_barrier(e, 90.0, r1, alpha).gamma,
                                      scale * gamow_closed(e, r1, r2, ctx).gamma));
        }
      }
    }
    return worst;
  });

  wkb.run(out, "thin-barrier at alpha = 1 equals K1 z/sqrt(E) - K2 sqrt(r1 z)", 1e-9, [&] {
    double worst = 0.0;
    for (double z : {82.0, 90.0}) {
      for (double e : {4.0, 6.0}) {
        const double r1 = 7.0;
        const double expected = nuclear::kK1 * z / std::sqrt(e) - nuclear::kK2 * std::sqrt(r1 * z);
        worst = std::max(worst, rel(gamow_thin_barrier(e, z, r1, AlphaOrder(1.0)).gamma, scale * expected));
      }
    }
    return worst;
  });

  wkb.run(out, "amplitude law A^2 D(phi) constant", 1e-8, [&] {
    double worst = 0.0;
    for (double a : alphas) {
      const auto ctx = PhysicalContext::natural(AlphaOrder(a));
      const DampedOscillator osc(2.0, 2.0, AlphaOrder(a));
      const Potential v{osc};
      const double e = scale * oscillator_energy_closed(2, osc, ctx);
      const double x2 = classical_interval(v, e, ctx).hi;
      RealFunction phi([&](double x) { return phase_integral(v, e, 0.0, x, ctx).value; },
                       [&](double x) {
                         return local_momentum(v, e, x, ctx).magnitude * std::pow(x, a - 1.0) / ctx.hbar_alpha();
                       });
      std::vector<double> values;
      for (int i = 1; i <= 20; ++i) {
        const double x = x2 * i / 22.0;
        const double p = local_momentum(v, e, x, ctx).magnitude;
        values.push_back(conf_derivative(phi, x, AlphaOrder(a)) / p);
      }
      for (double val : values) worst = std::max(worst, rel(val, values.front()));
    }
    return worst;
  });

  wkb.run(out, "S0/S1 reconstruction: amplitude and phase", 1e-9, [&] {
    double worst = 0.0;
    for (double a : alphas) {
      const auto ctx = PhysicalContext::natural(AlphaOrder(a));
      const Potential v{DampedOscillator(1.0, 0.5, AlphaOrder(a))};
      const double e = 1.0;
      const double x2 = classical_interval(v, e, ctx).hi;
      for (int i = 1; i <= 10; ++i) {
        const double x = x2 * i / 12.0;
        const auto terms = hamilton_principal_terms(v, e, 0.0, x, ctx);
        const Complex psi = reconstruct_wavefunction(terms, ctx.hbar_alpha());
        const double p = local_momentum(v, e, x, ctx).magnitude;
        const double phi = phase_integral(v, e, 0.0, x, ctx).value;
        worst = std::max(worst, std::abs(std::abs(psi) * std::sqrt(p) - 1.0));
        worst = std::max(worst, std::abs(std::remainder(std::arg(psi) - phi, 2.0 * std::numbers::pi)) * 10.0);
      }
    }
    return worst;
  });

  wkb.run(out, "phase integral strictly increasing in E", 0.0, [&] {
    double violations = 0.0;
    for (double a : alphas) {
      const auto ctx = PhysicalContext::natural(AlphaOrder(a));
      const Potential v{DampedOscillator(2.0, 1.0, AlphaOrder(a))};
      double prev = -1.0;
      for (int i = 1; i <= 50; ++i) {
        const double phi = connection_phase(v, 0.1 * i, ctx);
        if (!(phi > prev)) violations += 1.0;
        prev = phi;
      }
    }
    return violations;
  });

  // -------------------------------------------------------------- oracle
  const detail::CheckRunner oracle("oracle", scope);

  oracle.run(out, "Numerov oracle vs well closed form", 1e-5, [&] {
    double worst = 0.0;
    for (double a : alphas) {
      const auto ctx = PhysicalContext::natural(AlphaOrder(a));
      const Potential well{InfiniteWell(1.0)};
      const auto states = solve_bound_states(transform(well, ctx), 9, ctx);
      for (const auto& s : states) worst = std::max(worst, rel(s.energy, scale * well_energy_closed(s.n + 1, 1.0, ctx)));
    }
    return worst;
  });

  oracle.run(out, "Numerov oracle vs oscillator closed form", 1e-5, [&] {
    double worst = 0.0;
    for (double a : {0.5, 1.0}) {
      const auto ctx = PhysicalContext::natural(AlphaOrder(a));
      const DampedOscillator osc(2.0, 2.0, AlphaOrder(a));
      const auto states = solve_bound_states(transform(Potential{osc}, ctx), 5, ctx);
      for (const auto& s : states) worst = std::max(worst, rel(s.energy, scale * oscillator_energy_closed(s.n, osc, ctx)));
    }
    return worst;
  });

  oracle.run(out, "oracle eigenvectors orthonormal on the grid", 1e-8, [&] {
    double worst = 0.0;
    const auto ctx = PhysicalContext::natural(AlphaOrder(0.5));
    const auto states = solve_bound_states(transform(Potential{InfiniteWell(1.0)}, ctx), 4, ctx);
    const double h = states[0].u[1] - states[0].u[0];
    for (const auto& s : states) {
      for (const auto& t : states) {
        double dot = 0.0;
        for (std::size_t i = 0; i < s.psi.size(); ++i) dot += s.psi[i] * t.psi[i];
        worst = std::max(worst, std::abs(dot * h - (s.n == t.n ? 1.0 : 0.0)));
      }
    }
    return worst;
  });

  oracle.run(out, "Numerov fourth-order grid convergence (ratio near 16)", 4.0, [&] {
    const auto ctx = PhysicalContext::natural(AlphaOrder(0.5));
    const auto problem = transform(Potential{InfiniteWell(1.0)}, ctx);
    OracleOptions o;
    o.rel_tol = 1e-15;
    std::vector<double> e;
    for (std::size_t pts : {101, 201, 401}) {
      o.points = pts;
      e.push_back(solve_bound_states(problem, 2, ctx, o)[2].energy);
    }
    return std::abs((e[0] - e[1]) / (e[1] - e[2]) - 16.0);
  });

  // ---------------------------------------------------------------- cli
  const detail::CheckRunner cli("cli", scope == "all" ? "all" : "none");

  cli.run(out, "well/oscillator/decay tables byte-deterministic", 0.0, [] {
    double mismatches = 0.0;
    RunConfig well;
    well.command = "well";
    well.alphas = {0.5, 1.0};
    RunConfig osc;
    osc.command = "oscillator";
    osc.omega = 2.0;
    osc.lambda = 2.0;
    RunConfig decay;
    decay.command = "decay";
    decay.alphas = {0.75, 1.0};
    for (const auto& [config, build] :
         std::vector<std::pair<RunConfig, CommandOutput (*)(const RunConfig&)>>{
             {well, build_well_table}, {osc, build_oscillator_table}, {decay, build_decay_table}}) {
      for (const char* format : {"csv", "json"}) {
        if (build(config).table.render(format) != build(config).table.render(format)) mismatches += 1.0;
      }
    }
    return mismatches;
  });

  return out;
}

inline Table validation_table(const std::vector<CheckResult>& results) {
  Table table({"scope", "check", "measured", "threshold", "passed", "note"});
  for (const auto& r : results) {
    Cell measured = std::isfinite(r.measured) ? Cell(r.measured) : Cell(std::monostate{});
    std::string note = r.note;
    std::replace(note.begin(), note.end(), ',', ';');
    table.add_row({r.scope, r.name, measured, r.threshold, r.passed, note});
  }
  return table;
}

}  // namespace cwkb
