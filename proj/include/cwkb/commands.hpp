#pragma once

// Table builders behind the command-line subcommands. Each builder takes a
// validated RunConfig and returns a Table; nothing here touches argv or I/O
// except reading the inner-potential file.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cwkb/conformable.hpp"
#include "cwkb/quantization.hpp"
#include "cwkb/quantum_model.hpp"
#include "cwkb/reference_solver.hpp"
#include "cwkb/table.hpp"
#include "cwkb/tunneling.hpp"
#include "cwkb/wkb.hpp"

namespace cwkb {

struct RunConfig {
  std::string command = "well";
  std::vector<double> alphas{1.0};
  std::optional<UnitSystem> units;  ///< unset: natural, nuclear for decay
  std::string format = "csv";
  std::string out;                  ///< empty: standard output
  double tol = 1e-10;               ///< quadrature relative tolerance
  double hbar = 1.0;                ///< hbar_a^a, natural units
  double mass = 1.0;                ///< m^a, natural units

  // well
  double length = 1.0;
  std::optional<int> n_max;
  std::string inner_table;

  // oscillator
  double omega = 1.0;
  double lambda = 0.0;

  // decay
  double z = 90.0;
  double energy = 4.27;
  double r1 = 7.0;

  // wavefunction
  std::string potential = "well";
  int n = 1;
  std::optional<double> state_energy;
  std::optional<double> x_min;
  std::optional<double> x_max;
  int points = 101;

  // validate
  std::string scope = "all";

  UnitSystem resolved_units() const {
    return units.value_or(command == "decay" ? UnitSystem::NuclearMeVFm : UnitSystem::Natural);
  }

  int resolved_n_max() const { return n_max.value_or(command == "oscillator" ? 2 : 3); }

  QuadratureSpec quadrature() const {
    QuadratureSpec spec;
    spec.rel_tol = tol;
    return spec;
  }

  PhysicalContext context(AlphaOrder alpha) const {
    if (resolved_units() == UnitSystem::NuclearMeVFm) return PhysicalContext::nuclear(alpha);
    return PhysicalContext::from_hbar(hbar, mass, alpha, UnitSystem::Natural);
  }

  /// Checks every construction invariant before any computation runs.
  void validate() const {
    static const std::vector<std::string> kCommands{"well", "oscillator", "decay", "wavefunction", "validate"};
    if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end()) {
      throw ParseError("unknown command '" + command + "'");
    }
    if (format != "csv" && format != "json") throw ParseError("format must be csv or json");
    if (alphas.empty()) throw ParseError("at least one alpha is required");
    if (!(tol > 0.0)) throw ParseError("--tol must be positive");
    if (points < 2) throw ParseError("--points must be >= 2");
    if (resolved_n_max() < 0) throw ParseError("--n-max must be >= 0");
    if (scope != "all" && scope != "core" && scope != "wkb" && scope != "oracle") {
      throw ParseError("validate scope must be all, core, wkb or oracle");
    }
    if (potential != "well" && potential != "oscillator") throw ParseError("--potential must be well or oscillator");
    for (double a : alphas) {
      const AlphaOrder alpha(a);
      (void)context(alpha);
      if (command == "well" || (command == "wavefunction" && potential == "well")) (void)InfiniteWell(length);
      if (command == "oscillator" || (command == "wavefunction" && potential == "oscillator")) {
        (void)DampedOscillator(omega, lambda, alpha);
      }
      if (command == "decay") (void)CoulombBarrier(z, r1, alpha);
    }
    if (command == "decay" && !(energy > 0.0)) throw ParseError("--E must be positive");
    if (command == "wavefunction" && n < (potential == "well" ? 1 : 0)) throw ParseError("--n out of range");
  }
};

inline void to_json(nlohmann::json& j, const RunConfig& c) {
  j = nlohmann::json{{"command", c.command}, {"alpha", c.alphas},   {"format", c.format}, {"out", c.out},
                     {"tol", c.tol},         {"hbar", c.hbar},      {"mass", c.mass},     {"L", c.length},
                     {"inner", c.inner_table}, {"omega", c.omega},  {"lambda", c.lambda}, {"z", c.z},
                     {"E", c.energy},        {"r1", c.r1},          {"potential", c.potential}, {"n", c.n},
                     {"points", c.points},   {"scope", c.scope}};
  j["units"] = c.units ? nlohmann::json(to_string(*c.units)) : nlohmann::json(nullptr);
  j["n_max"] = c.n_max ? nlohmann::json(*c.n_max) : nlohmann::json(nullptr);
  j["state_energy"] = c.state_energy ? nlohmann::json(*c.state_energy) : nlohmann::json(nullptr);
  j["x_min"] = c.x_min ? nlohmann::json(*c.x_min) : nlohmann::json(nullptr);
  j["x_max"] = c.x_max ? nlohmann::json(*c.x_max) : nlohmann::json(nullptr);
}

inline UnitSystem parse_units(const std::string& s) {
  if (s == "natural") return UnitSystem::Natural;
  if (s == "nuclear") return UnitSystem::NuclearMeVFm;
  throw ParseError("units must be natural or nuclear, got '" + s + "'");
}

inline void from_json(const nlohmann::json& j, RunConfig& c) {
  auto opt = [&](const char* key, auto& field) {
    if (j.contains(key) && !j.at(key).is_null()) j.at(key).get_to(field);
  };
  opt("command", c.command);
  opt("alpha", c.alphas);
  opt("format", c.format);
  opt("out", c.out);
  opt("tol", c.tol);
  opt("hbar", c.hbar);
  opt("mass", c.mass);
  opt("L", c.length);
  opt("inner", c.inner_table);
  opt("omega", c.omega);
  opt("lambda", c.lambda);
  opt("z", c.z);
  opt("E", c.energy);
  opt("r1", c.r1);
  opt("potential", c.potential);
  opt("n", c.n);
  opt("points", c.points);
  opt("scope", c.scope);
  if (j.contains("units") && !j.at("units").is_null()) c.units = parse_units(j.at("units").get<std::string>());
  if (j.contains("n_max") && !j.at("n_max").is_null()) c.n_max = j.at("n_max").get<int>();
  if (j.contains("state_energy") && !j.at("state_energy").is_null()) c.state_energy = j.at("state_energy").get<double>();
  if (j.contains("x_min") && !j.at("x_min").is_null()) c.x_min = j.at("x_min").get<double>();
  if (j.contains("x_max") && !j.at("x_max").is_null()) c.x_max = j.at("x_max").get<double>();
}

inline bool operator==(const RunConfig& a, const RunConfig& b) {
  return nlohmann::json(a) == nlohmann::json(b);
}

// ---------------------------------------------------------------------------
// Inner potential tables

/// Linear interpolation through (x, v) samples, clamped outside the table.
class PiecewiseLinear {
 public:
  PiecewiseLinear(std::vector<double> x, std::vector<double> v) : x_(std::move(x)), v_(std::move(v)) {
    if (x_.size() < 2 || x_.size() != v_.size()) throw ParseError("potential table needs at least two rows");
    for (std::size_t i = 1; i < x_.size(); ++i) {
      if (!(x_[i] > x_[i - 1])) throw ParseError("potential table x must be strictly increasing", int(i) + 1);
    }
  }

  double operator()(double x) const {
    if (x <= x_.front()) return v_.front();
    if (x >= x_.back()) return v_.back();
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t i = std::size_t(it - x_.begin()) - 1;
    const double t = (x - x_[i]) / (x_[i + 1] - x_[i]);
    return v_[i] + t * (v_[i + 1] - v_[i]);
  }

  const std::vector<double>& x() const noexcept { return x_; }
  const std::vector<double>& v() const noexcept { return v_; }

 private:
  std::vector<double> x_;
  std::vector<double> v_;
};

/// Two-column CSV; blank lines and '#' comments are skipped, and a
/// non-numeric first line is taken as a header.
inline PiecewiseLinear parse_potential_table(std::istream& in) {
  std::vector<double> xs, vs;
  std::string line;
  int number = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto comma = line.find(',');
    bool ok = comma != std::string::npos && line.find(',', comma + 1) == std::string::npos;
    double x = 0.0, v = 0.0;
    if (ok) {
      try {
        std::size_t used = 0;
        const std::string a = line.substr(0, comma), b = line.substr(comma + 1);
        x = std::stod(a, &used);
        ok = a.find_first_not_of(" \t", used) == std::string::npos;
        v = std::stod(b, &used);
        ok = ok && b.find_first_not_of(" \t", used) == std::string::npos;
      } catch (const std::exception&) {
        ok = false;
      }
    }
    if (!ok) {
      if (!seen_content) {
        seen_content = true;
        continue;  // header
      }
      throw ParseError("expected 'x,v' with two numbers", number);
    }
    seen_content = true;
    if (!std::isfinite(x) || !std::isfinite(v)) throw ParseError("non-finite value in potential table", number);
    if (!xs.empty() && !(x > xs.back())) throw ParseError("potential table x must be strictly increasing", number);
    xs.push_back(x);
    vs.push_back(v);
  }
  return PiecewiseLinear(std::move(xs), std::move(vs));
}

inline PiecewiseLinear load_potential_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open potential table '" + path + "'");
  return parse_potential_table(in);
}

/// Points where |T_a p| hbar / p^2 exceeds 0.1 (the potential is not slowly varying).
inline std::vector<std::string> slowly_varying_warnings(const PiecewiseLinear& table, double length, double energy,
                                                        const PhysicalContext& ctx) {
  std::vector<std::string> warnings;
  const double a = ctx.alpha().value();
  const auto& xs = table.x();
  const auto& vs = table.v();
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double x = 0.5 * (xs[i] + xs[i + 1]);
    if (!(x > 0.0) || x > length) continue;
    const double slope = (vs[i + 1] - vs[i]) / (xs[i + 1] - xs[i]);
    const double gap = energy - table(x);
    if (!(gap > 0.0)) continue;
    const double p = std::sqrt(2.0 * ctx.mass_alpha() * gap);
    const double dp = std::pow(x, 1.0 - a) * (-ctx.mass_alpha() * slope / p);
    const double criterion = std::abs(dp) * ctx.hbar_alpha() / (p * p);
    if (criterion > 0.1) {
      std::ostringstream msg;
      msg << "potential not slowly varying at x = " << x << " for E = " << energy << " (criterion " << criterion
          << " > 0.1)";
      warnings.push_back(msg.str());
    }
  }
  return warnings;
}

// ---------------------------------------------------------------------------
// Tables

struct CommandOutput {
  Table table;
  std::vector<std::string> warnings;
};

inline double relative_difference(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline CommandOutput build_well_table(const RunConfig& config) {
  std::optional<PiecewiseLinear> inner;
  if (!config.inner_table.empty()) inner = load_potential_table(config.inner_table);
  const int n_max = config.resolved_n_max();

  CommandOutput result{Table({"alpha", "n", "E_closed", "E_wkb", "E_oracle", "rel_wkb_closed", "rel_oracle_closed",
                              "rel_oracle_wkb", "wkb_residual"}),
                       {}};
  for (double a : config.alphas) {
    const AlphaOrder alpha(a);
    const PhysicalContext ctx = config.context(alpha);
    std::optional<RealFunction> floor;
    if (inner) floor = RealFunction([table = *inner](double x) { return table(x); });
    const Potential well{InfiniteWell(config.length, floor)};
    if (n_max < 1) continue;
    const auto oracle = solve_bound_states(transform(well, ctx), n_max - 1, ctx);
    for (int n = 1; n <= n_max; ++n) {
      const auto level = quantize_hard_wall(well, n, ctx, config.quadrature());
      const double e_oracle = oracle[std::size_t(n - 1)].energy;
      std::vector<Cell> row{a, std::int64_t(n)};
      if (inner) {
        row.insert(row.end(), {std::monostate{}, level.energy, e_oracle, std::monostate{}, std::monostate{},
                               relative_difference(e_oracle, level.energy), level.residual});
        for (auto& w : slowly_varying_warnings(*inner, config.length, level.energy, ctx)) {
          result.warnings.push_back("alpha " + format_number(a) + ", n " + std::to_string(n) + ": " + w);
        }
      } else {
        const double closed = well_energy_closed(n, config.length, ctx);
        row.insert(row.end(), {closed, level.energy, e_oracle, relative_difference(level.energy, closed),
                               relative_difference(e_oracle, closed), relative_difference(e_oracle, level.energy),
                               level.residual});
      }
      result.table.add_row(std::move(row));
    }
  }
  return result;
}

inline CommandOutput build_oscillator_table(const RunConfig& config) {
  const int n_max = config.resolved_n_max();
  CommandOutput result{Table({"alpha", "n", "E_closed", "E_wkb", "E_oracle", "rel_wkb_closed", "rel_oracle_closed",
                              "rel_oracle_wkb", "wkb_residual"}),
                       {}};
  for (double a : config.alphas) {
    const AlphaOrder alpha(a);
    const PhysicalContext ctx = config.context(alpha);
    const DampedOscillator osc(config.omega, config.lambda, alpha);
    const Potential potential{osc};
    const auto oracle = solve_bound_states(transform(potential, ctx), n_max, ctx);
    for (int n = 0; n <= n_max; ++n) {
      const auto level = quantize_connection(potential, n, ctx, config.quadrature());
      const double closed = oscillator_energy_closed(n, osc, ctx);
      const double e_oracle = oracle[std::size_t(n)].energy;
      result.table.add_row({a, std::int64_t(n), closed, level.energy, e_oracle,
                            relative_difference(level.energy, closed), relative_difference(e_oracle, closed),
                            relative_difference(e_oracle, level.energy), level.residual});
    }
  }
  return result;
}

inline CommandOutput build_decay_table(const RunConfig& config) {
  CommandOutput result{Table({"alpha", "method", "gamma", "transmission", "log10_transmission", "r1", "r2", "ratio",
                              "thin_barrier_valid", "rel_vs_closed"}),
                       {}};
  for (double a : config.alphas) {
    const AlphaOrder alpha(a);
    const PhysicalContext ctx = config.context(alpha);
    const CoulombBarrier barrier(config.z, config.r1, alpha);
    const auto quadrature = gamow_factor(barrier, config.energy, ctx, config.quadrature());
    const auto closed = gamow_closed(config.energy, quadrature.r1, quadrature.r2, ctx);
    const auto thin = gamow_thin_barrier(config.energy, config.z, config.r1, alpha);
    if (ctx.units() != UnitSystem::NuclearMeVFm) {
      result.warnings.emplace_back("thin-barrier row uses the nuclear K1, K2 constants regardless of --units");
    }
    for (const auto* r : {&quadrature, &closed, &thin}) {
      if (!(r->transmission > 0.0 && r->transmission <= 1.0)) {
        throw Error("transmission outside (0, 1] for method " + to_string(r->method));
      }
      const double rel = closed.gamma > 0.0 ? relative_difference(r->gamma, closed.gamma) : std::abs(r->gamma);
      result.table.add_row({a, to_string(r->method), r->gamma, r->transmission, -2.0 * r->gamma / std::log(10.0),
                            r->r1, r->r2, r->ratio, r->thin_barrier_valid, rel});
    }
  }
  return result;
}

namespace detail {

struct WavefunctionSetup {
  Potential potential;
  double energy;
  Interval domain;
  WkbCoefficients coefficients;
};

inline WavefunctionSetup wavefunction_setup(const RunConfig& config, const PhysicalContext& ctx) {
  const QuadratureSpec spec = config.quadrature();
  if (config.potential == "well") {
    std::optional<RealFunction> floor;
    if (!config.inner_table.empty()) {
      floor = RealFunction([table = load_potential_table(config.inner_table)](double x) { return table(x); });
    }
    Potential well{InfiniteWell(config.length, floor)};
    const double energy = config.state_energy.value_or(quantize_hard_wall(well, config.n, ctx, spec).energy);
    WavefunctionSetup setup{well, energy, {0.0, config.length}, {}};
    // C1 fixed by the alpha-weighted norm of sin(phi)/sqrt(p).
    const WkbWavefunction unit(setup.potential, energy, ctx, setup.domain, setup.coefficients, spec);
    const double norm = std::real(inner_product([&](double x) { return unit(x); }, [&](double x) { return unit(x); },
                                                setup.domain, ctx.alpha(), spec));
    setup.coefficients.c1 = 1.0 / std::sqrt(norm);
    return setup;
  }
  const DampedOscillator osc(config.omega, config.lambda, ctx.alpha());
  Potential potential{osc};
  const double energy = config.state_energy.value_or(quantize_connection(potential, config.n, ctx, spec).energy);
  const Interval classical = classical_interval(potential, energy, ctx);
  // cos(phi_R - pi/4) / sqrt(p) inside, exp(-int |p|) / (2 sqrt|p|) outside,
  // normalized by the classical average sin^2 -> 1/2 over both half-lines.
  RealFunction inverse_p([&](double x) {
    const auto p = local_momentum(potential, energy, x, ctx);
    return p.region == RegionTag::Classical ? 1.0 / p.magnitude : 0.0;
  });
  const double time = 2.0 * conf_integral(inverse_p, 0.0, classical.hi, ctx.alpha(), spec);
  const double amplitude = std::sqrt(2.0 / time);
  WkbCoefficients coefficients;
  coefficients.c1 = coefficients.c2 = amplitude / std::numbers::sqrt2;
  coefficients.decaying = 0.5 * amplitude;
  coefficients.anchor = PhaseAnchor::Right;
  const double x_far = config.x_max.value_or(1.5 * classical.hi);
  return {potential, energy, {0.0, std::max(x_far, 1.5 * classical.hi)}, coefficients};
}

}  // namespace detail

inline CommandOutput build_wavefunction_table(const RunConfig& config) {
  CommandOutput result{Table({"alpha", "x", "psi", "probability", "region", "valid"}), {}};
  for (double a : config.alphas) {
    const AlphaOrder alpha(a);
    const PhysicalContext ctx = config.context(alpha);
    const auto setup = detail::wavefunction_setup(config, ctx);
    const WkbWavefunction psi(setup.potential, setup.energy, ctx, setup.domain, setup.coefficients,
                              config.quadrature());
    const double lo = config.x_min.value_or(0.0);
    const double hi = config.x_max.value_or(config.potential == "well" ? config.length : setup.domain.hi);
    if (!(hi > lo) || lo < 0.0) throw ParseError("wavefunction grid needs 0 <= x-min < x-max");
    const bool symmetric = is_symmetric(setup.potential);
    for (int i = 0; i < config.points; ++i) {
      const double x = lo + (hi - lo) * i / (config.points - 1);
      std::vector<Cell> row{a, x};
      if (x <= 0.0 && !symmetric) {
        row.insert(row.end(), {0.0, 0.0, std::string("wall"), true});
      } else {
        // The even extension is regular at the origin.
        const double at = x > 0.0 ? x : 1e-12 * hi;
        const auto p = local_momentum(setup.potential, setup.energy, at, ctx);
        try {
          const double value = std::real(psi(at));
          row.insert(row.end(), {value, value * value, to_string(p.region), true});
        } catch (const SingularityError&) {
          row.insert(row.end(), {std::monostate{}, std::monostate{}, to_string(RegionTag::TurningPoint), false});
        }
      }
      result.table.add_row(std::move(row));
    }
  }
  return result;
}

}  // namespace cwkb
