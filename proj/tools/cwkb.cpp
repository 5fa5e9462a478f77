// cwkb: spectra, wavefunctions and tunneling for the conformable Schroedinger
// equation. Tables go to stdout (or --out), warnings and errors to stderr.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cwkb/commands.hpp"
#include "cwkb/validation.hpp"

namespace {

enum Exit { kOk = 0, kValidationFailed = 1, kConfigError = 2, kNumericalError = 3 };

struct Binding {
  CLI::Option* option;
  std::function<void(cwkb::RunConfig&)> apply;
};

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cwkb::ParseError("cannot write '" + path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conformable-derivative WKB: spectra, wavefunctions and tunneling"};
  app.require_subcommand(1);
  app.fallthrough();

  cwkb::RunConfig flags;
  std::string config_path;
  std::string units;
  bool dump_config = false;
  double perturb = 1.0;
  std::vector<Binding> bindings;
  auto bind = [&](CLI::Option* opt, std::function<void(cwkb::RunConfig&)> apply) {
    bindings.push_back({opt, std::move(apply)});
    return opt;
  };

  bind(app.add_option("--alpha", flags.alphas, "order(s) alpha, comma separated")->delimiter(','),
       [&](auto& c) { c.alphas = flags.alphas; });
  bind(app.add_option("--format", flags.format, "csv or json"), [&](auto& c) { c.format = flags.format; });
  bind(app.add_option("--out", flags.out, "output path (default stdout)"), [&](auto& c) { c.out = flags.out; });
  bind(app.add_option("--tol", flags.tol, "quadrature relative tolerance"), [&](auto& c) { c.tol = flags.tol; });
  bind(app.add_option("--units", units, "natural or nuclear"), [&](auto& c) { c.units = cwkb::parse_units(units); });
  bind(app.add_option("--hbar", flags.hbar, "hbar_a^a in natural units"), [&](auto& c) { c.hbar = flags.hbar; });
  bind(app.add_option("--mass", flags.mass, "m^a in natural units"), [&](auto& c) { c.mass = flags.mass; });
  app.add_option("--config", config_path, "JSON config (as printed by --dump-config)");
  app.add_flag("--dump-config", dump_config, "print the resolved config as JSON and exit");

  int n_max = 0;
  auto* well = app.add_subcommand("well", "infinite-well spectrum");
  bind(well->add_option("--L", flags.length, "well width"), [&](auto& c) { c.length = flags.length; });
  bind(well->add_option("--n-max", n_max, "highest level"), [&](auto& c) { c.n_max = n_max; });
  bind(well->add_option("--inner", flags.inner_table, "two-column x,v CSV for the well floor"),
       [&](auto& c) { c.inner_table = flags.inner_table; });

  auto* osc = app.add_subcommand("oscillator", "damped-oscillator spectrum");
  bind(osc->add_option("--omega", flags.omega), [&](auto& c) { c.omega = flags.omega; });
  bind(osc->add_option("--lambda", flags.lambda), [&](auto& c) { c.lambda = flags.lambda; });
  bind(osc->add_option("--n-max", n_max, "highest level"), [&](auto& c) { c.n_max = n_max; });

  auto* decay = app.add_subcommand("decay", "Coulomb-barrier tunneling");
  bind(decay->add_option("--z", flags.z, "daughter charge"), [&](auto& c) { c.z = flags.z; });
  bind(decay->add_option("--E", flags.energy, "alpha-particle energy (MeV)"),
       [&](auto& c) { c.energy = flags.energy; });
  bind(decay->add_option("--r1", flags.r1, "nuclear radius (fm)"), [&](auto& c) { c.r1 = flags.r1; });

  double state_energy = 0.0, x_min = 0.0, x_max = 0.0;
  auto* wave = app.add_subcommand("wavefunction", "sampled WKB wavefunction");
  bind(wave->add_option("--potential", flags.potential, "well or oscillator"),
       [&](auto& c) { c.potential = flags.potential; });
  bind(wave->add_option("--n", flags.n, "quantum number"), [&](auto& c) { c.n = flags.n; });
  bind(wave->add_option("--energy", state_energy, "use this E^a instead of solving for n"),
       [&](auto& c) { c.state_energy = state_energy; });
  bind(wave->add_option("--x-min", x_min), [&](auto& c) { c.x_min = x_min; });
  bind(wave->add_option("--x-max", x_max), [&](auto& c) { c.x_max = x_max; });
  bind(wave->add_option("--points", flags.points), [&](auto& c) { c.points = flags.points; });
  bind(wave->add_option("--L", flags.length, "well width"), [&](auto& c) { c.length = flags.length; });
  bind(wave->add_option("--omega", flags.omega), [&](auto& c) { c.omega = flags.omega; });
  bind(wave->add_option("--lambda", flags.lambda), [&](auto& c) { c.lambda = flags.lambda; });
  bind(wave->add_option("--inner", flags.inner_table), [&](auto& c) { c.inner_table = flags.inner_table; });

  auto* validate = app.add_subcommand("validate", "run the invariant suite");
  bind(validate->add_option("scope", flags.scope, "all, core, wkb or oracle"),
       [&](auto& c) { c.scope = flags.scope; });
  validate->add_option("--perturb-closed-form", perturb)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  cwkb::RunConfig config;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw cwkb::ParseError("cannot open config '" + config_path + "'");
      config = nlohmann::json::parse(in).get<cwkb::RunConfig>();
    }
    config.command = app.get_subcommands().front()->get_name();
    for (const auto& b : bindings) {
      if (b.option->count() > 0) b.apply(config);
    }
    config.validate();
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const cwkb::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  if (dump_config) {
    std::cout << nlohmann::json(config).dump(2) << '\n';
    return kOk;
  }

  try {
    if (config.command == "validate") {
      const auto results = cwkb::run_validation(config.scope, {perturb});
      emit(cwkb::validation_table(results).render(config.format), config.out);
      int failed = 0;
      for (const auto& r : results) failed += r.passed ? 0 : 1;
      std::cerr << results.size() - std::size_t(failed) << "/" << results.size() << " checks passed\n";
      return failed == 0 ? kOk : kValidationFailed;
    }
    cwkb::CommandOutput output = [&] {
      if (config.command == "well") return cwkb::build_well_table(config);
      if (config.command == "oscillator") return cwkb::build_oscillator_table(config);
      if (config.command == "decay") return cwkb::build_decay_table(config);
      return cwkb::build_wavefunction_table(config);
    }();
    for (const auto& w : output.warnings) std::cerr << "warning: " << w << '\n';
    emit(output.table.render(config.format), config.out);
  } catch (const cwkb::ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const cwkb::DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const cwkb::NoBarrierError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const cwkb::Error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  }
  return kOk;
}
