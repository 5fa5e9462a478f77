// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "cwkb/validation.hpp"

using namespace cwkb;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
};

class Measure {
 public:
  void at_most(const std::string& what, double value, double limit) {
    const bool ok = std::isfinite(value) && value <= limit;
    passed_ = passed_ && ok;
    std::ostringstream s;
    s << what << "=" << value << (ok ? "<=" : ">") << limit;
    parts_.push_back(s.str());
  }
  void require(const std::string& what, bool ok) {
    passed_ = passed_ && ok;
    parts_.push_back(what + (ok ? "=ok" : "=FAILED"));
  }
  Outcome outcome() const {
    std::string text;
    for (const auto& p : parts_) text += (text.empty() ? "" : "; ") + p;
    return {passed_, text};
  }

 private:
  bool passed_ = true;
  std::vector<std::string> parts_;
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Outcome infinite_well() {
  Measure m;
  const auto start = std::chrono::steady_clock::now();
  double wkb = 0.0, oracle = 0.0;
  for (double a : {0.25, 0.5, 0.75, 1.0}) {
    const auto ctx = PhysicalContext::natural(AlphaOrder(a));
    const Potential well{InfiniteWell(1.0)};
    const auto states = solve_bound_states(transform(well, ctx), 9, ctx);
    for (int n = 1; n <= 10; ++n) {
      const double closed = well_energy_closed(n, 1.0, ctx);
      wkb = std::max(wkb, rel(quantize_hard_wall(well, n, ctx).energy, closed));
      oracle = std::max(oracle, rel(states[std::size_t(n - 1)].energy, closed));
    }
  }
  m.at_most("wkb_rel", wkb, 1e-9);
  m.at_most("oracle_rel", oracle, 1e-5);
  m.at_most("seconds", seconds_since(start), 5.0);
  return m.outcome();
}

Outcome damped_oscillator() {
  Measure m;
  const auto start = std::chrono::steady_clock::now();
  double wkb = 0.0, oracle = 0.0, classical = 0.0;
  for (double a : {0.5, 1.0}) {
    const AlphaOrder alpha(a);
    const auto ctx = PhysicalContext::natural(alpha);
    const DampedOscillator osc(2.0, 2.0, alpha);
    const auto states = solve_bound_states(transform(Potential{osc}, ctx), 5, ctx);
    for (int n = 0; n <= 5; ++n) {
      const double closed = oscillator_energy_closed(n, osc, ctx);
      const double e = quantize_connection(Potential{osc}, n, ctx).energy;
      wkb = std::max(wkb, rel(e, closed));
      oracle = std::max(oracle, rel(states[std::size_t(n)].energy, closed));
      if (a == 1.0) classical = std::max(classical, rel(e, std::sqrt(3.0) * (n + 0.5)));
    }
  }
  m.at_most("wkb_rel", wkb, 1e-8);
  m.at_most("oracle_rel", oracle, 1e-5);
  m.at_most("alpha1_vs_sqrt3", classical, 1e-9);
  m.at_most("seconds", seconds_since(start), 10.0);
  return m.outcome();
}

Outcome tunneling() {
  Measure m;
  const auto start = std::chrono::steady_clock::now();
  double quad = 0.0, thin = 0.0, textbook = 0.0;
  int thin_cases = 0;
  for (double a : {0.5, 0.75, 1.0}) {
    const AlphaOrder alpha(a);
    const auto ctx = PhysicalContext::nuclear(alpha);
    for (double e : {4.0, 6.0, 8.0}) {
      for (double r1 : {5.0, 7.0, 9.0}) {
        const auto q = gamow_factor(CoulombBarrier(90.0, r1, alpha), e, ctx);
        quad = std::max(quad, rel(q.gamma, gamow_closed(e, q.r1, q.r2, ctx).gamma));
      }
      for (double r1 : {1e-5, 1e-4, 1e-3}) {
        const double r2 = CoulombBarrier(90.0, r1, alpha).outer_radius(e);
        if (std::pow(r1 / r2, a) > 1e-3) continue;
        ++thin_cases;
        thin = std::max(thin, rel(gamow_thin_barrier(e, 90.0, r1, alpha).gamma, gamow_closed(e, r1, r2, ctx).gamma));
      }
    }
  }
  for (double z : {82.0, 90.0}) {
    for (double e : {4.0, 6.0, 8.0}) {
      for (double r1 : {5.0, 7.0, 9.0}) {
        const double expected = nuclear::kK1 * z / std::sqrt(e) - nuclear::kK2 * std::sqrt(r1 * z);
        textbook = std::max(textbook, rel(gamow_thin_barrier(e, z, r1, AlphaOrder(1.0)).gamma, expected));
      }
    }
  }
  m.at_most("quadrature_vs_closed", quad, 1e-6);
  m.at_most("thin_vs_closed", thin, 1e-2);
  m.require("thin_cases_" + std::to_string(thin_cases), thin_cases > 0);
  m.at_most("alpha1_textbook", textbook, 1e-9);
  m.at_most("seconds", seconds_since(start), 5.0);
  return m.outcome();
}

Outcome from_validation(const std::vector<std::string>& names) {
  Measure m;
  const auto results = run_validation("all");
  for (const auto& name : names) {
    bool found = false;
    for (const auto& r : results) {
      if (r.name != name) continue;
      found = true;
      m.at_most(name, r.measured, r.threshold);
    }
    m.require("present:" + name, found);
  }
  return m.outcome();
}

Outcome calculus() {
  return from_validation({"inversion D(I f) = f", "derivative methods agree (limit vs chain identity)",
                          "commutator residual (scaled)", "alpha = 1 reduces to classical derivative and integral"});
}

Outcome wkb_structure() {
  Measure m;
  const auto base = from_validation({"amplitude law A^2 D(phi) constant", "S0/S1 reconstruction: amplitude and phase",
                                     "plane-wave flux equals hbar k / m"});
  m.require(base.detail, base.passed);
  // Flux x-independence on a 100-point grid.
  double spread = 0.0;
  for (double a : {0.25, 0.5, 1.0}) {
    const AlphaOrder alpha(a);
    const auto ctx = PhysicalContext::natural(alpha);
    const ComplexFunction psi([&](double x) { return plane_wave(x, 1.7, alpha); });
    const double first = probability_flux(psi, 0.05, ctx);
    for (int i = 2; i <= 100; ++i) spread = std::max(spread, std::abs(probability_flux(psi, 0.05 * i, ctx) - first));
  }
  m.at_most("flux_spread", spread, 1e-8);
  return m.outcome();
}

Outcome normalization() {
  Measure m;
  double worst = 0.0;
  for (double a : {0.25, 0.5, 0.75, 1.0}) {
    const AlphaOrder alpha(a);
    for (int i = 1; i <= 6; ++i) {
      for (int j = i; j <= 6; ++j) {
        const auto ip = inner_product([&](double x) { return normalized_well_wavefunction(i, x, alpha, 1.0); },
                                      [&](double x) { return normalized_well_wavefunction(j, x, alpha, 1.0); },
                                      {0.0, 1.0}, alpha);
        worst = std::max(worst, std::abs(ip - Complex(i == j ? 1.0 : 0.0)));
      }
    }
  }
  m.at_most("orthonormality", worst, 1e-8);
  return m.outcome();
}

std::pair<int, std::string> run(const std::string& args) {
  const std::string command = std::string(CWKB_CLI_PATH) + " " + args + " 2>/dev/null";
  std::string out;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return {-1, out};
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

Outcome cli() {
  Measure m;
  m.require("validate_all_exit0", run("validate all").first == 0);
  for (const char* args : {"well --alpha 0.25,0.5,0.75,1 --n-max 5", "oscillator --alpha 0.5,1 --omega 2 --lambda 2",
                           "decay --alpha 0.5,0.75,1", "well --format json", "decay --format json"}) {
    const auto a = run(args);
    const auto b = run(args);
    m.require(std::string("deterministic[") + args + "]", a.first == 0 && !a.second.empty() && a.second == b.second);
  }
  return m.outcome();
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 infinite well", infinite_well},     {"2 damped oscillator", damped_oscillator},
      {"3 tunneling", tunneling},             {"4 calculus identities", calculus},
      {"5 WKB structure", wkb_structure},     {"6 normalization", normalization},
      {"7 CLI", cli},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.passed ? 0 : 1;
    std::cout << (o.passed ? "PASS " : "FAIL ") << "criterion " << name << " : " << o.detail << '\n';
  }
  std::cout << (criteria.size() - std::size_t(failed)) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
