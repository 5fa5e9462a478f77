#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "cwkb/quantization.hpp"

using namespace cwkb;

namespace {

constexpr double kPi = std::numbers::pi;
const double kAlphas[] = {0.25, 0.5, 0.75, 1.0};

}  // namespace

TEST(WellClosedForm, NaturalUnits) {
  EXPECT_NEAR(well_energy_closed(1, 1.0, PhysicalContext::natural(AlphaOrder(1.0))), 4.934802, 1e-6);
  EXPECT_NEAR(well_energy_closed(1, 1.0, PhysicalContext::natural(AlphaOrder(0.5))), 1.233700, 1e-6);
  EXPECT_THROW(well_energy_closed(0, 1.0, PhysicalContext::natural(AlphaOrder(1.0))), DomainError);
}

TEST(HardWall, ExactForFreeWell) {
  for (double a : kAlphas) {
    const auto ctx = PhysicalContext::from_hbar(0.8, 1.3, AlphaOrder(a));
    const Potential well{InfiniteWell(1.7)};
    for (int n = 1; n <= 10; ++n) {
      const auto level = quantize_hard_wall(well, n, ctx);
      const double closed = n * n * a * a * kPi * kPi * std::pow(0.8, 2.0) / (2.0 * 1.3 * std::pow(1.7, 2.0 * a));
      EXPECT_NEAR(level.energy, closed, 1e-9 * closed) << "alpha " << a << " n " << n;
      EXPECT_EQ(level.n, n);
      EXPECT_EQ(level.method, LevelMethod::HardWallSolver);
      EXPECT_LE(level.residual, 1e-10);
    }
  }
}

TEST(HardWall, LevelsIncreaseWithInnerPotential) {
  const auto ctx = PhysicalContext::natural(AlphaOrder(0.5));
  const Potential well{InfiniteWell(1.0, RealFunction([](double x) { return 3.0 * x; }))};
  double previous = -1.0;
  for (int n = 1; n <= 6; ++n) {
    const double e = quantize_hard_wall(well, n, ctx).energy;
    EXPECT_GT(e, previous);
    EXPECT_NEAR(hard_wall_phase(std::get<InfiniteWell>(well), e, ctx), n * kPi, 1e-9 * n);
    previous = e;
  }
}

TEST(HardWall, WrongShapeOrQuantumNumber) {
  const auto ctx = PhysicalContext::natural(AlphaOrder(1.0));
  EXPECT_THROW(quantize_hard_wall(Potential{InfiniteWell(1.0)}, 0, ctx), DomainError);
  EXPECT_THROW(quantize_hard_wall(Potential{DampedOscillator(1.0, 0.0, AlphaOrder(1.0))}, 1, ctx), ShapeError);
}

TEST(HardWall, UnboundedSearchWhenCeilingTooLow) {
  const auto ctx = PhysicalContext::natural(AlphaOrder(1.0));
  EnergySearch search;
  search.e_max = 1e-3;
  search.expansions = 0;
  EXPECT_THROW(quantize_hard_wall(Potential{InfiniteWell(1.0)}, 5, ctx, {}, search), UnboundedSearchError);
}

TEST(Connection, ClosedFormOscillator) {
  for (double a : {0.25, 0.5, 0.75, 1.0}) {
    const AlphaOrder alpha(a);
    const auto ctx = PhysicalContext::from_hbar(0.9, 1.6, alpha);
    const DampedOscillator osc(2.0, 2.0, alpha);
    for (int n = 0; n <= 5; ++n) {
      const auto level = quantize_connection(Potential{osc}, n, ctx);
      const double closed = 0.9 * a * std::sqrt(std::pow(2.0, 2.0 * a) - 1.0) * (n + 0.5);
      EXPECT_NEAR(level.energy, closed, 1e-8 * closed) << "alpha " << a << " n " << n;
      EXPECT_EQ(level.method, LevelMethod::ConnectionSolver);
      EXPECT_NEAR(oscillator_energy_closed(n, osc, ctx), closed, 1e-13 * closed);
    }
  }
}

TEST(Connection, SpecExamples) {
  const auto ctx = PhysicalContext::natural(AlphaOrder(1.0));
  EXPECT_NEAR(quantize_connection(Potential{DampedOscillator(2.0, 2.0, AlphaOrder(1.0))}, 0, ctx).energy, 0.866025,
              1e-6);
  for (int n = 0; n < 4; ++n) {
    EXPECT_NEAR(quantize_connection(Potential{DampedOscillator(1.3, 0.0, AlphaOrder(1.0))}, n, ctx).energy,
                1.3 * (n + 0.5), 1e-9);
  }
}

TEST(Connection, CustomTwoTurningPointWell) {
  // Shifted harmonic well centred at 3: levels (n + 1/2).
  const auto ctx = PhysicalContext::natural(AlphaOrder(1.0));
  const Potential v{CustomPotential{RealFunction([](double x) { return 0.5 * (x - 3.0) * (x - 3.0); }), {0.0, 6.0}}};
  EnergySearch search;
  search.window = Interval{0.0, 6.0};
  for (int n = 0; n < 3; ++n) {
    EXPECT_NEAR(quantize_connection(v, n, ctx, {}, search).energy, n + 0.5, 1e-8);
  }
}

TEST(Connection, ShapeErrors) {
  const auto ctx = PhysicalContext::natural(AlphaOrder(1.0));
  EXPECT_THROW(quantize_connection(Potential{InfiniteWell(1.0)}, 0, ctx), ShapeError);
  const Potential ramp{CustomPotential{RealFunction([](double x) { return x; }), {0.0, 10.0}}};
  EnergySearch search;
  search.window = Interval{0.0, 10.0};
  EXPECT_THROW(quantize_connection(ramp, 0, ctx, {}, search), ShapeError);
  EXPECT_THROW(quantize_connection(ramp, 0, ctx), ShapeError);
}

TEST(Connection, PhaseMonotoneInEnergy) {
  for (double a : kAlphas) {
    const auto ctx = PhysicalContext::natural(AlphaOrder(a));
    const Potential v{DampedOscillator(1.5, 1.0, AlphaOrder(a))};
    double previous = -1.0;
    for (int i = 1; i <= 50; ++i) {
      const double phi = connection_phase(v, 0.1 * i, ctx);
      EXPECT_GT(phi, previous);
      previous = phi;
    }
  }
}

TEST(Connection, ClassicalLimitMatchesTextbook) {
  const auto ctx = PhysicalContext::from_hbar(1.0, 2.0, AlphaOrder(1.0));
  const DampedOscillator osc(3.0, 1.0, AlphaOrder(1.0));
  for (int n = 0; n < 4; ++n) {
    const double textbook = std::sqrt(9.0 - 0.25) * (n + 0.5);
    EXPECT_NEAR(quantize_connection(Potential{osc}, n, ctx).energy, textbook, 1e-9 * textbook);
  }
}
