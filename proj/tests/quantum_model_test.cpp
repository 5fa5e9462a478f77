#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "cwkb/quantum_model.hpp"
#include "cwkb/wkb.hpp"

using namespace cwkb;

TEST(PhysicalContext, HbarFromH) {
  const auto ctx = PhysicalContext::from_h(2.0 * std::numbers::pi, 1.0, AlphaOrder(1.0));
  EXPECT_EQ(ctx.hbar_alpha(), 1.0);
  const auto half = PhysicalContext::from_h(3.0, 1.0, AlphaOrder(0.5));
  EXPECT_DOUBLE_EQ(half.hbar_alpha(), 3.0 / std::pow(2.0 * std::numbers::pi, 2.0));
}

TEST(PhysicalContext, RecomputationIsBitExact) {
  for (double a : {0.2, 0.5, 0.9, 1.0}) {
    const auto ctx = PhysicalContext::from_h(1.7, 2.0, AlphaOrder(a));
    const auto again = PhysicalContext::from_h(ctx.h(), ctx.mass_alpha(), ctx.alpha());
    EXPECT_EQ(ctx.hbar_alpha(), again.hbar_alpha());
  }
}

// h / (2 pi)^{1/a} grows with a because (2 pi)^{1/a} shrinks.
TEST(PhysicalContext, HbarIncreasesWithAlphaForFixedH) {
  double previous = 0.0;
  for (double a = 0.1; a <= 1.0 + 1e-12; a += 0.1) {
    const double hbar = PhysicalContext::from_h(1.0, 1.0, AlphaOrder(std::min(a, 1.0))).hbar_alpha();
    EXPECT_GT(hbar, previous);
    previous = hbar;
  }
}

TEST(PhysicalContext, RejectsNonPositive) {
  EXPECT_THROW(PhysicalContext::from_h(0.0, 1.0, AlphaOrder(1.0)), DomainError);
  EXPECT_THROW(PhysicalContext::from_h(1.0, -1.0, AlphaOrder(1.0)), DomainError);
  EXPECT_THROW(PhysicalContext::from_hbar(1.0, 0.0, AlphaOrder(0.5)), DomainError);
}

TEST(NuclearUnits, ConstantsReproduceK1K2) {
  const double e2 = nuclear::coupling();
  const double m = nuclear::mass();
  EXPECT_NEAR(e2 * std::numbers::pi * std::sqrt(2.0 * m), nuclear::kK1, 1e-12);
  EXPECT_NEAR(4.0 * std::sqrt(e2 * m), nuclear::kK2, 1e-12);
  const auto ctx = PhysicalContext::nuclear(AlphaOrder(1.0));
  EXPECT_EQ(ctx.units(), UnitSystem::NuclearMeVFm);
  EXPECT_DOUBLE_EQ(ctx.mass_alpha(), m);
}

TEST(Potentials, ConstructionInvariants) {
  EXPECT_THROW(InfiniteWell(0.0), DomainError);
  EXPECT_THROW(DampedOscillator(1.0, 2.0, AlphaOrder(1.0)), DomainError);
  EXPECT_THROW(DampedOscillator(-1.0, 0.0, AlphaOrder(1.0)), DomainError);
  EXPECT_THROW(CoulombBarrier(0.5, 7.0, AlphaOrder(1.0)), DomainError);
  EXPECT_THROW(CoulombBarrier(90.0, 0.0, AlphaOrder(1.0)), DomainError);
}

TEST(Potentials, OverdampedMessageNamesInvariant) {
  try {
    DampedOscillator(1.0, 3.0, AlphaOrder(0.5));
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("overdamped"), std::string::npos);
  }
}

TEST(PotentialValue, WellInteriorIsZero) {
  for (double a : {0.3, 1.0}) {
    EXPECT_EQ(potential_value(Potential{InfiniteWell(1.0)}, 0.5, AlphaOrder(a)), 0.0);
    EXPECT_TRUE(std::isinf(potential_value(Potential{InfiniteWell(1.0)}, 1.5, AlphaOrder(a))));
  }
}

TEST(PotentialValue, DampedOscillator) {
  EXPECT_DOUBLE_EQ(potential_value(Potential{DampedOscillator(2.0, 2.0, AlphaOrder(1.0))}, 1.0, AlphaOrder(1.0)),
                   1.5);
}

TEST(PotentialValue, CoulombEqualsEnergyAtOuterRadius) {
  const CoulombBarrier b(90.0, 7.0, AlphaOrder(1.0));
  const double e = 5.0;
  const double r2 = b.strength() / e;
  EXPECT_NEAR(potential_value(Potential{b}, r2, PhysicalContext::nuclear(AlphaOrder(1.0))), e, 1e-12);
  EXPECT_NEAR(b.outer_radius(e), r2, 1e-12 * r2);
}

TEST(PotentialValue, ClassicalLimitTextbookForms) {
  const AlphaOrder one(1.0);
  const auto ctx = PhysicalContext::from_hbar(1.0, 3.0, one);
  const DampedOscillator osc(2.0, 1.0, one);
  const CoulombBarrier coul(82.0, 6.0, one);
  for (double x : {6.5, 10.0, 40.0}) {
    EXPECT_NEAR(potential_value(Potential{osc}, x, ctx), 0.5 * 3.0 * (4.0 - 0.25) * x * x, 1e-12 * x * x * 10);
    const double textbook = 2.0 * 82.0 * nuclear::coupling() / x;
    EXPECT_NEAR(potential_value(Potential{coul}, x, ctx), textbook, 1e-12 * textbook);
  }
  EXPECT_EQ(potential_value(Potential{coul}, 3.0, ctx), 0.0);
}

TEST(PotentialValue, RejectsNonPositiveX) {
  EXPECT_THROW(potential_value(Potential{InfiniteWell(1.0)}, 0.0, AlphaOrder(1.0)), DomainError);
}

TEST(PotentialValue, AlphaMismatchRejected) {
  const Potential osc{DampedOscillator(2.0, 1.0, AlphaOrder(0.5))};
  EXPECT_THROW(potential_value(osc, 1.0, AlphaOrder(1.0)), DomainError);
}

TEST(LocalMomentum, FreeParticle) {
  const auto ctx = PhysicalContext::natural(AlphaOrder(0.7));
  const auto p = local_momentum(Potential{ConstantPotential{0.0}}, 2.0, 1.0, ctx);
  EXPECT_DOUBLE_EQ(p.magnitude, 2.0);
  EXPECT_EQ(p.region, RegionTag::Classical);
}

TEST(LocalMomentum, TurningPointExact) {
  const auto ctx = PhysicalContext::natural(AlphaOrder(1.0));
  const auto p = local_momentum(Potential{DampedOscillator(2.0, 2.0, AlphaOrder(1.0))}, 1.5, 1.0, ctx);
  EXPECT_EQ(p.magnitude, 0.0);
  EXPECT_EQ(p.region, RegionTag::TurningPoint);
}

TEST(LocalMomentum, CoulombUnderBarrierIsForbidden) {
  const AlphaOrder alpha(0.75);
  const auto ctx = PhysicalContext::nuclear(alpha);
  const CoulombBarrier b(90.0, 7.0, alpha);
  const double r2 = b.outer_radius(4.27);
  EXPECT_EQ(local_momentum(Potential{b}, 4.27, 0.5 * (7.0 + r2), ctx).region, RegionTag::Forbidden);
  EXPECT_EQ(local_momentum(Potential{b}, 4.27, 2.0 * r2, ctx).region, RegionTag::Classical);
}

TEST(LocalMomentum, HardWallIsForbiddenWithInfiniteMagnitude) {
  const auto p = local_momentum(Potential{InfiniteWell(1.0)}, 1.0, 2.0, PhysicalContext::natural(AlphaOrder(1.0)));
  EXPECT_EQ(p.region, RegionTag::Forbidden);
  EXPECT_TRUE(std::isinf(p.magnitude));
}

TEST(LocalMomentum, RegionRunsAreContiguous) {
  for (double a : {0.4, 1.0}) {
    const auto ctx = PhysicalContext::natural(AlphaOrder(a));
    const Potential osc{DampedOscillator(1.0, 0.5, AlphaOrder(a))};
    int switches = 0;
    RegionTag previous = RegionTag::Classical;
    for (int i = 1; i <= 2000; ++i) {
      const RegionTag r = local_momentum(osc, 1.0, 4.0 * i / 2000.0, ctx).region;
      if (r == RegionTag::TurningPoint) continue;
      if (r != previous) ++switches;
      previous = r;
    }
    EXPECT_EQ(switches, 1);
  }
}

TEST(Flux, RealWavefunctionsCarryNone) {
  const auto ctx = PhysicalContext::natural(AlphaOrder(0.5));
  const ComplexFunction real([](double x) { return Complex(std::sin(x)); });
  const ComplexFunction decaying([&](double x) { return Complex(evanescent_wave(x, 1.0, AlphaOrder(0.5))); });
  EXPECT_EQ(probability_flux(real, 1.0, ctx), 0.0);
  EXPECT_EQ(probability_flux(decaying, 1.0, ctx), 0.0);
  EXPECT_THROW(probability_flux(real, 0.0, ctx), DomainError);
}

TEST(Flux, PlaneWave) {
  for (double a : {0.25, 0.5, 1.0}) {
    const AlphaOrder alpha(a);
    const auto ctx = PhysicalContext::from_hbar(0.8, 1.7, alpha);
    const double k = 1.3;
    const ComplexFunction psi([&](double x) { return plane_wave(x, k, alpha); });
    for (double x : {0.2, 1.0, 4.0}) {
      EXPECT_NEAR(probability_flux(psi, x, ctx), ctx.hbar_alpha() * k / ctx.mass_alpha(), 1e-8);
    }
  }
}

TEST(Flux, SuperpositionIsXIndependent) {
  const AlphaOrder alpha(0.6);
  const auto ctx = PhysicalContext::natural(alpha);
  const Complex A(1.0, 0.3), B(0.4, -0.2);
  const double k = 2.0;
  const ComplexFunction psi([&](double x) { return A * plane_wave(x, k, alpha) + B * plane_wave(x, k, alpha, -1); });
  const double expected = k * (std::norm(A) - std::norm(B));
  for (int i = 1; i <= 100; ++i) {
    EXPECT_NEAR(probability_flux(psi, 0.05 * i, ctx), expected, 1e-8);
  }
}
