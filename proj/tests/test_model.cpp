#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "xychain/model.hpp"

using namespace xychain;

TEST(ModelParams, RejectsOddAndTinyChains) {
  EXPECT_THROW(ModelParams(99, 1.0, 0.5), InvalidParameter);
  EXPECT_THROW(ModelParams(2, 1.0, 0.5), InvalidParameter);
  try {
    ModelParams(7, 1.0, 0.5);
  } catch (const InvalidParameter& e) {
    EXPECT_STREQ(e.what(), "N must be even");
  }
}

TEST(ModelParams, CanonicalizesSigns) {
  ModelParams p(10, -1.5, -0.3);
  EXPECT_EQ(p.h(), 1.5);
  EXPECT_EQ(p.gamma(), 0.3);
  EXPECT_EQ(p.signed_h(), -1.5);
  EXPECT_EQ(p.signed_gamma(), -0.3);
  EXPECT_DOUBLE_EQ(p.epsilon(), 0.5);
  EXPECT_TRUE(p.asymptotic_domain());
  EXPECT_FALSE(ModelParams(10, 0.5, 0.3).asymptotic_domain());
  EXPECT_FALSE(ModelParams(10, 1.5, 1.3).asymptotic_domain());
}

TEST(Dispersion, Examples) {
  EXPECT_NEAR(dispersion(0.0, ModelParams(10, 2, 0.3)).energy, 1.0, 1e-15);
  EXPECT_NEAR(dispersion(std::numbers::pi, ModelParams(10, 2, 0.7)).energy, 3.0, 1e-15);
  EXPECT_NEAR(dispersion(std::numbers::pi / 2, ModelParams(10, 1.5, 0.5)).energy, std::sqrt(2.5), 1e-15);
}

TEST(Dispersion, EvenPeriodicAndConsistent) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> uphi(-10, 10), uh(0, 3), ug(-1.5, 1.5);
  for (int i = 0; i < 1000; ++i) {
    const ModelParams p(10, uh(rng), ug(rng));
    const double phi = uphi(rng);
    const auto s = dispersion(phi, p);
    EXPECT_GE(s.energy, 0.0);
    EXPECT_NEAR(s.energy * s.energy, s.epsilon * s.epsilon + s.gamma_comp * s.gamma_comp,
                1e-13 * std::max(1.0, s.energy * s.energy));
    EXPECT_NEAR(dispersion(-phi, p).energy, s.energy, 1e-13);
    EXPECT_NEAR(dispersion(phi + 2 * std::numbers::pi, p).energy, s.energy, 1e-13);
  }
}

TEST(Dispersion, DerivativesMatchFiniteDifferences) {
  const ModelParams p(10, 1.7, 0.4);
  EXPECT_NEAR(dispersion_derivative(std::numbers::pi / 2, 1, ModelParams(10, 2, 0)), 1.0, 1e-15);
  for (double phi : {0.3, 1.0, 1.9, 2.8}) {
    for (int k = 1; k <= 4; ++k) {
      auto f = [&](double x) { return k == 1 ? energy(x, p) : dispersion_derivative(x, k - 1, p); };
      EXPECT_NEAR(dispersion_derivative(phi, k, p), oracle::derivative(f, phi), 1e-7) << "order " << k;
    }
    auto f4 = [&](double x) { return dispersion_derivative(x, 4, p); };
    EXPECT_NEAR(dispersion_derivative(phi, 5, p), oracle::derivative(f4, phi), 1e-6);
  }
}

TEST(Dispersion, VelocityMatchesRichardson) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> uphi(0.05, 3.1), uh(0, 3), ug(0, 1);
  for (int i = 0; i < 200; ++i) {
    const ModelParams p(10, uh(rng), ug(rng));
    const double phi = uphi(rng);
    if (dispersion(phi, p).energy < 0.05) continue;
    auto e = [&](double x) { return energy(x, p); };
    EXPECT_NEAR(group_velocity(phi, p), oracle::derivative(e, phi, 1e-3), 1e-7);
  }
}

TEST(Dispersion, DerivativeAtSpectrumZeroThrows) {
  EXPECT_THROW(dispersion_derivative(0.0, 2, ModelParams(10, 1.0, 0.5)), DegenerateSpectrum);
}

TEST(MomentumSet, Examples) {
  const ModelParams p(4, 1, 0.5);
  const auto odd = momentum_set(Parity::odd, p);
  const auto ev = momentum_set(Parity::even, p);
  EXPECT_EQ(odd.q, (std::vector<double>{-1, 0, 1, 2}));
  EXPECT_EQ(ev.q, (std::vector<double>{-1.5, -0.5, 0.5, 1.5}));
  EXPECT_EQ(odd.phi.size(), 4u);
  EXPECT_NEAR(odd.phi[3], std::numbers::pi, 1e-15);
}

TEST(Bogolyubov, SpecialCases) {
  const ModelParams p(10, 2, 0.5);
  EXPECT_EQ(bogolyubov_angle(5, p), 0.0);
  EXPECT_EQ(bogolyubov_angle(0, p), 0.0);
  EXPECT_EQ(bogolyubov_angle(0, ModelParams(10, 0.5, 0.5)), std::numbers::pi);
  for (double q : momentum_set(Parity::even, ModelParams(10, 2, 0)).q)
    EXPECT_EQ(bogolyubov_angle(q, ModelParams(10, 2, 0)), 0.0);
  const double q = 1.5;
  const double phi = 2 * std::numbers::pi * q / 10;
  EXPECT_NEAR(std::tan(bogolyubov_angle(q, p)), 0.5 * std::sin(phi) / (2 - std::cos(phi)), 1e-14);
  EXPECT_THROW(bogolyubov_angle(0.3, p), InvalidParameter);
}

TEST(Velocity, TableValues) {
  for (double h : {0.0, 0.5, 1.0, 2.0}) {
    const auto v = max_group_velocity(ModelParams(10, h, 0));
    EXPECT_NEAR(v.v_max, 1.0, 1e-9);
    EXPECT_NEAR(std::cos(v.phi0), h >= 1 ? 0.0 : std::cos(v.phi0), 1e-9);
  }
  EXPECT_NEAR(max_group_velocity(ModelParams(10, 2, 0)).phi0, std::numbers::pi / 2, 1e-9);
  EXPECT_NEAR(max_group_velocity(ModelParams(10, 2, 1)).v_max, 1.0, 1e-9);
  EXPECT_NEAR(max_group_velocity(ModelParams(10, 0, 0.3)).v_max, 0.7, 1e-9);
  const auto b = max_group_velocity(ModelParams(10, 1, 0.9));
  EXPECT_NEAR(b.v_max, 0.9, 1e-9);
  EXPECT_EQ(b.phi0, 0.0);
  EXPECT_TRUE(b.boundary_flag);
  const auto m = max_group_velocity(ModelParams(10, 1, std::sqrt(2 - std::sqrt(2.0))));
  EXPECT_NEAR(m.v_max, 2 * (std::sqrt(2.0) - 1), 1e-9);
  EXPECT_NEAR(std::cos(m.phi0), std::sqrt(2.0) - 1, 1e-6);
}

TEST(Velocity, IsGlobalMaximumOnGrid) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uh(0, 3), ug(0, 1);
  for (int i = 0; i < 30; ++i) {
    const ModelParams p(10, uh(rng), ug(rng));
    const auto v = max_group_velocity(p);
    for (int k = 1; k < 10000; ++k) {
      const double phi = std::numbers::pi * k / 10000;
      ASSERT_GE(v.v_max, group_velocity(phi, p) - 1e-12) << p.h() << " " << p.gamma();
    }
  }
}

TEST(Velocity, QuarticRootAndBounds) {
  for (double h = 1.0; h <= 3.0; h += 0.25) {
    for (double g = 0.05; g <= 1.0; g += 0.1) {
      const ModelParams p(10, h, g);
      const auto v = max_group_velocity(p);
      EXPECT_GE(v.v_max, 2 * (std::sqrt(2.0) - 1) - 1e-9);
      EXPECT_LE(v.v_max, 1 + 1e-12);
      if (!v.boundary_flag) {
        const double z = std::cos(v.phi0);
        EXPECT_LE(std::abs(z), 1.0);
        EXPECT_LT(std::abs(numeric::polyval(velocity_quartic(h, g), z)), 1e-10);
        EXPECT_GE(z, 0.0);
      }
    }
  }
}

TEST(Velocity, MonotoneInField) {
  for (double g : {0.1, 0.3, 0.5, 0.8, 1.0}) {
    double prev = 0;
    for (double h = 0; h <= 3.0 + 1e-9; h += 0.25) {
      const double v = max_group_velocity(ModelParams(10, h, g)).v_max;
      EXPECT_GE(v, prev - 1e-12) << "h=" << h << " g=" << g;
      prev = v;
    }
  }
}

TEST(ThresholdTime, Examples) {
  EXPECT_NEAR(threshold_time(ModelParams(100, 2, 0)), 100, 1e-9);
  EXPECT_NEAR(threshold_time(ModelParams(200, 0.3, 0)), 200, 1e-9);
  EXPECT_NEAR(threshold_time(ModelParams(100, 1, std::sqrt(std::sqrt(2.0) - 1))), 117.7, 0.1);
}

TEST(BranchPoints, ZerosOfTheContinuedSpectrum) {
  const ModelParams p(10, 1.25, 0.6);
  const auto [plus, minus] = branch_points(p);
  // |E| = sqrt|eps^2 + Gamma^2|; the squared residual is what binary64 resolves
  for (auto z : {plus, minus}) {
    const auto eps = 1.25 - std::cos(z);
    const auto gc = 0.6 * std::sin(z);
    EXPECT_LT(std::abs(eps * eps + gc * gc), 1e-12);
    EXPECT_LT(std::abs(std::conj(z) + z), 1e-14);  // purely imaginary
  }
  const double eps = 1e-6, g = 0.01;
  const auto bm = branch_points(ModelParams(10, 1 + eps, g)).second;
  EXPECT_NEAR(bm.imag(), eps / g, 0.02 * eps / g);
  EXPECT_THROW(branch_points(ModelParams(10, 0.5, 0.5)), DomainError);
  EXPECT_THROW(branch_points(ModelParams(10, 1.5, 1.0)), DegenerateSpectrum);
}
