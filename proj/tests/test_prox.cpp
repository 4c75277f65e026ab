#include <gtest/gtest.h>

#include "dantzig/errors.hpp"
#include "dantzig/prox.hpp"
#include "dantzig/rng.hpp"
#include "dantzig/spectral.hpp"
#include "support/oracles.hpp"

namespace {

using namespace dantzig;

Complex random_scalar(Rng& rng, double scale) {
  return Complex(scale * rng.normal(), scale * rng.normal());
}

TEST(SoftThreshold, Examples) {
  EXPECT_EQ(soft_threshold(Complex(0, 0), 0.3), Complex(0, 0));
  EXPECT_DOUBLE_EQ(soft_threshold(2.0, 0.5), 1.5);
  EXPECT_DOUBLE_EQ(soft_threshold(-2.0, 0.5), -1.5);
  EXPECT_DOUBLE_EQ(soft_threshold(0.4, 0.5), 0.0);
  const Complex v = soft_threshold(Complex(3, 4), 1.0);
  EXPECT_NEAR(v.real(), 2.4, 1e-15);
  EXPECT_NEAR(v.imag(), 3.2, 1e-15);
}

TEST(SoftThreshold, AgreesWithGridMinimizerOnExample) {
  const Complex brute = oracle::brute_soft_threshold(Complex(3, 4), 1.0);
  EXPECT_NEAR(std::abs(brute - Complex(2.4, 3.2)), 0.0, 1e-6);
}

TEST(ProjectDisk, Examples) {
  EXPECT_DOUBLE_EQ(project_disk(0.5, 0.0, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(project_disk(2.0, 0.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(project_disk(-3.0, 1.0, 0.5), 0.5);
  const Complex v = project_disk(Complex(1, 2), Complex(1, 1), 0.5);
  EXPECT_NEAR(std::abs(v - Complex(1, 1.5)), 0.0, 1e-15);
  EXPECT_EQ(project_disk(Complex(1, 1), Complex(1, 1), 0.0), Complex(1, 1));
  const Complex brute = oracle::brute_project_disk(Complex(1, 2), Complex(1, 1), 0.5);
  EXPECT_NEAR(std::abs(brute - Complex(1, 1.5)), 0.0, 1e-6);
}

TEST(ProjectFeasible, Componentwise) {
  ComplexVec u(3), g(3);
  u << Complex(0.5, 0), Complex(2, 0), Complex(1, 2);
  g << Complex(0, 0), Complex(0, 0), Complex(1, 1);
  const ComplexVec p = project_feasible<Complex>(u, g, 1.0);
  EXPECT_NEAR(std::abs(p(0) - Complex(0.5, 0)), 0, 1e-15);
  EXPECT_NEAR(std::abs(p(1) - Complex(1, 0)), 0, 1e-15);
  EXPECT_NEAR(std::abs(p(2) - Complex(1, 2)), 0, 1e-15);
  EXPECT_THROW(project_feasible<Complex>(u, ComplexVec::Zero(2), 1.0), DimensionError);
}

// ---- properties ----

TEST(ProxProperty, MatchesBruteForceOnRandomScalars) {
  Rng rng(2024);
  for (int i = 0; i < 200; ++i) {
    const Complex u = random_scalar(rng, 2.0);
    const double lambda = 0.05 + 2.0 * rng.uniform();
    EXPECT_LE(std::abs(soft_threshold(u, lambda) - oracle::brute_soft_threshold(u, lambda)), 1e-6);
    const Complex c = random_scalar(rng, 1.0);
    const double r = 0.05 + 2.0 * rng.uniform();
    EXPECT_LE(std::abs(project_disk(u, c, r) - oracle::brute_project_disk(u, c, r)), 1e-6);
  }
}

TEST(ProxProperty, Nonexpansive) {
  Rng rng(7);
  for (int t = 0; t < 100; ++t) {
    ComplexVec u(16), v(16), g(16);
    for (Index i = 0; i < 16; ++i) {
      u(i) = random_scalar(rng, 3.0);
      v(i) = random_scalar(rng, 3.0);
      g(i) = random_scalar(rng, 1.0);
    }
    const double lambda = rng.uniform() + 0.01;
    EXPECT_LE((soft_threshold<Complex>(u, lambda) - soft_threshold<Complex>(v, lambda)).norm(),
              (u - v).norm() + 1e-14);
    EXPECT_LE((project_feasible<Complex>(u, g, lambda) - project_feasible<Complex>(v, g, lambda))
                  .norm(),
              (u - v).norm() + 1e-14);
  }
}

TEST(SpectralBound, KnownSpectra) {
  const double id = spectral_bound(dense_operator<double>(RealMat::Identity(5, 5)));
  EXPECT_NEAR(id, 1.001, 1e-6);
  RealMat s = RealMat::Zero(2, 2);
  s(0, 0) = std::sqrt(3.0);
  s(1, 1) = 2.0;
  const RealMat a = s.transpose() * s;  // diag(3, 4)
  const double b = spectral_bound(dense_operator<double>(a));
  EXPECT_GE(b, 4.0);
  EXPECT_LE(b, 4.004);
  EXPECT_EQ(spectral_bound(dense_operator<double>(RealMat::Zero(3, 3))), 0.0);
}

TEST(SpectralBound, NoConvergenceIsReported) {
  // Two nearly equal top eigenvalues make power iteration crawl.
  RealMat a = RealMat::Zero(3, 3);
  a.diagonal() << 1.0, 1.0 - 1e-9, 0.2;
  EXPECT_THROW(spectral_bound(dense_operator<double>(a), 1e-16, 2), NoConvergence);
}

TEST(SpectralProperty, BoundBracketsDenseNorm) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed);
    RealMat g(50, 50);
    for (Index i = 0; i < g.size(); ++i) g.data()[i] = rng.normal();
    const RealMat psd = g.transpose() * g;
    const double exact = Eigen::SelfAdjointEigenSolver<RealMat>(psd).eigenvalues().maxCoeff();
    const double b = spectral_bound(dense_operator<double>(psd));
    EXPECT_GE(b / exact, 1.0);
    EXPECT_LE(b / exact, 1.005);

    ComplexMat c(30, 40);
    for (Index i = 0; i < c.size(); ++i) c.data()[i] = Complex(rng.normal(), rng.normal());
    const double bc = spectral_bound(dense_operator<Complex>(c));
    const double ec = oracle::spectral_norm(c);
    EXPECT_GE(bc / ec, 1.0);
    EXPECT_LE(bc / ec, 1.005);
  }
}

}  // namespace
