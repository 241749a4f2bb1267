#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "dicke/analysis.hpp"
#include "dicke/variational.hpp"

using namespace dicke;

namespace {

ModelParams canonical(int two_j = 18, double gamma2 = 1.0) {
  ModelParams p;
  p.two_j = two_j;
  p.coupling = {0.5, gamma2};
  return p;
}

std::vector<double> finite_difference(const std::function<double(const VariationalPoint&)>& f,
                                      const VariationalPoint& pt, double h = 1e-6) {
  const std::vector<double> x0 = pt.pack();
  std::vector<double> g(x0.size());
  for (std::size_t i = 0; i < x0.size(); ++i) {
    std::vector<double> xp = x0, xm = x0;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(VariationalPoint::unpack(xp, pt.modes())) - f(VariationalPoint::unpack(xm, pt.modes()))) / (2 * h);
  }
  return g;
}

}  // namespace

TEST(CsEnergy, ZeroPoint) {
  const ModelParams p = canonical();
  EXPECT_DOUBLE_EQ(cs_energy(p, VariationalPoint::zero(2)), -9.0 * 2.0);
}

TEST(CsEnergy, HandEvaluationAtEquator) {
  const ModelParams p = canonical();
  VariationalPoint pt = VariationalPoint::zero(2);
  pt.theta = std::numbers::pi / 2;
  const double rn = std::sqrt(18.0);
  for (std::size_t i = 0; i < 2; ++i) pt.q[i] = 2 * 9.0 * p.coupling[i] / (2.0 * rn);
  // -j wA cos + sum W q^2 - (4 j / sqrt N) sum g q with cos theta = 0.
  double expect = 0.0;
  for (std::size_t i = 0; i < 2; ++i) expect += 2.0 * pt.q[i] * pt.q[i] - 4 * 9.0 / rn * p.coupling[i] * pt.q[i];
  EXPECT_NEAR(cs_energy(p, pt), expect, 1e-12);
  EXPECT_NEAR(cs_energy(p, pt), -9.0 * (0.25 + 1.0), 1e-12);
}

TEST(CsEnergy, ReflectionSymmetry) {
  const ModelParams p = canonical();
  VariationalPoint pt = VariationalPoint::zero(2);
  pt.q = {0.3, -0.8};
  pt.p = {0.1, 0.4};
  pt.theta = 0.7;
  pt.phi = 0.2;
  VariationalPoint r = pt;
  r.phi += std::numbers::pi;
  for (double& q : r.q) q = -q;
  EXPECT_NEAR(cs_energy(p, pt), cs_energy(p, r), 1e-12);
  // The SAS surface needs the full alpha -> -alpha.
  for (double& v : r.p) v = -v;
  EXPECT_NEAR(cs_energy(p, pt), cs_energy(p, r), 1e-12);
  EXPECT_NEAR(sas_energy(p, pt), sas_energy(p, r), 1e-12);
}

TEST(CsEnergy, AnalyticGradientMatchesFiniteDifference) {
  const ModelParams p = canonical(10, 1.3);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    VariationalPoint pt = VariationalPoint::zero(2);
    pt.q = {u(rng), u(rng)};
    pt.p = {u(rng), u(rng)};
    pt.theta = 1.5 + 1.5 * u(rng);
    pt.phi = 3.0 * u(rng);
    const auto g = cs_energy_gradient(p, pt);
    const auto fd = finite_difference([&](const VariationalPoint& v) { return cs_energy(p, v); }, pt);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(g[i], fd[i], 1e-5 * std::max(1.0, std::abs(g[i])));
  }
}

TEST(CsCriticalPoint, CanonicalValues) {
  const ModelParams p = canonical();
  const VariationalPoint c = cs_critical_point(p);
  EXPECT_NEAR(std::cos(c.theta), 0.8, 1e-14);
  EXPECT_NEAR(c.q[0], 18.0 * 0.5 / (2.0 * std::sqrt(18.0)) * 0.6, 1e-14);
  EXPECT_NEAR(c.q[1], 18.0 * 1.0 / (2.0 * std::sqrt(18.0)) * 0.6, 1e-14);
  EXPECT_EQ(c.phi, 0.0);
  for (double g : cs_energy_gradient(p, c)) EXPECT_LT(std::abs(g), 1e-12);
  const auto fd = finite_difference([&](const VariationalPoint& v) { return cs_energy(p, v); }, c);
  for (double g : fd) EXPECT_LT(std::abs(g), 1e-6);
}

TEST(CsCriticalPoint, NormalPhaseIsZero) {
  const ModelParams p = canonical(18, 0.5);  // delta = 2
  const VariationalPoint c = cs_critical_point(p);
  EXPECT_EQ(c.theta, 0.0);
  EXPECT_EQ(c.alpha_norm2(), 0.0);
  EXPECT_DOUBLE_EQ(cs_energy(p, c), -18.0);
}

TEST(CsObservables, ClosedForms) {
  const ModelParams p = canonical();
  const Observables o = cs_observables(p);
  const double d = 0.8;
  EXPECT_NEAR(o.energy, -(9.0 * 2.0 / 2.0) * (1.0 / d + d), 1e-12);
  EXPECT_NEAR(o.jz, -9.0 * d, 1e-12);
  EXPECT_NEAR(o.energy, cs_energy(p, cs_critical_point(p)), 1e-12);
  for (std::size_t i = 0; i < 2; ++i) {
    const double q = cs_critical_point(p).q[i];
    EXPECT_NEAR(o.nu[i], q * q, 1e-12);
  }
}

TEST(CsObservables, NormalBranchAndContinuity) {
  const Observables n = cs_observables(canonical(18, 0.5));
  EXPECT_EQ(n.jz, -9.0);
  EXPECT_EQ(n.nu, (std::vector<double>{0.0, 0.0}));
  ModelParams at = canonical(18, std::sqrt(0.75));
  const Observables o = cs_observables(at);
  EXPECT_NEAR(o.energy, -18.0, 1e-12);
  EXPECT_NEAR(o.jz, -9.0, 1e-12);
  for (double v : o.nu) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(CsObservables, PhotonAsymptote) {
  const Observables o = cs_observables(canonical(18, 1e4));
  EXPECT_NEAR(o.nu[0], 4.0 * 81.0 * 0.25 / (18.0 * 4.0), 1e-6);
  EXPECT_NEAR(4.0 * 81.0 * 0.25 / (18.0 * 4.0), 1.125, 1e-15);
}

TEST(SasEnergy, ZeroPoint) {
  EXPECT_DOUBLE_EQ(sas_energy(canonical(), VariationalPoint::zero(2)), -18.0);
}

TEST(SasEnergy, PIndependentAtRealPoint) {
  const ModelParams p = canonical(10, 1.4);
  VariationalPoint pt = VariationalPoint::zero(2);
  pt.q = {0.5, 1.1};
  pt.theta = 0.9;
  const auto g = finite_difference([&](const VariationalPoint& v) { return sas_energy(p, v); }, pt);
  EXPECT_LT(std::abs(g[2]), 1e-8);
  EXPECT_LT(std::abs(g[3]), 1e-8);
}

TEST(SasEnergy, CollapseReported) {
  ModelParams p = canonical(1, 1.0);
  p.atoms = 1;
  p.two_j = 1;
  VariationalPoint pt = VariationalPoint::zero(2);
  pt.theta = std::numbers::pi;  // cos^{1} = -1, E = 1: even projection is empty
  EXPECT_THROW(sas_energy(p, pt), ProjectionCollapse);
}

TEST(SasEnergy, AboveQuantumGroundEnergy) {
  const ModelParams p = canonical(8, 1.2);
  const BasisLayout b(8, {40, 40});
  const double e0 = solve_quantum(p, b).energy;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    VariationalPoint pt = VariationalPoint::zero(2);
    pt.q = {1.5 * u(rng), 1.5 * u(rng)};
    pt.p = {1.5 * u(rng), 1.5 * u(rng)};
    pt.theta = 1.5 + 1.4 * u(rng);
    pt.phi = 3.0 * u(rng);
    EXPECT_GE(sas_energy(p, pt), e0 - 1e-9);
    EXPECT_GE(cs_energy(p, pt), e0 - 1e-9);
  }
}

TEST(SasEnergy, ClosedFormMatchesStateVector) {
  const ModelParams p = canonical(8, 1.2);
  const BasisLayout b(8, {40, 40});
  const SparseOperator h = build_hamiltonian(p, b);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    VariationalPoint pt = VariationalPoint::zero(2);
    pt.q = {1.2 * u(rng), 1.2 * u(rng)};
    pt.p = {1.2 * u(rng), 1.2 * u(rng)};
    pt.theta = 1.5 + 1.4 * u(rng);
    pt.phi = 3.0 * u(rng);
    EXPECT_NEAR(expectation(h, cs_state_vector(pt, b)), cs_energy(p, pt), 1e-8);
    EXPECT_NEAR(expectation(h, sas_state_vector(pt, b)), sas_energy(p, pt), 1e-8);
  }
}

TEST(SasEnergy, HalfIntegerJ) {
  ModelParams p = canonical(7, 1.2);
  p.atoms = 9;
  const BasisLayout b(7, {40, 40});
  const SparseOperator h = build_hamiltonian(p, b);
  VariationalPoint pt = VariationalPoint::zero(2);
  pt.q = {0.4, 0.9};
  pt.p = {-0.2, 0.1};
  pt.theta = 2.2;
  pt.phi = 0.5;
  EXPECT_NEAR(expectation(h, sas_state_vector(pt, b)), sas_energy(p, pt), 1e-8);
}

TEST(SascObservables, InternalConsistency) {
  const ModelParams p = canonical();
  const Observables c = sasc_observables(p);
  const Observables s = sas_observables(p, cs_critical_point(p));
  EXPECT_NEAR(c.energy, s.energy, 1e-12);
  EXPECT_NEAR(c.jz, s.jz, 1e-12);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_NEAR(c.nu[i], s.nu[i], 1e-12);
  EXPECT_LE(c.energy, cs_observables(p).energy);
}

TEST(SascObservables, NormalBranchEqualsCs) {
  const ModelParams p = canonical(18, 0.5);
  const Observables a = sasc_observables(p), b = cs_observables(p);
  EXPECT_EQ(a.energy, b.energy);
  EXPECT_EQ(a.jz, b.jz);
  EXPECT_EQ(a.nu, b.nu);
}

TEST(SascObservables, ApproachesCsDeepInSuperradiance) {
  const ModelParams p = canonical(18, 3.0);
  const Observables a = sasc_observables(p), b = cs_observables(p);
  EXPECT_NEAR(a.energy, b.energy, 1e-10 * std::abs(b.energy));
  EXPECT_NEAR(a.jz, b.jz, 1e-10);
}

TEST(SasnMinimize, ZeroCoupling) {
  ModelParams p = canonical();
  p.coupling = {0.0, 0.0};
  const SasMinimum m = sasn_minimize(p);
  EXPECT_NEAR(m.observables.energy, -18.0, 1e-12);
}

TEST(SasnMinimize, BelowSasc) {
  for (int two_j : {2, 10, 18})
    for (double g2 : {0.2, 0.8, 1.0, 1.3, 2.0}) {
      const ModelParams p = canonical(two_j, g2);
      const SasMinimum m = sasn_minimize(p);
      EXPECT_LE(m.observables.energy, sasc_observables(p).energy + 1e-12) << "2j=" << two_j << " g2=" << g2;
      EXPECT_FALSE(m.complex_quadrature);
    }
}

TEST(SasnMinimize, NoConvergenceReported) {
  NelderMeadOptions opt;
  opt.max_evals = 20;
  EXPECT_THROW(sasn_minimize(canonical(10, 1.3), opt), NoConvergence);
}

TEST(StateVectors, ZeroPointIsTheGroundConfiguration) {
  const BasisLayout b(6, {3, 3});
  const auto idx = static_cast<Eigen::Index>(b.index(0, std::vector<int>{0, 0}));
  const StateVector cs = cs_state_vector(VariationalPoint::zero(2), b);
  const StateVector sas = sas_state_vector(VariationalPoint::zero(2), b);
  EXPECT_NEAR(std::abs(cs[idx]), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(sas[idx]), 1.0, 1e-15);
}

TEST(StateVectors, SasHasEvenParity) {
  const BasisLayout b(5, {30, 30});
  VariationalPoint pt = VariationalPoint::zero(2);
  pt.q = {0.7, -0.4};
  pt.p = {0.2, 0.3};
  pt.theta = 1.2;
  pt.phi = 0.8;
  const StateVector v = sas_state_vector(pt, b);
  EXPECT_NEAR(v.norm(), 1.0, 1e-12);
  EXPECT_NEAR(expectation(build_parity(b), v), 1.0, 1e-14);
}

TEST(StateVectors, TruncationLossDetected) {
  const BasisLayout b(4, {3, 3});
  VariationalPoint pt = VariationalPoint::zero(2);
  pt.q = {2.0, 0.0};
  EXPECT_THROW(cs_state_vector(pt, b), TruncationLoss);
}

TEST(VariationalPoint, NormalizationKeepsEnergies) {
  const ModelParams p = canonical(6, 1.3);
  VariationalPoint pt = VariationalPoint::zero(2);
  pt.q = {0.4, 0.9};
  pt.theta = 4.0;
  pt.phi = -0.3;
  const VariationalPoint n = pt.normalized();
  EXPECT_GE(n.theta, 0.0);
  EXPECT_LE(n.theta, std::numbers::pi);
  EXPECT_GE(n.phi, 0.0);
  EXPECT_LT(n.phi, 2 * std::numbers::pi);
  EXPECT_NEAR(cs_energy(p, pt), cs_energy(p, n), 1e-12);
  EXPECT_NEAR(sas_energy(p, pt), sas_energy(p, n), 1e-12);
}
