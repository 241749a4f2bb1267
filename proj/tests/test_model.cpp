#include <gtest/gtest.h>

#include <cmath>

#include "dicke/model.hpp"

using namespace dicke;

namespace {

ModelParams canonical(int two_j = 18) {
  ModelParams p;
  p.two_j = two_j;
  return p;
}

}  // namespace

TEST(ModelParams, DefaultsAreTheCanonicalSet) {
  const ModelParams p;
  EXPECT_EQ(p.atoms, 18);
  EXPECT_EQ(p.two_j, 18);
  EXPECT_DOUBLE_EQ(p.omega_a, 2.0);
  EXPECT_EQ(p.modes(), 2u);
  EXPECT_NO_THROW(p.validate());
}

TEST(ModelParams, RejectsBrokenInvariants) {
  auto broken = [](auto mutate) {
    ModelParams p;
    mutate(p);
    return p;
  };
  EXPECT_THROW(broken([](ModelParams& p) { p.atoms = 0; }).validate(), InvalidParams);
  EXPECT_THROW(broken([](ModelParams& p) { p.two_j = 20; }).validate(), InvalidParams);
  EXPECT_THROW(broken([](ModelParams& p) { p.two_j = 17; }).validate(), InvalidParams);  // N even, j half-odd
  EXPECT_THROW(broken([](ModelParams& p) { p.two_j = -2; }).validate(), InvalidParams);
  EXPECT_THROW(broken([](ModelParams& p) { p.mode_freq = {2.0, 0.0}; }).validate(), InvalidParams);
  EXPECT_THROW(broken([](ModelParams& p) { p.mode_freq = {2.0}; }).validate(), InvalidParams);
  EXPECT_THROW(broken([](ModelParams& p) {
                 p.mode_freq.clear();
                 p.coupling.clear();
               }).validate(),
               InvalidParams);
  EXPECT_THROW(broken([](ModelParams& p) { p.coupling = {0.5, -1.0}; }).validate(), InvalidParams);
  EXPECT_THROW(broken([](ModelParams& p) { p.omega_a = -1.0; }).validate(), InvalidParams);
  EXPECT_THROW(broken([](ModelParams& p) { p.omega_a = NAN; }).validate(), InvalidParams);

  ModelParams odd;
  odd.atoms = 3;
  odd.two_j = 1;
  EXPECT_NO_THROW(odd.validate());
  odd.two_j = 0;
  EXPECT_THROW(odd.validate(), InvalidParams);
}

TEST(DerivedScalars, CanonicalPoint) {
  const DerivedScalars s = derived_scalars(canonical());
  EXPECT_NEAR(s.varsigma, 0.625, 1e-15);
  EXPECT_NEAR(s.sigma, 0.3125, 1e-15);
  ASSERT_TRUE(s.delta);
  EXPECT_NEAR(*s.delta, 0.8, 1e-15);
  ASSERT_TRUE(s.epsilon);
  EXPECT_NEAR(*s.epsilon, std::exp(-9.0 * 2.0 * 0.3125 / 0.625), 1e-15);
}

TEST(DerivedScalars, CriticalCoupling) {
  ModelParams p = canonical();
  p.coupling[1] = std::sqrt(0.75);
  EXPECT_NEAR(delta_of(p), 1.0, 1e-15);
}

TEST(DerivedScalars, ZeroCouplingHasNoDelta) {
  ModelParams p = canonical();
  p.coupling = {0.0, 0.0};
  const DerivedScalars s = derived_scalars(p);
  EXPECT_EQ(s.varsigma, 0.0);
  EXPECT_EQ(s.sigma, 0.0);
  EXPECT_FALSE(s.delta);
  EXPECT_THROW(s.require_delta(), DegenerateCoupling);
  EXPECT_THROW(delta_of(p), DegenerateCoupling);
}

TEST(DerivedScalars, ZeroCooperation) {
  ModelParams p = canonical(0);
  EXPECT_THROW(delta_of(p), ZeroCooperation);
}

TEST(DerivedScalars, AdditiveOverModes) {
  ModelParams p = canonical();
  p.mode_freq = {1.3, 2.7, 0.9};
  p.coupling = {0.4, 1.1, 0.2};
  const DerivedScalars all = derived_scalars(p);
  double vs = 0.0, sg = 0.0;
  for (std::size_t i = 0; i < p.modes(); ++i) {
    ModelParams one = p;
    one.mode_freq = {p.mode_freq[i]};
    one.coupling = {p.coupling[i]};
    vs += derived_scalars(one).varsigma;
    sg += derived_scalars(one).sigma;
  }
  EXPECT_NEAR(all.varsigma, vs, 1e-14);
  EXPECT_NEAR(all.sigma, sg, 1e-14);
}

TEST(DerivedScalars, DeltaScalesInverselyWithCouplingSquared) {
  ModelParams p = canonical();
  const double d0 = delta_of(p);
  for (double c : {0.5, 2.0, 3.7}) {
    ModelParams q = p;
    for (double& g : q.coupling) g *= c;
    EXPECT_NEAR(delta_of(q), d0 / (c * c), 1e-14);
  }
}

TEST(DerivedScalars, EpsilonInUnitInterval) {
  for (double wa : {0.0, 0.3, 2.0, 10.0}) {
    ModelParams p = canonical(10);
    p.omega_a = wa;
    const auto e = derived_scalars(p).epsilon;
    ASSERT_TRUE(e);
    EXPECT_GT(*e, 0.0);
    EXPECT_LE(*e, 1.0);
  }
}
