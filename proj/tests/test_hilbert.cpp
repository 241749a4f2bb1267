#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dicke/hilbert.hpp"

using namespace dicke;

namespace {

Eigen::VectorXd basis_state(const BasisLayout& b, std::size_t i) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(b.dim()));
  v[static_cast<Eigen::Index>(i)] = 1.0;
  return v;
}

}  // namespace

TEST(BasisLayout, ProductDimension) {
  EXPECT_EQ(BasisLayout(2, {3, 3}).dim(), 48u);
  EXPECT_EQ(BasisLayout(18, {40, 40}).dim(), 31939u);
  EXPECT_EQ(BasisLayout(18, {40, 40}).spin_dim(), 19u);
  EXPECT_EQ(BasisLayout(0, {5}).dim(), 6u);
}

TEST(BasisLayout, DimensionLimit) {
  EXPECT_THROW(BasisLayout(18, {40, 40}, 30000), DimensionOverflow);
  EXPECT_NO_THROW(BasisLayout(18, {40, 40}, 31939));
  EXPECT_THROW(BasisLayout(2, {-1}), InvalidParams);
  EXPECT_THROW(BasisLayout(2, {}), InvalidParams);
}

TEST(BasisLayout, CodecRoundTrip) {
  const BasisLayout b(2, {3, 3});
  const auto l = b.label(17);
  EXPECT_EQ(b.index(l), 17u);
  for (std::size_t i = 0; i < b.dim(); ++i) {
    const auto lab = b.label(i);
    ASSERT_EQ(b.index(lab), i);
    for (std::size_t m = 0; m < b.modes(); ++m) ASSERT_EQ(b.occupation(i, m), lab.occupations[m]);
  }
  const BasisLayout c(5, {2, 4, 1});
  for (std::size_t i = 0; i < c.dim(); ++i) ASSERT_EQ(c.index(c.label(i)), i);
}

TEST(BasisLayout, LastModeVariesFastest) {
  const BasisLayout b(2, {3, 3});
  const auto l = b.label(17);  // 17 = 1 * 16 + 0 * 4 + 1
  EXPECT_EQ(l.level, 1);
  EXPECT_EQ(l.occupations, (std::vector<int>{0, 1}));
  EXPECT_DOUBLE_EQ(l.m(2), 0.0);
}

TEST(SpinOperators, SpinHalfRaising) {
  const BasisLayout b(1, {0});
  const Eigen::MatrixXd jp = op_jplus(b).dense();
  EXPECT_DOUBLE_EQ(jp(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(jp(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(jp(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(jp(1, 1), 0.0);
}

TEST(SpinOperators, CommutatorIsExact) {
  for (int two_j : {1, 2, 3, 7, 18}) {
    const BasisLayout b(two_j, {2, 1});
    const Eigen::MatrixXd jp = op_jplus(b).dense(), jm = op_jminus(b).dense(), jz = op_jz(b).dense();
    EXPECT_LT((jp * jm - jm * jp - 2.0 * jz).cwiseAbs().maxCoeff(), 1e-12) << "2j=" << two_j;
  }
}

TEST(SpinOperators, CasimirIsJTimesJPlusOne) {
  for (int two_j : {1, 2, 5, 9}) {
    const BasisLayout b(two_j, {1});
    const Eigen::MatrixXd jp = op_jplus(b).dense(), jm = op_jminus(b).dense(), jz = op_jz(b).dense();
    const Eigen::MatrixXd j2 = 0.5 * (jp * jm + jm * jp) + jz * jz;
    const double j = 0.5 * two_j;
    const Eigen::MatrixXd expect = j * (j + 1) * Eigen::MatrixXd::Identity(j2.rows(), j2.cols());
    EXPECT_LT((j2 - expect).cwiseAbs().maxCoeff(), 1e-12) << "2j=" << two_j;
  }
}

TEST(SpinOperators, LoweringIsTransposeOfRaising) {
  const BasisLayout b(6, {2});
  EXPECT_EQ((op_jminus(b).dense() - op_jplus(b).dense().transpose()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(BosonOperators, VacuumAndNumber) {
  const BasisLayout b(2, {4, 3});
  const std::size_t vac = b.index(0, std::vector<int>{0, 0});
  for (std::size_t m = 0; m < 2; ++m) {
    EXPECT_EQ((op_a(b, m).matrix() * basis_state(b, vac)).norm(), 0.0);
    const Eigen::MatrixXd n = op_number(b, m).dense();
    for (std::size_t i = 0; i < b.dim(); ++i) {
      EXPECT_DOUBLE_EQ(n(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)), b.occupation(i, m));
    }
    const Eigen::MatrixXd off = n - Eigen::MatrixXd(n.diagonal().asDiagonal());
    EXPECT_EQ(off.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_LT((op_adag(b, m).dense() * op_a(b, m).dense() - n).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(BosonOperators, DifferentModesCommute) {
  const BasisLayout b(1, {3, 4});
  const Eigen::MatrixXd a1 = op_a(b, 0).dense(), a2d = op_adag(b, 1).dense(), a2 = op_a(b, 1).dense();
  EXPECT_EQ((a1 * a2d - a2d * a1).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((a1 * a2 - a2 * a1).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Hamiltonian, ZeroCouplingIsDiagonal) {
  ModelParams p;
  p.two_j = 6;
  p.coupling = {0.0, 0.0};
  p.omega_a = 1.5;
  p.mode_freq = {2.0, 0.7};
  const BasisLayout b(6, {3, 3});
  const Eigen::MatrixXd h = build_hamiltonian(p, b).dense();
  const Eigen::MatrixXd off = h - Eigen::MatrixXd(h.diagonal().asDiagonal());
  EXPECT_EQ(off.cwiseAbs().maxCoeff(), 0.0);
  for (std::size_t i = 0; i < b.dim(); ++i) {
    const auto l = b.label(i);
    const double expect = p.omega_a * l.m(6) + 2.0 * l.occupations[0] + 0.7 * l.occupations[1];
    EXPECT_NEAR(h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)), expect, 1e-14);
  }
  EXPECT_NEAR(h.diagonal().minCoeff(), -3.0 * 1.5, 1e-14);
  EXPECT_EQ(h.diagonal().minCoeff(), h(static_cast<Eigen::Index>(b.index(0, std::vector<int>{0, 0})),
                                       static_cast<Eigen::Index>(b.index(0, std::vector<int>{0, 0}))));
}

TEST(Hamiltonian, ExactlySymmetric) {
  ModelParams p;
  const BasisLayout b(18, {12, 15});
  EXPECT_EQ(build_hamiltonian(p, b).asymmetry(), 0.0);
}

TEST(Hamiltonian, HandAssembledRabiBlock) {
  // j = 1/2, one mode, nmax = 1; order (s, nu) = (0,0), (0,1), (1,0), (1,1).
  ModelParams p;
  p.atoms = 1;
  p.two_j = 1;
  p.omega_a = 1.3;
  p.mode_freq = {0.7};
  p.coupling = {0.45};
  const BasisLayout b(1, {1});
  const double wa = p.omega_a, w = p.mode_freq[0], g = p.coupling[0] / std::sqrt(1.0);
  Eigen::Matrix4d expect;
  expect << -wa / 2, 0, 0, -g,
            0, -wa / 2 + w, -g, 0,
            0, -g, wa / 2, 0,
            -g, 0, 0, wa / 2 + w;
  EXPECT_LT((build_hamiltonian(p, b).dense() - expect).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Parity, DiagonalSigns) {
  const BasisLayout b(4, {2, 2});
  const Eigen::VectorXd par = parity_diagonal(b);
  EXPECT_EQ(par[static_cast<Eigen::Index>(b.index(0, std::vector<int>{0, 0}))], 1.0);
  EXPECT_EQ(par[static_cast<Eigen::Index>(b.index(1, std::vector<int>{0, 0}))], -1.0);
  EXPECT_EQ(par[static_cast<Eigen::Index>(b.index(1, std::vector<int>{1, 0}))], 1.0);
  EXPECT_EQ(par[static_cast<Eigen::Index>(b.index(0, std::vector<int>{2, 1}))], -1.0);
  const Eigen::MatrixXd pm = build_parity(b).dense();
  EXPECT_EQ((pm * pm - Eigen::MatrixXd::Identity(pm.rows(), pm.cols())).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Parity, CommutesWithHamiltonian) {
  ModelParams p;
  p.two_j = 8;
  const BasisLayout b(8, {6, 5});
  const Eigen::MatrixXd h = build_hamiltonian(p, b).dense(), pm = build_parity(b).dense();
  EXPECT_EQ((h * pm - pm * h).cwiseAbs().maxCoeff(), 0.0);
}
