#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "idmps/core/errors.hpp"
#include "idmps/core/hamiltonians.hpp"
#include "idmps/core/refstates.hpp"

using namespace idmps::hamiltonians;
using idmps::InputError;
using idmps::hilbert::CMatrix;
using idmps::hilbert::CVector;
using idmps::hilbert::cplx;

namespace {

// S^a on one site of an n-site chain, by dense Kronecker products.
CMatrix site_op(const CMatrix& op, int site, int n) {
  const int d = static_cast<int>(op.rows());
  CMatrix out = CMatrix::Identity(1, 1);
  for (int s = 0; s < n; ++s) {
    const CMatrix f = s == site ? op : CMatrix::Identity(d, d);
    CMatrix next = CMatrix::Zero(out.rows() * d, out.cols() * d);
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      for (Eigen::Index j = 0; j < out.cols(); ++j) next.block(i * d, j * d, d, d) = out(i, j) * f;
    out = next;
  }
  return out;
}

CMatrix dot_dense(int i, int j, int n, int d) {
  const auto s = idmps::hilbert::spin_matrices(d);
  CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(std::pow(d, n)), static_cast<Eigen::Index>(std::pow(d, n)));
  for (int a = 0; a < 3; ++a) out += site_op(s[a], i, n) * site_op(s[a], j, n);
  return out;
}

CMatrix dense_j1j2(int n, double j1, double j2) {
  CMatrix h = CMatrix::Zero(1 << n, 1 << n);
  for (int j = 0; j < n; ++j) {
    h += j1 * dot_dense(j, (j + 1) % n, n, 2);
    h += j2 * dot_dense(j, (j + 2) % n, n, 2);
  }
  return h;
}

CMatrix dense_hs(int n) {
  CMatrix h = CMatrix::Zero(1 << n, 1 << n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) h += dot_dense(i, j, n, 2) / std::pow(std::sin(M_PI * (j - i) / n), 2);
  return h;
}

CMatrix dense_qbq(int n, double theta) {
  const int dim = static_cast<int>(std::pow(3, n));
  CMatrix h = CMatrix::Zero(dim, dim);
  for (int j = 0; j < n; ++j) {
    const CMatrix p = dot_dense(j, (j + 1) % n, n, 3);
    h += std::cos(theta) * p + std::sin(theta) * p * p;
  }
  return h;
}

CMatrix dense_of(const LinearOperator& op) {
  const auto n = static_cast<Eigen::Index>(op.dim());
  CMatrix m(n, n);
  CVector e = CVector::Zero(n);
  for (Eigen::Index c = 0; c < n; ++c) {
    e.setZero();
    e[c] = 1.0;
    m.col(c) = op.apply(e);
  }
  return m;
}

}  // namespace

TEST(Spec, Validation) {
  EXPECT_EQ(parse_kind("J1J2"), Kind::J1J2);
  EXPECT_EQ(parse_kind("Hs"), Kind::HS);
  EXPECT_THROW(parse_kind("heis"), InputError);
  HamiltonianSpec s;
  s.n = 1;
  EXPECT_THROW(s.validate(), InputError);
  s.kind = Kind::QBQ;
  s.n = kMaxEdSitesD3 + 1;
  EXPECT_THROW(s.validate(), InputError);
  s.kind = Kind::J1J2;
  s.n = 6;
  s.j2 = std::nan("");
  EXPECT_THROW(s.validate(), InputError);
}

TEST(SpinDot, TwoSiteSpectrum) {
  // S1.S2 = (S(S+1) - 2 s(s+1)) / 2
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e2(spin_dot(2));
  EXPECT_NEAR(e2.eigenvalues()(0), -0.75, 1e-15);
  EXPECT_NEAR(e2.eigenvalues()(3), 0.25, 1e-15);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e3(spin_dot(3));
  EXPECT_NEAR(e3.eigenvalues()(0), -2.0, 1e-14);
  EXPECT_NEAR(e3.eigenvalues()(1), -1.0, 1e-14);
  EXPECT_NEAR(e3.eigenvalues()(8), 1.0, 1e-14);
}

TEST(Operators, MatchDenseKroneckerSums) {
  for (int n : {4, 5, 6}) {
    HamiltonianSpec s{Kind::J1J2, n, 0.8, 0.37, 0.0};
    EXPECT_LT((dense_of(build(s)) - dense_j1j2(n, 0.8, 0.37)).norm(), 1e-12) << "j1j2 N=" << n;
    HamiltonianSpec hs{Kind::HS, n};
    EXPECT_LT((dense_of(build(hs)) - dense_hs(n)).norm(), 1e-12) << "hs N=" << n;
  }
  for (int n : {3, 4}) {
    HamiltonianSpec q{Kind::QBQ, n, 1.0, 0.0, 0.7};
    EXPECT_LT((dense_of(build(q)) - dense_qbq(n, 0.7)).norm(), 1e-12) << "qbq N=" << n;
  }
  // The periodic sum is taken literally at N = 2: every bond appears twice
  // and S_j.S_j = 3/4 contributes a constant.
  HamiltonianSpec two{Kind::J1J2, 2, 1.0, 0.5, 0.0};
  EXPECT_LT((dense_of(build(two)) - dense_j1j2(2, 1.0, 0.5)).norm(), 1e-13);
}

TEST(Operators, SectorBlocksMatchFull) {
  HamiltonianSpec s{Kind::J1J2, 6, 1.0, 0.3, 0.0};
  const CMatrix full = dense_of(build(s));
  for (int q : {0, 2, 6}) {
    const auto sec = build_sector(s, q);
    const CMatrix blk = dense_of(sec.op);
    for (std::size_t a = 0; a < sec.index.size(); ++a)
      for (std::size_t b = 0; b < sec.index.size(); ++b)
        EXPECT_EQ(blk(a, b), full(sec.index.ranks[a], sec.index.ranks[b]));
  }
}

TEST(Spectra, HaldaneShastry) {
  for (int n : {4, 6, 8}) {
    const auto g = ground_subspace({Kind::HS, n}, 1);
    ASSERT_EQ(g.size(), 1u);
    EXPECT_NEAR(g[0].energy, -(n * n * n + 5.0 * n) / 24.0, 1e-9) << "N=" << n;
    EXPECT_NEAR(hs_ground_energy(n), -(n * n * n + 5.0 * n) / 24.0, 1e-12);
    EXPECT_NEAR(hs_excited_energy(n) - hs_ground_energy(n), n / 2.0, 1e-12);
    const auto op = build({Kind::HS, n});
    EXPECT_LT(eigenstate_residual(op, idmps::refstates::hs_excited_state(n), hs_excited_energy(n)), 1e-8);
  }
}

TEST(Spectra, MajumdarGhosh) {
  for (int n : {6, 8}) {
    const auto m = ground_multiplet({Kind::J1J2, n, 1.0, 0.5, 0.0});
    ASSERT_EQ(m.size(), 2u) << "N=" << n;
    for (const auto& e : m) EXPECT_NEAR(e.energy, -3.0 * n / 8.0, 1e-9);
    const auto op = build({Kind::J1J2, n, 1.0, 0.5, 0.0});
    const auto d0 = idmps::refstates::dimer_state(n, 0, idmps::refstates::singlet_pair());
    EXPECT_LT(eigenstate_residual(op, d0, -3.0 * n / 8.0), 1e-12);
  }
}

TEST(Spectra, AkltPoint) {
  const double theta = std::atan(1.0 / 3.0);
  const auto g = ground_subspace({Kind::QBQ, 6, 1.0, 0.0, theta}, 2);
  // cos(theta) (S.S + (S.S)^2 / 3) = 2 cos(theta) (P_2 - 1/3) per bond.
  const double e0 = -2.0 / 3.0 * 6 * std::cos(theta);
  EXPECT_NEAR(g[0].energy, e0, 1e-9);
  EXPECT_GT(g[1].energy - g[0].energy, 0.1);
  const auto aklt = idmps::refstates::aklt_state(6, idmps::refstates::Basis::standard);
  EXPECT_GT(idmps::hilbert::fidelity(g[0].state, aklt), 1.0 - 1e-10);
}

TEST(Spectra, OrderingAndSectors) {
  // Heisenberg ring N = 4: singlet at -2, then a triplet at -1 reported by Sz descending.
  const auto g = ground_subspace({Kind::J1J2, 4, 1.0, 0.0, 0.0}, 4);
  ASSERT_EQ(g.size(), 4u);
  EXPECT_NEAR(g[0].energy, -2.0, 1e-10);
  EXPECT_NEAR(g[1].energy, -1.0, 1e-10);
  EXPECT_EQ(g[0].twice_sz, 0);
  EXPECT_NEAR(g[1].energy, g[3].energy, 1e-9);
  EXPECT_EQ(g[1].twice_sz, 2);
  EXPECT_EQ(g[2].twice_sz, 0);
  EXPECT_EQ(g[3].twice_sz, -2);
  for (const auto& e : g) {
    EXPECT_LT(e.residual, 1e-8);
    EXPECT_NEAR(idmps::hilbert::total_spin_quantum(e.state).sz, e.twice_sz / 2.0, 1e-10);
  }
}

TEST(Parent, AnnihilatesAndPositive) {
  for (int n : {4, 6}) {
    const auto c = parent_annihilation_check(n);
    EXPECT_LT(c.residual, 1e-8) << "N=" << n;
    EXPECT_GE(c.min_eigenvalue, -1e-9) << "N=" << n;
  }
  EXPECT_THROW(parent_annihilation_check(14), InputError);
}

TEST(Parent, UniformCaseIsHaldaneShastryPlusCasimir) {
  // On the uniform ring the parent operator lies in span{H_HS, S_tot^2, 1}.
  const int n = 6;
  const CMatrix p = dense_of(build({Kind::PARENT, n}));
  const CMatrix h = dense_hs(n);
  CMatrix s2 = CMatrix::Zero(1 << n, 1 << n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s2 += dot_dense(i, j, n, 2);
  const auto dim = p.size();
  Eigen::MatrixXcd a(dim, 3);
  a.col(0) = Eigen::Map<const CVector>(h.data(), dim);
  a.col(1) = Eigen::Map<const CVector>(s2.data(), dim);
  a.col(2) = Eigen::Map<const CVector>(CMatrix::Identity(1 << n, 1 << n).eval().data(), dim);
  const CVector b = Eigen::Map<const CVector>(p.data(), dim);
  const CVector x = a.colPivHouseholderQr().solve(b);
  EXPECT_LT((a * x - b).norm(), 1e-10 * b.norm());
  EXPECT_GT(std::abs(x[0]), 1e-3);
}

TEST(Energy, RejectsMismatchedStates) {
  const auto op = build({Kind::HS, 4});
  EXPECT_THROW(energy(op, idmps::hilbert::StateVector(4, 3)), InputError);
}
