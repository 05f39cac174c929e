#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "idmps/core/errors.hpp"
#include "idmps/core/numerics.hpp"

using namespace idmps::numerics;

namespace {

CMatrix random_antisym(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix a = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      a(i, j) = cplx(g(rng), g(rng));
      a(j, i) = -a(i, j);
    }
  }
  return a;
}

CMatrix random_hermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = cplx(g(rng), g(rng));
  return 0.5 * (a + a.adjoint());
}

LinearOperator wrap(const CMatrix& m) {
  return LinearOperator(static_cast<std::size_t>(m.rows()), [m](const cplx* in, cplx* out) {
    Eigen::Map<const CVector> x(in, m.rows());
    Eigen::Map<CVector> y(out, m.rows());
    y.noalias() = m * x;
  });
}

// Periodic spin-1/2 Heisenberg chain from Kronecker products.
CMatrix kron_heisenberg(int n) {
  CMatrix sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 0.5, 0.5, 0;
  sy << 0, cplx(0, -0.5), cplx(0, 0.5), 0;
  sz << 0.5, 0, 0, -0.5;
  auto site_op = [n](const CMatrix& op, int site) {
    CMatrix r = CMatrix::Identity(1, 1);
    for (int s = 0; s < n; ++s) {
      const CMatrix f = s == site ? op : CMatrix::Identity(2, 2);
      CMatrix k(r.rows() * 2, r.cols() * 2);
      for (int i = 0; i < r.rows(); ++i)
        for (int j = 0; j < r.cols(); ++j) k.block(2 * i, 2 * j, 2, 2) = r(i, j) * f;
      r = k;
    }
    return r;
  };
  const int dim = 1 << n;
  CMatrix h = CMatrix::Zero(dim, dim);
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    for (const CMatrix* op : {&sx, &sy, &sz}) h += site_op(*op, i) * site_op(*op, j);
  }
  return h;
}

}  // namespace

TEST(Pfaffian, SmallClosedForms) {
  CMatrix a2(2, 2);
  a2 << 0, cplx(1.5, -0.5), cplx(-1.5, 0.5), 0;
  EXPECT_LT(std::abs(pfaffian(a2) - cplx(1.5, -0.5)), 1e-15);

  std::mt19937_64 rng(1);
  const CMatrix a = random_antisym(4, rng);
  const cplx expected = a(0, 1) * a(2, 3) - a(0, 2) * a(1, 3) + a(0, 3) * a(1, 2);
  EXPECT_LT(std::abs(pfaffian(a) - expected), 1e-13);
  EXPECT_LT(std::abs(pfaffian_expansion(a) - expected), 1e-13);
}

TEST(Pfaffian, OddDimensionIsZero) {
  std::mt19937_64 rng(2);
  EXPECT_EQ(pfaffian(random_antisym(5, rng)), cplx(0.0, 0.0));
  EXPECT_EQ(pfaffian(CMatrix::Zero(0, 0)), cplx(1.0, 0.0));
}

TEST(Pfaffian, ZeroPivotGivesZero) {
  CMatrix a = CMatrix::Zero(4, 4);
  a(0, 1) = 2.0;
  a(1, 0) = -2.0;
  EXPECT_EQ(pfaffian(a), cplx(0.0, 0.0));
}

TEST(Pfaffian, RejectsNonAntisymmetric) {
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 1) = 1.0;
  a(1, 0) = 1.0;
  EXPECT_THROW(pfaffian(a), idmps::InputError);
  EXPECT_THROW(pfaffian(CMatrix::Zero(2, 3)), idmps::InputError);
}

TEST(Pfaffian, AgreesWithExpansion) {
  std::mt19937_64 rng(3);
  for (int n = 2; n <= 8; n += 2) {
    for (int t = 0; t < 5; ++t) {
      const CMatrix a = random_antisym(n, rng);
      const cplx e = pfaffian_expansion(a);
      EXPECT_LT(std::abs(pfaffian(a) - e) / std::abs(e), 1e-10) << "n=" << n;
    }
  }
}

TEST(Pfaffian, SquareIsDeterminant) {
  std::mt19937_64 rng(4);
  for (int n = 2; n <= 12; n += 2) {
    for (int t = 0; t < 5; ++t) {
      const CMatrix a = random_antisym(n, rng);
      const cplx pf = pfaffian(a);
      const cplx det = a.partialPivLu().determinant();
      EXPECT_LT(std::abs(pf * pf - det) / std::abs(det), 1e-10) << "n=" << n;
    }
  }
}

TEST(Pfaffian, CongruenceInvariance) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int n = 2; n <= 10; n += 2) {
    const CMatrix a = random_antisym(n, rng);
    CMatrix b(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b(i, j) = cplx(g(rng), g(rng));
    const cplx lhs = pfaffian(b.transpose() * a * b);
    const cplx rhs = b.determinant() * pfaffian(a);
    EXPECT_LT(std::abs(lhs - rhs) / std::abs(rhs), 1e-9);
  }
}

TEST(Eig, Diagonal) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(1, 1) = 1.0;
  const auto r = eig_smallest(wrap(m), 1);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_NEAR(r[0].value, 0.0, 1e-15);
  EXPECT_NEAR(std::abs(r[0].vector[0]), 1.0, 1e-15);
}

TEST(Eig, TwoSiteSinglet) {
  const CMatrix h = kron_heisenberg(2) * 0.5;  // periodic N=2 counts the bond twice
  const auto r = eig_smallest(wrap(h), 1);
  EXPECT_NEAR(r[0].value, -0.75, 1e-14);
}

TEST(Eig, DenseAndLanczosAgree) {
  const CMatrix h = kron_heisenberg(8);
  auto op = wrap(h);
  EigOptions dense;
  dense.method = EigMethod::dense;
  EigOptions lanczos;
  lanczos.method = EigMethod::lanczos;
  const auto a = eig_smallest(op, 4, dense);
  const auto b = eig_smallest(op, 4, lanczos);
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(a[i].value, b[i].value, 1e-8);
    EXPECT_LE(b[i].residual, 1e-8);
  }
  // The 8-site chain's first excited level is a triplet.
  EXPECT_NEAR(b[1].value, b[3].value, 1e-8);
}

TEST(Eig, EigenvectorsOrthonormal) {
  std::mt19937_64 rng(6);
  const CMatrix h = random_hermitian(200, rng);
  for (EigMethod m : {EigMethod::dense, EigMethod::lanczos}) {
    EigOptions o;
    o.method = m;
    const auto r = eig_smallest(wrap(h), 5, o);
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) {
        const cplx ov = r[i].vector.dot(r[j].vector);
        EXPECT_NEAR(std::abs(ov - (i == j ? 1.0 : 0.0)), 0.0, 1e-10);
      }
    }
  }
}

TEST(Eig, LanczosResolvesExactDegeneracy) {
  std::mt19937_64 rng(7);
  const int n = 150;
  Eigen::VectorXd spec(n);
  for (int i = 0; i < n; ++i) spec[i] = 1.0 + i * 0.05;
  spec[0] = spec[1] = spec[2] = -2.0;
  const CMatrix q = random_hermitian(n, rng).householderQr().householderQ();
  const CMatrix h = q * spec.cast<cplx>().asDiagonal() * q.adjoint();
  EigOptions o;
  o.method = EigMethod::lanczos;
  const auto r = eig_smallest(wrap(h), 4, o);
  EXPECT_NEAR(r[0].value, -2.0, 1e-9);
  EXPECT_NEAR(r[2].value, -2.0, 1e-9);
  EXPECT_NEAR(r[3].value, spec[3], 1e-9);
}

TEST(Eig, RejectsBadCount) {
  CMatrix m = CMatrix::Identity(3, 3);
  EXPECT_THROW(eig_smallest(wrap(m), 0), idmps::InputError);
  EXPECT_THROW(eig_smallest(wrap(m), 4), idmps::InputError);
}

TEST(Minimize, Quadratic) {
  const auto r = minimize_scalar([](double x) { return (x - 2.0) * (x - 2.0); }, 0.0, 5.0, 1e-6);
  EXPECT_NEAR(r.x, 2.0, 1e-6);
}

TEST(Minimize, Cosine) {
  const auto r = minimize_scalar([](double x) { return std::cos(x); }, 2.0, 4.0, 1e-8);
  EXPECT_NEAR(r.x, M_PI, 1e-7);
  EXPECT_NEAR(r.f, -1.0, 1e-14);
}

TEST(Minimize, EdgeMinimum) {
  const auto r = minimize_scalar([](double x) { return x; }, 0.5, 3.0, 1e-8);
  EXPECT_EQ(r.x, 0.5);
}

TEST(Minimize, NaNPropagates) {
  EXPECT_THROW(minimize_scalar([](double x) { return x > 1.0 ? NAN : x; }, 0.0, 2.0),
               idmps::NumericalError);
  EXPECT_THROW(minimize_scalar([](double x) { return x; }, 2.0, 1.0), idmps::InputError);
}
