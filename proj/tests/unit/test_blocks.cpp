#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "idmps/core/blocks.hpp"
#include "idmps/core/errors.hpp"

using namespace idmps::blocks;
using idmps::InputError;
using idmps::hilbert::config_of;
using idmps::hilbert::full_dim;
using idmps::special::ModularParam;

namespace {

const cplx I{0.0, 1.0};

// Triple-product theta_nu(z | tau), tau = iR.
cplx theta_prod(int nu, double z, double R) {
  const double q = std::exp(-M_PI * R);
  const double c = std::cos(2.0 * M_PI * z);
  double p = 1.0;
  for (int m = 1; m < 200; ++m) {
    const double q2m = std::pow(q, 2 * m);
    const double q2m1 = std::pow(q, 2 * m - 1);
    switch (nu) {
      case 1: p *= (1 - q2m) * (1 - 2 * q2m * c + q2m * q2m); break;
      case 2: p *= (1 - q2m) * (1 + 2 * q2m * c + q2m * q2m); break;
      case 3: p *= (1 - q2m) * (1 + 2 * q2m1 * c + q2m1 * q2m1); break;
      default: p *= (1 - q2m) * (1 - 2 * q2m1 * c + q2m1 * q2m1); break;
    }
  }
  const double q14 = std::exp(-M_PI * R / 4.0);
  if (nu == 1) return 2 * q14 * std::sin(M_PI * z) * p;
  if (nu == 2) return 2 * q14 * std::cos(M_PI * z) * p;
  return p;
}

cplx prime_prod(double z, double R) {
  const double q = std::exp(-M_PI * R);
  double p = 1.0;
  for (int m = 1; m < 200; ++m) p *= std::pow(1 - std::pow(q, 2 * m), 3);
  const cplx d1 = 2 * M_PI * std::exp(-M_PI * R / 4.0) * p;
  return theta_prod(1, z, R) / d1;
}

// theta[a; 0](x | 2 i R) by direct summation.
cplx theta_char_2tau(double a, double x, double R) {
  cplx s = 0.0;
  for (int n = -60; n <= 60; ++n) {
    const double m = n + a;
    s += std::exp(-2.0 * M_PI * R * m * m) * std::exp(2.0 * M_PI * I * m * x);
  }
  return s;
}

cplx wp_prod(int nu, double z, double R) {
  return theta_prod(nu, z, R) / (prime_prod(z, R) * theta_prod(nu, 0.0, R));
}

// Pfaffian by expansion along the first row.
cplx pf_expand(const std::vector<std::vector<cplx>>& a, std::vector<int> idx) {
  if (idx.empty()) return 1.0;
  if (idx.size() % 2) return 0.0;
  const int i0 = idx[0];
  cplx s = 0.0;
  for (std::size_t k = 1; k < idx.size(); ++k) {
    std::vector<int> rest;
    for (std::size_t m = 1; m < idx.size(); ++m)
      if (m != k) rest.push_back(idx[m]);
    const double sign = (k % 2) ? 1.0 : -1.0;
    s += sign * a[i0][idx[k]] * pf_expand(a, rest);
  }
  return s;
}

cplx oracle_su2_1(int label, int n, double R, const Config& s) {
  int charge = 0;
  double x = 0.0;
  for (int j = 0; j < n; ++j) {
    charge += s[j];
    x += s[j] * (j + 1.0) / n;
  }
  if (charge != 0) return 0.0;
  int marshall = 1;
  for (int i = 0; i < n; i += 2) marshall *= s[i];
  cplx amp = static_cast<double>(marshall) * theta_char_2tau(label == 0 ? 0.0 : 0.5, x, R);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (s[i] == s[j]) amp *= prime_prod((i - j) / static_cast<double>(n), R);
  return amp;
}

cplx oracle_su2_2(int nu, int n, double R, const Config& s) {
  std::vector<std::vector<cplx>> c(n, std::vector<cplx>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && s[i] == s[j]) c[i][j] = wp_prod(nu, (i - j) / static_cast<double>(n), R);
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  return pf_expand(c, idx);
}

// Checks a == lambda b for one complex lambda over all configurations.
void expect_proportional(const std::function<cplx(const Config&)>& a, const std::function<cplx(const Config&)>& b,
                         int n, int d, double tol) {
  cplx lambda = 0.0;
  double scale = 0.0;
  for (std::uint64_t r = 0; r < full_dim(n, d); ++r) {
    const auto c = config_of(r, n, d);
    const cplx bv = b(c);
    if (std::abs(bv) > scale) {
      scale = std::abs(bv);
      lambda = a(c) / bv;
    }
  }
  ASSERT_GT(scale, 0.0);
  for (std::uint64_t r = 0; r < full_dim(n, d); ++r) {
    const auto c = config_of(r, n, d);
    EXPECT_LT(std::abs(a(c) - lambda * b(c)), tol * std::abs(lambda) * scale) << "rank " << r;
  }
}

// Haldane-Shastry ground state: prod_{i<j} (w_i - w_j)^2 prod_i w_i over
// up-spin positions, w = exp(2 pi i x / N).
cplx hs_gutzwiller(const Config& s) {
  const int n = static_cast<int>(s.size());
  std::vector<cplx> w;
  int down = 0;
  for (int j = 0; j < n; ++j) {
    if (s[j] == 1) w.push_back(std::exp(2.0 * M_PI * I * static_cast<double>(j + 1) / static_cast<double>(n)));
    else ++down;
  }
  if (2 * down != n) return 0.0;
  cplx amp = 1.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    amp *= w[i];
    for (std::size_t j = i + 1; j < w.size(); ++j) amp *= (w[i] - w[j]) * (w[i] - w[j]);
  }
  return amp;
}

}  // namespace

TEST(Spec, Validation) {
  EXPECT_THROW(make_spec("su2_1", "0", 5), InputError);
  EXPECT_THROW(make_spec("su2_1", "2", 4), InputError);
  EXPECT_THROW(make_spec("su2_2", "half", 4), InputError);
  EXPECT_THROW(make_spec("su2_2", "4", kMaxBlockSitesD3 + 2), InputError);
  EXPECT_THROW(make_spec("su2_3", "0", 4), InputError);
  const auto sp = make_spec("su2_2", "3", 6);
  EXPECT_EQ(sp.local_dim(), 3);
  EXPECT_EQ(sp.label_name(), "3");
  EXPECT_EQ(make_spec("su2_1", "half", 4).label, 1);
}

TEST(Marshall, Sign) {
  EXPECT_EQ(marshall_sign({1, -1, 1, -1}), 1);
  EXPECT_EQ(marshall_sign({-1, 1, 1, -1}), -1);
  EXPECT_EQ(marshall_sign({-1, 1, -1, 1}), 1);
}

TEST(SU2Level1, MatchesProductFormulae) {
  for (int label : {0, 1}) {
    for (double R : {0.4, 1.0, 2.0}) {
      const BlockSpec spec = make_spec("su2_1", label ? "half" : "0", 6);
      const BlockEvaluator ev(spec, ModularParam(R));
      expect_proportional([&](const Config& c) { return ev.amplitude(c); },
                          [&](const Config& c) { return oracle_su2_1(label, 6, R, c); }, 6, 2, 1e-11);
    }
  }
}

TEST(SU2Level2, MatchesPfaffianOfProductKernels) {
  for (int nu : {2, 3, 4}) {
    for (double R : {0.5, 1.3}) {
      const BlockSpec spec = make_spec("su2_2", std::to_string(nu), 4);
      const BlockEvaluator ev(spec, ModularParam(R));
      expect_proportional([&](const Config& c) { return ev.amplitude(c); },
                          [&](const Config& c) { return oracle_su2_2(nu, 4, R, c); }, 4, 3, 1e-11);
    }
  }
}

TEST(Cylinder, HaldaneShastryIsGutzwillerState) {
  for (int n : {4, 6, 8}) {
    const BlockSpec spec = make_spec("su2_1", "0", n);
    const BlockEvaluator ev(spec, std::nullopt);
    expect_proportional([&](const Config& c) { return ev.amplitude(c); }, hs_gutzwiller, n, 2, 1e-12);
  }
}

TEST(Cylinder, LargeRadiusApproachesCylinder) {
  for (const auto& [model, label] : {std::pair{"su2_1", "0"}, {"su2_1", "half"}, {"su2_2", "2"}, {"su2_2", "4"}}) {
    const BlockSpec spec = make_spec(model, label, 4);
    const auto torus = build_state(spec, ModularParam(12.0));
    const auto cyl = build_cylinder_state(spec);
    EXPECT_GT(idmps::hilbert::fidelity(torus.state, cyl.state), 1.0 - 1e-12) << model << " " << label;
  }
}

TEST(Cylinder, Psi3AndPsi4Coincide) {
  const auto a = build_cylinder_state(make_spec("su2_2", "3", 6));
  const auto b = build_cylinder_state(make_spec("su2_2", "4", 6));
  EXPECT_GT(idmps::hilbert::fidelity(a.state, b.state), 1.0 - 1e-14);
}

TEST(States, MomentumAndSpin) {
  for (int n : {4, 6}) {
    for (const auto& [model, label] :
         {std::pair{"su2_1", "0"}, {"su2_1", "half"}, {"su2_2", "2"}, {"su2_2", "3"}, {"su2_2", "4"}}) {
      const BlockSpec spec = make_spec(model, label, n);
      const auto st = build_state(spec, ModularParam(0.8));
      EXPECT_LT(std::abs(st.momentum - expected_momentum(spec)), 1e-10) << model << label << " N=" << n;
      EXPECT_NEAR(st.total_spin, 0.0, 1e-8);
      EXPECT_NEAR(st.state.norm(), 1.0, 1e-14);
      const auto std_basis = standard_basis(spec, st.state);
      EXPECT_LT(idmps::hilbert::singlet_residual(std_basis), 1e-8);
    }
  }
}

TEST(States, MarshallMutationBreaksSinglet) {
  BlockSpec spec = make_spec("su2_1", "0", 6);
  spec.marshall = MarshallMode::omitted;
  const auto st = build_state(spec, ModularParam(1.0));
  EXPECT_GT(idmps::hilbert::singlet_residual(st.state), 1e-3);
}

TEST(States, DeepThinTorusStaysFinite) {
  // Raw amplitudes span hundreds of orders of magnitude here.
  const auto st = build_state(make_spec("su2_1", "0", 12), ModularParam(0.02));
  EXPECT_TRUE(std::isfinite(st.global_log_scale));
  EXPECT_NEAR(st.state.norm(), 1.0, 1e-13);
  const auto s2 = build_state(make_spec("su2_2", "4", 8), ModularParam(0.02));
  EXPECT_NEAR(s2.state.norm(), 1.0, 1e-13);
}
