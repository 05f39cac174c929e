#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "idmps/core/blocks.hpp"
#include "idmps/core/errors.hpp"
#include "idmps/core/refstates.hpp"

using namespace idmps::refstates;
using idmps::ConsistencyError;
using idmps::InputError;
using idmps::blocks::Model;
using idmps::hilbert::Config;
using idmps::hilbert::config_of;
using idmps::hilbert::fidelity;
using idmps::hilbert::full_dim;
using idmps::hilbert::rank_of;

namespace {

const cplx I{0.0, 1.0};

// Brute-force dimer covering: bonds (2b + offset, 2b + 1 + offset) mod N,
// singlet amplitude s(a, b) = (a - b) / 2 for spin-1/2 labels.
StateVector brute_dimer(int n, int offset) {
  StateVector v(n, 2);
  for (std::uint64_t r = 0; r < full_dim(n, 2); ++r) {
    const Config c = config_of(r, n, 2);
    cplx amp = 1.0;
    for (int b = 0; b < n / 2; ++b) {
      const int i = (2 * b + offset) % n;
      const int j = (2 * b + 1 + offset) % n;
      amp *= 0.5 * (c[i] - c[j]);
    }
    v[r] = amp;
  }
  return v;
}

// tr(sigma^{a_1} ... sigma^{a_N}) with flavors x, y, z on labels +1, 0, -1.
StateVector brute_aklt_flavor(int n) {
  Eigen::Matrix2cd sx, sy, sz;
  sx << 0, 1, 1, 0;
  sy << 0, -I, I, 0;
  sz << 1, 0, 0, -1;
  StateVector v(n, 3);
  for (std::uint64_t r = 0; r < full_dim(n, 3); ++r) {
    const Config c = config_of(r, n, 3);
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
    for (int label : c) m = m * (label == 1 ? sx : label == 0 ? sy : sz);
    v[r] = m.trace();
  }
  return v;
}

double collinearity(const StateVector& a, const StateVector& b) { return std::sqrt(fidelity(a, b)); }

}  // namespace

TEST(Cvo, TensorShapesAndRules) {
  const auto id = cvo_tensor(Model::su2_1, 1, 1, 0);
  EXPECT_EQ(id.d_left, 2);
  EXPECT_EQ(id.d_right, 1);
  const auto sg = cvo_tensor(Model::su2_1, 0, 1, 1);
  EXPECT_EQ(sg.d_left, 1);
  EXPECT_EQ(sg.d_right, 2);
  const auto mid = cvo_tensor(Model::su2_2, 1, 2, 1);
  EXPECT_EQ(mid.d, 3);
  EXPECT_EQ(mid.d_left, 2);
  EXPECT_THROW(cvo_tensor(Model::su2_1, 1, 1, 1), InputError);
  EXPECT_THROW(cvo_tensor(Model::su2_1, 0, 2, 2), InputError);
  EXPECT_THROW(cvo_tensor(Model::su2_2, 0, 1, 1), InputError);
  EXPECT_THROW(cvo_tensor(Model::su2_2, 2, 2, 2), InputError);
}

TEST(Cvo, TensorsAreClebschGordan) {
  // Contracting an identity-type tensor with a singlet-type tensor over the
  // shared bond gives the two-site singlet.
  const auto a = cvo_tensor(Model::su2_1, 0, 1, 1);
  const auto b = cvo_tensor(Model::su2_1, 1, 1, 0);
  CVector pair(4);
  for (int s = 0; s < 2; ++s)
    for (int t = 0; t < 2; ++t) pair[2 * s + t] = (a.mats[s] * b.mats[t])(0, 0);
  const CVector want = singlet_pair();
  EXPECT_NEAR(std::norm(pair.normalized().dot(want)), 1.0, 1e-15);
}

TEST(Cvo, TraceMpsMatchesBruteForce) {
  for (int n : {4, 6, 8}) {
    std::vector<int> p0, p1;
    for (int m = 0; m < n; ++m) {
      p0.push_back(m % 2 == 0 ? 1 : 0);
      p1.push_back(m % 2 == 0 ? 0 : 1);
    }
    const auto d0 = brute_dimer(n, 0);
    const auto d1 = brute_dimer(n, 1);
    EXPECT_GT(collinearity(fusion_path_state(Model::su2_1, p0), d0), 1.0 - 1e-12) << "N=" << n;
    EXPECT_GT(collinearity(fusion_path_state(Model::su2_1, p1), d1), 1.0 - 1e-12) << "N=" << n;
  }
  for (int n : {4, 6}) {
    const std::vector<int> half(n, 1);
    const auto std_aklt = idmps::hilbert::apply_all_sites(brute_aklt_flavor(n), idmps::hilbert::circular_u());
    EXPECT_GT(collinearity(fusion_path_state(Model::su2_2, half), std_aklt), 1.0 - 1e-12) << "N=" << n;
  }
}

TEST(Cvo, MismatchedBondsRejected) {
  const auto a = cvo_tensor(Model::su2_1, 1, 1, 0);
  EXPECT_THROW(mps_trace_state({a, a}, 2), InputError);
  EXPECT_THROW(fusion_path_state(Model::su2_1, {1, 1, 0, 0}), InputError);
}

TEST(Dimers, MatchBruteForce) {
  for (int n : {2, 4, 6}) {
    for (int offset : {0, 1}) {
      const auto v = dimer_state(n, offset, singlet_pair());
      const auto w = brute_dimer(n, offset);
      EXPECT_NEAR(fidelity(v, w), 1.0, 1e-14);
      // Overall sign as well as direction.
      EXPECT_NEAR(std::real(idmps::hilbert::inner(w, v)) / (w.norm() * v.norm()), 1.0, 1e-14);
    }
  }
}

TEST(Dimers, SingletsAndOverlap) {
  const int n = 8;
  const auto d0 = dimer_state(n, 0, singlet_pair());
  const auto d1 = dimer_state(n, 1, singlet_pair());
  EXPECT_LT(idmps::hilbert::singlet_residual(d0), 1e-14);
  EXPECT_LT(idmps::hilbert::singlet_residual(d1), 1e-14);
  // |<D0|D1>| = 2^(1 - N/2) for a ring.
  EXPECT_NEAR(std::abs(idmps::hilbert::inner(d0, d1)), std::pow(2.0, 1 - n / 2), 1e-14);
  const auto p = mg_combination(n, +1);
  const auto m = mg_combination(n, -1);
  EXPECT_NEAR(std::abs(idmps::hilbert::inner(p, m)), 0.0, 1e-14);
  EXPECT_NEAR(idmps::hilbert::translation_eigenvalue(p).real(), 1.0, 1e-12);
  EXPECT_NEAR(idmps::hilbert::translation_eigenvalue(m).real(), -1.0, 1e-12);
  // D0 + D1 vanishes identically at N = 2.
  EXPECT_THROW(mg_combination(2, +1), ConsistencyError);
}

TEST(Aklt, PauliMpsAndRotation) {
  const int n = 6;
  const auto circ = aklt_state(n, Basis::circular);
  EXPECT_NEAR(fidelity(circ, brute_aklt_flavor(n)), 1.0, 1e-14);
  const auto stdb = aklt_state(n, Basis::standard);
  EXPECT_LT(idmps::hilbert::singlet_residual(stdb), 1e-13);
  // No two consecutive nonzero S^z of equal sign (hidden string order).
  for (std::uint64_t r = 0; r < full_dim(n, 3); ++r) {
    if (std::abs(stdb[r]) < 1e-12) continue;
    const Config c = config_of(r, n, 3);
    int last = 0;
    for (int label : c) {
      if (label == 0) continue;
      EXPECT_NE(label, last) << "rank " << r;
      last = label;
    }
  }
}

TEST(Spin1Dimers, Combinations) {
  const int n = 6;
  const auto p = spin1_dimer_combinations(n, +1);
  const auto m = spin1_dimer_combinations(n, -1);
  EXPECT_NEAR(p.norm(), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(idmps::hilbert::inner(p, m)), 0.0, 1e-13);
  // (|11> + |00> + |-1-1>)/sqrt3 in the flavor basis is the spin-1 singlet
  // after u on both sites, up to phase.
  const CMatrix u = idmps::hilbert::circular_u();
  CVector rotated = CVector::Zero(9);
  const CVector flav = spin1_dimer_pair();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) rotated[3 * a + b] += u(a, x) * u(b, y) * flav[3 * x + y];
  EXPECT_NEAR(std::norm(rotated.dot(spin1_singlet_pair())), 1.0, 1e-14);
}

TEST(Named, KnownNamesAndErrors) {
  for (const char* which : {"mg+", "mg-", "dimer0", "dimer1", "hs", "hs-exc"}) {
    const auto v = named_reference(which, 6);
    EXPECT_EQ(v.local_dim(), 2) << which;
    EXPECT_NEAR(v.norm(), 1.0, 1e-13) << which;
  }
  for (const char* which : {"aklt", "aklt-circ", "s1dimer+", "s1dimer-"}) {
    EXPECT_EQ(named_reference(which, 4).local_dim(), 3) << which;
  }
  EXPECT_THROW(named_reference("nope", 4), InputError);
  EXPECT_THROW(named_reference("mg+", 5), InputError);
}

TEST(SpanFit, RecoversCoefficients) {
  const int n = 6;
  const auto d0 = dimer_state(n, 0, singlet_pair());
  const auto d1 = dimer_state(n, 1, singlet_pair());
  CVector mix = 0.6 * d0.amplitudes() / d0.norm() + cplx(0.0, 0.8) * d1.amplitudes() / d1.norm();
  const auto fit = fit_in_span(StateVector(n, 2, mix), {d0, d1});
  ASSERT_EQ(fit.coefficients.size(), 2u);
  EXPECT_LT(fit.residual, 1e-13);
  EXPECT_NEAR(std::abs(fit.coefficients[0]), 0.6, 1e-13);
  EXPECT_NEAR(std::abs(fit.coefficients[1]), 0.8, 1e-13);
  EXPECT_NEAR(std::arg(fit.coefficients[1] / fit.coefficients[0]), M_PI / 2, 1e-13);

  const auto fit2 = fit_in_span(named_reference("hs", n), {d0, d1});
  EXPECT_GT(fit2.residual, 1e-3);
}

TEST(Pairing, ThinTorusPartners) {
  using idmps::blocks::build_state;
  using idmps::blocks::make_spec;
  using idmps::special::ModularParam;
  const auto p0 = resolve_pairing(make_spec("su2_1", "0", 8), build_state(make_spec("su2_1", "0", 8), ModularParam(0.05)).state);
  const auto p1 =
      resolve_pairing(make_spec("su2_1", "half", 8), build_state(make_spec("su2_1", "half", 8), ModularParam(0.05)).state);
  EXPECT_GT(p0.fidelity, 1.0 - 1e-4);
  EXPECT_GT(p1.fidelity, 1.0 - 1e-4);
  EXPECT_NE(p0.target, p1.target);
  EXPECT_LT(p0.other_fidelity, 1e-4);
}
