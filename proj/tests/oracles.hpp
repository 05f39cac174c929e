#pragma once

// Brute-force reference constructions shared by the tests. Each one is
// written out directly from its definition and does not touch the library
// code path it is compared against.

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <vector>

#include "idmps/core/hilbert.hpp"

namespace oracles {

using cplx = std::complex<double>;
using idmps::hilbert::StateVector;

// Singlet dimers on bonds (2b + offset, 2b + 1 + offset) mod N with
// amplitude (a - b) / 2 for spin-1/2 labels a, b.
inline StateVector dimer_covering(int n, int offset) {
  StateVector v(n, 2);
  for (std::uint64_t r = 0; r < idmps::hilbert::full_dim(n, 2); ++r) {
    const auto c = idmps::hilbert::config_of(r, n, 2);
    cplx amp = 1.0;
    for (int b = 0; b < n / 2; ++b) amp *= 0.5 * (c[(2 * b + offset) % n] - c[(2 * b + 1 + offset) % n]);
    v[r] = amp;
  }
  return v;
}

// Spin-1 dimers delta(a, b) on the same bonds (flavor basis).
inline StateVector spin1_covering(int n, int offset) {
  StateVector v(n, 3);
  for (std::uint64_t r = 0; r < idmps::hilbert::full_dim(n, 3); ++r) {
    const auto c = idmps::hilbert::config_of(r, n, 3);
    bool ok = true;
    for (int b = 0; b < n / 2 && ok; ++b) ok = c[(2 * b + offset) % n] == c[(2 * b + 1 + offset) % n];
    v[r] = ok ? 1.0 : 0.0;
  }
  return v;
}

// tr(sigma^{a_1} ... sigma^{a_N}), flavors x, y, z on labels +1, 0, -1.
inline StateVector pauli_trace(int n) {
  const cplx I{0.0, 1.0};
  Eigen::Matrix2cd sx, sy, sz;
  sx << 0, 1, 1, 0;
  sy << 0, -I, I, 0;
  sz << 1, 0, 0, -1;
  StateVector v(n, 3);
  for (std::uint64_t r = 0; r < idmps::hilbert::full_dim(n, 3); ++r) {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
    for (int label : idmps::hilbert::config_of(r, n, 3)) m = m * (label == 1 ? sx : label == 0 ? sy : sz);
    v[r] = m.trace();
  }
  return v;
}

// Pfaffian by expansion along the first remaining row.
inline cplx pfaffian_expand(const Eigen::MatrixXcd& a, const std::vector<int>& idx) {
  if (idx.empty()) return 1.0;
  if (idx.size() % 2) return 0.0;
  cplx s = 0.0;
  for (std::size_t k = 1; k < idx.size(); ++k) {
    std::vector<int> rest;
    for (std::size_t m = 1; m < idx.size(); ++m)
      if (m != k) rest.push_back(idx[m]);
    s += ((k % 2) ? 1.0 : -1.0) * a(idx[0], idx[k]) * pfaffian_expand(a, rest);
  }
  return s;
}

inline cplx pfaffian_expand(const Eigen::MatrixXcd& a) {
  std::vector<int> idx(static_cast<std::size_t>(a.rows()));
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  return pfaffian_expand(a, idx);
}

inline Eigen::MatrixXcd random_antisymmetric(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      a(i, j) = cplx(g(rng), g(rng));
      a(j, i) = -a(i, j);
    }
  return a;
}

// |<a|b>| / (|a| |b|)
inline double collinearity(const StateVector& a, const StateVector& b) {
  return std::abs(a.amplitudes().dot(b.amplitudes())) / (a.norm() * b.norm());
}

}  // namespace oracles
