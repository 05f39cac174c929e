#include "idmps/core/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "idmps/core/errors.hpp"

namespace idmps::hilbert {

void check_chain(int n, int d) {
  if (d != 2 && d != 3) throw InputError("local dimension must be 2 or 3, got " + std::to_string(d));
  if (n < 2) throw InputError("chain needs N >= 2, got " + std::to_string(n));
  const int max_sites = d == 2 ? kMaxSitesD2 : kMaxSitesD3;
  if (n > max_sites) {
    throw InputError("N = " + std::to_string(n) + " exceeds dense storage limit " +
                     std::to_string(max_sites) + " for d = " + std::to_string(d));
  }
}

std::uint64_t full_dim(int n, int d) {
  std::uint64_t dim = 1;
  for (int i = 0; i < n; ++i) dim *= static_cast<std::uint64_t>(d);
  return dim;
}

int digit_of_label(int label, int d) {
  if (d == 2) {
    if (label == 1) return 0;
    if (label == -1) return 1;
  } else if (d == 3) {
    if (label >= -1 && label <= 1) return 1 - label;
  }
  throw InputError("label " + std::to_string(label) + " invalid for d = " + std::to_string(d));
}

int label_of_digit(int digit, int d) {
  if (digit < 0 || digit >= d) throw InputError("digit out of range");
  if (d == 2) return digit == 0 ? 1 : -1;
  return 1 - digit;
}

int twice_sz_of_label(int label, int d) {
  digit_of_label(label, d);
  return d == 2 ? label : 2 * label;
}

std::uint64_t rank_of(const Config& labels, int d) {
  std::uint64_t r = 0;
  for (int label : labels) r = r * static_cast<std::uint64_t>(d) + static_cast<std::uint64_t>(digit_of_label(label, d));
  return r;
}

Config config_of(std::uint64_t rank, int n, int d) {
  Config c(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    c[static_cast<std::size_t>(i)] = label_of_digit(static_cast<int>(rank % static_cast<std::uint64_t>(d)), d);
    rank /= static_cast<std::uint64_t>(d);
  }
  return c;
}

int twice_sz_of_rank(std::uint64_t rank, int n, int d) {
  int total = 0;
  for (int i = 0; i < n; ++i) {
    const int digit = static_cast<int>(rank % static_cast<std::uint64_t>(d));
    rank /= static_cast<std::uint64_t>(d);
    total += d == 2 ? (digit == 0 ? 1 : -1) : 2 * (1 - digit);
  }
  return total;
}

std::int64_t SectorIndex::index_of(std::uint64_t rank) const {
  const auto it = std::lower_bound(ranks.begin(), ranks.end(), rank);
  if (it == ranks.end() || *it != rank) return -1;
  return it - ranks.begin();
}

SectorIndex enumerate_sector(int n, int d, int twice_sz) {
  check_chain(n, d);
  SectorIndex s;
  s.n = n;
  s.d = d;
  s.twice_sz = twice_sz;
  const std::uint64_t dim = full_dim(n, d);
  for (std::uint64_t r = 0; r < dim; ++r) {
    if (twice_sz_of_rank(r, n, d) == twice_sz) s.ranks.push_back(r);
  }
  return s;
}

std::vector<int> sector_charges(int n, int d) {
  check_chain(n, d);
  const int top = d == 2 ? n : 2 * n;
  std::vector<int> out;
  for (int q = top; q >= -top; q -= 2) out.push_back(q);
  return out;
}

// ---------------------------------------------------------------------------

StateVector::StateVector(int n, int d) : n_(n), d_(d) {
  check_chain(n, d);
  amp_ = CVector::Zero(static_cast<Eigen::Index>(full_dim(n, d)));
}

StateVector::StateVector(int n, int d, CVector amplitudes, bool normalized)
    : n_(n), d_(d), amp_(std::move(amplitudes)), normalized_(normalized) {
  check_chain(n, d);
  if (static_cast<std::uint64_t>(amp_.size()) != full_dim(n, d)) {
    throw InputError("amplitude count does not match d^N");
  }
  if (!amp_.allFinite()) throw InputError("state has non-finite amplitudes");
  if (normalized_ && std::abs(amp_.norm() - 1.0) > 1e-12) {
    throw InputError("state flagged normalized but its norm is not 1");
  }
}

cplx StateVector::amplitude(const Config& labels) const {
  if (static_cast<int>(labels.size()) != n_) throw InputError("configuration length does not match N");
  return amp_[static_cast<Eigen::Index>(rank_of(labels, d_))];
}

StateVector& StateVector::normalize() {
  const double nrm = amp_.norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm)) throw ConsistencyError("cannot normalize a zero or non-finite state");
  amp_ /= nrm;
  normalized_ = true;
  return *this;
}

void check_compatible(const StateVector& a, const StateVector& b) {
  if (a.sites() != b.sites() || a.local_dim() != b.local_dim()) {
    throw InputError("states live on different Hilbert spaces");
  }
}

cplx inner(const StateVector& a, const StateVector& b) {
  check_compatible(a, b);
  return a.amplitudes().dot(b.amplitudes());
}

// ---------------------------------------------------------------------------

StateVector translate(const StateVector& v) {
  const int n = v.sites();
  const int d = v.local_dim();
  const std::uint64_t tail = full_dim(n - 1, d);
  StateVector out(n, d);
  for (std::uint64_t r = 0; r < v.size(); ++r) {
    const std::uint64_t first = r / tail;
    out[r] = v[(r % tail) * static_cast<std::uint64_t>(d) + first];
  }
  if (v.normalized()) out.normalize();
  return out;
}

cplx translation_eigenvalue(const StateVector& v) {
  const double nrm2 = v.amplitudes().squaredNorm();
  if (!(nrm2 > 0.0)) throw InputError("zero state has no translation eigenvalue");
  return inner(v, translate(v)) / nrm2;
}

double translation_residual(const StateVector& v, cplx lambda) {
  return (translate(v).amplitudes() - lambda * v.amplitudes()).norm() / v.norm();
}

StateVector apply_site_unitary(const StateVector& v, const CMatrix& u, const std::vector<int>& sites) {
  const int n = v.sites();
  const int d = v.local_dim();
  if (u.rows() != d || u.cols() != d) throw InputError("site unitary has the wrong shape");
  if ((u.adjoint() * u - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-12) {
    throw InputError("site operator is not unitary to 1e-12");
  }
  CVector cur = v.amplitudes();
  CVector next(cur.size());
  for (int site : sites) {
    if (site < 1 || site > n) throw InputError("site index out of range (sites are 1-based)");
    const std::uint64_t stride = full_dim(n - site, d);
    const std::uint64_t block = stride * static_cast<std::uint64_t>(d);
    for (std::uint64_t hi = 0; hi < v.size(); hi += block) {
      for (std::uint64_t lo = 0; lo < stride; ++lo) {
        for (int a = 0; a < d; ++a) {
          cplx acc = 0.0;
          for (int b = 0; b < d; ++b) acc += u(a, b) * cur[static_cast<Eigen::Index>(hi + lo + stride * b)];
          next[static_cast<Eigen::Index>(hi + lo + stride * a)] = acc;
        }
      }
    }
    cur.swap(next);
  }
  return StateVector(n, d, std::move(cur), false);
}

StateVector apply_all_sites(const StateVector& v, const CMatrix& u) {
  std::vector<int> sites(static_cast<std::size_t>(v.sites()));
  for (int i = 0; i < v.sites(); ++i) sites[static_cast<std::size_t>(i)] = i + 1;
  StateVector out = apply_site_unitary(v, u, sites);
  if (v.normalized()) out.normalize();
  return out;
}

std::vector<CMatrix> spin_matrices(int d) {
  if (d == 2) {
    CMatrix sx(2, 2), sy(2, 2), sz(2, 2);
    sx << 0, 0.5, 0.5, 0;
    sy << 0, cplx(0, -0.5), cplx(0, 0.5), 0;
    sz << 0.5, 0, 0, -0.5;
    return {sx, sy, sz};
  }
  if (d == 3) {
    const double r = 1.0 / std::sqrt(2.0);
    CMatrix sx(3, 3), sy(3, 3), sz(3, 3);
    sx << 0, r, 0, r, 0, r, 0, r, 0;
    sy << 0, cplx(0, -r), 0, cplx(0, r), 0, cplx(0, -r), 0, cplx(0, r), 0;
    sz << 1, 0, 0, 0, 0, 0, 0, 0, -1;
    return {sx, sy, sz};
  }
  throw InputError("spin matrices exist for d = 2 or 3");
}

CMatrix circular_u() {
  const double r = 1.0 / std::sqrt(2.0);
  CMatrix u(3, 3);
  u << -r, cplx(0, -r), 0,
       0, 0, 1,
       r, cplx(0, -r), 0;
  return u;
}

// ---------------------------------------------------------------------------

namespace {

// Coefficient of S+ on a digit (digit 0 is the highest weight).
double raise_coeff(int digit, int d) {
  if (digit == 0) return 0.0;
  return d == 2 ? 1.0 : std::sqrt(2.0);
}

// Returns S+ v (raise = true) or S- v.
CVector ladder(const StateVector& v, bool raise) {
  const int n = v.sites();
  const int d = v.local_dim();
  CVector out = CVector::Zero(static_cast<Eigen::Index>(v.size()));
  for (std::uint64_t r = 0; r < v.size(); ++r) {
    const cplx a = v[r];
    if (a == 0.0) continue;
    std::uint64_t rest = r;
    std::uint64_t weight = 1;
    for (int i = 0; i < n; ++i) {
      const int digit = static_cast<int>(rest % static_cast<std::uint64_t>(d));
      rest /= static_cast<std::uint64_t>(d);
      if (raise && digit > 0) {
        out[static_cast<Eigen::Index>(r - weight)] += raise_coeff(digit, d) * a;
      } else if (!raise && digit < d - 1) {
        out[static_cast<Eigen::Index>(r + weight)] += raise_coeff(digit + 1, d) * a;
      }
      weight *= static_cast<std::uint64_t>(d);
    }
  }
  return out;
}

CVector apply_sz(const StateVector& v) {
  CVector out(static_cast<Eigen::Index>(v.size()));
  for (std::uint64_t r = 0; r < v.size(); ++r) {
    out[static_cast<Eigen::Index>(r)] = 0.5 * twice_sz_of_rank(r, v.sites(), v.local_dim()) * v[r];
  }
  return out;
}

}  // namespace

SpinQuantum total_spin_quantum(const StateVector& v) {
  const double nrm2 = v.amplitudes().squaredNorm();
  if (!(nrm2 > 0.0)) throw InputError("zero state has no spin quantum numbers");
  const CVector szv = apply_sz(v);
  const double sz = v.amplitudes().dot(szv).real() / nrm2;
  const double sz2 = szv.squaredNorm() / nrm2;
  // S^2 = S- S+ + Sz^2 + Sz
  const double s2 = ladder(v, true).squaredNorm() / nrm2 + sz2 + sz;
  SpinQuantum q;
  q.sz = sz;
  q.s2 = s2;
  q.s = 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * std::max(0.0, s2)));
  return q;
}

double singlet_residual(const StateVector& v) {
  const double nrm = v.norm();
  if (!(nrm > 0.0)) throw InputError("zero state");
  return std::max({ladder(v, true).norm(), ladder(v, false).norm(), apply_sz(v).norm()}) / nrm;
}

double sz_residual(const StateVector& v) {
  const double nrm = v.norm();
  if (!(nrm > 0.0)) throw InputError("zero state");
  return apply_sz(v).norm() / nrm;
}

double fidelity(const StateVector& a, const StateVector& b) {
  check_compatible(a, b);
  const double na = a.norm();
  const double nb = b.norm();
  if (!(na > 0.0) || !(nb > 0.0)) throw InputError("fidelity of a zero-norm state");
  return std::norm(inner(a, b)) / (na * na * nb * nb);
}

double subspace_fidelity(const StateVector& a, const std::vector<StateVector>& basis) {
  const double na = a.norm();
  if (!(na > 0.0)) throw InputError("fidelity of a zero-norm state");
  double p = 0.0;
  for (const auto& b : basis) {
    check_compatible(a, b);
    p += std::norm(inner(b, a));
  }
  return p / (na * na);
}

double fidelity_per_site(const StateVector& a, const StateVector& b) {
  return std::pow(fidelity(a, b), 1.0 / a.sites());
}

double fidelity_per_site(const StateVector& a, const std::vector<StateVector>& basis) {
  return std::pow(subspace_fidelity(a, basis), 1.0 / a.sites());
}

}  // namespace idmps::hilbert
