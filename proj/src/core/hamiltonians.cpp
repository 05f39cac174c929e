#include "idmps/core/hamiltonians.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <memory>
#include <numbers>

#include "idmps/core/blocks.hpp"
#include "idmps/core/errors.hpp"
#include "idmps/core/parallel.hpp"

namespace idmps::hamiltonians {

using numerics::CMatrix;
using numerics::CVector;
using cplx = std::complex<double>;

void HamiltonianSpec::validate() const {
  if (n < 2) throw InputError("Hamiltonians need N >= 2, got N = " + std::to_string(n));
  const int limit = local_dim() == 2 ? kMaxEdSitesD2 : kMaxEdSitesD3;
  if (n > limit) {
    throw InputError(kind_name() + " supports N <= " + std::to_string(limit) + ", got N = " + std::to_string(n));
  }
  if (!std::isfinite(j1) || !std::isfinite(j2) || !std::isfinite(theta)) {
    throw InputError("Hamiltonian parameters must be finite");
  }
}

std::string HamiltonianSpec::kind_name() const {
  switch (kind) {
    case Kind::HS: return "hs";
    case Kind::J1J2: return "j1j2";
    case Kind::QBQ: return "qbq";
    case Kind::PARENT: return "parent";
  }
  return "?";
}

Kind parse_kind(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "hs") return Kind::HS;
  if (s == "j1j2") return Kind::J1J2;
  if (s == "qbq") return Kind::QBQ;
  if (s == "parent") return Kind::PARENT;
  throw InputError("unknown Hamiltonian '" + name + "' (expected hs, j1j2, qbq or parent)");
}

Eigen::MatrixXd spin_dot(int d) {
  const auto s = hilbert::spin_matrices(d);
  CMatrix p = CMatrix::Zero(d * d, d * d);
  for (const auto& a : s) {
    for (int r = 0; r < d * d; ++r) {
      for (int c = 0; c < d * d; ++c) p(r, c) += a(r / d, c / d) * a(r % d, c % d);
    }
  }
  if (p.imag().cwiseAbs().maxCoeff() > 1e-14) throw ConsistencyError("S.S has imaginary entries");
  return p.real();
}

TermList terms(const HamiltonianSpec& spec) {
  spec.validate();
  TermList t;
  t.n = spec.n;
  t.d = spec.local_dim();
  const int n = spec.n;
  const Eigen::MatrixXd dot = spin_dot(t.d);
  const double site_s2 = t.d == 2 ? 0.75 : 2.0;
  // Periodic bond (j, j + r); with j + r wrapping onto j the term is S^2.
  auto add_periodic = [&](int r, double coeff) {
    for (int j = 0; j < n; ++j) {
      const int k = (j + r) % n;
      if (k == j) {
        t.constant += coeff * site_s2;  // S_j.S_j
        continue;
      }
      t.bonds.push_back({j, k, coeff * dot});
    }
  };

  switch (spec.kind) {
    case Kind::HS:
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          const double s = std::sin(std::numbers::pi * (i - j) / n);
          t.bonds.push_back({i, j, dot / (s * s)});
        }
      }
      break;
    case Kind::J1J2:
      add_periodic(1, spec.j1);
      add_periodic(2, spec.j2);
      break;
    case Kind::QBQ: {
      const Eigen::MatrixXd m = std::cos(spec.theta) * dot + std::sin(spec.theta) * dot * dot;
      for (int j = 0; j < n; ++j) t.bonds.push_back({j, (j + 1) % n, m});
      break;
    }
    case Kind::PARENT: {
      auto w = [&](int a, int b) {
        return cplx(0.0, 1.0) / std::tan(std::numbers::pi * static_cast<double>(a - b) / n);
      };
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          const cplx wij = w(i, j);
          cplx c = wij * wij;
          for (int k = 0; k < n; ++k) {
            if (k != i && k != j) c += w(k, i) * w(k, j);
          }
          const cplx shift = wij * wij / 4.0;
          if (std::abs(c.imag()) > 1e-12 || std::abs(shift.imag()) > 1e-12) {
            throw ConsistencyError("parent Hamiltonian coefficients are not real");
          }
          t.constant -= shift.real();
          t.bonds.push_back({i, j, -c.real() / 3.0 * dot});
        }
      }
      break;
    }
  }
  return t;
}

namespace {

// Sparse row form of a bond term: for each pair digit, the nonzero columns.
struct CompiledBond {
  int i = 0;
  int j = 0;
  std::vector<std::vector<std::pair<int, double>>> rows;
};

// Gather-form operator on a list of ranks (a sector, or all of d^N).
struct Engine {
  int n = 0;
  int d = 0;
  double constant = 0.0;
  std::vector<std::uint64_t> weight;  // d^(N-1-site)
  std::vector<CompiledBond> bonds;
  bool full = true;
  std::vector<std::uint64_t> ranks;  // sector only
  std::vector<std::int32_t> index;   // rank -> position, sector only
  std::size_t dim = 0;

  [[nodiscard]] std::uint64_t rank_at(std::size_t row) const { return full ? row : ranks[row]; }
  [[nodiscard]] std::size_t position(std::uint64_t r) const {
    if (full) return static_cast<std::size_t>(r);
    const std::int32_t p = index[static_cast<std::size_t>(r)];
    if (p < 0) throw ConsistencyError("Hamiltonian term leaves its Sz sector");
    return static_cast<std::size_t>(p);
  }

  template <typename Visit>
  void row(std::size_t row, Visit&& visit) const {
    const std::uint64_t r = rank_at(row);
    visit(row, constant);
    for (const auto& b : bonds) {
      const int di = static_cast<int>(r / weight[static_cast<std::size_t>(b.i)] % static_cast<std::uint64_t>(d));
      const int dj = static_cast<int>(r / weight[static_cast<std::size_t>(b.j)] % static_cast<std::uint64_t>(d));
      const std::uint64_t base = r - static_cast<std::uint64_t>(di) * weight[static_cast<std::size_t>(b.i)] -
                                 static_cast<std::uint64_t>(dj) * weight[static_cast<std::size_t>(b.j)];
      for (const auto& [col, value] : b.rows[static_cast<std::size_t>(di * d + dj)]) {
        const std::uint64_t c = base + static_cast<std::uint64_t>(col / d) * weight[static_cast<std::size_t>(b.i)] +
                                static_cast<std::uint64_t>(col % d) * weight[static_cast<std::size_t>(b.j)];
        visit(position(c), value);
      }
    }
  }
};

std::shared_ptr<const Engine> compile(const HamiltonianSpec& spec, std::optional<int> twice_sz,
                                      hilbert::SectorIndex* sector_out) {
  const TermList t = terms(spec);
  auto e = std::make_shared<Engine>();
  e->n = t.n;
  e->d = t.d;
  e->constant = t.constant;
  e->weight.assign(static_cast<std::size_t>(t.n), 1);
  for (int s = t.n - 2; s >= 0; --s) {
    e->weight[static_cast<std::size_t>(s)] = e->weight[static_cast<std::size_t>(s + 1)] * static_cast<std::uint64_t>(t.d);
  }
  for (const auto& b : t.bonds) {
    CompiledBond cb;
    cb.i = b.i;
    cb.j = b.j;
    cb.rows.resize(static_cast<std::size_t>(t.d * t.d));
    for (int a = 0; a < t.d * t.d; ++a) {
      for (int c = 0; c < t.d * t.d; ++c) {
        if (b.m(a, c) != 0.0) cb.rows[static_cast<std::size_t>(a)].emplace_back(c, b.m(a, c));
      }
    }
    e->bonds.push_back(std::move(cb));
  }
  const std::uint64_t full = hilbert::full_dim(t.n, t.d);
  if (twice_sz) {
    hilbert::SectorIndex sec = hilbert::enumerate_sector(t.n, t.d, *twice_sz);
    e->full = false;
    e->ranks = sec.ranks;
    e->index.assign(static_cast<std::size_t>(full), -1);
    for (std::size_t p = 0; p < sec.ranks.size(); ++p) e->index[static_cast<std::size_t>(sec.ranks[p])] = static_cast<std::int32_t>(p);
    e->dim = sec.ranks.size();
    if (sector_out) *sector_out = std::move(sec);
  } else {
    e->dim = static_cast<std::size_t>(full);
  }
  return e;
}

LinearOperator make_operator(std::shared_ptr<const Engine> e) {
  const std::size_t dim = e->dim;
  LinearOperator op(dim, [e](const cplx* in, cplx* out) {
    parallel_for(e->dim, [&](std::size_t r) {
      cplx acc = 0.0;
      e->row(r, [&](std::size_t c, double v) { acc += v * in[c]; });
      out[r] = acc;
    });
  });
  op.set_real_symmetric(true);
  op.set_dense([e] {
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(e->dim), static_cast<Eigen::Index>(e->dim));
    for (std::size_t r = 0; r < e->dim; ++r) {
      e->row(r, [&](std::size_t c, double v) { m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) += v; });
    }
    return m;
  });
  return op;
}

}  // namespace

LinearOperator build(const HamiltonianSpec& spec) { return make_operator(compile(spec, std::nullopt, nullptr)); }

SectorOperator build_sector(const HamiltonianSpec& spec, int twice_sz) {
  hilbert::SectorIndex sec;
  auto e = compile(spec, twice_sz, &sec);
  if (sec.size() == 0) throw InputError("Sz sector " + std::to_string(twice_sz) + "/2 is empty");
  return {std::move(sec), make_operator(std::move(e))};
}

double eigenstate_residual(const LinearOperator& h, const StateVector& v, double e) {
  if (h.dim() != v.size()) throw InputError("operator and state dimensions differ");
  const double nrm = v.norm();
  if (!(nrm > 0.0)) throw InputError("eigenstate residual of the zero vector");
  return (h.apply(v.amplitudes()) - e * v.amplitudes()).norm() / nrm;
}

double energy(const LinearOperator& h, const StateVector& v) {
  if (h.dim() != v.size()) throw InputError("operator and state dimensions differ");
  return h.expectation(v.amplitudes());
}

double hs_ground_energy(int n) { return -(static_cast<double>(n) * n * n + 5.0 * n) / 24.0; }
double hs_excited_energy(int n) { return hs_ground_energy(n) + n / 2.0; }

std::vector<Eigenstate> ground_subspace(const HamiltonianSpec& spec, int k, const numerics::EigOptions& opts) {
  spec.validate();
  const int d = spec.local_dim();
  const std::uint64_t full = hilbert::full_dim(spec.n, d);
  if (k < 1 || static_cast<std::uint64_t>(k) > full) {
    throw InputError("requested " + std::to_string(k) + " eigenpairs of a " + std::to_string(full) +
                     "-dimensional space");
  }
  struct Tagged {
    Eigenstate e;
    int position;
  };
  std::vector<Tagged> all;
  for (int q : hilbert::sector_charges(spec.n, d)) {
    SectorOperator so = build_sector(spec, q);
    const int kk = std::min<int>(k, static_cast<int>(so.index.size()));
    const auto pairs = numerics::eig_smallest(so.op, kk, opts);
    for (int p = 0; p < kk; ++p) {
      const auto& pr = pairs[static_cast<std::size_t>(p)];
      StateVector v(spec.n, d);
      for (std::size_t s = 0; s < so.index.size(); ++s) v[so.index.ranks[s]] = pr.vector[static_cast<Eigen::Index>(s)];
      all.push_back({{pr.value, q, std::move(v), pr.residual}, p});
    }
  }
  std::sort(all.begin(), all.end(), [](const Tagged& a, const Tagged& b) { return a.e.energy < b.e.energy; });
  // Order near-degenerate groups by Sz then in-sector position.
  for (std::size_t start = 0; start < all.size();) {
    std::size_t end = start + 1;
    while (end < all.size() && all[end].e.energy - all[end - 1].e.energy <= 1e-9) ++end;
    std::stable_sort(all.begin() + static_cast<std::ptrdiff_t>(start), all.begin() + static_cast<std::ptrdiff_t>(end),
                     [](const Tagged& a, const Tagged& b) {
                       if (a.e.twice_sz != b.e.twice_sz) return a.e.twice_sz > b.e.twice_sz;
                       return a.position < b.position;
                     });
    start = end;
  }
  std::vector<Eigenstate> out;
  for (int i = 0; i < k; ++i) out.push_back(std::move(all[static_cast<std::size_t>(i)].e));
  return out;
}

std::vector<Eigenstate> ground_multiplet(const HamiltonianSpec& spec, double tol, const numerics::EigOptions& opts) {
  spec.validate();
  const auto full = static_cast<int>(std::min<std::uint64_t>(hilbert::full_dim(spec.n, spec.local_dim()), 1u << 20));
  int k = std::min(4, full);
  for (;;) {
    auto states = ground_subspace(spec, k, opts);
    const double e0 = states.front().energy;
    if (states.back().energy > e0 + tol || k == full) {
      std::erase_if(states, [&](const Eigenstate& s) { return s.energy > e0 + tol; });
      return states;
    }
    k = std::min(2 * k, full);
  }
}

ParentCheck parent_annihilation_check(int n) {
  if (n < 2 || n % 2 != 0 || n > 12) throw InputError("parent check needs even 2 <= N <= 12");
  HamiltonianSpec spec;
  spec.kind = Kind::PARENT;
  spec.n = n;
  blocks::BlockSpec bs;
  bs.model = blocks::Model::su2_1;
  bs.label = 0;
  bs.n = n;
  const StateVector psi = blocks::build_cylinder_state(bs).state;
  ParentCheck out;
  out.residual = eigenstate_residual(build(spec), psi, 0.0);
  out.min_eigenvalue = ground_subspace(spec, 1).front().energy;
  return out;
}

}  // namespace idmps::hamiltonians
