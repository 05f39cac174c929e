#pragma once

// Periodic spin-chain Hamiltonians as Sz-conserving linear operators.
//
//   HS      sum_{i<j} S_i.S_j / sin^2(pi (i - j) / N)                  (d = 2)
//   J1J2    sum_j J1 S_j.S_{j+1} + J2 S_j.S_{j+2}                      (d = 2)
//   QBQ     sum_j cos(theta) S_j.S_{j+1} + sin(theta) (S_j.S_{j+1})^2  (d = 3)
//   PARENT  -sum_{i<j} [w_ij^2 / 4 + (w_ij^2 + sum_{k != i,j} w_ki w_kj) S_i.S_j / 3],
//           w_jk = i cot(pi (z_j - z_k)), z_j = j / N                  (d = 2)
//
// Periodic sums are taken literally, so at N = 2 every bond appears twice.

#include <optional>
#include <string>
#include <vector>

#include "idmps/core/hilbert.hpp"
#include "idmps/core/numerics.hpp"

namespace idmps::hamiltonians {

using hilbert::StateVector;
using numerics::LinearOperator;

enum class Kind { HS, J1J2, QBQ, PARENT };

struct HamiltonianSpec {
  Kind kind = Kind::HS;
  int n = 2;
  double j1 = 1.0;
  double j2 = 0.5;
  double theta = 0.0;

  // Throws InputError for N < 2 or N beyond dense storage (16 sites for
  // d = 2, 10 for d = 3).
  void validate() const;
  [[nodiscard]] int local_dim() const { return kind == Kind::QBQ ? 3 : 2; }
  [[nodiscard]] std::string kind_name() const;  // "hs", "j1j2", "qbq", "parent"
};

inline constexpr int kMaxEdSitesD2 = 16;
inline constexpr int kMaxEdSitesD3 = 10;

// Parses "hs", "j1j2", "qbq", "parent" (case-insensitive).
Kind parse_kind(const std::string& name);

// Two-site term; m is d^2 x d^2 in pair rank digit(a) * d + digit(b).
struct BondTerm {
  int i = 0;  // 0-based sites, i != j
  int j = 0;
  Eigen::MatrixXd m;
};

// The operator as data: bond terms plus a multiple of the identity.
struct TermList {
  int n = 0;
  int d = 0;
  std::vector<BondTerm> bonds;
  double constant = 0.0;
};

TermList terms(const HamiltonianSpec& spec);

// S_a.S_b on two sites of local dimension d (real in the label basis).
Eigen::MatrixXd spin_dot(int d);

// Full d^N operator.
LinearOperator build(const HamiltonianSpec& spec);

// Operator restricted to the sector 2 Sz = twice_sz; vectors are in the
// order of index.ranks.
struct SectorOperator {
  hilbert::SectorIndex index;
  LinearOperator op;
};
SectorOperator build_sector(const HamiltonianSpec& spec, int twice_sz);

// ||Hv - Ev|| / ||v||
double eigenstate_residual(const LinearOperator& h, const StateVector& v, double e);

// <v|H|v> / <v|v>
double energy(const LinearOperator& h, const StateVector& v);

struct ParentCheck {
  double residual = 0.0;        // ||H psi0|| / ||psi0||, psi0 the cylinder SU(2)_1 k=0 block
  double min_eigenvalue = 0.0;  // over all Sz sectors
};
// Requires even 2 <= N <= 12.
ParentCheck parent_annihilation_check(int n);

struct Eigenstate {
  double energy = 0.0;
  int twice_sz = 0;
  StateVector state;  // embedded in the full d^N space
  double residual = 0.0;
};

// k lowest eigenpairs of the full spectrum, from per-sector diagonalizations.
// Ordering: energy; states within 1e-9 of each other are then ordered by Sz
// (descending) and by position inside their sector.
std::vector<Eigenstate> ground_subspace(const HamiltonianSpec& spec, int k,
                                        const numerics::EigOptions& opts = {});

// Every eigenstate within tol of the ground energy.
std::vector<Eigenstate> ground_multiplet(const HamiltonianSpec& spec, double tol = 1e-9,
                                         const numerics::EigOptions& opts = {});

// -(N^3 + 5N) / 24 and that plus N/2.
double hs_ground_energy(int n);
double hs_excited_energy(int n);

}  // namespace idmps::hamiltonians
