#pragma once

// Configuration indexing for N-site chains with local dimension d = 2
// (labels +1, -1 for spin +-1/2) or d = 3 (labels +1, 0, -1 for spin 1).
// Rank order: site 1 is the most significant digit, and labels map to digits
// in the order listed above.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

namespace idmps::hilbert {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Config = std::vector<int>;

// Dense-storage limits: d^N must fit comfortably in memory.
inline constexpr int kMaxSitesD2 = 20;
inline constexpr int kMaxSitesD3 = 12;

void check_chain(int n, int d);
std::uint64_t full_dim(int n, int d);

int digit_of_label(int label, int d);
int label_of_digit(int digit, int d);
// Twice the Sz value of a label: d=2 -> +-1, d=3 -> 2, 0, -2.
int twice_sz_of_label(int label, int d);

std::uint64_t rank_of(const Config& labels, int d);
Config config_of(std::uint64_t rank, int n, int d);
int twice_sz_of_rank(std::uint64_t rank, int n, int d);

struct SectorIndex {
  int n = 0;
  int d = 0;
  int twice_sz = 0;
  std::vector<std::uint64_t> ranks;  // ascending

  [[nodiscard]] std::size_t size() const { return ranks.size(); }
  // Position of a rank inside the sector, or -1.
  [[nodiscard]] std::int64_t index_of(std::uint64_t rank) const;
};

// Sz = twice_sz / 2. Unreachable Sz gives an empty sector.
SectorIndex enumerate_sector(int n, int d, int twice_sz);
// All twice_sz values with a nonempty sector, descending.
std::vector<int> sector_charges(int n, int d);

class StateVector {
 public:
  StateVector() = default;
  StateVector(int n, int d);  // zero vector
  StateVector(int n, int d, CVector amplitudes, bool normalized = false);

  [[nodiscard]] int sites() const { return n_; }
  [[nodiscard]] int local_dim() const { return d_; }
  [[nodiscard]] std::uint64_t size() const { return static_cast<std::uint64_t>(amp_.size()); }
  [[nodiscard]] const CVector& amplitudes() const { return amp_; }
  CVector& amplitudes() { return amp_; }
  [[nodiscard]] cplx operator[](std::uint64_t rank) const { return amp_[static_cast<Eigen::Index>(rank)]; }
  cplx& operator[](std::uint64_t rank) { return amp_[static_cast<Eigen::Index>(rank)]; }
  [[nodiscard]] cplx amplitude(const Config& labels) const;

  [[nodiscard]] bool normalized() const { return normalized_; }
  [[nodiscard]] double norm() const { return amp_.norm(); }
  // Scales to unit norm; throws ConsistencyError for the zero vector.
  StateVector& normalize();

 private:
  int n_ = 0;
  int d_ = 0;
  CVector amp_;
  bool normalized_ = false;
};

void check_compatible(const StateVector& a, const StateVector& b);
// <a|b>
cplx inner(const StateVector& a, const StateVector& b);

// (Tv)(s_1 ... s_N) = v(s_2 ... s_N s_1)
StateVector translate(const StateVector& v);
// <v|Tv> / <v|v>
cplx translation_eigenvalue(const StateVector& v);
// ||Tv - lambda v|| / ||v||
double translation_residual(const StateVector& v, cplx lambda);

// Applies u (d x d, unitary to 1e-12) on each listed site; sites are 1-based.
StateVector apply_site_unitary(const StateVector& v, const CMatrix& u, const std::vector<int>& sites);
StateVector apply_all_sites(const StateVector& v, const CMatrix& u);

// Spin-s matrices in the label order above: {Sx, Sy, Sz}.
std::vector<CMatrix> spin_matrices(int d);
// Linear -> circular polarization map for spin 1; column a is the image of
// Majorana flavor x, y, z.
CMatrix circular_u();

struct SpinQuantum {
  double s = 0.0;   // from <S^2> = S(S+1)
  double sz = 0.0;  // <Sz>
  double s2 = 0.0;  // <S^2>
};
SpinQuantum total_spin_quantum(const StateVector& v);

// max(||S+ v||, ||S- v||, ||Sz v||) / ||v||; zero exactly for singlets.
double singlet_residual(const StateVector& v);
// ||Sz v|| / ||v||
double sz_residual(const StateVector& v);

// Global fidelities |<a|b>|^2 and <a|P|a> (basis columns orthonormal).
double fidelity(const StateVector& a, const StateVector& b);
double subspace_fidelity(const StateVector& a, const std::vector<StateVector>& basis);
// Per-site versions: |<a|b>|^(2/N) and <a|P|a>^(1/N).
double fidelity_per_site(const StateVector& a, const StateVector& b);
double fidelity_per_site(const StateVector& a, const std::vector<StateVector>& basis);

}  // namespace idmps::hilbert
