#pragma once

// Dense linear-algebra kernels: Pfaffian, smallest eigenpairs of Hermitian
// operators, and a bracketed 1-D minimizer.

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace idmps::numerics {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Pf(A) by Parlett-Reid elimination with partial pivoting. Odd n gives 0.
// Throws InputError if A is not square or not antisymmetric to
// antisym_tol * max(1, max|A_ij|).
cplx pfaffian(const CMatrix& a, double antisym_tol = 1e-12);

// Pf(A) by expansion along the first row; O(n!!). Used as a cross-check.
cplx pfaffian_expansion(const CMatrix& a);

// Matrix-free Hermitian operator. apply(in, out) writes out = H in; both
// buffers have dim() entries and never alias.
class LinearOperator {
 public:
  using ApplyFn = std::function<void(const cplx* in, cplx* out)>;
  using DenseFn = std::function<CMatrix()>;

  LinearOperator(std::size_t dim, ApplyFn apply, bool hermitian = true);

  [[nodiscard]] std::size_t dim() const { return dim_; }
  [[nodiscard]] bool hermitian() const { return hermitian_; }
  // All matrix elements real, so the dense path may use a real solver.
  [[nodiscard]] bool real_symmetric() const { return real_symmetric_; }
  void set_real_symmetric(bool v) { real_symmetric_ = v; }

  // Optional direct assembly; otherwise to_dense() applies H to unit vectors.
  void set_dense(DenseFn fn) { dense_ = std::move(fn); }

  void apply(const cplx* in, cplx* out) const { apply_(in, out); }
  [[nodiscard]] CVector apply(const CVector& v) const;
  [[nodiscard]] CMatrix to_dense() const;
  [[nodiscard]] double expectation(const CVector& v) const;

 private:
  std::size_t dim_;
  ApplyFn apply_;
  DenseFn dense_;
  bool hermitian_;
  bool real_symmetric_ = false;
};

struct EigenPair {
  double value = 0.0;
  CVector vector;
  // ||H v - value v|| for the unit-norm vector.
  double residual = 0.0;
};

enum class EigMethod { automatic, dense, lanczos };

struct EigOptions {
  EigMethod method = EigMethod::automatic;
  std::size_t dense_max_dim = 4096;
  double residual_tol = 1e-8;
  int krylov_dim = 80;
  int max_restarts = 400;
};

// The k algebraically smallest eigenpairs in ascending order, orthonormal.
// Throws NumericalError if Lanczos cannot reach residual_tol.
std::vector<EigenPair> eig_smallest(const LinearOperator& h, int k, const EigOptions& opts = {});

struct MinimizeResult {
  double x = 0.0;
  double f = 0.0;
  int evaluations = 0;
};

// Brent's golden-section / parabolic minimizer on [lo, hi]. The endpoints
// are sampled too, and the best point seen is returned. A NaN from f throws
// NumericalError naming the offending x.
MinimizeResult minimize_scalar(const std::function<double(double)>& f, double lo, double hi,
                               double tol = 1e-8, int max_iter = 200);

}  // namespace idmps::numerics
