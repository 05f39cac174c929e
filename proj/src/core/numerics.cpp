#include "idmps/core/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "idmps/core/errors.hpp"

namespace idmps::numerics {

// ---------------------------------------------------------------------------
// Pfaffian

namespace {

void check_antisymmetric(const CMatrix& a, double tol) {
  if (a.rows() != a.cols()) throw InputError("pfaffian needs a square matrix");
  if (a.size() == 0) return;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  const double defect = (a + a.transpose()).cwiseAbs().maxCoeff();
  if (defect > tol * scale) {
    std::ostringstream os;
    os << "matrix is not antisymmetric (max |A + A^T| = " << defect << ")";
    throw InputError(os.str());
  }
}

cplx expansion(const CMatrix& a, std::vector<int>& idx) {
  const auto n = idx.size();
  if (n == 0) return 1.0;
  if (n % 2 == 1) return 0.0;
  const int first = idx[0];
  cplx total = 0.0;
  for (std::size_t j = 1; j < n; ++j) {
    const cplx aij = a(first, idx[j]);
    if (aij == 0.0) continue;
    std::vector<int> rest;
    rest.reserve(n - 2);
    for (std::size_t l = 1; l < n; ++l) {
      if (l != j) rest.push_back(idx[l]);
    }
    const double sign = (j % 2 == 1) ? 1.0 : -1.0;
    total += sign * aij * expansion(a, rest);
  }
  return total;
}

}  // namespace

cplx pfaffian(const CMatrix& input, double antisym_tol) {
  check_antisymmetric(input, antisym_tol);
  const Eigen::Index n = input.rows();
  if (n == 0) return 1.0;
  if (n % 2 == 1) return 0.0;

  CMatrix a = input;
  cplx pf = 1.0;
  for (Eigen::Index k = 0; k < n - 1; k += 2) {
    Eigen::Index rel = 0;
    a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&rel);
    const Eigen::Index kp = k + 1 + rel;
    if (kp != k + 1) {
      a.row(k + 1).swap(a.row(kp));
      a.col(k + 1).swap(a.col(kp));
      pf = -pf;
    }
    if (a(k + 1, k) == 0.0) return 0.0;
    pf *= a(k, k + 1);
    if (k + 2 < n) {
      const Eigen::Index m = n - k - 2;
      const CVector tau = a.row(k).tail(m).transpose() / a(k, k + 1);
      const CVector col = a.col(k + 1).tail(m);
      a.bottomRightCorner(m, m) += tau * col.transpose() - col * tau.transpose();
    }
  }
  return pf;
}

cplx pfaffian_expansion(const CMatrix& a) {
  if (a.rows() != a.cols()) throw InputError("pfaffian needs a square matrix");
  std::vector<int> idx(static_cast<std::size_t>(a.rows()));
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  return expansion(a, idx);
}

// ---------------------------------------------------------------------------
// LinearOperator

LinearOperator::LinearOperator(std::size_t dim, ApplyFn apply, bool hermitian)
    : dim_(dim), apply_(std::move(apply)), hermitian_(hermitian) {
  if (dim == 0) throw InputError("operator dimension must be positive");
  if (!apply_) throw InputError("operator needs an apply function");
}

CVector LinearOperator::apply(const CVector& v) const {
  if (static_cast<std::size_t>(v.size()) != dim_) throw InputError("operator/vector dimension mismatch");
  CVector out(v.size());
  apply_(v.data(), out.data());
  return out;
}

CMatrix LinearOperator::to_dense() const {
  if (dense_) return dense_();
  const auto n = static_cast<Eigen::Index>(dim_);
  CMatrix m(n, n);
  CVector e = CVector::Zero(n);
  CVector out(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    apply_(e.data(), out.data());
    m.col(j) = out;
    e[j] = 0.0;
  }
  return m;
}

double LinearOperator::expectation(const CVector& v) const {
  return v.dot(apply(v)).real() / v.squaredNorm();
}

// ---------------------------------------------------------------------------
// Eigensolvers

namespace {

double residual_of(const LinearOperator& h, const CVector& v, double lambda) {
  return (h.apply(v) - lambda * v).norm() / v.norm();
}

std::vector<EigenPair> dense_smallest(const LinearOperator& h, int k) {
  std::vector<EigenPair> out;
  const CMatrix m = h.to_dense();
  if (h.real_symmetric()) {
    const Eigen::MatrixXd mr = m.real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mr);
    if (es.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
    for (int i = 0; i < k; ++i) {
      EigenPair p;
      p.value = es.eigenvalues()[i];
      p.vector = es.eigenvectors().col(i).cast<cplx>();
      out.push_back(std::move(p));
    }
  } else {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
    if (es.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
    for (int i = 0; i < k; ++i) {
      EigenPair p;
      p.value = es.eigenvalues()[i];
      p.vector = es.eigenvectors().col(i);
      out.push_back(std::move(p));
    }
  }
  return out;
}

// Fixed-seed start vector; mt19937_64 output is specified bit-for-bit.
CVector start_vector(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 gen(0x5eed1234abcdULL + seed);
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5;
    const double im = static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5;
    v[i] = cplx(re, im);
  }
  return v;
}

// Two passes of classical Gram-Schmidt against the columns [0, cols).
void orthogonalize(CVector& w, const CMatrix& basis, Eigen::Index cols) {
  if (cols == 0) return;
  for (int pass = 0; pass < 2; ++pass) {
    const CVector c = basis.leftCols(cols).adjoint() * w;
    w.noalias() -= basis.leftCols(cols) * c;
  }
}

// Explicitly restarted Lanczos with full reorthogonalization; converged
// Ritz vectors are locked and deflated one at a time.
std::vector<EigenPair> lanczos_smallest(const LinearOperator& h, int k, const EigOptions& opts) {
  const auto n = static_cast<Eigen::Index>(h.dim());
  CMatrix locked(n, k);
  std::vector<double> values;
  std::uint64_t seed = 0;

  while (static_cast<int>(values.size()) < k) {
    const auto nlocked = static_cast<Eigen::Index>(values.size());
    CVector v = start_vector(n, seed++);
    orthogonalize(v, locked, nlocked);
    v.normalize();

    const Eigen::Index m = std::min<Eigen::Index>(opts.krylov_dim, n - nlocked);
    CMatrix basis(n, m);
    CVector w(n);
    bool converged = false;
    double last_residual = std::numeric_limits<double>::infinity();

    for (int restart = 0; restart <= opts.max_restarts && !converged; ++restart) {
      std::vector<double> alpha;
      std::vector<double> beta;
      basis.col(0) = v;
      Eigen::Index size = m;
      for (Eigen::Index j = 0; j < m; ++j) {
        h.apply(basis.col(j).data(), w.data());
        alpha.push_back(basis.col(j).dot(w).real());
        // Locked vectors last: removing basis components would otherwise
        // reintroduce their small locked overlaps, amplified by 1/b.
        orthogonalize(w, basis, j + 1);
        orthogonalize(w, locked, nlocked);
        const double b = w.norm();
        if (j + 1 == m) break;
        if (b < 1e-13 * std::max(1.0, std::abs(alpha.back()))) {
          size = j + 1;
          break;
        }
        beta.push_back(b);
        basis.col(j + 1) = w / b;
      }

      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(size, size);
      for (Eigen::Index i = 0; i < size; ++i) {
        t(i, i) = alpha[static_cast<std::size_t>(i)];
        if (i + 1 < size) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
      const double theta = es.eigenvalues()[0];
      CVector x = basis.leftCols(size) * es.eigenvectors().col(0).cast<cplx>();
      orthogonalize(x, locked, nlocked);
      x.normalize();

      last_residual = residual_of(h, x, theta);
      if (last_residual <= opts.residual_tol) {
        locked.col(nlocked) = x;
        values.push_back(h.expectation(x));
        converged = true;
      } else {
        v = x;
      }
    }
    if (!converged) {
      std::ostringstream os;
      os << "Lanczos did not converge for eigenpair " << values.size() << " (residual "
         << last_residual << " > " << opts.residual_tol << ")";
      throw NumericalError(os.str());
    }
  }

  std::vector<EigenPair> out;
  for (int i = 0; i < k; ++i) {
    EigenPair p;
    p.value = values[static_cast<std::size_t>(i)];
    p.vector = locked.col(i);
    out.push_back(std::move(p));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const EigenPair& a, const EigenPair& b) { return a.value < b.value; });
  return out;
}

}  // namespace

std::vector<EigenPair> eig_smallest(const LinearOperator& h, int k, const EigOptions& opts) {
  if (!h.hermitian()) throw InputError("eig_smallest requires a Hermitian operator");
  if (k < 1 || static_cast<std::size_t>(k) > h.dim()) {
    throw InputError("eig_smallest: k must satisfy 1 <= k <= dim");
  }
  bool dense = false;
  switch (opts.method) {
    case EigMethod::dense: dense = true; break;
    case EigMethod::lanczos: dense = false; break;
    default: dense = h.dim() <= opts.dense_max_dim; break;
  }
  // A Krylov space cannot be larger than the problem.
  if (!dense && h.dim() <= static_cast<std::size_t>(k) + 1) dense = true;

  std::vector<EigenPair> out = dense ? dense_smallest(h, k) : lanczos_smallest(h, k, opts);
  for (auto& p : out) {
    p.residual = residual_of(h, p.vector, p.value);
    if (!(p.residual <= opts.residual_tol)) {
      std::ostringstream os;
      os << "eigenpair residual " << p.residual << " exceeds " << opts.residual_tol;
      throw NumericalError(os.str());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Brent minimizer

MinimizeResult minimize_scalar(const std::function<double(double)>& f, double lo, double hi,
                               double tol, int max_iter) {
  if (!(lo < hi)) throw InputError("minimize_scalar: bracket must satisfy lo < hi");
  if (!(tol > 0.0)) throw InputError("minimize_scalar: tol must be positive");

  MinimizeResult best{lo, std::numeric_limits<double>::infinity(), 0};
  auto eval = [&](double x) {
    const double y = f(x);
    ++best.evaluations;
    if (std::isnan(y)) {
      std::ostringstream os;
      os.precision(17);
      os << "objective returned NaN at x = " << x;
      throw NumericalError(os.str());
    }
    if (y < best.f) {
      best.f = y;
      best.x = x;
    }
    return y;
  };

  eval(lo);
  eval(hi);

  constexpr double kGolden = 0.3819660112501051;  // (3 - sqrt 5) / 2
  double a = lo;
  double b = hi;
  double x = a + kGolden * (b - a);
  double w = x;
  double v = x;
  double fx = eval(x);
  double fw = fx;
  double fv = fx;
  double d = 0.0;
  double e = 0.0;

  for (int iter = 0; iter < max_iter; ++iter) {
    const double mid = 0.5 * (a + b);
    const double tol1 = tol / 3.0 + 1e-12 * std::abs(x);
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - mid) <= tol2 - 0.5 * (b - a)) break;

    bool golden = true;
    if (std::abs(e) > tol1) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double e_prev = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (mid >= x) ? tol1 : -tol1;
        golden = false;
      }
    }
    if (golden) {
      e = (x >= mid) ? a - x : b - x;
      d = kGolden * e;
    }
    const double u = std::abs(d) >= tol1 ? x + d : x + (d > 0 ? tol1 : -tol1);
    const double fu = eval(u);
    if (fu <= fx) {
      if (u >= x) a = x; else b = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  return best;
}

}  // namespace idmps::numerics
