#include "idmps/core/special_fn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "idmps/core/errors.hpp"

#if defined(IDMPS_HAVE_QUADMATH)
extern "C" {
#include <quadmath.h>
}
#endif

namespace idmps::special {

namespace {

// ---------------------------------------------------------------------------
// Extended-precision scalar used for the series. Inputs and outputs stay in
// double; only the summation (where theta_1 at large Im tau loses e^{pi R/4}
// to cancellation) needs the extra digits.

#if defined(IDMPS_HAVE_QUADMATH)
using Real = __float128;
const Real kPi = acosq(Real(-1));
const Real kEps = scalbnq(Real(1), -112);  // FLT128_EPSILON
Real r_exp(Real x) { return expq(x); }
Real r_log(Real x) { return logq(x); }
Real r_cos(Real x) { return cosq(x); }
Real r_sin(Real x) { return sinq(x); }
Real r_atan2(Real y, Real x) { return atan2q(y, x); }
Real r_hypot(Real x, Real y) { return hypotq(x, y); }
#else
using Real = long double;
const Real kPi = 3.141592653589793238462643383279502884L;
const Real kEps = std::numeric_limits<long double>::epsilon();
Real r_exp(Real x) { return std::exp(x); }
Real r_log(Real x) { return std::log(x); }
Real r_cos(Real x) { return std::cos(x); }
Real r_sin(Real x) { return std::sin(x); }
Real r_atan2(Real y, Real x) { return std::atan2(y, x); }
Real r_hypot(Real x, Real y) { return std::hypot(x, y); }
#endif

struct Cx {
  Real re = 0;
  Real im = 0;
};

Cx cx(cplx v) { return {static_cast<Real>(v.real()), static_cast<Real>(v.imag())}; }
Cx operator+(Cx a, Cx b) { return {a.re + b.re, a.im + b.im}; }
Cx operator-(Cx a) { return {-a.re, -a.im}; }
Cx operator*(Cx a, Cx b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
Cx operator*(Real s, Cx a) { return {s * a.re, s * a.im}; }
Cx operator/(Cx a, Cx b) {
  const Real d = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
Real abs(Cx a) { return r_hypot(a.re, a.im); }
Cx expi(Real phase) { return {r_cos(phase), r_sin(phase)}; }
// Principal logarithm.
Cx log(Cx a) { return {r_log(abs(a)), r_atan2(a.im, a.re)}; }

// value = mant * exp(log_scale)
struct QScaled {
  Cx mant;
  Real log_scale = 0;
};

// Multiply by exp(c) for complex c.
QScaled times_exp(QScaled v, Cx c) {
  v.log_scale += c.re;
  v.mant = v.mant * expi(c.im);
  return v;
}

ScaledComplex to_double(const QScaled& q) {
  const Real mag = abs(q.mant);
  if (mag == 0) return {};
  const Real total = q.log_scale + r_log(mag);
  const double ls = static_cast<double>(total);
  const Real rem = r_exp(total - static_cast<Real>(ls)) / mag;
  const Cx m = rem * q.mant;
  return {cplx(static_cast<double>(m.re), static_cast<double>(m.im)), ls};
}

Real log_tolerance(const SeriesOptions& opts) {
  const Real tol = opts.rel_tol > 0 ? static_cast<Real>(opts.rel_tol) : kEps;
  return r_log(tol);
}

// sum_n w(m) exp(i pi tau m^2 + 2 pi i (z + b) m), m = n + a, with
// w = 1, or w = 2 pi i m for the z-derivative. Summation is centred on the
// dominant term m* = -Im z / Im tau and grows outwards in both directions.
QScaled theta_series(Real a, Real b, Cx z, Cx tau, bool derivative, const SeriesOptions& opts) {
  if (!(tau.im > 0)) throw DomainError("theta series requires Im(tau) > 0");
  const Real two_pi = 2 * kPi;
  const Real m_star = -z.im / tau.im;
  // Continuous maximum of the Gaussian envelope; every term is scaled by it.
  const Real l_ref = kPi * z.im * z.im / tau.im;
  const long n0 = std::lround(static_cast<double>(m_star - a));
  const Real log_tol = log_tolerance(opts);

  Cx sum{};
  Real log_max = -std::numeric_limits<double>::infinity();

  // Adds term n; returns its log-magnitude (-inf for a vanishing weight).
  auto add_term = [&](long n) -> Real {
    const Real m = static_cast<Real>(n) + a;
    Real log_mag = -kPi * tau.im * m * m - two_pi * z.im * m - l_ref;
    Real phase = kPi * tau.re * m * m + two_pi * (z.re + b) * m;
    Real weight = 1;
    if (derivative) {
      if (m == 0) return -std::numeric_limits<double>::infinity();
      weight = two_pi * m;
      phase += kPi / 2;
    }
    const Cx t = (weight * r_exp(log_mag)) * expi(phase);
    sum = sum + t;
    if (derivative) log_mag += r_log(two_pi * (m < 0 ? -m : m));
    log_max = std::max(log_max, log_mag);
    return log_mag;
  };

  add_term(n0);
  bool up_done = false;
  bool down_done = false;
  for (long k = 1; !(up_done && down_done); ++k) {
    if (k > opts.max_terms) {
      throw NumericalError("theta series did not converge within " +
                           std::to_string(opts.max_terms) + " terms (accuracy loss)");
    }
    if (!up_done) {
      const long n = n0 + k;
      const Real l = add_term(n);
      const Real m = static_cast<Real>(n) + a;
      if (m > m_star + 1 && l < log_max + log_tol) up_done = true;
    }
    if (!down_done) {
      const long n = n0 - k;
      const Real l = add_term(n);
      const Real m = static_cast<Real>(n) + a;
      if (m < m_star - 1 && l < log_max + log_tol) down_done = true;
    }
  }
  return {sum, l_ref};
}

Real half_of(int twice) {
  if (twice != 0 && twice != 1) throw DomainError("theta characteristic must be 0 or 1/2");
  return twice == 1 ? Real(0.5) : Real(0);
}

void check_nu(int nu) {
  if (nu < 1 || nu > 4) throw DomainError("theta label nu must be 1..4, got " + std::to_string(nu));
}

// theta_nu through its characteristic series, with theta_1 = -theta[1/2;1/2].
QScaled theta_named_direct(int nu, Cx z, Cx tau, const SeriesOptions& opts) {
  switch (nu) {
    case 1: {
      QScaled v = theta_series(0.5, 0.5, z, tau, false, opts);
      v.mant = -v.mant;
      return v;
    }
    case 2: return theta_series(0.5, 0, z, tau, false, opts);
    case 3: return theta_series(0, 0, z, tau, false, opts);
    default: return theta_series(0, 0.5, z, tau, false, opts);
  }
}

// (1,2,3,4) -> (1,4,3,2)
int s_partner(int nu) { return nu == 2 ? 4 : (nu == 4 ? 2 : nu); }

// Prefactor sqrt(i/tau) exp(-i pi z^2 / tau), in log form.
Cx inversion_log_prefactor(Cx z, Cx tau) {
  const Cx i_over_tau = Cx{0, 1} / tau;
  const Cx half_log = Real(0.5) * log(i_over_tau);
  const Cx quad = Cx{0, -kPi} * (z * z) / tau;
  return half_log + quad;
}

// theta_nu(z|tau) = (-i)^{[nu=1]} sqrt(i/tau) e^{-i pi z^2/tau} theta_{nu~}(-z/tau | -1/tau)
QScaled theta_named_inverted(int nu, Cx z, Cx tau, const SeriesOptions& opts) {
  const Cx sigma = Cx{-1, 0} / tau;
  const Cx w = -(z / tau);
  QScaled v = theta_named_direct(s_partner(nu), w, sigma, opts);
  v = times_exp(v, inversion_log_prefactor(z, tau));
  if (nu == 1) v.mant = Cx{0, -1} * v.mant;
  return v;
}

bool use_inversion(SeriesPath path, Cx tau) {
  switch (path) {
    case SeriesPath::direct: return false;
    case SeriesPath::inverted: return true;
    default: return r_exp(-kPi * tau.im) > Real(kInversionNome);
  }
}

// theta_1 vanishes on real integers and theta_2 on real half-odd integers.
// The series only cancels there to rounding, so return the exact zero.
bool on_real_zero(int nu, Cx z) {
  if (z.im != 0 || (nu != 1 && nu != 2)) return false;
  const double x = static_cast<double>(z.re) + (nu == 2 ? 0.5 : 0.0);
  return x == std::round(x);
}

QScaled theta_named(int nu, Cx z, Cx tau, SeriesPath path, const SeriesOptions& opts) {
  check_nu(nu);
  if (!(tau.im > 0)) throw DomainError("theta functions require Im(tau) > 0");
  if (on_real_zero(nu, z)) return {};
  return use_inversion(path, tau) ? theta_named_inverted(nu, z, tau, opts)
                                  : theta_named_direct(nu, z, tau, opts);
}

QScaled theta1_prime_q(Cx tau, SeriesPath path, const SeriesOptions& opts) {
  if (!(tau.im > 0)) throw DomainError("theta functions require Im(tau) > 0");
  if (!use_inversion(path, tau)) {
    QScaled v = theta_series(0.5, 0.5, Cx{}, tau, true, opts);
    v.mant = -v.mant;
    return v;
  }
  // theta_1'(0|tau) = (-i) sqrt(i/tau) (-1/tau) theta_1'(0|-1/tau)
  const Cx sigma = Cx{-1, 0} / tau;
  QScaled v = theta_series(0.5, 0.5, Cx{}, sigma, true, opts);
  v.mant = -v.mant;
  v = times_exp(v, inversion_log_prefactor(Cx{}, tau));
  v.mant = Cx{0, -1} * v.mant * sigma;
  return v;
}

int nu_from_char(ThetaChar c, bool& negate) {
  half_of(c.twice_a);
  half_of(c.twice_b);
  negate = false;
  if (c.twice_a == 1 && c.twice_b == 1) {
    negate = true;
    return 1;
  }
  if (c.twice_a == 1) return 2;
  if (c.twice_b == 0) return 3;
  return 4;
}

}  // namespace

// ---------------------------------------------------------------------------
// ScaledComplex

ScaledComplex ScaledComplex::from_value(cplx v) {
  const double mag = std::abs(v);
  if (mag == 0.0) return {};
  return {v / mag, std::log(mag)};
}

ScaledComplex ScaledComplex::from_log(cplx log_value) {
  return {std::polar(1.0, log_value.imag()), log_value.real()};
}

cplx ScaledComplex::value() const {
  if (is_zero()) return {0.0, 0.0};
  return mantissa * std::exp(log_scale);
}

double ScaledComplex::log_abs() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  return log_scale + std::log(std::abs(mantissa));
}

cplx ScaledComplex::value_shifted(double shift) const {
  if (is_zero()) return {0.0, 0.0};
  return mantissa * std::exp(log_scale - shift);
}

namespace {
void renormalize(ScaledComplex& s) {
  const double mag = std::abs(s.mantissa);
  if (mag == 0.0) {
    s.log_scale = 0.0;
    return;
  }
  if (mag > 1e8 || mag < 1e-8) {
    s.mantissa /= mag;
    s.log_scale += std::log(mag);
  }
}
}  // namespace

ScaledComplex& ScaledComplex::operator*=(const ScaledComplex& o) {
  mantissa *= o.mantissa;
  log_scale += o.log_scale;
  renormalize(*this);
  return *this;
}

ScaledComplex& ScaledComplex::operator/=(const ScaledComplex& o) {
  if (o.is_zero()) throw DomainError("division by a vanishing scaled value");
  mantissa /= o.mantissa;
  log_scale -= o.log_scale;
  renormalize(*this);
  return *this;
}

ScaledComplex operator+(const ScaledComplex& a, const ScaledComplex& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const double s = std::max(a.log_scale, b.log_scale);
  ScaledComplex r{a.value_shifted(s) + b.value_shifted(s), s};
  renormalize(r);
  return r;
}

ScaledComplex operator-(const ScaledComplex& a, const ScaledComplex& b) { return a + (-b); }

double relative_difference(const ScaledComplex& a, const ScaledComplex& b) {
  const double la = a.log_abs();
  const double lb = b.log_abs();
  const double top = std::max(la, lb);
  if (!std::isfinite(top)) return 0.0;
  return std::abs(a.value_shifted(top) - b.value_shifted(top));
}

// ---------------------------------------------------------------------------
// ModularParam

ModularParam::ModularParam(double radius) : radius_(radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw DomainError("torus radius R must be positive and finite");
  }
}

double ModularParam::nome() const { return std::exp(-M_PI * radius_); }
double ModularParam::nome2() const { return std::exp(-2.0 * M_PI * radius_); }
double ModularParam::sewing_nome(int n) const {
  if (n < 1) throw InputError("sewing nome needs n >= 1");
  return std::exp(-2.0 * M_PI / (n * radius_));
}

// ---------------------------------------------------------------------------
// Public evaluation

ScaledComplex theta_char_scaled(ThetaChar c, cplx z, cplx tau, SeriesPath path,
                                const SeriesOptions& opts) {
  if (!(tau.imag() > 0.0)) throw DomainError("theta functions require Im(tau) > 0");
  bool negate = false;
  const int nu = nu_from_char(c, negate);
  if (path == SeriesPath::direct && !on_real_zero(nu, cx(z))) {
    return to_double(theta_series(half_of(c.twice_a), half_of(c.twice_b), cx(z), cx(tau), false, opts));
  }
  ScaledComplex v = to_double(theta_named(nu, cx(z), cx(tau), path, opts));
  if (negate) v = -v;
  return v;
}

cplx theta_char(ThetaChar c, cplx z, cplx tau) { return theta_char_scaled(c, z, tau).value(); }

ScaledComplex theta_nu_scaled(int nu, cplx z, cplx tau, SeriesPath path, const SeriesOptions& opts) {
  return to_double(theta_named(nu, cx(z), cx(tau), path, opts));
}

cplx theta_nu(int nu, cplx z, cplx tau) { return theta_nu_scaled(nu, z, tau).value(); }

ScaledComplex theta1_prime_zero_scaled(cplx tau, SeriesPath path, const SeriesOptions& opts) {
  return to_double(theta1_prime_q(cx(tau), path, opts));
}

ScaledComplex prime_form_scaled(cplx z, cplx tau, SeriesPath path) {
  const ScaledComplex num = theta_nu_scaled(1, z, tau, path);
  if (num.is_zero()) return {};
  return num / theta1_prime_zero_scaled(tau, path);
}

cplx prime_form(cplx z, cplx tau) { return prime_form_scaled(z, tau).value(); }

namespace {
void check_not_lattice(cplx z, cplx tau) {
  const double n = std::round(z.imag() / tau.imag());
  const cplx shifted = z - n * tau;
  const double m = std::round(shifted.real());
  if (std::abs(shifted - m) < 1e-12) {
    throw DomainError("weierstrass kernel has a pole at lattice point z = " +
                      std::to_string(m) + " + " + std::to_string(n) + " tau");
  }
}
}  // namespace

ScaledComplex weierstrass_nu_scaled(int nu, cplx z, cplx tau, SeriesPath path) {
  if (nu < 2 || nu > 4) throw DomainError("weierstrass label nu must be 2, 3 or 4");
  if (!(tau.imag() > 0.0)) throw DomainError("theta functions require Im(tau) > 0");
  check_not_lattice(z, tau);
  const ScaledComplex ratio = theta_nu_scaled(nu, z, tau, path) / theta_nu_scaled(nu, 0.0, tau, path);
  return ratio / prime_form_scaled(z, tau, path);
}

cplx weierstrass_nu(int nu, cplx z, cplx tau, SeriesPath path) {
  return weierstrass_nu_scaled(nu, z, tau, path).value();
}

// ---------------------------------------------------------------------------
// Modular identities

double ModularResidualReport::max() const {
  double m = std::max({prime_form, theta3_double, theta2_double});
  for (double t : theta) m = std::max(m, t);
  return m;
}

ModularResidualReport modular_residual_report(cplx tau, cplx z) {
  if (!(tau.imag() > 0.0)) throw DomainError("modular residual requires Im(tau) > 0");
  constexpr SeriesPath kDirect = SeriesPath::direct;
  const cplx i{0.0, 1.0};
  const cplx s_tau = -1.0 / tau;
  const cplx s_z = z / tau;
  // sqrt(-i tau) e^{i pi z^2 / tau}
  const ScaledComplex factor = ScaledComplex::from_log(0.5 * std::log(-i * tau) + i * M_PI * z * z / tau);

  ModularResidualReport rep;
  for (int nu = 1; nu <= 4; ++nu) {
    const ScaledComplex lhs = theta_nu_scaled(nu, s_z, s_tau, kDirect);
    ScaledComplex rhs = factor * theta_nu_scaled(s_partner(nu), z, tau, kDirect);
    if (nu == 1) rhs = ScaledComplex{-i, 0.0} * rhs;
    rep.theta[nu - 1] = relative_difference(lhs, rhs);
  }

  {
    const ScaledComplex lhs = prime_form_scaled(s_z, s_tau, kDirect);
    const ScaledComplex rhs = ScaledComplex::from_log(i * M_PI * z * z / tau - std::log(tau)) *
                              prime_form_scaled(z, tau, kDirect);
    rep.prime_form = relative_difference(lhs, rhs);
  }

  {
    // theta_{3,2}(z/tau | -2/tau) = sqrt(-i tau)/sqrt2 e^{i pi z^2/(2tau)} (theta_3 +- theta_2)(z | 2tau)
    const ScaledComplex mix = ScaledComplex::from_log(0.5 * std::log(-i * tau) - 0.5 * std::log(2.0) +
                                                      i * M_PI * z * z / (2.0 * tau));
    const cplx s2_tau = -2.0 / tau;
    const ScaledComplex t3 = theta_nu_scaled(3, z, 2.0 * tau, kDirect);
    const ScaledComplex t2 = theta_nu_scaled(2, z, 2.0 * tau, kDirect);
    // theta_3 - theta_2 at 2tau cancels to e^{-pi/(2R)} of its terms for small
    // R, so both residuals are measured against the size of the summands.
    const double lt = std::max(t3.log_abs(), t2.log_abs());
    const double terms = std::exp(t3.log_abs() - lt) + std::exp(t2.log_abs() - lt);
    auto residual = [&](const ScaledComplex& lhs, const ScaledComplex& rhs) {
      return std::abs((lhs - rhs).value_shifted(lt + mix.log_abs())) / terms;
    };
    rep.theta3_double = residual(theta_nu_scaled(3, s_z, s2_tau, kDirect), mix * (t3 + t2));
    rep.theta2_double = residual(theta_nu_scaled(2, s_z, s2_tau, kDirect), mix * (t3 - t2));
  }
  return rep;
}

double modular_residual(cplx tau, cplx z) { return modular_residual_report(tau, z).max(); }

}  // namespace idmps::special
