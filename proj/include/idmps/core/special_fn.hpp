#pragma once

// Jacobi theta functions with characteristics, the prime form and the
// generalized Weierstrass kernels on a torus of modular parameter tau.
//
// Every series is summed in extended precision (binary128 where the compiler
// provides it) around its dominant term, and returned as a ScaledComplex so
// that values like theta_4(0 | 0.02i) ~ e^-39 or theta_3(x | 2tau) ~ e^+600
// survive being multiplied together before the caller normalizes.

#include <complex>

namespace idmps::special {

using cplx = std::complex<double>;

// value = mantissa * exp(log_scale). A zero value has mantissa 0.
struct ScaledComplex {
  cplx mantissa{0.0, 0.0};
  double log_scale = 0.0;

  static ScaledComplex from_value(cplx v);
  static ScaledComplex from_log(cplx log_value);

  [[nodiscard]] bool is_zero() const { return mantissa == cplx{0.0, 0.0}; }
  [[nodiscard]] cplx value() const;
  // log|value|; -inf for zero.
  [[nodiscard]] double log_abs() const;
  [[nodiscard]] double arg() const { return std::arg(mantissa); }
  // value * exp(-shift), evaluated without forming value itself.
  [[nodiscard]] cplx value_shifted(double shift) const;

  ScaledComplex& operator*=(const ScaledComplex& o);
  ScaledComplex& operator/=(const ScaledComplex& o);
  friend ScaledComplex operator*(ScaledComplex a, const ScaledComplex& b) { return a *= b; }
  friend ScaledComplex operator/(ScaledComplex a, const ScaledComplex& b) { return a /= b; }
  friend ScaledComplex operator+(const ScaledComplex& a, const ScaledComplex& b);
  friend ScaledComplex operator-(const ScaledComplex& a, const ScaledComplex& b);
  ScaledComplex operator-() const { return {-mantissa, log_scale}; }
};

// |a - b| / max(|a|, |b|); 0 when both vanish.
double relative_difference(const ScaledComplex& a, const ScaledComplex& b);

// Torus with tau = iR.
class ModularParam {
 public:
  explicit ModularParam(double radius);

  [[nodiscard]] double radius() const { return radius_; }
  [[nodiscard]] cplx tau() const { return {0.0, radius_}; }
  // exp(i pi tau)
  [[nodiscard]] double nome() const;
  // exp(2 pi i tau), the nome of theta(.|2tau)
  [[nodiscard]] double nome2() const;
  // exp(-2 pi / (n R)), the sewing parameter for n three-punctured spheres
  [[nodiscard]] double sewing_nome(int n) const;

 private:
  double radius_;
};

// Characteristics a, b in {0, 1/2}, stored doubled.
struct ThetaChar {
  int twice_a = 0;
  int twice_b = 0;

  static constexpr ThetaChar theta1_neg() { return {1, 1}; }
  static constexpr ThetaChar theta2() { return {1, 0}; }
  static constexpr ThetaChar theta3() { return {0, 0}; }
  static constexpr ThetaChar theta4() { return {0, 1}; }
};

enum class SeriesPath {
  automatic,  // invert when |exp(i pi tau)| > 0.5
  direct,
  inverted,
};

struct SeriesOptions {
  // Stop once the last added term drops below rel_tol of the largest term.
  // Zero selects the working precision of the summation type.
  double rel_tol = 0.0;
  long max_terms = 100000;
};

// Nome threshold above which SeriesPath::automatic evaluates at -1/tau.
inline constexpr double kInversionNome = 0.5;

ScaledComplex theta_char_scaled(ThetaChar c, cplx z, cplx tau,
                                SeriesPath path = SeriesPath::automatic,
                                const SeriesOptions& opts = {});
cplx theta_char(ThetaChar c, cplx z, cplx tau);

// nu in {1,2,3,4}; theta_1 = -theta[1/2;1/2].
ScaledComplex theta_nu_scaled(int nu, cplx z, cplx tau,
                              SeriesPath path = SeriesPath::automatic,
                              const SeriesOptions& opts = {});
cplx theta_nu(int nu, cplx z, cplx tau);

// theta_1'(0|tau) from the term-wise differentiated series.
ScaledComplex theta1_prime_zero_scaled(cplx tau, SeriesPath path = SeriesPath::automatic,
                                       const SeriesOptions& opts = {});

// E(z|tau) = theta_1(z|tau) / theta_1'(0|tau)
ScaledComplex prime_form_scaled(cplx z, cplx tau, SeriesPath path = SeriesPath::automatic);
cplx prime_form(cplx z, cplx tau);

// wp_nu(z|tau) = theta_nu(z|tau) / (E(z|tau) theta_nu(0|tau)), nu in {2,3,4}.
// Throws DomainError when z sits on the period lattice.
ScaledComplex weierstrass_nu_scaled(int nu, cplx z, cplx tau,
                                    SeriesPath path = SeriesPath::automatic);
cplx weierstrass_nu(int nu, cplx z, cplx tau, SeriesPath path = SeriesPath::automatic);

// Largest residual of the S-transform identities at (z, tau):
// theta_nu(z/tau|-1/tau) against theta_{(1,4,3,2)(nu)}(z|tau), the prime form
// rule, and the theta_3/theta_2 mixing at 2tau. Both sides use direct series.
// Residuals are relative to the larger side, except the 2tau mixing, which is
// relative to the magnitude of the two summands (their difference cancels).
double modular_residual(cplx tau, cplx z);

// Per-identity breakdown behind modular_residual.
struct ModularResidualReport {
  double theta[4] = {0, 0, 0, 0};
  double prime_form = 0;
  double theta3_double = 0;
  double theta2_double = 0;
  [[nodiscard]] double max() const;
};
ModularResidualReport modular_residual_report(cplx tau, cplx z);

}  // namespace idmps::special
