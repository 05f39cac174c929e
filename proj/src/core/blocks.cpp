#include "idmps/core/blocks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "idmps/core/errors.hpp"
#include "idmps/core/numerics.hpp"
#include "idmps/core/parallel.hpp"

namespace idmps::blocks {

using special::ScaledComplex;

void BlockSpec::validate() const {
  if (n < 2 || n % 2 != 0) throw InputError("block states need an even N >= 2, got N = " + std::to_string(n));
  if (model == Model::su2_1) {
    if (label != 0 && label != 1) throw InputError("su2_1 label must be 0 or half");
    if (n > kMaxBlockSitesD2) throw InputError("su2_1 supports N <= " + std::to_string(kMaxBlockSitesD2));
  } else {
    if (label < 2 || label > 4) throw InputError("su2_2 label must be 2, 3 or 4");
    if (n > kMaxBlockSitesD3) throw InputError("su2_2 supports N <= " + std::to_string(kMaxBlockSitesD3));
  }
}

std::string BlockSpec::model_name() const { return model == Model::su2_1 ? "su2_1" : "su2_2"; }

std::string BlockSpec::label_name() const {
  if (model == Model::su2_1) return label == 1 ? "half" : "0";
  return std::to_string(label);
}

BlockSpec make_spec(const std::string& model, const std::string& label, int n) {
  BlockSpec s;
  s.n = n;
  if (model == "su2_1") {
    s.model = Model::su2_1;
    if (label == "0") s.label = 0;
    else if (label == "half" || label == "1/2") s.label = 1;
    else throw InputError("su2_1 label must be 0 or half, got '" + label + "'");
  } else if (model == "su2_2") {
    s.model = Model::su2_2;
    if (label == "2" || label == "3" || label == "4") s.label = label[0] - '0';
    else throw InputError("su2_2 label must be 2, 3 or 4, got '" + label + "'");
  } else {
    throw InputError("unknown model '" + model + "' (expected su2_1 or su2_2)");
  }
  s.validate();
  return s;
}

int marshall_sign(const Config& s) {
  int sign = 1;
  for (std::size_t i = 0; i < s.size(); i += 2) {
    if (s[i] != 1 && s[i] != -1) throw InputError("Marshall sign needs spin-1/2 labels");
    sign *= s[i];
  }
  return sign;
}

cplx expected_momentum(const BlockSpec& spec) {
  if (spec.model == Model::su2_1) {
    // e^{i pi m} for integer m, kept exact
    return (spec.n / 2 + spec.label) % 2 == 0 ? cplx(1.0, 0.0) : cplx(-1.0, 0.0);
  }
  return spec.label == 2 ? cplx(-1.0, 0.0) : cplx(1.0, 0.0);
}

// ---------------------------------------------------------------------------

BlockEvaluator::BlockEvaluator(const BlockSpec& spec, std::optional<special::ModularParam> geom)
    : spec_(spec), geom_(std::move(geom)) {
  spec_.validate();
  const int n = spec_.n;
  if (spec_.model == Model::su2_1) {
    prime_.resize(static_cast<std::size_t>(n));
    for (int m = 1; m < n; ++m) {
      const double x = static_cast<double>(m) / n;
      prime_[static_cast<std::size_t>(m)] =
          geom_ ? special::prime_form_scaled(x, geom_->tau())
                : ScaledComplex::from_value(std::sin(M_PI * x) / M_PI);
    }
    const int p_max = n * (n + 1) / 2;
    theta_offset_ = p_max;
    theta_.resize(static_cast<std::size_t>(2 * p_max + 1));
    const int nu = spec_.label == 0 ? 3 : 2;
    for (int p = -p_max; p <= p_max; ++p) {
      // Only p of the right parity occur; fill the rest anyway for simplicity.
      const double x = static_cast<double>(p) / n;
      ScaledComplex v;
      if (geom_) {
        v = special::theta_nu_scaled(nu, x, 2.0 * geom_->tau());
      } else if (nu == 3) {
        v = ScaledComplex::from_value(1.0);
      } else {
        v = ScaledComplex::from_value(std::cos(M_PI * x));
      }
      theta_[static_cast<std::size_t>(p + p_max)] = v;
    }
  } else {
    std::vector<ScaledComplex> raw(static_cast<std::size_t>(n));
    double top = -std::numeric_limits<double>::infinity();
    for (int m = 1; m < n; ++m) {
      const double x = static_cast<double>(m) / n;
      ScaledComplex v;
      if (geom_) {
        v = special::weierstrass_nu_scaled(spec_.label, x, geom_->tau());
      } else if (spec_.label == 2) {
        v = 2 * m == n ? ScaledComplex{} : ScaledComplex::from_value(M_PI / std::tan(M_PI * x));
      } else {
        v = ScaledComplex::from_value(M_PI / std::sin(M_PI * x));
      }
      raw[static_cast<std::size_t>(m)] = v;
      top = std::max(top, v.log_abs());
    }
    if (!std::isfinite(top)) throw ConsistencyError("all Weierstrass kernel values vanish");
    kernel_log_scale_ = top;
    kernel_.assign(static_cast<std::size_t>(n), cplx(0.0, 0.0));
    for (int m = 1; m < n; ++m) kernel_[static_cast<std::size_t>(m)] = raw[static_cast<std::size_t>(m)].value_shifted(top);
  }
}

ScaledComplex BlockEvaluator::amplitude_scaled(const Config& s) const {
  if (static_cast<int>(s.size()) != spec_.n) throw InputError("configuration length does not match N");
  return spec_.model == Model::su2_1 ? su2_1(s) : su2_2(s);
}

ScaledComplex BlockEvaluator::su2_1(const Config& s) const {
  const int n = spec_.n;
  int charge = 0;
  int p = 0;
  for (int j = 0; j < n; ++j) {
    if (s[static_cast<std::size_t>(j)] != 1 && s[static_cast<std::size_t>(j)] != -1) {
      throw InputError("su2_1 labels must be +1 or -1");
    }
    charge += s[static_cast<std::size_t>(j)];
    p += s[static_cast<std::size_t>(j)] * (j + 1);
  }
  if (charge != 0) return {};

  ScaledComplex amp = theta_[static_cast<std::size_t>(p + theta_offset_)];
  if (amp.is_zero()) return {};
  int sign = spec_.marshall == MarshallMode::standard ? marshall_sign(s) : 1;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (s[static_cast<std::size_t>(i)] != s[static_cast<std::size_t>(j)]) continue;
      // E(z_i - z_j) = -E((j - i)/N)
      amp *= prime_[static_cast<std::size_t>(j - i)];
      sign = -sign;
    }
  }
  return sign > 0 ? amp : -amp;
}

ScaledComplex BlockEvaluator::su2_2(const Config& s) const {
  const int n = spec_.n;
  int counts[3] = {0, 0, 0};
  for (int label : s) {
    if (label < -1 || label > 1) throw InputError("su2_2 labels must be +1, 0 or -1");
    ++counts[label + 1];
  }
  if (counts[0] % 2 || counts[1] % 2 || counts[2] % 2) return {};

  numerics::CMatrix c = numerics::CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (s[static_cast<std::size_t>(i)] != s[static_cast<std::size_t>(j)]) continue;
      // wp(z_i - z_j) = -wp((j - i)/N)
      const cplx k = -kernel_[static_cast<std::size_t>(j - i)];
      c(i, j) = k;
      c(j, i) = -k;
    }
  }
  ScaledComplex amp = ScaledComplex::from_value(numerics::pfaffian(c));
  if (!amp.is_zero()) amp.log_scale += 0.5 * n * kernel_log_scale_;
  return amp;
}

cplx amplitude_su2_1(const BlockSpec& spec, const special::ModularParam& geom, const Config& s) {
  if (spec.model != Model::su2_1) throw InputError("amplitude_su2_1 needs an su2_1 spec");
  return BlockEvaluator(spec, geom).amplitude(s);
}

cplx amplitude_su2_2(const BlockSpec& spec, const special::ModularParam& geom, const Config& s) {
  if (spec.model != Model::su2_2) throw InputError("amplitude_su2_2 needs an su2_2 spec");
  return BlockEvaluator(spec, geom).amplitude(s);
}

// ---------------------------------------------------------------------------

StateVector standard_basis(const BlockSpec& spec, const StateVector& v) {
  if (spec.model == Model::su2_1) return v;
  return hilbert::apply_all_sites(v, hilbert::circular_u());
}

BlockState build_block_state(const BlockSpec& spec, const std::optional<special::ModularParam>& geom) {
  const BlockEvaluator eval(spec, geom);
  const int n = spec.n;
  const int d = spec.local_dim();

  std::vector<std::uint64_t> ranks;
  if (spec.model == Model::su2_1) {
    ranks = hilbert::enumerate_sector(n, d, 0).ranks;
  } else {
    const std::uint64_t dim = hilbert::full_dim(n, d);
    for (std::uint64_t r = 0; r < dim; ++r) {
      int counts[3] = {0, 0, 0};
      std::uint64_t rest = r;
      for (int i = 0; i < n; ++i) {
        ++counts[rest % 3];
        rest /= 3;
      }
      if (counts[0] % 2 == 0 && counts[1] % 2 == 0 && counts[2] % 2 == 0) ranks.push_back(r);
    }
  }

  std::vector<ScaledComplex> amps(ranks.size());
  parallel_for(ranks.size(), [&](std::size_t i) {
    amps[i] = eval.amplitude_scaled(hilbert::config_of(ranks[i], n, d));
  });

  double top = -std::numeric_limits<double>::infinity();
  for (const auto& a : amps) top = std::max(top, a.log_abs());
  if (!std::isfinite(top)) throw ConsistencyError("block state " + spec.model_name() + "/" + spec.label_name() +
                                                  " vanishes identically at N = " + std::to_string(n));

  StateVector v(n, d);
  for (std::size_t i = 0; i < ranks.size(); ++i) v[ranks[i]] = amps[i].value_shifted(top);
  const double nrm = v.norm();
  v.normalize();

  BlockState out;
  out.global_log_scale = top + std::log(nrm);
  out.momentum = hilbert::translation_eigenvalue(v);
  out.total_spin = hilbert::total_spin_quantum(standard_basis(spec, v)).s;
  out.state = std::move(v);
  return out;
}

BlockState build_state(const BlockSpec& spec, const special::ModularParam& geom) {
  return build_block_state(spec, geom);
}

BlockState build_cylinder_state(const BlockSpec& spec) { return build_block_state(spec, std::nullopt); }

}  // namespace idmps::blocks
