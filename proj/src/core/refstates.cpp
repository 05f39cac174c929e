#include "idmps/core/refstates.hpp"

#include <cmath>

#include "idmps/core/errors.hpp"

namespace idmps::refstates {

void MPSTensor::validate() const {
  if (d != 2 && d != 3) throw InputError("MPS tensor physical dimension must be 2 or 3");
  if (static_cast<int>(mats.size()) != d) throw InputError("MPS tensor needs one matrix per physical label");
  for (const auto& m : mats) {
    if (m.rows() != d_left || m.cols() != d_right) throw InputError("MPS tensor matrix has the wrong shape");
    if (!m.allFinite()) throw InputError("MPS tensor has non-finite entries");
  }
}

namespace {

// m value of state index a in a spin-j multiplet (highest weight first), doubled.
int twice_m(int twice_j, int a) { return twice_j - 2 * a; }

}  // namespace

MPSTensor cvo_tensor(blocks::Model model, int twice_left, int twice_phys, int twice_right) {
  const int allowed_phys = model == blocks::Model::su2_1 ? 1 : 2;
  const int max_module = model == blocks::Model::su2_1 ? 1 : 2;
  auto forbidden = [&] {
    return InputError("fusion triple (" + std::to_string(twice_left) + "/2, " + std::to_string(twice_phys) +
                      "/2, " + std::to_string(twice_right) + "/2) is not allowed");
  };
  if (twice_phys != allowed_phys) throw forbidden();
  if (twice_left < 0 || twice_right < 0 || twice_left > max_module || twice_right > max_module) throw forbidden();

  MPSTensor t;
  t.d = twice_phys + 1;
  t.d_left = twice_left + 1;
  t.d_right = twice_right + 1;
  t.mats.assign(static_cast<std::size_t>(t.d), CMatrix::Zero(t.d_left, t.d_right));

  if (twice_right == 0 && twice_left == twice_phys) {
    for (int m = 0; m < t.d; ++m) t.mats[static_cast<std::size_t>(m)](m, 0) = 1.0;
  } else if (twice_left == 0 && twice_right == twice_phys) {
    for (int m = 0; m < t.d; ++m) {
      // (-1)^{m - j}, and b carries -m, i.e. the mirrored index
      const int exponent = (twice_m(twice_phys, m) - twice_phys) / 2;
      t.mats[static_cast<std::size_t>(m)](0, t.d - 1 - m) = exponent % 2 == 0 ? 1.0 : -1.0;
    }
  } else if (model == blocks::Model::su2_2 && twice_left == 1 && twice_right == 1) {
    const double r = 1.0 / std::sqrt(2.0);
    t.mats[0](0, 1) = -1.0;
    t.mats[1](0, 0) = r;
    t.mats[1](1, 1) = -r;
    t.mats[2](1, 0) = 1.0;
  } else {
    throw forbidden();
  }
  return t;
}

StateVector mps_trace_state(const std::vector<MPSTensor>& tensors, int n) {
  if (tensors.empty()) throw InputError("mps_trace_state needs at least one tensor");
  const int d = tensors.front().d;
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    tensors[i].validate();
    if (tensors[i].d != d) throw InputError("MPS tensors disagree on the physical dimension");
  }
  hilbert::check_chain(n, d);
  auto at = [&](int i) -> const MPSTensor& { return tensors[static_cast<std::size_t>(i) % tensors.size()]; };
  for (int i = 0; i < n; ++i) {
    if (at(i).d_right != at((i + 1) % n).d_left) throw InputError("MPS bond dimensions do not match cyclically");
  }

  StateVector v(n, d);
  for (std::uint64_t r = 0; r < v.size(); ++r) {
    const auto c = hilbert::config_of(r, n, d);
    CMatrix prod = at(0).mats[static_cast<std::size_t>(hilbert::digit_of_label(c[0], d))];
    for (int i = 1; i < n; ++i) {
      prod = prod * at(i).mats[static_cast<std::size_t>(hilbert::digit_of_label(c[static_cast<std::size_t>(i)], d))];
    }
    v[r] = prod.trace();
  }
  if (!(v.norm() > 0.0)) throw ConsistencyError("trace MPS vanishes identically");
  return v.normalize();
}

StateVector fusion_path_state(blocks::Model model, const std::vector<int>& twice_path) {
  const int n = static_cast<int>(twice_path.size());
  const int twice_phys = model == blocks::Model::su2_1 ? 1 : 2;
  std::vector<MPSTensor> tensors;
  tensors.reserve(twice_path.size());
  for (int m = 0; m < n; ++m) {
    const int left = twice_path[static_cast<std::size_t>(m)];
    const int right = twice_path[static_cast<std::size_t>((m + n - 1) % n)];
    MPSTensor v = cvo_tensor(model, left, twice_phys, right);
    // tr(V_N ... V_1) = tr(V_1^T ... V_N^T)
    MPSTensor t;
    t.d = v.d;
    t.d_left = v.d_right;
    t.d_right = v.d_left;
    for (const auto& mat : v.mats) t.mats.push_back(mat.transpose());
    tensors.push_back(std::move(t));
  }
  return mps_trace_state(tensors, n);
}

CVector singlet_pair() {
  const double r = 1.0 / std::sqrt(2.0);
  CVector p = CVector::Zero(4);
  p[1] = r;   // +-
  p[2] = -r;  // -+
  return p;
}

CVector spin1_dimer_pair() {
  const double r = 1.0 / std::sqrt(3.0);
  CVector p = CVector::Zero(9);
  p[0] = p[4] = p[8] = r;
  return p;
}

CVector spin1_singlet_pair() {
  const double r = 1.0 / std::sqrt(3.0);
  CVector p = CVector::Zero(9);
  p[2] = r;    // |1,-1>
  p[4] = -r;   // |0,0>
  p[6] = r;    // |-1,1>
  return p;
}

StateVector dimer_state(int n, int offset, const CVector& pair_state) {
  if (n < 2 || n % 2 != 0) throw InputError("dimer states need an even N >= 2");
  if (offset != 0 && offset != 1) throw InputError("dimer offset must be 0 or 1");
  int d = 0;
  if (pair_state.size() == 4) d = 2;
  else if (pair_state.size() == 9) d = 3;
  else throw InputError("pair state must have 4 or 9 entries");

  StateVector v(n, d);
  for (std::uint64_t r = 0; r < v.size(); ++r) {
    const auto c = hilbert::config_of(r, n, d);
    cplx amp = 1.0;
    for (int b = 0; b < n / 2 && amp != 0.0; ++b) {
      const int i = (2 * b + offset) % n;
      const int j = (2 * b + 1 + offset) % n;
      const int idx = hilbert::digit_of_label(c[static_cast<std::size_t>(i)], d) * d +
                      hilbert::digit_of_label(c[static_cast<std::size_t>(j)], d);
      amp *= pair_state[idx];
    }
    v[r] = amp;
  }
  if (!(v.norm() > 0.0)) throw ConsistencyError("dimer state vanishes");
  return v.normalize();
}

namespace {

StateVector combine(const StateVector& a, const StateVector& b, int sign, const char* what) {
  if (sign != 1 && sign != -1) throw InputError("combination sign must be +1 or -1");
  StateVector v(a.sites(), a.local_dim(), a.amplitudes() + static_cast<double>(sign) * b.amplitudes());
  if (v.norm() < 1e-12) {
    throw ConsistencyError(std::string(what) + " combination vanishes at N = " + std::to_string(a.sites()));
  }
  return v.normalize();
}

}  // namespace

StateVector mg_combination(int n, int sign) {
  return combine(dimer_state(n, 0, singlet_pair()), dimer_state(n, 1, singlet_pair()), sign, "Majumdar-Ghosh");
}

StateVector aklt_state(int n, Basis basis) {
  MPSTensor t;
  t.d = 3;
  t.d_left = t.d_right = 2;
  CMatrix sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, cplx(0, -1), cplx(0, 1), 0;
  sz << 1, 0, 0, -1;
  t.mats = {sx, sy, sz};
  StateVector v = mps_trace_state({t}, n);
  if (basis == Basis::standard) v = hilbert::apply_all_sites(v, hilbert::circular_u());
  return v;
}

StateVector spin1_dimer_combinations(int n, int sign) {
  return combine(dimer_state(n, 0, spin1_dimer_pair()), dimer_state(n, 1, spin1_dimer_pair()), sign,
                 "spin-1 dimer");
}

StateVector hs_state(int n) {
  blocks::BlockSpec s;
  s.model = blocks::Model::su2_1;
  s.label = 0;
  s.n = n;
  return blocks::build_cylinder_state(s).state;
}

StateVector hs_excited_state(int n) {
  blocks::BlockSpec s;
  s.model = blocks::Model::su2_1;
  s.label = 1;
  s.n = n;
  return blocks::build_cylinder_state(s).state;
}

StateVector named_reference(const std::string& which, int n) {
  if (which == "mg+") return mg_combination(n, 1);
  if (which == "mg-") return mg_combination(n, -1);
  if (which == "aklt") return aklt_state(n, Basis::standard);
  if (which == "aklt-circ") return aklt_state(n, Basis::circular);
  if (which == "dimer0") return dimer_state(n, 0, singlet_pair());
  if (which == "dimer1") return dimer_state(n, 1, singlet_pair());
  if (which == "s1dimer+") return spin1_dimer_combinations(n, 1);
  if (which == "s1dimer-") return spin1_dimer_combinations(n, -1);
  if (which == "hs") return hs_state(n);
  if (which == "hs-exc") return hs_excited_state(n);
  throw InputError("unknown reference state '" + which + "'");
}

SpanFit fit_in_span(const StateVector& v, const std::vector<StateVector>& basis) {
  if (basis.empty()) throw InputError("span fit needs a nonempty basis");
  const auto k = static_cast<Eigen::Index>(basis.size());
  CMatrix b(static_cast<Eigen::Index>(v.size()), k);
  for (Eigen::Index i = 0; i < k; ++i) {
    hilbert::check_compatible(v, basis[static_cast<std::size_t>(i)]);
    const double nrm = basis[static_cast<std::size_t>(i)].norm();
    if (!(nrm > 0.0)) throw InputError("span fit basis vector has zero norm");
    b.col(i) = basis[static_cast<std::size_t>(i)].amplitudes() / nrm;
  }
  const CVector c = b.colPivHouseholderQr().solve(v.amplitudes());
  SpanFit fit;
  fit.residual = (v.amplitudes() - b * c).norm() / v.norm();
  const double cn = c.norm();
  for (Eigen::Index i = 0; i < k; ++i) fit.coefficients.push_back(cn > 0.0 ? c[i] / cn : cplx(0.0, 0.0));
  return fit;
}

Pairing resolve_pairing(const blocks::BlockSpec& spec, const StateVector& v) {
  std::vector<std::string> candidates;
  if (spec.model == blocks::Model::su2_1) {
    candidates = {"mg+", "mg-"};
  } else if (spec.label == 4) {
    candidates = {"aklt-circ"};
  } else {
    candidates = {"s1dimer+", "s1dimer-"};
  }
  Pairing p;
  p.fidelity = -1.0;
  for (const auto& name : candidates) {
    double f = 0.0;
    try {
      f = hilbert::fidelity(v, named_reference(name, spec.n));
    } catch (const ConsistencyError&) {
      continue;  // e.g. MG+ vanishes at N = 2
    }
    if (f > p.fidelity) {
      if (!p.target.empty()) {
        p.other = p.target;
        p.other_fidelity = p.fidelity;
      }
      p.target = name;
      p.fidelity = f;
    } else {
      p.other = name;
      p.other_fidelity = f;
    }
  }
  if (p.target.empty()) throw ConsistencyError("no thin-torus reference state exists at this N");
  return p;
}

}  // namespace idmps::refstates
