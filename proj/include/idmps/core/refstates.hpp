#pragma once

// Exact reference states: dimer coverings, their Majumdar-Ghosh and spin-1
// combinations, AKLT from Pauli matrices, and trace MPS assembled from
// chiral-vertex-operator (Clebsch-Gordan) tensors along a fusion path.

#include <string>
#include <vector>

#include "idmps/core/blocks.hpp"
#include "idmps/core/hilbert.hpp"

namespace idmps::refstates {

using hilbert::CMatrix;
using hilbert::CVector;
using hilbert::StateVector;
using cplx = std::complex<double>;

// mats[digit] is D_left x D_right; digits follow the hilbert label order.
struct MPSTensor {
  int d = 0;
  int d_left = 0;
  int d_right = 0;
  std::vector<CMatrix> mats;

  void validate() const;
};

// Lowest-weight CVO tensor V(left, phys, right) with spins given doubled.
// Entry mats[m](a, b) couples left state a and right state b (highest weight
// first). Supported triples:
//   (j, j', 0) with j = j'        identity type  delta(a, m)
//   (0, j', j) with j = j'        singlet type   (-1)^{m - j} delta(b, -m)
//   (1/2, 1, 1/2) for su2_2       V^{+1} = -E_12, V^0 = diag(1,-1)/sqrt2, V^{-1} = E_21
// su2_1 fuses spin 1/2 only; su2_2 fuses spin 1 only. Others throw InputError.
MPSTensor cvo_tensor(blocks::Model model, int twice_left, int twice_phys, int twice_right);

// amplitude(s_1..s_N) = tr(A_1^{s_1} ... A_N^{s_N}), tensors reused cyclically.
// Returns the normalized state; throws ConsistencyError if it vanishes.
StateVector mps_trace_state(const std::vector<MPSTensor>& tensors, int n);

// State of the fusion path i_1..i_N (doubled spins; i_0 = i_N): site m
// carries V_m = cvo(i_m, phys, i_{m-1}), amplitude tr(V_N ... V_1). The
// physical leg is the spin-m (standard) basis.
StateVector fusion_path_state(blocks::Model model, const std::vector<int>& twice_path);

// Two-site vectors indexed by pair rank digit(a) * d + digit(b).
CVector singlet_pair();          // (|+-> - |-+>) / sqrt2
CVector spin1_dimer_pair();      // (|11> + |00> + |-1-1>) / sqrt3
CVector spin1_singlet_pair();    // (|1,-1> - |00> + |-1,1>) / sqrt3

// pair_state on bonds (1+offset, 2+offset), (3+offset, 4+offset), ...;
// for offset 1 the last bond is (N, 1) in that order.
StateVector dimer_state(int n, int offset, const CVector& pair_state);

// Normalized D_0 + sign D_1 of singlet dimers.
StateVector mg_combination(int n, int sign);
// Pauli-matrix MPS; circular is the flavor basis, standard applies u per site.
enum class Basis { standard, circular };
StateVector aklt_state(int n, Basis basis);
// Normalized D_0 + sign D_1 of (|11> + |00> + |-1-1>) / sqrt3 dimers.
StateVector spin1_dimer_combinations(int n, int sign);

// Haldane-Shastry ground state and its k = 1/2 partner (cylinder blocks).
StateVector hs_state(int n);
StateVector hs_excited_state(int n);

// Named reference states: mg+, mg-, aklt, aklt-circ, dimer0, dimer1,
// s1dimer+, s1dimer-, hs, hs-exc.
StateVector named_reference(const std::string& which, int n);

// Least-squares expansion of v in span{basis} (basis vectors normalized first).
struct SpanFit {
  std::vector<cplx> coefficients;  // scaled to unit Euclidean norm
  double residual = 0.0;           // ||v - P v|| / ||v||
};
SpanFit fit_in_span(const StateVector& v, const std::vector<StateVector>& basis);

// Thin-torus partner of a block state, chosen by the larger fidelity.
struct Pairing {
  std::string target;      // e.g. "mg+", "s1dimer-", "aklt-circ"
  double fidelity = 0.0;   // with the chosen target
  double other_fidelity = 0.0;
  std::string other;       // the competing candidate ("" if none)
};
Pairing resolve_pairing(const blocks::BlockSpec& spec, const StateVector& v);

}  // namespace idmps::refstates
