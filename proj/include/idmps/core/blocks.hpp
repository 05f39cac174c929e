#pragma once

// Torus conformal-block amplitudes and the chain states built from them.
//
// SU(2)_1: psi_k(s) = delta_s eta_s prod_{i<j} E(z_i - z_j)^{delta(s_i, s_j)}
//                     theta[k;0](sum_j s_j z_j | 2 tau),   z_j = j / N
// SU(2)_2: psi_nu(s) = Pf C,  C_ij = wp_nu(z_i - z_j) delta(s_i, s_j)
//
// SU(2)_2 labels +1, 0, -1 are the Majorana flavors x, y, z. The usual spin
// basis is reached with hilbert::circular_u() on every site.

#include <complex>
#include <optional>
#include <string>

#include "idmps/core/hilbert.hpp"
#include "idmps/core/special_fn.hpp"

namespace idmps::blocks {

using cplx = std::complex<double>;
using hilbert::Config;
using hilbert::StateVector;

enum class Model { su2_1, su2_2 };

enum class MarshallMode {
  standard,
  omitted,  // mutation used to check that the singlet test can fail
};

struct BlockSpec {
  Model model = Model::su2_1;
  // su2_1: 0 for k = 0, 1 for k = 1/2.  su2_2: nu in {2, 3, 4}.
  int label = 0;
  int n = 2;
  MarshallMode marshall = MarshallMode::standard;

  // Throws InputError for odd N, a label foreign to the model, or N beyond
  // dense storage (16 sites for d = 2, 10 for d = 3).
  void validate() const;
  [[nodiscard]] int local_dim() const { return model == Model::su2_1 ? 2 : 3; }
  [[nodiscard]] std::string model_name() const;
  [[nodiscard]] std::string label_name() const;  // "0", "half", "2", "3", "4"
};

// Parses "su2_1"/"su2_2" and "0"/"half"/"2"/"3"/"4".
BlockSpec make_spec(const std::string& model, const std::string& label, int n);

inline constexpr int kMaxBlockSitesD2 = 16;
inline constexpr int kMaxBlockSitesD3 = 10;

// prod_{i=1}^{N/2} s_{2i-1}
int marshall_sign(const Config& s);

// T psi = lambda psi: e^{i pi N/2} (k=0), e^{i pi (N/2+1)} (k=1/2), -1 (nu=2), +1 (nu=3,4).
cplx expected_momentum(const BlockSpec& spec);

// Amplitude engine with per-distance caches. A missing modular parameter
// selects the cylinder limit: E -> sin(pi z)/pi, theta_3 -> 1, theta_2 ->
// cos(pi x) up to a constant, wp_2 -> pi/tan(pi z), wp_3,4 -> pi/sin(pi z).
class BlockEvaluator {
 public:
  BlockEvaluator(const BlockSpec& spec, std::optional<special::ModularParam> geom);

  [[nodiscard]] const BlockSpec& spec() const { return spec_; }
  [[nodiscard]] bool cylinder() const { return !geom_.has_value(); }
  // Scaled amplitude; zero for configurations the selection rules kill.
  [[nodiscard]] special::ScaledComplex amplitude_scaled(const Config& s) const;
  [[nodiscard]] cplx amplitude(const Config& s) const { return amplitude_scaled(s).value(); }

 private:
  special::ScaledComplex su2_1(const Config& s) const;
  special::ScaledComplex su2_2(const Config& s) const;

  BlockSpec spec_;
  std::optional<special::ModularParam> geom_;
  // su2_1: E(m/N), m = 1..N-1; theta[k;0](p/N | 2tau) for p = -P..P.
  std::vector<special::ScaledComplex> prime_;
  std::vector<special::ScaledComplex> theta_;
  int theta_offset_ = 0;
  // su2_2: wp(m/N) / wp_scale, m = 1..N-1, and log wp_scale.
  std::vector<cplx> kernel_;
  double kernel_log_scale_ = 0.0;
};

cplx amplitude_su2_1(const BlockSpec& spec, const special::ModularParam& geom, const Config& s);
cplx amplitude_su2_2(const BlockSpec& spec, const special::ModularParam& geom, const Config& s);

struct BlockState {
  StateVector state;            // normalized; flavor basis for su2_2
  double global_log_scale = 0;  // log of the norm removed by normalization
  cplx momentum{0.0, 0.0};      // measured <psi|T|psi>
  double total_spin = 0.0;      // after the u rotation for su2_2
};

BlockState build_state(const BlockSpec& spec, const special::ModularParam& geom);
BlockState build_cylinder_state(const BlockSpec& spec);
// Shared assembly; geom empty means cylinder.
BlockState build_block_state(const BlockSpec& spec, const std::optional<special::ModularParam>& geom);

// The su2_2 state rotated into the standard spin basis; su2_1 states pass through.
StateVector standard_basis(const BlockSpec& spec, const StateVector& v);

}  // namespace idmps::blocks
