#include "idmps/idmps.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <new>
#include <optional>
#include <string>

#include "idmps/core/blocks.hpp"
#include "idmps/core/errors.hpp"
#include "idmps/core/experiments.hpp"
#include "idmps/core/hamiltonians.hpp"
#include "idmps/core/parallel.hpp"
#include "idmps/core/refstates.hpp"
#include "idmps/core/serialize.hpp"
#include "idmps/core/special_fn.hpp"

#ifndef IDMPS_VERSION_STRING
#define IDMPS_VERSION_STRING "0.0.0"
#endif

using namespace idmps;

struct idmps_state {
  hilbert::StateVector v;
  std::optional<blocks::BlockSpec> spec;
  blocks::BlockState info;
};

struct idmps_hamiltonian {
  hamiltonians::HamiltonianSpec spec;
  numerics::LinearOperator op;
};

struct idmps_eigen {
  std::vector<hamiltonians::Eigenstate> states;
};

struct idmps_scan {
  experiments::ScanResult result;
};

namespace {

thread_local std::string g_last_error;

idmps_status fail(idmps_status s, const char* what) {
  g_last_error = what;
  return s;
}

template <typename F>
idmps_status guard(F&& f) {
  try {
    g_last_error.clear();
    f();
    return IDMPS_OK;
  } catch (const InputError& e) {
    return fail(IDMPS_ERR_INPUT, e.what());
  } catch (const DomainError& e) {
    return fail(IDMPS_ERR_DOMAIN, e.what());
  } catch (const NumericalError& e) {
    return fail(IDMPS_ERR_NUMERICAL, e.what());
  } catch (const ConsistencyError& e) {
    return fail(IDMPS_ERR_CONSISTENCY, e.what());
  } catch (const IoError& e) {
    return fail(IDMPS_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(IDMPS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(IDMPS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(IDMPS_ERR_INTERNAL, "unknown error");
  }
}

void need(const void* p, const char* name) {
  if (p == nullptr) throw InputError(std::string(name) + " must not be NULL");
}

std::string str(const char* s, const char* name) {
  need(s, name);
  return s;
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

experiments::ScanOptions scan_options(const idmps_scan_options* o) {
  experiments::ScanOptions out;
  if (o == nullptr) return out;
  if (o->grid != nullptr) out.grid.assign(o->grid, o->grid + o->grid_len);
  if (o->objective != IDMPS_OBJECTIVE_ENERGY && o->objective != IDMPS_OBJECTIVE_FIDELITY) {
    throw InputError("unknown scan objective");
  }
  out.objective = o->objective == IDMPS_OBJECTIVE_FIDELITY ? experiments::Objective::fidelity
                                                           : experiments::Objective::energy;
  if (o->refine_tol > 0.0) out.refine_tol = o->refine_tol;
  return out;
}

}  // namespace

extern "C" {

const char* idmps_version(void) { return IDMPS_VERSION_STRING; }

const char* idmps_status_name(idmps_status s) {
  switch (s) {
    case IDMPS_OK: return "ok";
    case IDMPS_ERR_INPUT: return "input error";
    case IDMPS_ERR_DOMAIN: return "domain error";
    case IDMPS_ERR_NUMERICAL: return "numerical error";
    case IDMPS_ERR_CONSISTENCY: return "consistency error";
    case IDMPS_ERR_IO: return "io error";
    case IDMPS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* idmps_last_error(void) { return g_last_error.c_str(); }

void idmps_string_free(char* s) { std::free(s); }

idmps_status idmps_set_threads(int n) {
  return guard([&] {
    if (n < 0) throw InputError("thread count must be >= 0");
    set_thread_count(n);
  });
}

int idmps_get_threads(void) { return thread_count(); }

// ---- special functions ------------------------------------------------------

idmps_status idmps_special_eval(const char* fn, double z_re, double z_im, double radius, double* re, double* im,
                                double* log_scale) {
  return guard([&] {
    const std::string f = str(fn, "fn");
    need(re, "re");
    need(im, "im");
    const special::ModularParam geom(radius);
    const special::cplx z(z_re, z_im);
    special::ScaledComplex v;
    if (f.size() == 6 && f.compare(0, 5, "theta") == 0 && f[5] >= '1' && f[5] <= '4') {
      v = special::theta_nu_scaled(f[5] - '0', z, geom.tau());
    } else if (f == "prime") {
      v = special::prime_form_scaled(z, geom.tau());
    } else if (f == "wp2" || f == "wp3" || f == "wp4") {
      v = special::weierstrass_nu_scaled(f[2] - '0', z, geom.tau());
    } else {
      throw InputError("unknown function '" + f + "' (expected theta1..theta4, prime, wp2, wp3, wp4)");
    }
    special::cplx out = log_scale ? v.mantissa : v.value();
    if (log_scale) *log_scale = v.is_zero() ? 0.0 : v.log_scale;
    *re = out.real();
    *im = out.imag();
  });
}

idmps_status idmps_modular_residual(double radius, double z_re, double z_im, double* residual) {
  return guard([&] {
    need(residual, "residual");
    const special::ModularParam geom(radius);
    *residual = special::modular_residual(geom.tau(), {z_re, z_im});
  });
}

// ---- states -------------------------------------------------------------------

idmps_status idmps_state_build(const char* model, const char* label, int n, double radius, int cylinder,
                               idmps_state** out) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    const blocks::BlockSpec spec = blocks::make_spec(str(model, "model"), str(label, "label"), n);
    blocks::BlockState b = cylinder ? blocks::build_cylinder_state(spec)
                                    : blocks::build_state(spec, special::ModularParam(radius));
    auto* s = new idmps_state{b.state, spec, b};
    *out = s;
  });
}

idmps_status idmps_state_block_info(const idmps_state* s, double* momentum_re, double* momentum_im,
                                    double* total_spin, double* global_log_scale) {
  return guard([&] {
    need(s, "state");
    if (!s->spec) throw InputError("state was not built from a conformal block");
    if (momentum_re) *momentum_re = s->info.momentum.real();
    if (momentum_im) *momentum_im = s->info.momentum.imag();
    if (total_spin) *total_spin = s->info.total_spin;
    if (global_log_scale) *global_log_scale = s->info.global_log_scale;
  });
}

idmps_status idmps_state_reference(const char* which, int n, idmps_state** out) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    *out = new idmps_state{refstates::named_reference(str(which, "which"), n), std::nullopt, {}};
  });
}

idmps_status idmps_state_standard_basis(const idmps_state* s, idmps_state** out) {
  return guard([&] {
    need(s, "state");
    need(out, "out");
    *out = nullptr;
    hilbert::StateVector v = s->v.local_dim() == 3 ? hilbert::apply_all_sites(s->v, hilbert::circular_u()) : s->v;
    *out = new idmps_state{std::move(v), std::nullopt, {}};
  });
}

idmps_status idmps_state_pairing(const idmps_state* s, char** target, double* fidelity) {
  return guard([&] {
    need(s, "state");
    need(target, "target");
    if (!s->spec) throw InputError("state was not built from a conformal block");
    const auto p = refstates::resolve_pairing(*s->spec, s->v);
    *target = dup(p.target);
    if (fidelity) *fidelity = p.fidelity;
  });
}

int idmps_state_sites(const idmps_state* s) { return s ? s->v.sites() : 0; }
int idmps_state_local_dim(const idmps_state* s) { return s ? s->v.local_dim() : 0; }
uint64_t idmps_state_size(const idmps_state* s) { return s ? s->v.size() : 0; }

idmps_status idmps_state_amplitudes(const idmps_state* s, double* interleaved, uint64_t count) {
  return guard([&] {
    need(s, "state");
    need(interleaved, "interleaved");
    const uint64_t m = std::min<uint64_t>(count, s->v.size());
    for (uint64_t i = 0; i < m; ++i) {
      interleaved[2 * i] = s->v[i].real();
      interleaved[2 * i + 1] = s->v[i].imag();
    }
  });
}

idmps_status idmps_state_from_amplitudes(int n, int d, const double* interleaved, uint64_t count, idmps_state** out) {
  return guard([&] {
    need(out, "out");
    need(interleaved, "interleaved");
    *out = nullptr;
    hilbert::check_chain(n, d);
    if (count != hilbert::full_dim(n, d)) throw InputError("amplitude count must equal d^N");
    hilbert::CVector a(static_cast<Eigen::Index>(count));
    for (uint64_t i = 0; i < count; ++i) a[static_cast<Eigen::Index>(i)] = {interleaved[2 * i], interleaved[2 * i + 1]};
    *out = new idmps_state{hilbert::StateVector(n, d, std::move(a)), std::nullopt, {}};
  });
}

idmps_status idmps_state_fidelity(const idmps_state* a, const idmps_state* b, double* out) {
  return guard([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = hilbert::fidelity(a->v, b->v);
  });
}

idmps_status idmps_state_save_json(const idmps_state* s, const char* path, const char* metadata_json) {
  return guard([&] {
    need(s, "state");
    io::json meta = nullptr;
    if (metadata_json) {
      try {
        meta = io::json::parse(metadata_json);
      } catch (const io::json::exception& e) {
        throw InputError(std::string("metadata is not valid JSON: ") + e.what());
      }
    }
    io::write_state_json(str(path, "path"), s->v, meta);
  });
}

idmps_status idmps_state_save_binary(const idmps_state* s, const char* path) {
  return guard([&] {
    need(s, "state");
    io::write_state_binary(str(path, "path"), s->v);
  });
}

idmps_status idmps_state_load(const char* path, idmps_state** out) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    const std::string p = str(path, "path");
    char magic[sizeof(io::kBinaryMagic)] = {};
    {
      std::ifstream is(p, std::ios::binary);
      if (!is) throw IoError("cannot open " + p);
      is.read(magic, sizeof(magic));
    }
    const bool binary = std::memcmp(magic, io::kBinaryMagic, sizeof(magic)) == 0;
    *out = new idmps_state{binary ? io::read_state_binary(p) : io::read_state_json(p), std::nullopt, {}};
  });
}

void idmps_state_free(idmps_state* s) { delete s; }

// ---- Hamiltonians ---------------------------------------------------------------

idmps_status idmps_hamiltonian_create(const char* kind, int n, double j1, double j2, double theta,
                                      idmps_hamiltonian** out) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    hamiltonians::HamiltonianSpec spec;
    spec.kind = hamiltonians::parse_kind(str(kind, "kind"));
    spec.n = n;
    spec.j1 = j1;
    spec.j2 = j2;
    spec.theta = theta;
    spec.validate();
    *out = new idmps_hamiltonian{spec, hamiltonians::build(spec)};
  });
}

void idmps_hamiltonian_free(idmps_hamiltonian* h) { delete h; }

idmps_status idmps_hamiltonian_energy(const idmps_hamiltonian* h, const idmps_state* s, double* out) {
  return guard([&] {
    need(h, "hamiltonian");
    need(s, "state");
    need(out, "out");
    *out = hamiltonians::energy(h->op, s->v);
  });
}

idmps_status idmps_hamiltonian_residual(const idmps_hamiltonian* h, const idmps_state* s, double e, double* out) {
  return guard([&] {
    need(h, "hamiltonian");
    need(s, "state");
    need(out, "out");
    *out = hamiltonians::eigenstate_residual(h->op, s->v, e);
  });
}

idmps_status idmps_hamiltonian_ground(const idmps_hamiltonian* h, int k, idmps_eigen** out) {
  return guard([&] {
    need(h, "hamiltonian");
    need(out, "out");
    *out = nullptr;
    auto states = k <= 0 ? hamiltonians::ground_multiplet(h->spec) : hamiltonians::ground_subspace(h->spec, k);
    *out = new idmps_eigen{std::move(states)};
  });
}

size_t idmps_eigen_count(const idmps_eigen* e) { return e ? e->states.size() : 0; }

idmps_status idmps_eigen_value(const idmps_eigen* e, size_t i, double* energy, int* twice_sz, double* residual) {
  return guard([&] {
    need(e, "eigen");
    if (i >= e->states.size()) throw InputError("eigenpair index out of range");
    const auto& s = e->states[i];
    if (energy) *energy = s.energy;
    if (twice_sz) *twice_sz = s.twice_sz;
    if (residual) *residual = s.residual;
  });
}

idmps_status idmps_eigen_state(const idmps_eigen* e, size_t i, idmps_state** out) {
  return guard([&] {
    need(e, "eigen");
    need(out, "out");
    *out = nullptr;
    if (i >= e->states.size()) throw InputError("eigenpair index out of range");
    *out = new idmps_state{e->states[i].state, std::nullopt, {}};
  });
}

void idmps_eigen_free(idmps_eigen* e) { delete e; }

idmps_status idmps_parent_check(int n, double* residual, double* min_eigenvalue) {
  return guard([&] {
    const auto p = hamiltonians::parent_annihilation_check(n);
    if (residual) *residual = p.residual;
    if (min_eigenvalue) *min_eigenvalue = p.min_eigenvalue;
  });
}

// ---- experiments ------------------------------------------------------------------

void idmps_scan_options_init(idmps_scan_options* o) {
  if (o == nullptr) return;
  o->grid = nullptr;
  o->grid_len = 0;
  o->objective = IDMPS_OBJECTIVE_ENERGY;
  o->refine_tol = experiments::ScanOptions{}.refine_tol;
}

idmps_status idmps_scan_radius(const char* model, const char* label, const idmps_hamiltonian* h,
                               const idmps_scan_options* opts, idmps_scan** out) {
  return guard([&] {
    need(h, "hamiltonian");
    need(out, "out");
    *out = nullptr;
    const auto spec = blocks::make_spec(str(model, "model"), str(label, "label"), h->spec.n);
    *out = new idmps_scan{experiments::scan_radius(spec, h->spec, scan_options(opts))};
  });
}

idmps_status idmps_scan_optimum(const idmps_scan* s, double* radius, double* energy, double* fidelity_per_site,
                                idmps_scan_status* status) {
  return guard([&] {
    need(s, "scan");
    const auto& r = s->result;
    if (radius) *radius = r.optimum.r;
    if (energy) *energy = r.optimum.energy;
    if (fidelity_per_site) *fidelity_per_site = r.optimum.fidelity_per_site;
    if (status) {
      *status = r.status == experiments::ScanStatus::lower_edge  ? IDMPS_SCAN_LOWER_EDGE
                : r.status == experiments::ScanStatus::unbounded ? IDMPS_SCAN_UNBOUNDED
                                                                 : IDMPS_SCAN_INTERIOR;
    }
  });
}

idmps_status idmps_scan_csv(const idmps_scan* s, char** out) {
  return guard([&] {
    need(s, "scan");
    need(out, "out");
    *out = dup(experiments::scan_csv(s->result));
  });
}

idmps_status idmps_scan_json(const idmps_scan* s, char** out) {
  return guard([&] {
    need(s, "scan");
    need(out, "out");
    *out = dup(experiments::scan_json(s->result).dump(1));
  });
}

void idmps_scan_free(idmps_scan* s) { delete s; }

idmps_status idmps_sweep(const char* model, const char* label, const idmps_hamiltonian* base, const char* param,
                         const double* values, size_t n_values, const idmps_scan_options* opts, char** csv,
                         char** json) {
  return guard([&] {
    need(base, "base");
    need(values, "values");
    const auto spec = blocks::make_spec(str(model, "model"), str(label, "label"), base->spec.n);
    const auto p = experiments::parse_sweep_param(str(param, "param"));
    const auto points = experiments::sweep_phase_diagram(spec, base->spec, p, std::vector<double>(values, values + n_values),
                                                         scan_options(opts));
    if (csv) *csv = dup(experiments::sweep_csv(points));
    if (json) {
      io::json arr = io::json::array();
      for (const auto& pt : points) {
        io::json j = {{"param", pt.param}};
        if (pt.result) {
          j["scan"] = experiments::scan_json(*pt.result);
        } else {
          j["error"] = pt.error;
        }
        arr.push_back(std::move(j));
      }
      *json = dup(io::json{{"param", experiments::sweep_param_name(p)},
                           {"fidelity_per_site_convention", experiments::kFidelityPerSiteConvention},
                           {"points", std::move(arr)}}
                      .dump(1));
    }
  });
}

idmps_status idmps_limits(const char* model, const char* label, int n, const idmps_state* const* targets,
                          size_t n_targets, const double* radii, size_t n_radii, char** csv, int* monotone_tail) {
  return guard([&] {
    need(targets, "targets");
    need(radii, "radii");
    const auto spec = blocks::make_spec(str(model, "model"), str(label, "label"), n);
    std::vector<hilbert::StateVector> t;
    for (size_t i = 0; i < n_targets; ++i) {
      need(targets[i], "target state");
      t.push_back(targets[i]->v);
    }
    const auto table = experiments::limit_convergence(spec, t, std::vector<double>(radii, radii + n_radii));
    if (csv) *csv = dup(experiments::limit_csv(table));
    if (monotone_tail) *monotone_tail = table.monotone_tail ? 1 : 0;
  });
}

void idmps_suite_options_init(idmps_suite_options* o) {
  if (o == nullptr) return;
  const experiments::SuiteOptions d;
  o->sites = nullptr;
  o->n_sites = 0;
  o->radii = nullptr;
  o->n_radii = 0;
  o->modular_samples = d.modular_samples;
  o->seed = d.seed;
  o->omit_marshall_sign = 0;
}

idmps_status idmps_check_suite(const idmps_suite_options* o, char** json, int* passed) {
  return guard([&] {
    experiments::SuiteOptions opts;
    if (o) {
      if (o->sites) opts.sites.assign(o->sites, o->sites + o->n_sites);
      if (o->radii) opts.radii.assign(o->radii, o->radii + o->n_radii);
      if (o->modular_samples < 0) throw InputError("modular_samples must be >= 0");
      opts.modular_samples = o->modular_samples;
      opts.seed = o->seed;
      opts.omit_marshall_sign = o->omit_marshall_sign != 0;
    }
    const auto report = experiments::identity_suite(opts);
    if (json) *json = dup(report.to_json().dump(1));
    if (passed) *passed = report.pass() ? 1 : 0;
  });
}

}  // extern "C"
