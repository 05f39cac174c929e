#include "idmps/core/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include "idmps/core/errors.hpp"
#include "idmps/core/numerics.hpp"
#include "idmps/core/special_fn.hpp"

namespace idmps::experiments {

using hilbert::StateVector;

namespace {

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string case_name(const blocks::BlockSpec& s, double r) {
  return s.model_name() + "/" + s.label_name() + " N=" + std::to_string(s.n) + " R=" + num(r);
}

json spec_json(const blocks::BlockSpec& s) {
  return {{"model", s.model_name()}, {"label", s.label_name()}, {"N", s.n}};
}

json ham_json(const hamiltonians::HamiltonianSpec& h) {
  json j = {{"kind", h.kind_name()}, {"N", h.n}};
  if (h.kind == hamiltonians::Kind::J1J2) {
    j["J1"] = h.j1;
    j["J2"] = h.j2;
  }
  if (h.kind == hamiltonians::Kind::QBQ) j["theta"] = h.theta;
  return j;
}

json row_json(const ScanRow& r) {
  return {{"R", r.r}, {"energy", r.energy}, {"fidelity", r.fidelity}, {"fidelity_per_site", r.fidelity_per_site}};
}

}  // namespace

std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi)) throw InputError("log grid needs 0 < lo < hi");
  if (points < 2) throw InputError("log grid needs at least two points");
  std::vector<double> g(static_cast<std::size_t>(points));
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (points - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::string status_name(ScanStatus s) {
  switch (s) {
    case ScanStatus::interior: return "interior";
    case ScanStatus::lower_edge: return "lower_edge";
    case ScanStatus::unbounded: return "unbounded";
  }
  return "?";
}

ScanResult scan_radius(const blocks::BlockSpec& spec, const hamiltonians::HamiltonianSpec& ham,
                       const ScanOptions& opts) {
  spec.validate();
  ham.validate();
  if (spec.local_dim() != ham.local_dim()) {
    throw InputError(spec.model_name() + " states live on d = " + std::to_string(spec.local_dim()) + " chains but " +
                     ham.kind_name() + " acts on d = " + std::to_string(ham.local_dim()));
  }
  if (spec.n != ham.n) throw InputError("block state and Hamiltonian disagree on N");

  std::vector<double> grid = opts.grid.empty() ? log_grid(kDefaultRMin, kDefaultRMax, kDefaultGridPoints) : opts.grid;
  for (double r : grid) {
    if (!(r > 0.0) || !std::isfinite(r)) throw InputError("radius grid values must be positive and finite");
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.size() < 2) throw InputError("radius grid needs at least two distinct values");

  ScanResult out;
  out.spec = spec;
  out.ham = ham;
  const auto h = hamiltonians::build(ham);
  const auto ground = hamiltonians::ground_multiplet(ham);
  out.ground_energy = ground.front().energy;
  out.ground_degeneracy = static_cast<int>(ground.size());
  std::vector<StateVector> basis;
  for (const auto& g : ground) basis.push_back(g.state);

  auto evaluate = [&](double r) {
    const StateVector v = blocks::standard_basis(spec, blocks::build_state(spec, special::ModularParam(r)).state);
    ScanRow row;
    row.r = r;
    row.energy = hamiltonians::energy(h, v);
    row.fidelity = hilbert::subspace_fidelity(v, basis);
    row.fidelity_per_site = std::pow(row.fidelity, 1.0 / spec.n);
    ++out.evaluations;
    if (row.energy < out.ground_energy - 1e-9) {
      throw ConsistencyError("variational bound violated at " + case_name(spec, r) + ": " + num(row.energy) + " < " +
                             num(out.ground_energy));
    }
    return row;
  };
  auto objective = [&](const ScanRow& row) {
    return opts.objective == Objective::energy ? row.energy : -row.fidelity;
  };

  for (double r : grid) out.rows.push_back(evaluate(r));

  double best = std::numeric_limits<double>::infinity();
  for (const auto& row : out.rows) best = std::min(best, objective(row));
  const double tie = 1e-12 * std::max(1.0, std::abs(best));
  std::vector<std::size_t> ties;
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    if (objective(out.rows[i]) <= best + tie) ties.push_back(i);
  }
  if (ties.front() == 0) {
    out.status = ScanStatus::lower_edge;
    out.optimum = out.rows.front();
  } else if (ties.back() == out.rows.size() - 1) {
    out.status = ScanStatus::unbounded;
    out.optimum = out.rows.back();
  } else {
    out.status = ScanStatus::interior;
    const std::size_t i = ties.front();
    out.optimum = out.rows[i];
    ScanRow refined = out.optimum;
    const auto m = numerics::minimize_scalar(
        [&](double log_r) {
          ScanRow row = evaluate(std::exp(log_r));
          if (objective(row) < objective(refined)) refined = row;
          return objective(row);
        },
        std::log(grid[i - 1]), std::log(grid[i + 1]), opts.refine_tol);
    (void)m;
    if (objective(refined) < objective(out.optimum)) out.optimum = refined;
  }
  return out;
}

std::string scan_csv(const ScanResult& r) {
  std::ostringstream os;
  os << "R,energy,fidelity,fidelity_per_site\n";
  for (const auto& row : r.rows) {
    os << num(row.r) << ',' << num(row.energy) << ',' << num(row.fidelity) << ',' << num(row.fidelity_per_site) << '\n';
  }
  return os.str();
}

json scan_json(const ScanResult& r) {
  json rows = json::array();
  for (const auto& row : r.rows) rows.push_back(row_json(row));
  return {{"spec", spec_json(r.spec)},
          {"hamiltonian", ham_json(r.ham)},
          {"status", status_name(r.status)},
          {"optimum", row_json(r.optimum)},
          {"ground_energy", r.ground_energy},
          {"ground_degeneracy", r.ground_degeneracy},
          {"evaluations", r.evaluations},
          {"fidelity_per_site_convention", kFidelityPerSiteConvention},
          {"rows", std::move(rows)}};
}

SweepParam parse_sweep_param(const std::string& name) {
  if (name == "J2" || name == "j2") return SweepParam::j2;
  if (name == "theta") return SweepParam::theta;
  throw InputError("unknown sweep parameter '" + name + "' (expected J2 or theta)");
}

std::string sweep_param_name(SweepParam p) { return p == SweepParam::j2 ? "J2" : "theta"; }

std::vector<SweepPoint> sweep_phase_diagram(const blocks::BlockSpec& spec, const hamiltonians::HamiltonianSpec& base,
                                            SweepParam param, const std::vector<double>& values,
                                            const ScanOptions& opts) {
  if (values.empty()) throw InputError("parameter grid is empty");
  if (param == SweepParam::j2 && base.kind != hamiltonians::Kind::J1J2) throw InputError("J2 sweeps need j1j2");
  if (param == SweepParam::theta && base.kind != hamiltonians::Kind::QBQ) throw InputError("theta sweeps need qbq");
  std::vector<SweepPoint> out;
  for (double v : values) {
    SweepPoint p;
    p.param = v;
    hamiltonians::HamiltonianSpec h = base;
    (param == SweepParam::j2 ? h.j2 : h.theta) = v;
    try {
      p.result = scan_radius(spec, h, opts);
    } catch (const Error& e) {
      p.error = e.what();
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
  std::ostringstream os;
  os << "param,R_opt,energy_opt,ground_energy,fidelity_per_site,status\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& p : points) {
    if (p.result) {
      const auto& r = *p.result;
      os << num(p.param) << ',' << num(r.optimum.r) << ',' << num(r.optimum.energy) << ',' << num(r.ground_energy)
         << ',' << num(r.optimum.fidelity_per_site) << ',' << status_name(r.status) << '\n';
    } else {
      os << num(p.param) << ',' << num(nan) << ',' << num(nan) << ',' << num(nan) << ',' << num(nan) << ",error\n";
    }
  }
  return os.str();
}

LimitTable limit_convergence(const blocks::BlockSpec& spec, const std::vector<StateVector>& targets,
                             const std::vector<double>& radii) {
  spec.validate();
  if (targets.empty()) throw InputError("limit convergence needs at least one target state");
  if (radii.empty()) throw InputError("limit convergence needs at least one radius");
  // Orthonormal basis of the target span.
  hilbert::CMatrix m(static_cast<Eigen::Index>(targets.front().size()), static_cast<Eigen::Index>(targets.size()));
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i].sites() != spec.n || targets[i].local_dim() != spec.local_dim()) {
      throw InputError("target state does not match the block chain");
    }
    m.col(static_cast<Eigen::Index>(i)) = targets[i].amplitudes();
  }
  Eigen::HouseholderQR<hilbert::CMatrix> qr(m);
  const hilbert::CMatrix q = qr.householderQ() * hilbert::CMatrix::Identity(m.rows(), m.cols());
  std::vector<StateVector> basis;
  for (Eigen::Index i = 0; i < q.cols(); ++i) basis.emplace_back(spec.n, spec.local_dim(), q.col(i));

  LimitTable t;
  for (double r : radii) {
    const StateVector v = blocks::build_state(spec, special::ModularParam(r)).state;
    t.rows.push_back({r, 1.0 - hilbert::subspace_fidelity(v, basis)});
  }
  // Strict decrease, or already at the rounding floor.
  constexpr double kFloor = 1e-14;
  if (t.rows.size() >= 3) {
    t.monotone_tail = true;
    for (std::size_t i = t.rows.size() - 2; i < t.rows.size(); ++i) {
      const double prev = t.rows[i - 1].infidelity;
      const double cur = t.rows[i].infidelity;
      if (!(cur < prev || cur <= kFloor)) t.monotone_tail = false;
    }
  }
  return t;
}

std::string limit_csv(const LimitTable& t) {
  std::ostringstream os;
  os << "R,infidelity\n";
  for (const auto& row : t.rows) os << num(row.r) << ',' << num(row.infidelity) << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------

bool SuiteReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const SuiteCheck& c) { return c.pass; });
}

json SuiteReport::to_json() const {
  json arr = json::array();
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name},
                   {"max_residual", c.max_residual},
                   {"tolerance", c.tolerance},
                   {"cases", c.cases},
                   {"skipped", c.skipped},
                   {"pass", c.pass},
                   {"worst_case", c.worst_case}});
  }
  return {{"pass", pass()}, {"checks", std::move(arr)}};
}

namespace {

struct Tracker {
  SuiteCheck c;
  bool failed = false;

  Tracker(std::string name, double tol) {
    c.name = std::move(name);
    c.tolerance = tol;
  }
  void record(double residual, const std::string& where) {
    ++c.cases;
    if (std::isnan(residual)) residual = std::numeric_limits<double>::infinity();
    if (c.worst_case.empty() || residual > c.max_residual) {
      c.max_residual = residual;
      c.worst_case = where;
    }
  }
  void error(const std::string& where, const std::string& what) {
    ++c.cases;
    failed = true;
    c.max_residual = std::numeric_limits<double>::infinity();
    c.worst_case = where + ": " + what;
  }
  SuiteCheck finish() {
    c.pass = !failed && c.cases > 0 && c.max_residual <= c.tolerance;
    if (c.cases == 0 && c.skipped > 0) c.pass = true;
    return c;
  }
};

hilbert::CMatrix random_antisymmetric(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  hilbert::CMatrix a = hilbert::CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      a(i, j) = {g(rng), g(rng)};
      a(j, i) = -a(i, j);
    }
  }
  return a;
}

}  // namespace

SuiteReport identity_suite(const SuiteOptions& opts) {
  SuiteReport report;
  std::mt19937_64 rng(opts.seed);

  {
    Tracker t("modular_identities", 1e-10);
    std::uniform_real_distribution<double> ulog(std::log(opts.modular_r_min), std::log(opts.modular_r_max));
    std::uniform_real_distribution<double> ux(-0.5, 0.5);
    for (int s = 0; s < opts.modular_samples; ++s) {
      const double r = std::exp(ulog(rng));
      const double x = ux(rng);
      const std::string where = "R=" + num(r) + " z=" + num(x);
      try {
        t.record(special::modular_residual({0.0, r}, {x, 0.0}), where);
      } catch (const Error& e) {
        t.error(where, e.what());
      }
    }
    report.checks.push_back(t.finish());
  }

  Tracker sz("sz_neutral", 1e-8);
  Tracker mom("momentum", 1e-8);
  Tracker sgl("singlet", 1e-8);
  std::vector<blocks::BlockSpec> specs;
  for (int n : opts.sites) {
    for (int label : {0, 1}) {
      blocks::BlockSpec s;
      s.model = blocks::Model::su2_1;
      s.label = label;
      s.n = n;
      if (opts.omit_marshall_sign) s.marshall = blocks::MarshallMode::omitted;
      specs.push_back(s);
    }
    for (int nu : {2, 3, 4}) {
      blocks::BlockSpec s;
      s.model = blocks::Model::su2_2;
      s.label = nu;
      s.n = n;
      specs.push_back(s);
    }
  }
  for (const auto& s : specs) {
    for (double r : opts.radii) {
      const std::string where = case_name(s, r);
      try {
        s.validate();
      } catch (const InputError&) {
        ++sz.c.skipped;  // beyond dense storage for this model
        ++mom.c.skipped;
        ++sgl.c.skipped;
        continue;
      }
      try {
        const auto b = blocks::build_state(s, special::ModularParam(r));
        const StateVector std_v = blocks::standard_basis(s, b.state);
        sz.record(hilbert::sz_residual(std_v), where);
        mom.record(hilbert::translation_residual(b.state, blocks::expected_momentum(s)), where);
        sgl.record(hilbert::singlet_residual(std_v), where);
      } catch (const ConsistencyError&) {
        ++sz.c.skipped;  // the block vanishes identically (psi_2 at N = 2)
        ++mom.c.skipped;
        ++sgl.c.skipped;
      } catch (const Error& e) {
        sz.error(where, e.what());
        mom.error(where, e.what());
        sgl.error(where, e.what());
      }
    }
  }
  report.checks.push_back(sz.finish());
  report.checks.push_back(mom.finish());
  report.checks.push_back(sgl.finish());

  {
    Tracker expansion("pfaffian_vs_expansion", 1e-10);
    Tracker det("pfaffian_squared_vs_det", 1e-10);
    for (int n = 1; n <= 12; ++n) {
      for (int trial = 0; trial < 3; ++trial) {
        const hilbert::CMatrix a = random_antisymmetric(n, rng);
        const std::string where = "n=" + std::to_string(n);
        try {
          const auto pf = numerics::pfaffian(a);
          if (n <= 8) {
            expansion.record(std::abs(pf - numerics::pfaffian_expansion(a)) / std::max(1.0, std::abs(pf)), where);
          }
          if (n % 2 == 1) {
            det.record(std::abs(pf), where);  // Pf of odd order is exactly zero
          } else {
            const auto d = a.determinant();
            det.record(std::abs(pf * pf - d) / std::abs(d), where);
          }
        } catch (const Error& e) {
          det.error(where, e.what());
        }
      }
    }
    report.checks.push_back(expansion.finish());
    report.checks.push_back(det.finish());
  }

  {
    Tracker annihilation("parent_annihilation", 1e-8);
    Tracker psd("parent_positive_semidefinite", 1e-9);
    for (int n : opts.sites) {
      const std::string where = "N=" + std::to_string(n);
      if (n < 2 || n % 2 != 0 || n > 12) {
        ++annihilation.c.skipped;
        ++psd.c.skipped;
        continue;
      }
      try {
        const auto p = hamiltonians::parent_annihilation_check(n);
        annihilation.record(p.residual, where);
        psd.record(std::max(0.0, -p.min_eigenvalue), where);
      } catch (const Error& e) {
        annihilation.error(where, e.what());
        psd.error(where, e.what());
      }
    }
    report.checks.push_back(annihilation.finish());
    report.checks.push_back(psd.finish());
  }
  return report;
}

}  // namespace idmps::experiments
