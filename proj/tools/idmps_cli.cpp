// idmps command-line front end. Links only the C API.
//
//   idmps special eval   --fn theta3 --z 0.1,0 --R 1
//   idmps state build    --model su2_1 --label 0 --N 8 --R 0.05 --out psi.json
//   idmps state reference --which aklt --N 6 --out aklt.json
//   idmps ed ground      --ham j1j2 --N 8 --J2 0.5 --k 4 --out ed.json
//   idmps scan radius    --model su2_1 --label 0 --N 8 --ham j1j2 --J2 0.5
//   idmps scan phase     --model su2_1 --label 0 --N 8 --ham j1j2 --param-grid J2=0.1:0.5:5
//   idmps check suite    --N 4,6
//   idmps check limits   --model su2_2 --label 4 --N 6 --target aklt-circ --R-seq 0.4,0.2,0.1,0.05
//
// Exit codes: 0 ok, 1 validation error, 2 numerical failure, 3 check failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "idmps/idmps.h"
#include "json.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitCheckFailed = 3;

// Carries a status out of the command bodies.
struct CliError {
  int code;
  std::string message;
};

int exit_code_of(idmps_status s) {
  switch (s) {
    case IDMPS_OK: return kExitOk;
    case IDMPS_ERR_INPUT:
    case IDMPS_ERR_DOMAIN:
    case IDMPS_ERR_IO: return kExitValidation;
    default: return kExitNumerical;
  }
}

void check(idmps_status s) {
  if (s != IDMPS_OK) {
    throw CliError{exit_code_of(s), std::string(idmps_status_name(s)) + ": " + idmps_last_error()};
  }
}

[[noreturn]] void invalid(const std::string& msg) { throw CliError{kExitValidation, msg}; }

// RAII for C handles and strings.
struct StateDeleter {
  void operator()(idmps_state* s) const { idmps_state_free(s); }
};
struct HamDeleter {
  void operator()(idmps_hamiltonian* h) const { idmps_hamiltonian_free(h); }
};
struct EigenDeleter {
  void operator()(idmps_eigen* e) const { idmps_eigen_free(e); }
};
struct ScanDeleter {
  void operator()(idmps_scan* s) const { idmps_scan_free(s); }
};
using State = std::unique_ptr<idmps_state, StateDeleter>;
using Ham = std::unique_ptr<idmps_hamiltonian, HamDeleter>;
using Eigen = std::unique_ptr<idmps_eigen, EigenDeleter>;
using Scan = std::unique_ptr<idmps_scan, ScanDeleter>;

std::string take(char* s) {
  std::string out = s ? s : "";
  idmps_string_free(s);
  return out;
}

std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      invalid(what + ": cannot parse '" + item + "' as a number");
    }
  }
  if (out.empty()) invalid(what + " is empty");
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt17(v[i]);
  return s;
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw CliError{kExitValidation, "cannot write " + path.string()};
  os << text;
}

// Shared run context: resolved config, outputs and the manifest.
struct Run {
  std::string command;
  json config = json::object();
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void output(const fs::path& p) { outputs.push_back(p.string()); }

  // Written next to the primary output as <name>.manifest.json.
  void manifest(const fs::path& primary) const {
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json m = {{"artifact", "idmps"},
              {"version", idmps_version()},
              {"command", command},
              {"config", config},
              {"outputs", outputs},
              {"wall_time_s", wall}};
    write_file(fs::path(primary.string() + ".manifest.json"), m.dump(1) + "\n");
  }
};

// ---- shared option groups ------------------------------------------------------

struct BlockOpts {
  std::string model = "su2_1";
  std::string label = "0";
  int n = 0;

  void add(CLI::App* c) {
    c->add_option("--model", model, "su2_1 or su2_2")->required();
    c->add_option("--label", label, "0, half (su2_1); 2, 3, 4 (su2_2)")->required();
    c->add_option("--N", n, "number of sites (even)")->required();
  }
  void record(json& j) const {
    j["model"] = model;
    j["label"] = label;
    j["N"] = n;
  }
};

struct HamOpts {
  std::string ham;
  double j1 = 1.0;
  double j2 = 0.5;
  double theta = std::atan(1.0 / 3.0);

  void add(CLI::App* c, bool required) {
    auto* o = c->add_option("--ham", ham, "hs, j1j2, qbq or parent");
    if (required) o->required();
    c->add_option("--J1", j1, "nearest-neighbour coupling (j1j2)");
    c->add_option("--J2", j2, "next-nearest-neighbour coupling (j1j2)");
    c->add_option("--theta", theta, "biquadratic angle (qbq)");
  }
  void record(json& j) const {
    j["ham"] = ham;
    if (ham == "j1j2") {
      j["J1"] = j1;
      j["J2"] = j2;
    }
    if (ham == "qbq") j["theta"] = theta;
  }
  Ham make(int n) const {
    idmps_hamiltonian* h = nullptr;
    check(idmps_hamiltonian_create(ham.c_str(), n, j1, j2, theta, &h));
    return Ham(h);
  }
};

struct ScanOpts {
  std::string grid;
  double r_min = 0.02;
  double r_max = 30.0;
  int points = 25;
  std::string objective = "energy";
  std::vector<double> values;

  void add(CLI::App* c) {
    c->add_option("--grid", grid, "explicit comma-separated radii");
    c->add_option("--R-min", r_min, "lower end of the log grid");
    c->add_option("--R-max", r_max, "upper end of the log grid");
    c->add_option("--points", points, "log grid size");
    c->add_option("--objective", objective, "energy, or fidelity (exploration only)")
        ->check(CLI::IsMember({"energy", "fidelity"}));
  }
  // Fills values (kept alive for the C options struct).
  idmps_scan_options make() {
    values.clear();
    if (!grid.empty()) {
      values = parse_list(grid, "--grid");
    } else {
      if (!(r_min > 0.0) || !(r_max > r_min) || points < 2) invalid("need 0 < --R-min < --R-max and --points >= 2");
      for (int i = 0; i < points; ++i) {
        values.push_back(std::exp(std::log(r_min) + (std::log(r_max) - std::log(r_min)) * i / (points - 1)));
      }
      values.front() = r_min;
      values.back() = r_max;
    }
    idmps_scan_options o;
    idmps_scan_options_init(&o);
    o.grid = values.data();
    o.grid_len = values.size();
    o.objective = objective == "fidelity" ? IDMPS_OBJECTIVE_FIDELITY : IDMPS_OBJECTIVE_ENERGY;
    return o;
  }
  void record(json& j) const {
    j["grid"] = join(values);
    j["objective"] = objective;
  }
};

// ---- commands --------------------------------------------------------------------------

struct SpecialEval {
  std::string fn;
  std::string z = "0,0";
  double r = 1.0;
  std::string out;

  void add(CLI::App* c) {
    c->add_option("--fn", fn, "theta1..theta4, prime, wp2, wp3, wp4")->required();
    c->add_option("--z", z, "re,im");
    c->add_option("--R", r, "torus radius, tau = iR")->required();
    c->add_option("--out", out, "also write the record to this file");
  }
  int run(Run& ctx) {
    const auto zz = parse_list(z, "--z");
    if (zz.size() > 2) invalid("--z takes re or re,im");
    const double zr = zz[0];
    const double zi = zz.size() > 1 ? zz[1] : 0.0;
    double mre = 0, mim = 0, ls = 0;
    check(idmps_special_eval(fn.c_str(), zr, zi, r, &mre, &mim, &ls));
    json rec = {{"fn", fn},
                {"z", {zr, zi}},
                {"R", r},
                {"value_re", mre * std::exp(ls)},
                {"value_im", mim * std::exp(ls)},
                {"mantissa_re", mre},
                {"mantissa_im", mim},
                {"log_scale", ls}};
    ctx.config = {{"fn", fn}, {"z", fmt17(zr) + "," + fmt17(zi)}, {"R", r}};
    std::cout << rec.dump() << "\n";
    if (!out.empty()) {
      write_file(out, rec.dump(1) + "\n");
      ctx.output(out);
      ctx.config["out"] = out;
      ctx.manifest(out);
    }
    return kExitOk;
  }
};

void save_state(const idmps_state* s, const fs::path& path, const json& meta) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  if (path.extension() == ".bin") {
    check(idmps_state_save_binary(s, path.string().c_str()));
  } else {
    check(idmps_state_save_json(s, path.string().c_str(), meta.dump().c_str()));
  }
}

struct StateBuild {
  BlockOpts block;
  double r = 1.0;
  bool cylinder = false;
  std::string basis = "native";
  std::string out;

  void add(CLI::App* c) {
    block.add(c);
    c->add_option("--R", r, "torus radius");
    c->add_flag("--cylinder", cylinder, "closed-form R -> infinity kernels");
    c->add_option("--basis", basis, "native (flavor basis for su2_2) or standard")
        ->check(CLI::IsMember({"native", "standard"}));
    c->add_option("--out", out, "output path (.json or .bin)")->required();
  }
  int run(Run& ctx) {
    idmps_state* raw = nullptr;
    check(idmps_state_build(block.model.c_str(), block.label.c_str(), block.n, r, cylinder ? 1 : 0, &raw));
    State s(raw);
    double mre = 0, mim = 0, spin = 0, ls = 0;
    check(idmps_state_block_info(s.get(), &mre, &mim, &spin, &ls));
    char* target = nullptr;
    double pf = 0;
    check(idmps_state_pairing(s.get(), &target, &pf));
    json spec;
    block.record(spec);
    json meta = {{"spec", spec},
                 {"R", cylinder ? json(nullptr) : json(r)},
                 {"cylinder", cylinder},
                 {"momentum_eigenvalue", {mre, mim}},
                 {"total_spin", spin},
                 {"global_log_scale", ls},
                 {"basis", basis == "standard" || idmps_state_local_dim(s.get()) == 2 ? "standard" : "flavor"},
                 {"thin_torus_pairing", {{"target", take(target)}, {"fidelity", pf}}}};
    State written = std::move(s);
    if (basis == "standard") {
      idmps_state* std_raw = nullptr;
      check(idmps_state_standard_basis(written.get(), &std_raw));
      written.reset(std_raw);
    }
    save_state(written.get(), out, meta);
    ctx.config = spec;
    ctx.config["R"] = r;
    ctx.config["cylinder"] = cylinder;
    ctx.config["basis"] = basis;
    ctx.config["out"] = out;
    ctx.output(out);
    ctx.manifest(out);
    return kExitOk;
  }
};

struct StateReference {
  std::string which;
  int n = 0;
  std::string out;

  void add(CLI::App* c) {
    c->add_option("--which", which, "mg+, mg-, aklt, aklt-circ, dimer0, dimer1, s1dimer+, s1dimer-, hs, hs-exc")
        ->required();
    c->add_option("--N", n, "number of sites")->required();
    c->add_option("--out", out, "output path (.json or .bin)")->required();
  }
  int run(Run& ctx) {
    idmps_state* raw = nullptr;
    check(idmps_state_reference(which.c_str(), n, &raw));
    State s(raw);
    save_state(s.get(), out, {{"reference", which}, {"N", n}});
    ctx.config = {{"which", which}, {"N", n}, {"out", out}};
    ctx.output(out);
    ctx.manifest(out);
    return kExitOk;
  }
};

struct EdGround {
  HamOpts ham;
  int n = 0;
  int k = 1;
  bool vectors = false;
  std::string out;

  void add(CLI::App* c) {
    ham.add(c, true);
    c->add_option("--N", n, "number of sites")->required();
    c->add_option("--k", k, "number of eigenpairs (0: full ground multiplet)");
    c->add_flag("--vectors", vectors, "also write <out stem>.vec<i>.json eigenvector files");
    c->add_option("--out", out, "energies JSON path")->required();
  }
  int run(Run& ctx) {
    if (k < 0) invalid("--k must be >= 0");
    Ham h = ham.make(n);
    idmps_eigen* raw = nullptr;
    check(idmps_hamiltonian_ground(h.get(), k, &raw));
    Eigen e(raw);
    json arr = json::array();
    const fs::path outp(out);
    for (std::size_t i = 0; i < idmps_eigen_count(e.get()); ++i) {
      double energy = 0, res = 0;
      int tsz = 0;
      check(idmps_eigen_value(e.get(), i, &energy, &tsz, &res));
      json item = {{"energy", energy}, {"twice_sz", tsz}, {"residual", res}};
      if (vectors) {
        idmps_state* vraw = nullptr;
        check(idmps_eigen_state(e.get(), i, &vraw));
        State v(vraw);
        fs::path vp = outp;
        vp.replace_extension(".vec" + std::to_string(i) + ".json");
        save_state(v.get(), vp, {{"energy", energy}, {"twice_sz", tsz}});
        item["vector"] = vp.filename().string();
        ctx.output(vp);
      }
      arr.push_back(std::move(item));
    }
    json cfg;
    ham.record(cfg);
    cfg["N"] = n;
    json doc = {{"hamiltonian", cfg}, {"eigenpairs", arr}};
    write_file(outp, doc.dump(1) + "\n");
    ctx.config = cfg;
    ctx.config["k"] = k;
    ctx.config["vectors"] = vectors;
    ctx.config["out"] = out;
    ctx.output(outp);
    ctx.manifest(outp);
    return kExitOk;
  }
};

struct OutDir {
  std::string dir = ".";
  void add(CLI::App* c) { c->add_option("--out-dir", dir, "directory for outputs"); }
};

struct ScanRadius {
  BlockOpts block;
  HamOpts ham;
  ScanOpts scan;
  OutDir od;

  void add(CLI::App* c) {
    block.add(c);
    ham.add(c, true);
    scan.add(c);
    od.add(c);
  }
  int run(Run& ctx) {
    Ham h = ham.make(block.n);
    idmps_scan_options o = scan.make();
    idmps_scan* raw = nullptr;
    check(idmps_scan_radius(block.model.c_str(), block.label.c_str(), h.get(), &o, &raw));
    Scan s(raw);
    char* csv = nullptr;
    char* js = nullptr;
    check(idmps_scan_csv(s.get(), &csv));
    check(idmps_scan_json(s.get(), &js));
    const fs::path dir(od.dir);
    write_file(dir / "scan_radius.csv", take(csv));
    write_file(dir / "scan_radius.json", take(js) + "\n");
    ctx.output(dir / "scan_radius.csv");
    ctx.output(dir / "scan_radius.json");
    block.record(ctx.config);
    ham.record(ctx.config);
    scan.record(ctx.config);
    ctx.config["out-dir"] = od.dir;
    ctx.manifest(dir / "scan_radius.csv");
    double r = 0, e = 0, fps = 0;
    idmps_scan_status st = IDMPS_SCAN_INTERIOR;
    check(idmps_scan_optimum(s.get(), &r, &e, &fps, &st));
    const char* names[] = {"interior", "lower_edge", "unbounded"};
    std::cout << "R* = " << fmt17(r) << "  E* = " << fmt17(e) << "  F/site = " << fmt17(fps) << "  ("
              << names[st] << ")\n";
    return kExitOk;
  }
};

struct ScanPhase {
  BlockOpts block;
  HamOpts ham;
  ScanOpts scan;
  OutDir od;
  std::string param_grid;

  void add(CLI::App* c) {
    block.add(c);
    ham.add(c, true);
    scan.add(c);
    od.add(c);
    c->add_option("--param-grid", param_grid, "NAME=v1,v2,... or NAME=start:stop:count, NAME in {J2, theta}")
        ->required();
  }
  int run(Run& ctx) {
    const auto eq = param_grid.find('=');
    if (eq == std::string::npos) invalid("--param-grid must look like NAME=values");
    const std::string name = param_grid.substr(0, eq);
    const std::string rest = param_grid.substr(eq + 1);
    std::vector<double> values;
    if (rest.find(':') != std::string::npos) {
      std::string spec = rest;
      for (char& ch : spec) ch = ch == ':' ? ',' : ch;
      const auto p = parse_list(spec, "--param-grid");
      if (p.size() != 3 || p[2] < 1 || p[2] != std::floor(p[2])) invalid("range form is start:stop:count");
      const int cnt = static_cast<int>(p[2]);
      for (int i = 0; i < cnt; ++i) values.push_back(cnt == 1 ? p[0] : p[0] + (p[1] - p[0]) * i / (cnt - 1));
    } else {
      values = parse_list(rest, "--param-grid");
    }
    Ham h = ham.make(block.n);
    idmps_scan_options o = scan.make();
    char* csv = nullptr;
    char* js = nullptr;
    check(idmps_sweep(block.model.c_str(), block.label.c_str(), h.get(), name.c_str(), values.data(), values.size(),
                      &o, &csv, &js));
    const fs::path dir(od.dir);
    write_file(dir / "scan_phase.csv", take(csv));
    write_file(dir / "scan_phase.json", take(js) + "\n");
    ctx.output(dir / "scan_phase.csv");
    ctx.output(dir / "scan_phase.json");
    block.record(ctx.config);
    ham.record(ctx.config);
    ctx.config.erase("J2");
    ctx.config.erase("theta");
    scan.record(ctx.config);
    ctx.config["param-grid"] = name + "=" + join(values);
    ctx.config["out-dir"] = od.dir;
    ctx.manifest(dir / "scan_phase.csv");
    return kExitOk;
  }
};

struct CheckSuite {
  std::string sites = "4,6";
  std::string radii = "0.1,1,10";
  int samples = 100;
  std::uint64_t seed = 0;
  bool mutate = false;
  OutDir od;

  void add(CLI::App* c) {
    c->add_option("--N", sites, "comma-separated chain lengths");
    c->add_option("--R", radii, "comma-separated radii");
    c->add_option("--samples", samples, "random modular-identity samples");
    c->add_option("--seed", seed, "sampling seed (0: library default)");
    c->add_flag("--mutate-marshall", mutate, "drop the Marshall sign; the singlet check must then fail");
    od.add(c);
  }
  int run(Run& ctx) {
    std::vector<int> ns;
    for (double v : parse_list(sites, "--N")) {
      if (v != std::floor(v)) invalid("--N values must be integers");
      ns.push_back(static_cast<int>(v));
    }
    const auto rs = parse_list(radii, "--R");
    idmps_suite_options o;
    idmps_suite_options_init(&o);
    o.sites = ns.data();
    o.n_sites = ns.size();
    o.radii = rs.data();
    o.n_radii = rs.size();
    o.modular_samples = samples;
    if (seed != 0) o.seed = seed;
    o.omit_marshall_sign = mutate ? 1 : 0;
    char* js = nullptr;
    int passed = 0;
    check(idmps_check_suite(&o, &js, &passed));
    const std::string text = take(js);
    const fs::path dir(od.dir);
    write_file(dir / "suite.json", text + "\n");
    ctx.output(dir / "suite.json");
    ctx.config = {{"N", sites}, {"R", join(rs)}, {"samples", samples}, {"seed", o.seed},
                  {"mutate-marshall", mutate}, {"out-dir", od.dir}};
    ctx.manifest(dir / "suite.json");
    const json report = json::parse(text);
    for (const auto& c : report.at("checks")) {
      std::cout << (c.at("pass").get<bool>() ? "PASS " : "FAIL ") << c.at("name").get<std::string>()
                << "  max=" << c.at("max_residual").dump() << "  tol=" << c.at("tolerance").dump() << "\n";
    }
    return passed ? kExitOk : kExitCheckFailed;
  }
};

struct CheckLimits {
  BlockOpts block;
  std::string target;
  HamOpts ham;
  std::string r_seq;
  OutDir od;

  void add(CLI::App* c) {
    block.add(c);
    c->add_option("--target", target, "comma-separated reference names spanning the target subspace");
    ham.add(c, false);
    c->add_option("--R-seq", r_seq, "comma-separated radii in schedule order")->required();
    od.add(c);
  }
  int run(Run& ctx) {
    if (target.empty() == ham.ham.empty()) invalid("give exactly one of --target or --ham");
    std::vector<State> owned;
    std::vector<const idmps_state*> targets;
    if (!target.empty()) {
      std::stringstream ss(target);
      std::string name;
      while (std::getline(ss, name, ',')) {
        idmps_state* raw = nullptr;
        check(idmps_state_reference(name.c_str(), block.n, &raw));
        owned.emplace_back(raw);
      }
    } else {
      Ham h = ham.make(block.n);
      idmps_eigen* raw = nullptr;
      check(idmps_hamiltonian_ground(h.get(), 0, &raw));
      Eigen e(raw);
      for (std::size_t i = 0; i < idmps_eigen_count(e.get()); ++i) {
        idmps_state* v = nullptr;
        check(idmps_eigen_state(e.get(), i, &v));
        owned.emplace_back(v);
      }
    }
    for (const auto& s : owned) targets.push_back(s.get());
    const auto radii = parse_list(r_seq, "--R-seq");
    char* csv = nullptr;
    int mono = 0;
    check(idmps_limits(block.model.c_str(), block.label.c_str(), block.n, targets.data(), targets.size(),
                       radii.data(), radii.size(), &csv, &mono));
    const fs::path dir(od.dir);
    const std::string table = take(csv);
    write_file(dir / "limits.csv", table);
    ctx.output(dir / "limits.csv");
    block.record(ctx.config);
    if (!target.empty()) {
      ctx.config["target"] = target;
    } else {
      ham.record(ctx.config);
    }
    ctx.config["R-seq"] = join(radii);
    ctx.config["out-dir"] = od.dir;
    ctx.manifest(dir / "limits.csv");
    std::cout << table << (mono ? "monotone tail: yes\n" : "monotone tail: no\n");
    return mono ? kExitOk : kExitCheckFailed;
  }
};

// Pulls --config <file> out of argv and appends its entries as flags, unless
// the same flag was given explicitly. A manifest works too (its "config").
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + 2));
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return args;
  std::ifstream is(path);
  if (!is) invalid("cannot open config file " + path);
  json cfg;
  try {
    cfg = json::parse(is);
  } catch (const json::exception& e) {
    invalid("config file " + path + " is not valid JSON: " + e.what());
  }
  if (cfg.contains("config") && cfg["config"].is_object()) cfg = cfg["config"];
  if (!cfg.is_object()) invalid("config file must hold a JSON object");
  auto given = [&](const std::string& flag) {
    for (const auto& a : args) {
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    }
    return false;
  };
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    if (given(flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_string()) {
      args.push_back(flag);
      args.push_back(value.get<std::string>());
    } else if (value.is_number_integer() || value.is_number_unsigned()) {
      args.push_back(flag);
      args.push_back(value.dump());
    } else if (value.is_number()) {
      args.push_back(flag);
      args.push_back(fmt17(value.get<double>()));
    } else if (!value.is_null()) {
      invalid("config entry '" + key + "' must be a scalar");
    }
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Torus conformal-block spin-chain states, exact diagonalization and radius scans", "idmps"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(idmps_version()));
  int threads = -1;
  app.add_option("--threads", threads, "worker cap (default: IDMPS_THREADS, else all cores)");
  std::string config_path;  // consumed by merge_config before parsing
  app.add_option("--config", config_path, "JSON config or manifest; explicit flags win");

  auto* special = app.add_subcommand("special", "special functions")->require_subcommand(1);
  auto* state = app.add_subcommand("state", "state vectors")->require_subcommand(1);
  auto* ed = app.add_subcommand("ed", "exact diagonalization")->require_subcommand(1);
  auto* scan = app.add_subcommand("scan", "radius scans")->require_subcommand(1);
  auto* chk = app.add_subcommand("check", "identity and limit checks")->require_subcommand(1);

  SpecialEval special_eval;
  StateBuild state_build;
  StateReference state_reference;
  EdGround ed_ground;
  ScanRadius scan_radius;
  ScanPhase scan_phase;
  CheckSuite check_suite;
  CheckLimits check_limits;

  struct Entry {
    CLI::App* app;
    std::string name;
    std::function<int(Run&)> run;
  };
  std::vector<Entry> entries;
  auto reg = [&](CLI::App* parent, const char* name, const char* help, auto& cmd) {
    auto* sub = parent->add_subcommand(name, help);
    cmd.add(sub);
    sub->add_option("--threads", threads, "worker cap");
    entries.push_back({sub, parent->get_name() + " " + name, [&cmd](Run& r) { return cmd.run(r); }});
  };
  reg(special, "eval", "evaluate theta, prime form or Weierstrass kernels", special_eval);
  reg(state, "build", "conformal-block state", state_build);
  reg(state, "reference", "exact reference state", state_reference);
  reg(ed, "ground", "lowest eigenpairs over all Sz sectors", ed_ground);
  reg(scan, "radius", "energy scan over the torus radius", scan_radius);
  reg(scan, "phase", "radius scans along a Hamiltonian parameter", scan_phase);
  reg(chk, "suite", "modular, symmetry, Pfaffian and parent-Hamiltonian checks", check_suite);
  reg(chk, "limits", "thin-torus / cylinder convergence table", check_limits);

  try {
    std::vector<std::string> args(argv, argv + argc);
    args = merge_config(std::move(args));
    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e) == 0 ? kExitOk : kExitValidation;
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e) == 0 ? kExitOk : kExitValidation;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  }

  try {
    if (threads >= 0) check(idmps_set_threads(threads));
    for (auto& e : entries) {
      if (e.app->parsed()) {
        Run ctx;
        ctx.command = e.name;
        const int code = e.run(ctx);
        return code;
      }
    }
    std::cerr << app.help();
    return kExitValidation;
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
