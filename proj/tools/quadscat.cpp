// quadscat: verification suites, B_2 computation, estimate probes and kernel
// oracle tables.  Exit codes: 0 success, 1 check failure, 2 usage or
// validation error.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "quadscat/backscatter.hpp"
#include "quadscat/checks.hpp"
#include "quadscat/field_io.hpp"
#include "quadscat/kernels.hpp"
#include "quadscat/normprobe.hpp"
#include "quadscat/parallel.hpp"
#include "quadscat/sphere.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace quadscat;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::size_t N = 48;
  double L = 12.0;
  std::optional<std::size_t> K;
  int sphere_degree = 14;
  std::string sphere_file;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string out;
  std::map<std::string, double> tolerances;
};

json config_json(const RunConfig& c, const std::string& subcommand) {
  json j;
  j["subcommand"] = subcommand;
  j["N"] = c.N;
  j["L"] = c.L;
  j["K"] = c.K ? json(*c.K) : json(nullptr);
  j["sphere_degree"] = c.sphere_degree;
  j["sphere_file"] = c.sphere_file;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["tolerances"] = c.tolerances;
  j["version"] = QUADSCAT_VERSION;
  return j;
}

fs::path sidecar_path(const fs::path& artifact) {
  fs::path base = artifact;
  base.replace_extension();
  return base.string() + ".run.json";
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << std::setw(2) << j << '\n';
}

SphereQuadrature load_quadrature(const RunConfig& c) {
  if (c.sphere_file.empty()) return SphereQuadrature::product_gauss(c.sphere_degree);
  if (!fs::exists(c.sphere_file)) throw UsageError("sphere node file not found: " + c.sphere_file);
  return SphereQuadrature::from_file(c.sphere_file, c.sphere_degree);
}

void print_warnings(const Diagnostics& diag) {
  for (const auto& w : diag.warnings) std::cerr << "warning: " << w << '\n';
}

// ---------------------------------------------------------------- verify

int cmd_verify(const RunConfig& rc, const std::vector<std::string>& suite_names) {
  CheckConfig cc;
  cc.N = rc.N;
  cc.L = rc.L;
  cc.K = rc.K.value_or(20);
  cc.sphere_degree = rc.sphere_degree;
  cc.sphere_file = rc.sphere_file;
  cc.seed = rc.seed;
  cc.tolerances = rc.tolerances;
  try {
    validate(cc);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::vector<Suite> suites;
  for (const auto& name : suite_names) {
    if (name == "all") {
      suites = all_suites();
      break;
    }
    try {
      suites.push_back(suite_from_string(name));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }

  json report = config_json(rc, "verify");
  report["checks"] = json::array();
  bool ok = true;
  Diagnostics diag;
  for (Suite s : suites) {
    const auto start = std::chrono::steady_clock::now();
    const auto checks = run_suite(s, cc, &diag);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "[" << to_string(s) << "] " << std::fixed << std::setprecision(1) << secs << " s\n"
              << std::defaultfloat;
    for (const auto& c : checks) {
      std::cout << "  " << (c.pass ? "pass " : "FAIL ") << std::left << std::setw(36) << c.name << std::right
                << " measured " << std::setprecision(3) << std::scientific << c.measured << "  tol " << c.tolerance
                << std::defaultfloat << std::setprecision(6);
      if (!c.note.empty()) std::cout << "  (" << c.note << ")";
      std::cout << std::endl;
      report["checks"].push_back(
          {{"name", c.name}, {"suite", to_string(s)}, {"measured", c.measured}, {"tolerance", c.tolerance},
           {"pass", c.pass}, {"note", c.note}});
      ok = ok && c.pass;
    }
  }
  report["warnings"] = diag.warnings;
  report["pass"] = ok;
  if (!rc.out.empty()) {
    write_json(rc.out, report);
    write_json(sidecar_path(rc.out), config_json(rc, "verify"));
  }
  std::cout << (ok ? "all checks passed" : "some checks FAILED") << '\n';
  return ok ? 0 : 1;
}

// -------------------------------------------------------------------- b2

ScalarField load_field(const std::string& path) {
  const fs::path base = field_basename(path);
  fs::path header = base;
  header += ".json";
  if (!fs::exists(header)) throw UsageError("input field not found: " + path);
  try {
    return read_field(path);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

int cmd_b2(const RunConfig& rc, const std::string& f_path, const std::string& g_path, const std::string& h_path) {
  if (rc.out.empty()) throw UsageError("b2 needs --out");
  const ScalarField f = load_field(f_path);
  const bool same = fs::absolute(field_basename(f_path)) == fs::absolute(field_basename(g_path));
  const std::optional<ScalarField> g_store = same ? std::nullopt : std::optional<ScalarField>(load_field(g_path));
  const ScalarField& g = same ? f : *g_store;
  if (!(f.spec() == g.spec())) throw UsageError("f and g live on different grids");
  if (f.space() != Space::Position || g.space() != Space::Position)
    throw UsageError("b2 inputs must be position-space fields");

  PipelineConfig pc;
  pc.K = rc.K;
  const SphereQuadrature quad = load_quadrature(rc);
  Diagnostics diag;
  const auto start = std::chrono::steady_clock::now();
  const ScalarField B = B2(f, g, quad, pc, &diag);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_field(B, rc.out);

  json side = config_json(rc, "b2");
  side["inputs"] = {f_path, g_path};
  side["N"] = f.spec().points();
  side["L"] = f.spec().half_width();
  side["K"] = resolve_slice_index(f, g, pc);
  side["wall_time_s"] = secs;
  side["support_fraction"] = support_check(f, g, B);
  if (!h_path.empty()) {
    const ScalarField h = load_field(h_path);
    if (!(h.spec() == f.spec())) throw UsageError("test field lives on a different grid");
    const QResult q = Q_form(f, g, h, quad, pc, &diag);
    side["Q"] = {{"inputs", {f_path, g_path, h_path}},
                 {"N", f.spec().points()},
                 {"L", f.spec().half_width()},
                 {"K", q.K},
                 {"value_route_i", {q.route_i.real(), q.route_i.imag()}},
                 {"value_route_ii", {q.route_ii.real(), q.route_ii.imag()}},
                 {"rel_diff", q.rel_diff}};
  }
  side["warnings"] = diag.warnings;
  write_json(sidecar_path(field_basename(rc.out).string() + ".bin"), side);
  print_warnings(diag);
  std::cout << "wrote " << field_basename(rc.out).string() << ".{json,bin}  (" << std::setprecision(3) << secs
            << " s)\n";
  return 0;
}

// ---------------------------------------------------------------- sample

int cmd_sample(const RunConfig& rc, const std::vector<double>& center, double width,
               const std::vector<double>& modulation, double amplitude) {
  if (rc.out.empty()) throw UsageError("sample needs --out");
  if (center.size() != 3 || modulation.size() != 3) throw UsageError("center and modulation take three values");
  if (!(width > 0.0)) throw UsageError("width must be positive");
  if (rc.N < 16 || rc.N % 2) throw UsageError("--n-grid must be even and at least 16");
  GaussianParams p;
  p.center = {center[0], center[1], center[2]};
  p.width = width;
  p.modulation = {modulation[0], modulation[1], modulation[2]};
  p.amplitude = amplitude;
  Diagnostics diag;
  const ScalarField f = sample_gaussian(GridSpec(rc.N, rc.L), p, &diag);
  write_field(f, rc.out);
  json side = config_json(rc, "sample");
  side["center"] = center;
  side["width"] = width;
  side["modulation"] = modulation;
  side["amplitude"] = amplitude;
  side["warnings"] = diag.warnings;
  write_json(sidecar_path(field_basename(rc.out).string() + ".bin"), side);
  print_warnings(diag);
  return 0;
}

// ----------------------------------------------------------------- probe

int cmd_probe(const RunConfig& rc, const CLI::App& app, const std::vector<std::string>& sigma_specs,
              const std::string& lattice, double da, double db, const std::vector<std::string>& families,
              const std::vector<double>& params, const std::string& op) {
  std::vector<ExponentTuple> sigmas;
  try {
    for (const auto& s : sigma_specs) sigmas.push_back(parse_exponent_tuple(s));
    if (!lattice.empty()) {
      const auto lat = sigma_lattice(parse_exponent_tuple(lattice), da, db);
      sigmas.insert(sigmas.end(), lat.begin(), lat.end());
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  std::vector<FamilyProbe> probes;
  for (const auto& name : families) {
    FamilyProbe fp;
    try {
      fp = default_family_probe(family_from_string(name));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (app.count("--n-grid")) fp.setup.N = rc.N;
    if (app.count("--box")) fp.setup.L = rc.L;
    if (rc.K) fp.setup.pipeline.K = rc.K;
    fp.setup.sphere_degree = rc.sphere_degree;
    if (!params.empty()) fp.family.params = params;
    if (op == "A") fp.setup.op = ProbeOperator::A;
    else if (op == "B2") fp.setup.op = ProbeOperator::B2;
    else if (!op.empty()) throw UsageError("operator must be B2 or A");
    if (fp.setup.N < 16 || fp.setup.N % 2) throw UsageError("--n-grid must be even and at least 16");
    probes.push_back(fp);
  }

  std::ostringstream csv;
  const auto start = std::chrono::steady_clock::now();
  region_scan(csv, sigmas, probes);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (rc.out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(rc.out);
    if (!out) throw std::runtime_error("cannot write " + rc.out);
    out << csv.str();
    json side = config_json(rc, "probe");
    side["sigmas"] = sigma_specs;
    side["lattice"] = lattice;
    side["families"] = families;
    side["params"] = params;
    side["operator"] = op.empty() ? "default" : op;
    side["wall_time_s"] = secs;
    write_json(sidecar_path(rc.out), side);
    std::cout << "wrote " << rc.out << "  (" << sigmas.size() << " sigma, " << probes.size() << " families, "
              << std::setprecision(3) << secs << " s)\n";
  }
  return 0;
}

// --------------------------------------------------------------- kernels

int cmd_kernels(const RunConfig& rc) {
  std::ostringstream csv;
  csv << std::setprecision(12);
  csv << "table,case,t,value,reference,rel_diff\n";
  bool ok = true;

  for (int n : {3, 5, 7, 9}) csv << "p_polynomial,n=" << n << ",,\"" << p_polynomial(n).to_string() << "\",,\n";

  {
    const double dt = 0.002;
    std::vector<double> h;
    for (double t = 0.0; t <= 40.0 + 1e-12; t += dt) h.push_back(std::exp(-t));
    const HardyResult r = hardy_transform(h, dt);
    const double ref = 2.0 * std::log(2.0);
    csv << "hardy,e^-t integral_H2,," << r.integral_H2 << ',' << ref << ',' << std::abs(r.integral_H2 - ref) / ref
        << '\n';
    csv << "hardy,e^-t ratio,," << r.ratio << ",4,\n";
    ok = ok && r.ratio <= 4.0;
  }
  {
    const double dt = 0.002;
    const std::size_t count = 5001;
    const auto phi = RadialProfile::sample([](double t) { return cplx(4.0 * kPi * std::exp(-0.5 * t * t)); }, dt, count);
    const auto psi = RadialProfile::sample(
        [](double t) { return cplx(4.0 * kPi * std::exp(-t * t / 0.98) * (1.0 + 0.3 * t * t)); }, dt, count);
    const auto d = E_pairing_direct(phi, psi), a = E_pairing_4AM(phi, psi);
    const double rel = std::abs(d.value - a.value) / std::abs(d.value);
    csv << "E_pairing,direct vs 4AM,," << d.value.real() << ',' << a.value.real() << ',' << rel << '\n';
    const auto ds = E_pairing_direct(psi, phi);
    csv << "E_pairing,swap (direct),," << ds.value.real() << ',' << -d.value.real() << ','
        << std::abs(d.value + ds.value) / d.scale << '\n';
    ok = ok && rel <= 1e-3;
  }
  {
    const GridSpec spec(rc.N, rc.L);
    const SphereQuadrature quad = load_quadrature(rc);
    GaussianParams p;
    p.width = 0.7;
    const ScalarField phi = sample_gaussian(spec, p);
    const double dt = 0.25 * spec.spacing();
    const RadialProfile prof = profile_from_field(phi, dt, static_cast<std::size_t>(0.9 * rc.L / dt), quad);
    for (int i = 0; i <= 13; ++i) {
      const double t = 0.2 + 0.1 * i;
      const cplx a = k0_pairing_multiplier(phi, t), b = kappa0_pairing(prof, t, 3);
      csv << "k0_pairing,multiplier vs kappa0," << t << ',' << a.real() << ',' << b.real() << ','
          << std::abs(a - b) / std::abs(a) << '\n';
    }
    const auto prof5 =
        RadialProfile::sample([](double t) { return cplx(4.0 * kPi * std::exp(-0.5 * t * t)); }, 0.01, 1201);
    for (int i = 0; i <= 10; ++i) {
      const double t = 0.25 * i;
      csv << "kappa0_pairing,n=5 gaussian," << t << ',' << kappa0_pairing(prof5, t, 5).real() << ",,\n";
    }
  }

  if (rc.out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(rc.out);
    if (!out) throw std::runtime_error("cannot write " + rc.out);
    out << csv.str();
    write_json(sidecar_path(rc.out), config_json(rc, "kernels"));
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quadscat: quadratic backscattering operator B_2 in three dimensions"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig rc;
  std::size_t k_steps = 0;
  app.add_option("--n-grid", rc.N, "grid points per axis (even)")->capture_default_str();
  app.add_option("--box", rc.L, "box half-width L")->capture_default_str();
  app.add_option("--t-steps", k_steps, "index K of the last time slice (t_K = K h); automatic when omitted");
  app.add_option("--sphere-degree", rc.sphere_degree, "exactness degree of the sphere rule")->capture_default_str();
  app.add_option("--sphere-file", rc.sphere_file, "sphere node file (wx wy wz w per line)");
  app.add_option("--seed", rc.seed, "random seed")->capture_default_str();
  app.add_option("--threads", rc.threads, "worker threads (1 gives bitwise reproducible output)")
      ->capture_default_str();
  app.add_option("--out", rc.out, "output path");
  std::map<std::string, double> tol_values;
  for (const auto& [name, value] : default_tolerances()) {
    tol_values[name] = value;
    app.add_option("--tol." + name, tol_values[name], "tolerance override")->group("Tolerances");
  }

  std::vector<std::string> suites{"identities", "kernels", "structure", "dyadic"};
  auto* verify = app.add_subcommand("verify", "run check suites");
  verify->add_option("--suite", suites, "identities, kernels, crosschecks, structure, probes, dyadic or all")
      ->capture_default_str();

  std::string f_path, g_path, h_path;
  auto* b2 = app.add_subcommand("b2", "compute B_2(f, g) from field files");
  b2->add_option("f", f_path, "first input field")->required();
  b2->add_option("g", g_path, "second input field")->required();
  b2->add_option("--test-field", h_path, "also evaluate Q(f, g, h) by both routes");

  std::vector<double> center{0.0, 0.0, 0.0}, modulation{0.0, 0.0, 0.0};
  double width = 1.0, amplitude = 1.0;
  auto* sample = app.add_subcommand("sample", "write a sampled Gaussian field");
  sample->add_option("--center", center, "x y z")->expected(3);
  sample->add_option("--width", width, "standard deviation")->capture_default_str();
  sample->add_option("--modulation", modulation, "kx ky kz")->expected(3);
  sample->add_option("--amplitude", amplitude)->capture_default_str();

  std::vector<std::string> sigma_specs, families{"translate"};
  std::string lattice, op;
  double da = 0.25, db = 0.25;
  std::vector<double> params;
  auto* probe = app.add_subcommand("probe", "witness-family norm ratio scan (CSV)");
  probe->add_option("--sigma", sigma_specs, "a1,b1,a2,b2,a,b (repeatable)");
  probe->add_option("--lattice", lattice, "3x3 (a, b) lattice around a1,b1,a2,b2,a,b");
  probe->add_option("--da", da)->capture_default_str();
  probe->add_option("--db", db)->capture_default_str();
  probe->add_option("--family", families, "translate, dilate or modulate")->capture_default_str();
  probe->add_option("--params", params, "family parameters (defaults per family)");
  probe->add_option("--operator", op, "B2 or A (defaults per family)");

  auto* kernels = app.add_subcommand("kernels", "one-dimensional kernel oracle tables (CSV)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.count("--t-steps")) rc.K = k_steps;
    for (const auto& [name, value] : tol_values)
      if (app.count("--tol." + name)) rc.tolerances[name] = value;
    if (rc.N < 16 || rc.N % 2) throw UsageError("--n-grid must be even and at least 16 (got " + std::to_string(rc.N) + ")");
    if (!(rc.L > 0.0)) throw UsageError("--box must be positive");
    if (rc.threads < 1) throw UsageError("--threads must be at least 1");
    set_max_threads(rc.threads);

    if (verify->parsed()) return cmd_verify(rc, suites);
    if (b2->parsed()) return cmd_b2(rc, f_path, g_path, h_path);
    if (sample->parsed()) return cmd_sample(rc, center, width, modulation, amplitude);
    if (probe->parsed()) return cmd_probe(rc, app, sigma_specs, lattice, da, db, families, params, op);
    if (kernels->parsed()) return cmd_kernels(rc);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
