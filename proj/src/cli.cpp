#include "txlaw/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "txlaw/acceptance.hpp"
#include "txlaw/config.hpp"
#include "txlaw/density.hpp"
#include "txlaw/error.hpp"
#include "txlaw/io.hpp"
#include "txlaw/montecarlo.hpp"
#include "txlaw/support.hpp"

namespace txlaw {

namespace {

using nlohmann::json;

struct Flags {
  std::string sigma;
  double z = NAN;
  double zband = 0.05;
  long N = 0;
  long M = 0;
  int runs = 0;
  std::uint64_t seed = 20240611;
  double eta0 = 1e-7;
  int grid = 0;
  std::string out = ".";
  int threads = int(std::max(1u, std::thread::hardware_concurrency()));
  std::string dist = "gauss";
  std::string tmode = "diagonal";
  double rmin = 0.1;
  double rmax = 2.0;
  std::string suite = "all";
};

json settings_of(const Flags& f) {
  return {{"sigma", f.sigma}, {"z", f.z},       {"zband", f.zband}, {"N", f.N},         {"M", f.M},
          {"runs", f.runs},   {"seed", f.seed}, {"eta0", f.eta0},   {"grid", f.grid},   {"out", f.out},
          {"threads", f.threads}, {"dist", f.dist}, {"tmode", f.tmode}, {"rmin", f.rmin}, {"rmax", f.rmax},
          {"suite", f.suite}};
}

void add_flags(CLI::App* app, Flags& f) {
  app->add_option("--sigma", f.sigma, "spectrum config file (key = value)");
  app->add_option("--z", f.z, "|z|");
  app->add_option("--zband", f.zband, "half-width of the excluded band around |z| = 1");
  app->add_option("--N", f.N, "rows of T (simulate, verify) or quantile count (quantiles)");
  app->add_option("--M", f.M, "columns of T");
  app->add_option("--runs", f.runs, "Monte Carlo runs");
  app->add_option("--seed", f.seed, "base seed");
  app->add_option("--eta0", f.eta0, "Richardson base eta for densities");
  app->add_option("--grid", f.grid, "table resolution (density, chi, quantiles) or scan points (edges)");
  app->add_option("--out", f.out, "output directory");
  app->add_option("--threads", f.threads, "worker cap")->check(CLI::PositiveNumber);
  app->add_option("--dist", f.dist, "entry law")->check(CLI::IsMember({"gauss", "rademacher", "skewed"}));
  app->add_option("--tmode", f.tmode, "T structure")->check(CLI::IsMember({"diagonal", "haar"}));
  app->add_option("--rmin", f.rmin, "smallest radius (chi)");
  app->add_option("--rmax", f.rmax, "largest radius (chi)");
  app->add_option("--suite", f.suite, "acceptance suite (verify)");
}

SigmaSpectrum resize(const SigmaSpectrum& spec, long N, long M) {
  if (!N && !M) return spec;
  SigmaSpectrum out = spec;
  out.N = N ? N : (M ? M : spec.N);
  out.M = M ? M : out.N;
  const long K0 = spec.K(), K1 = out.K();
  for (long& l : out.l) {
    if ((l * K1) % K0 != 0) throw InputError("cannot rescale multiplicities to K = " + std::to_string(K1));
    l = l * K1 / K0;
  }
  validate(out, 0.05);
  return out;
}

struct Job {
  Flags f;
  SigmaSpectrum spec;
  std::string inputs;  // bytes that identify the inputs
  std::vector<std::string> outputs;

  void load(bool required, bool resize_dims) {
    if (f.sigma.empty()) {
      if (required) throw InputError("--sigma is required");
      return;
    }
    inputs = read_file(f.sigma);
    spec = load_sigma(f.sigma);
    if (resize_dims) spec = resize(spec, f.N, f.M);
  }
  double z() const {
    if (std::isnan(f.z)) throw InputError("--z is required");
    if (f.z < 0.0) throw InputError("--z must be non-negative");
    return f.z;
  }
  std::string path(const std::string& name) {
    outputs.push_back(name);
    return (std::filesystem::path(f.out) / name).string();
  }
  SupportOptions support() const {
    SupportOptions s;
    s.z_band_min = f.zband;
    s.threads = f.threads;
    s.density.eta0 = f.eta0;
    s.density.solver.z_band_min = f.zband;
    return s;
  }
  TableOptions table() const {
    TableOptions t;
    t.support = support();
    t.threads = f.threads;
    if (f.grid > 0) t.resolution = f.grid;
    return t;
  }
};

json edge_json(const SupportProfile& p, double mass) {
  json bands = json::array(), edges = json::array();
  for (const auto& b : p.bands) bands.push_back({{"lo", b.lo}, {"hi", b.hi}});
  for (const auto& e : p.edges)
    edges.push_back({{"e", e.e},
                     {"m", e.m},
                     {"side", to_string(e.side)},
                     {"f_residual", e.f_residual},
                     {"dm_residual", e.dm_residual},
                     {"d2f", e.d2f},
                     {"pole_distance", e.pole_distance},
                     {"regular", e.regular}});
  json j = {{"z", p.z_mod}, {"bands", bands}, {"edges", edges}, {"scan_points", p.scan_points},
            {"scan_max", p.scan_max}, {"attempts", p.attempts}};
  j["zero_edge"] = p.zero_edge ? json{{"t", p.zero_edge->t},
                                      {"amplitude1", p.zero_edge->amplitude1},
                                      {"amplitude2", p.zero_edge->amplitude2}}
                               : json(nullptr);
  if (!std::isnan(mass)) j["total_mass"] = mass;
  return j;
}

int cmd_density(Job& job) {
  job.load(true, false);
  const DensityTable t = tabulate_density(job.spec, job.z(), job.table());
  std::vector<std::vector<double>> rows;
  for (const auto& n : t.nodes) rows.push_back({n.x, n.rho2});
  std::sort(rows.begin(), rows.end());
  write_csv(job.path("density.csv"), {"x", "rho2c"}, rows);
  write_json(job.path("bands.json"), edge_json(t.profile, t.total_mass));
  return kExitOk;
}

int cmd_edges(Job& job) {
  job.load(true, false);
  SupportOptions s = job.support();
  if (job.f.grid > 0) s.scan_points = job.f.grid;
  const SupportProfile p = find_edges(job.spec, job.z(), s);
  const json j = edge_json(p, NAN);
  write_json(job.path("edges.json"), j);
  for (const auto& e : p.edges) std::cout << to_string(e.side) << " edge " << e.e << "\n";
  if (p.zero_edge) std::cout << "lower edge 0 (t = " << p.zero_edge->t << ")\n";
  return kExitOk;
}

int cmd_chi(Job& job) {
  job.load(true, false);
  RadialOptions ro = default_radial_options();
  ro.threads = job.f.threads;
  ro.z_band_min = job.f.zband;
  ro.table.support = job.support();
  ro.table.support.scan_points = default_radial_options().table.support.scan_points;
  if (job.f.grid > 0) ro.table.resolution = job.f.grid;
  const RadialProfile p = chi_tilde(job.spec, job.f.rmin, job.f.rmax, ro);
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < p.r.size(); ++k) rows.push_back({p.r[k], p.U[k], p.chi[k], p.F[k]});
  write_csv(job.path("radial.csv"), {"r", "U", "chi", "F"}, rows);
  return kExitOk;
}

int cmd_quantiles(Job& job) {
  job.load(true, false);
  const long N = job.f.N ? job.f.N : job.spec.N;
  const QuantileTable q = quantiles(tabulate_density(job.spec, job.z(), job.table()), N);
  std::vector<std::vector<double>> rows;
  for (long j = 0; j < N; ++j) rows.push_back({double(j + 1), q.gamma[std::size_t(j)]});
  write_csv(job.path("quantiles.csv"), {"j", "gamma_j"}, rows);
  return kExitOk;
}

int cmd_simulate(Job& job) {
  job.load(true, true);
  EnsembleConfig cfg;
  cfg.spec = job.spec;
  cfg.t_mode = parse_tmode(job.f.tmode);
  cfg.x_dist = parse_xdist(job.f.dist);
  cfg.z_list = {std::complex<double>(std::isnan(job.f.z) ? 0.0 : job.f.z)};
  cfg.runs = job.f.runs ? job.f.runs : 1;
  cfg.seed = job.f.seed;
  cfg.threads = job.f.threads;
  const EnsembleResult ens = run_ensemble(cfg);
  std::vector<std::vector<double>> eig, sing;
  json runs = json::array();
  for (const auto& r : ens.runs) {
    runs.push_back({{"run", r.run_index}, {"seed_used", r.seed_used}, {"ok", r.ok}, {"failure", r.failure},
                    {"seconds", r.seconds}});
    if (!r.ok) continue;
    for (std::size_t j = 0; j < r.eigenvalues.size(); ++j)
      eig.push_back({double(r.run_index), double(j + 1), r.eigenvalues[j].real(), r.eigenvalues[j].imag()});
    for (std::size_t j = 0; j < r.singular[0].size(); ++j)
      sing.push_back({double(r.run_index), double(j + 1), r.singular[0][j]});
  }
  write_csv(job.path("eigenvalues.csv"), {"run", "j", "re", "im"}, eig);
  write_csv(job.path("singular.csv"), {"run", "j", "lambda"}, sing);
  write_json(job.path("runs.json"), {{"runs", runs}, {"failures", ens.failures},
                                     {"success_fraction", ens.success_fraction()}});
  if (ens.failures) std::cerr << ens.failures << " run(s) failed and were excluded\n";
  return kExitOk;
}

int run_criteria(Job& job, const std::vector<int>& ids, const std::string& file) {
  AcceptanceOptions o;
  o.N = job.f.N;
  o.runs = job.f.runs;
  o.seed = job.f.seed;
  o.threads = job.f.threads;
  json results = json::array();
  bool all = true;
  for (const int id : ids) {
    const CriterionResult r = run_criterion(id, o);
    std::cout << summary_line(r) << std::endl;
    results.push_back(to_json(r));
    all = all && r.pass;
  }
  write_json(job.path(file), {{"suite", job.f.suite}, {"pass", all}, {"criteria", results}});
  return all ? kExitOk : kExitDomain;
}

int cmd_verify(Job& job) { return run_criteria(job, suite_criteria(job.f.suite), "verify.json"); }

int cmd_selfcheck(Job& job) {
  // Reproducibility of the sampler, then the fast criteria.
  EnsembleConfig cfg;
  cfg.spec = identity_spectrum(4, 4);
  cfg.z_list = {std::complex<double>(0.5)};
  cfg.seed = job.f.seed;
  const RunResult a = sample_run(cfg, 0), b = sample_run(cfg, 0);
  const bool same = a.eigenvalues == b.eigenvalues && a.singular == b.singular;
  std::cout << "sampler determinism " << (same ? "PASS" : "FAIL") << std::endl;
  job.f.suite = "1,4,5,6,11";
  const int code = run_criteria(job, {1, 4, 5, 6, 11}, "selfcheck.json");
  return same ? code : kExitDomain;
}

}  // namespace

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args);
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Deterministic spectral laws of TX and Monte Carlo checks"};
  app.require_subcommand(1);
  Flags flags;
  struct Command {
    const char* name;
    const char* help;
    int (*fn)(Job&);
  };
  const Command commands[] = {
      {"density", "tabulate rho2c and its support", cmd_density},
      {"edges", "support edges and their diagnostics", cmd_edges},
      {"chi", "radial profile of the eigenvalue density", cmd_chi},
      {"quantiles", "classical locations gamma_j", cmd_quantiles},
      {"simulate", "sample TX and write spectra", cmd_simulate},
      {"verify", "run acceptance criteria", cmd_verify},
      {"selfcheck", "fast internal consistency checks", cmd_selfcheck},
  };
  std::vector<CLI::App*> subs;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_flags(sub, flags);
    subs.push_back(sub);
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  Job job;
  job.f = flags;
  try {
    std::filesystem::create_directories(job.f.out);
    int code = kExitOk;
    std::string name;
    for (std::size_t k = 0; k < subs.size(); ++k)
      if (subs[k]->parsed()) {
        name = commands[k].name;
        code = commands[k].fn(job);
      }
    Manifest m;
    m.command = name;
    json stable = settings_of(job.f);
    stable.erase("out");
    stable.erase("threads");
    m.inputs_hash = hex64(fnv1a64(job.inputs + "\n" + name + "\n" + stable.dump()));
    m.seed = job.f.seed;
    m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    m.settings = settings_of(job.f);
    if (job.spec.n() > 0)
      m.settings["spectrum"] = {{"s", job.spec.s}, {"l", job.spec.l}, {"N", job.spec.N}, {"M", job.spec.M}};
    m.outputs = job.outputs;
    write_json((std::filesystem::path(job.f.out) / "manifest.json").string(), to_json(m));
    return code;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
}

}  // namespace txlaw
