// omrl: open-map resonance laboratory command line.
// Subcommands: spectrum | husimi | weyl | orbits | dimension.
// Exit codes: 0 ok, 2 configuration error, 3 numerical failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "omrl/analysis.hpp"
#include "omrl/classical.hpp"
#include "omrl/io.hpp"
#include "omrl/quantize.hpp"
#include "omrl/scar.hpp"
#include "omrl/spectral.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace omrl;

namespace {

constexpr double kBakerDim = 1.2618595071429148;  // 2 ln2 / ln3
constexpr double kCatDimDefault = 1.43;           // frozen box-counting value

struct Config {
  std::string map = "baker";
  std::vector<int> N_list;
  double q_lo = 1.0 / 3.0, q_hi = 2.0 / 3.0;
  bool closed = false;
  int L_max = 0;      // 0 = default per map (8 baker, 6 cat)
  int Ns = 0;         // 0 = auto 4 N^{d/2}
  double tau_factor = 1.0;
  double svd_tol = 1e-8;
  double nu_c = 0.5;
  int resolution = 0;  // 0 = auto
  double target = -1.0;
  std::string out = "out";
  std::vector<int> depths = {};  // dimension subcommand
  int horizon = 12;
};

MapKind map_kind(const Config& cfg) {
  if (cfg.map == "baker") return MapKind::baker;
  if (cfg.map == "cat") return MapKind::cat;
  throw ConfigError("unknown map '" + cfg.map + "' (expected baker|cat)");
}

TorusSpec make_spec(MapKind kind, int N) {
  return kind == MapKind::baker ? TorusSpec{N, 0.5, 0.5} : TorusSpec{N, 0.0, 0.0};
}

int default_L_max(MapKind kind) { return kind == MapKind::baker ? 8 : 6; }

double repeller_dim(MapKind kind) {
  return kind == MapKind::baker ? kBakerDim : kCatDimDefault;
}

int auto_Ns(MapKind kind, int N) {
  return static_cast<int>(std::lround(4.0 * std::pow(double(N), repeller_dim(kind) / 2.0)));
}

void validate(const Config& cfg, const std::string& subname) {
  const bool needs_N =
      subname == "spectrum" || subname == "husimi" || subname == "weyl";
  if (needs_N && cfg.N_list.empty())
    throw ConfigError("no N given (use --N or the config file)");
  for (int N : cfg.N_list)
    if (N < 3) throw ConfigError("N must be >= 3, got " + std::to_string(N));
  if (!(cfg.q_lo < cfg.q_hi) || cfg.q_lo < 0.0 || cfg.q_hi > 1.0)
    throw ConfigError("opening must satisfy 0 <= q_lo < q_hi <= 1");
  if (cfg.svd_tol <= 0.0 || cfg.svd_tol >= 1.0) throw ConfigError("svd_tol must lie in (0, 1)");
  if (cfg.nu_c <= 0.0 || cfg.nu_c >= 1.0) throw ConfigError("nu_c must lie in (0, 1)");
  if (cfg.tau_factor <= 0.0) throw ConfigError("tau factor must be positive");
  if (cfg.Ns < 0 || cfg.L_max < 0 || cfg.resolution < 0 || cfg.horizon < 1)
    throw ConfigError("negative size parameter");
}

json config_json(const Config& cfg) {
  return {{"map", cfg.map},          {"N", cfg.N_list},
          {"q_lo", cfg.q_lo},        {"q_hi", cfg.q_hi},
          {"closed", cfg.closed},    {"L_max", cfg.L_max},
          {"Ns", cfg.Ns},            {"tau_factor", cfg.tau_factor},
          {"svd_tol", cfg.svd_tol},  {"nu_c", cfg.nu_c},
          {"resolution", cfg.resolution}, {"target", cfg.target},
          {"out", cfg.out},          {"horizon", cfg.horizon},
          {"depths", cfg.depths}};
}

void apply_config_file(Config& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config parse error: " + std::string(e.what()));
  }
  if (j.contains("map")) cfg.map = j["map"].get<std::string>();
  if (j.contains("N")) {
    if (j["N"].is_array())
      cfg.N_list = j["N"].get<std::vector<int>>();
    else
      cfg.N_list = {j["N"].get<int>()};
  }
  if (j.contains("q_lo")) cfg.q_lo = j["q_lo"].get<double>();
  if (j.contains("q_hi")) cfg.q_hi = j["q_hi"].get<double>();
  if (j.contains("closed")) cfg.closed = j["closed"].get<bool>();
  if (j.contains("L_max")) cfg.L_max = j["L_max"].get<int>();
  if (j.contains("Ns")) cfg.Ns = j["Ns"].get<int>();
  if (j.contains("tau_factor")) cfg.tau_factor = j["tau_factor"].get<double>();
  if (j.contains("svd_tol")) cfg.svd_tol = j["svd_tol"].get<double>();
  if (j.contains("nu_c")) cfg.nu_c = j["nu_c"].get<double>();
  if (j.contains("resolution")) cfg.resolution = j["resolution"].get<int>();
  if (j.contains("target")) cfg.target = j["target"].get<double>();
  if (j.contains("out")) cfg.out = j["out"].get<std::string>();
  if (j.contains("horizon")) cfg.horizon = j["horizon"].get<int>();
  if (j.contains("depths")) cfg.depths = j["depths"].get<std::vector<int>>();
}

/// Tracks artifacts of one run so failures leave no partial output behind.
struct RunDir {
  fs::path dir;
  std::vector<fs::path> written;
  std::vector<std::pair<std::string, double>> timings;

  fs::path file(const std::string& name) {
    fs::path p = dir / name;
    written.push_back(p);
    return p;
  }
  void rollback() {
    std::error_code ec;
    for (const fs::path& p : written) fs::remove(p, ec);
  }
};

struct Timer {
  RunDir& run;
  std::string name;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  Timer(RunDir& r, std::string n) : run(r), name(std::move(n)) {}
  ~Timer() {
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    run.timings.emplace_back(name, s);
  }
};

std::string propagator_key(MapKind kind, const TorusSpec& spec,
                           const std::optional<OpeningStrip>& strip) {
  std::ostringstream key;
  key << "U1|" << to_string(kind) << '|' << spec.N << '|' << spec.chi_q << '|'
      << spec.chi_p;
  if (strip) key << '|' << format_double(strip->q_lo) << '|' << format_double(strip->q_hi);
  return key.str();
}

OpenMapOperator build_propagator(const Config& cfg, int N, const MatrixCache& cache) {
  MapKind kind = map_kind(cfg);
  TorusSpec spec = make_spec(kind, N);
  std::optional<OpeningStrip> strip;
  if (!cfg.closed) strip = OpeningStrip{cfg.q_lo, cfg.q_hi};
  std::string key = propagator_key(kind, spec, strip);

  OpenMapOperator op;
  op.spec = spec;
  op.kind = kind;
  op.opening = strip;
  if (auto cached = cache.load(key); cached && cached->rows() == N) {
    // validate parameters eagerly even on a cache hit
    if (kind == MapKind::baker && N % 3 != 0) throw NotDivisibleByThree(N);
    op.matrix = std::move(*cached);
    return op;
  }
  OpenMapOperator closed = kind == MapKind::baker ? baker_propagator(spec)
                                                  : cat_propagator(spec);
  op = strip ? open_propagator(closed, *strip) : std::move(closed);
  cache.store(key, op.matrix);
  return op;
}

struct ScarBasisMatrices {
  Matrix right;
  Matrix left;
  int tau = 0;
};

ScarBasisMatrices build_basis(const Config& cfg, const OpenMapOperator& U_open,
                              int Ns, const MatrixCache& cache) {
  MapSpec map = U_open.kind == MapKind::baker ? MapSpec::baker() : MapSpec::cat();
  int tau = ehrenfest_cutoff(U_open.spec, map, cfg.tau_factor);
  int L_max = cfg.L_max > 0 ? cfg.L_max : default_L_max(U_open.kind);
  std::ostringstream key;
  key << "B1|" << propagator_key(U_open.kind, U_open.spec, U_open.opening) << '|'
      << Ns << '|' << tau << '|' << L_max;
  ScarBasisMatrices out;
  out.tau = tau;
  auto r = cache.load(key.str() + "/R");
  auto l = cache.load(key.str() + "/L");
  if (r && l && r->cols() == Ns && r->rows() == U_open.spec.N) {
    out.right = std::move(*r);
    out.left = std::move(*l);
    return out;
  }
  OpeningStrip strip = U_open.opening.value_or(OpeningStrip{0.0, 0.0});
  std::vector<PeriodicOrbit> orbits =
      U_open.kind == MapKind::baker ? enumerate_baker_orbits(L_max, strip)
                                    : enumerate_cat_orbits(L_max, strip);
  for (PeriodicOrbit& orbit : orbits) orbit_actions(orbit, map);
  std::vector<ScarPair> basis = build_scar_basis(orbits, Ns, U_open, tau);
  out.right.resize(U_open.spec.N, Ns);
  out.left.resize(U_open.spec.N, Ns);
  for (int a = 0; a < Ns; ++a) {
    out.right.col(a) = basis[a].right;
    out.left.col(a) = basis[a].left;
  }
  cache.store(key.str() + "/R", out.right);
  cache.store(key.str() + "/L", out.left);
  return out;
}

ReducedProblem reduced_from_matrices(const ScarBasisMatrices& basis,
                                     const OpenMapOperator& U_open, double svd_tol) {
  ReducedProblem prob;
  prob.svd_tol = svd_tol;
  prob.right_basis = basis.right;
  prob.left_basis = basis.left;
  Matrix UR = U_open.matrix * basis.right;
  prob.H = basis.left.adjoint() * UR;
  prob.S = basis.left.adjoint() * basis.right;
  return prob;
}

int run_spectrum(const Config& cfg, RunDir& run) {
  MatrixCache cache;
  for (int N : cfg.N_list) {
    std::string tag = cfg.map + "_N" + std::to_string(N);
    OpenMapOperator U = [&] {
      Timer t(run, tag + "/propagator");
      return build_propagator(cfg, N, cache);
    }();
    ResonanceSet exact = [&] {
      Timer t(run, tag + "/exact_diagonalization");
      return exact_resonances(U);
    }();
    int Ns = cfg.Ns > 0 ? cfg.Ns : auto_Ns(U.kind, N);
    ScarBasisMatrices basis = [&] {
      Timer t(run, tag + "/scar_basis");
      return build_basis(cfg, U, Ns, cache);
    }();
    GeneralizedSolution sol = [&] {
      Timer t(run, tag + "/generalized_solve");
      return solve_generalized(reduced_from_matrices(basis, U, cfg.svd_tol));
    }();
    MatchReport report = match_spectra(exact, sol.resonances, cfg.nu_c);
    write_spectrum_csv(run.file(tag + "_exact.csv"), exact);
    write_spectrum_csv(run.file(tag + "_scar.csv"), sol.resonances);
    write_match_json(run.file(tag + "_match.json"), report);
    write_overlay_svg(run.file(tag + "_overlay.svg"), exact, sol.resonances, cfg.nu_c);
    std::printf("%s: exact |z|>=%g: %d, scar rank %d, matched %zu, mean dist %.4g\n",
                tag.c_str(), cfg.nu_c,
                int(report.pairs.size() + report.unmatched_exact.size()), sol.rank,
                report.pairs.size(), report.mean_distance());
  }
  return 0;
}

int nearest_state(const ResonanceSet& rs, double target, double nu_c) {
  int best = -1;
  double best_d = 1e300;
  for (int n = 0; n < rs.size(); ++n) {
    double m = std::abs(rs.eigenvalues[n]);
    if (m < nu_c) continue;
    double d = std::abs(m - target);
    if (d < best_d) {
      best_d = d;
      best = n;
    }
  }
  if (best < 0) throw NoSuchState("no eigenvalue with modulus >= nu_c");
  return best;
}

int run_husimi(const Config& cfg, RunDir& run) {
  if (cfg.target < 0.0) throw ConfigError("husimi needs --target (eigenvalue modulus)");
  MatrixCache cache;
  int N = cfg.N_list.front();
  std::string tag = cfg.map + "_N" + std::to_string(N);
  OpenMapOperator U = build_propagator(cfg, N, cache);
  ResonanceSet exact = exact_resonances(U);
  int Ns = cfg.Ns > 0 ? cfg.Ns : auto_Ns(U.kind, N);
  ScarBasisMatrices basis = build_basis(cfg, U, Ns, cache);
  GeneralizedSolution sol =
      solve_generalized(reduced_from_matrices(basis, U, cfg.svd_tol));

  int ie = nearest_state(exact, cfg.target, cfg.nu_c);
  int is = nearest_state(sol.resonances, cfg.target, cfg.nu_c);
  int res = cfg.resolution > 0 ? cfg.resolution : default_husimi_resolution(U.spec);

  struct Panel {
    std::string name;
    HusimiGrid grid;
  };
  std::vector<Panel> panels;
  Timer t(run, tag + "/husimi_grids");
  panels.push_back({"exact_right", husimi(exact.right_vectors.col(ie), U.spec, res, res)});
  panels.push_back({"exact_left", husimi(exact.left_vectors.col(ie), U.spec, res, res)});
  panels.push_back({"scar_right",
                    husimi(sol.resonances.right_vectors.col(is), U.spec, res, res)});
  panels.push_back({"scar_left",
                    husimi(sol.resonances.left_vectors.col(is), U.spec, res, res)});
  panels.push_back({"exact_mixed",
                    mixed_representation(exact.right_vectors.col(ie),
                                         exact.left_vectors.col(ie), U.spec, res, res)});
  panels.push_back({"scar_mixed",
                    mixed_representation(sol.resonances.right_vectors.col(is),
                                         sol.resonances.left_vectors.col(is), U.spec,
                                         res, res)});
  for (const Panel& p : panels) {
    write_grid_csv(run.file(tag + "_" + p.name + ".csv"), p.grid);
    write_grid_pgm(run.file(tag + "_" + p.name + ".pgm"), p.grid);
  }
  json overlaps = {
      {"exact_eigenvalue",
       {exact.eigenvalues[ie].real(), exact.eigenvalues[ie].imag()}},
      {"scar_eigenvalue",
       {sol.resonances.eigenvalues[is].real(), sol.resonances.eigenvalues[is].imag()}},
      {"right_overlap", state_overlap(exact.right_vectors.col(ie),
                                      sol.resonances.right_vectors.col(is))},
      {"left_overlap", state_overlap(exact.left_vectors.col(ie),
                                     sol.resonances.left_vectors.col(is))},
      {"mixed_correlation", grid_correlation(panels[4].grid, panels[5].grid)}};
  fs::path ovp = run.file(tag + "_overlaps.json");
  std::ofstream(ovp) << overlaps.dump(2) << "\n";
  std::printf("%s: |z_exact|=%.4f |z_scar|=%.4f right %.3f left %.3f mixed corr %.3f\n",
              tag.c_str(), std::abs(exact.eigenvalues[ie]),
              std::abs(sol.resonances.eigenvalues[is]),
              overlaps["right_overlap"].get<double>(),
              overlaps["left_overlap"].get<double>(),
              overlaps["mixed_correlation"].get<double>());
  return 0;
}

int run_weyl(const Config& cfg, RunDir& run) {
  MatrixCache cache;
  std::vector<std::pair<int, ResonanceSet>> spectra;
  for (int N : cfg.N_list) {
    Timer t(run, "weyl/N" + std::to_string(N));
    OpenMapOperator U = build_propagator(cfg, N, cache);
    spectra.emplace_back(N, exact_resonances(U));
  }
  MapKind kind = map_kind(cfg);
  double d = repeller_dim(kind);
  if (kind == MapKind::cat && !cfg.closed) {
    Timer t(run, "weyl/box_dimension");
    d = box_counting_dimension(MapSpec::cat(), OpeningStrip{cfg.q_lo, cfg.q_hi},
                               cfg.horizon, {4, 5, 6, 7, 8, 9, 10});
  }
  WeylFit fit = weyl_fit(spectra, cfg.nu_c, d);
  write_counts_csv(run.file(cfg.map + "_counts.csv"), fit);
  write_weyl_json(run.file(cfg.map + "_weyl.json"), fit);
  std::printf("%s weyl: slope %.4f, reference d/2 %.4f\n", cfg.map.c_str(), fit.slope,
              d / 2.0);
  return 0;
}

int run_orbits(const Config& cfg, RunDir& run) {
  MapKind kind = map_kind(cfg);
  int L_max = cfg.L_max > 0 ? cfg.L_max : default_L_max(kind);
  OpeningStrip strip{cfg.q_lo, cfg.q_hi};
  if (cfg.closed) strip = OpeningStrip{0.0, 0.0};
  MapSpec map = kind == MapKind::baker ? MapSpec::baker() : MapSpec::cat();
  std::vector<PeriodicOrbit> orbits =
      kind == MapKind::baker ? enumerate_baker_orbits(L_max, strip)
                             : enumerate_cat_orbits(L_max, strip);
  std::ostringstream out;
  out << "period,label,q0,p0,total_action,corner_duplicate\n";
  for (PeriodicOrbit& orbit : orbits) {
    orbit_actions(orbit, map);
    out << orbit.period << ',' << '"' << orbit.label << '"' << ','
        << format_double(orbit.points[0].q) << ',' << format_double(orbit.points[0].p)
        << ',' << format_double(orbit.total_action) << ','
        << (orbit.corner_duplicate ? 1 : 0) << '\n';
  }
  fs::path p = run.file(cfg.map + "_orbits.csv");
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream(p) << out.str();
  std::printf("%s: %zu orbits up to period %d\n", cfg.map.c_str(), orbits.size(), L_max);
  return 0;
}

int run_dimension(const Config& cfg, RunDir& run) {
  MapKind kind = map_kind(cfg);
  MapSpec map = kind == MapKind::baker ? MapSpec::baker() : MapSpec::cat();
  std::vector<int> depths = cfg.depths.empty()
                                ? std::vector<int>{4, 5, 6, 7, 8, 9, 10}
                                : cfg.depths;
  double d = box_counting_dimension(map, OpeningStrip{cfg.q_lo, cfg.q_hi}, cfg.horizon,
                                    depths);
  json j = {{"map", cfg.map}, {"dimension", d}, {"depths", depths},
            {"horizon", cfg.horizon}, {"q_lo", cfg.q_lo}, {"q_hi", cfg.q_hi}};
  fs::path p = run.file(cfg.map + "_dimension.json");
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream(p) << j.dump(2) << "\n";
  std::printf("%s: box-counting dimension %.5f\n", cfg.map.c_str(), d);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"omrl: resonances of open quantum maps on the torus"};
  app.require_subcommand(1);

  Config cfg;
  std::string config_file;
  std::string subname;
  for (const char* name : {"spectrum", "husimi", "weyl", "orbits", "dimension"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_file, "JSON config file (flags override it)");
    sub->add_option("--map", cfg.map, "baker|cat");
    sub->add_option("--N", cfg.N_list, "Hilbert dimension(s)");
    sub->add_option("--Ns", cfg.Ns, "scar basis size (0 = auto 4 N^{d/2})");
    sub->add_option("--open", [&cfg](const std::vector<std::string>& vals) {
          if (vals.size() != 2) return false;
          cfg.q_lo = std::stod(vals[0]);
          cfg.q_hi = std::stod(vals[1]);
          return true;
        }, "opening strip: q_lo q_hi")->expected(2);
    sub->add_flag("--closed", cfg.closed, "no opening (unitary map)");
    sub->add_option("--tau-factor", cfg.tau_factor, "Ehrenfest-time multiplier");
    sub->add_option("--svd-tol", cfg.svd_tol, "relative SVD truncation of S");
    sub->add_option("--nu-c", cfg.nu_c, "long-lived modulus cutoff");
    sub->add_option("--L-max", cfg.L_max, "max orbit period (0 = default)");
    sub->add_option("--resolution", cfg.resolution, "Husimi grid cells (0 = auto)");
    sub->add_option("--target", cfg.target, "eigenvalue-modulus selector (husimi)");
    sub->add_option("--horizon", cfg.horizon, "escape-time horizon (dimension)");
    sub->add_option("--depths", cfg.depths, "box depths (dimension)");
    sub->add_option("--out", cfg.out, "output directory");
    sub->callback([&subname, name] { subname = name; });
  }

  // Parse twice so a config file provides defaults and flags override it.
  try {
    app.parse(argc, argv);
    if (!config_file.empty()) {
      Config base;
      apply_config_file(base, config_file);
      cfg = base;
      app.clear();
      app.parse(argc, argv);
    }
    validate(cfg, subname);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }

  RunDir run;
  run.dir = cfg.out;
  try {
    std::error_code ec;
    fs::create_directories(run.dir, ec);
    int rc = 0;
    if (subname == "spectrum") rc = run_spectrum(cfg, run);
    else if (subname == "husimi") rc = run_husimi(cfg, run);
    else if (subname == "weyl") rc = run_weyl(cfg, run);
    else if (subname == "orbits") rc = run_orbits(cfg, run);
    else rc = run_dimension(cfg, run);
    write_manifest(run.dir / "manifest.json", config_json(cfg).dump(), run.timings);
    return rc;
  } catch (const ConfigError& e) {
    run.rollback();
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    run.rollback();
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
