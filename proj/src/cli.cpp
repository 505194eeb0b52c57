#include "ribfront/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <functional>

#include "CLI11.hpp"
#include "ribfront/verify.hpp"

namespace ribfront::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

json cplx_json(Cplx z) { return json::array({z.real(), z.imag()}); }

json cplx_list_json(const std::vector<Cplx>& zs) {
  json out = json::array();
  for (const Cplx z : zs) out.push_back(cplx_json(z));
  return out;
}

// Collects output files of one command and writes them with the manifest.
class OutputSet {
public:
  OutputSet(const RunConfig& cfg, const Options& opts, std::string command)
      : cfg_(cfg), opts_(opts), command_(std::move(command)) {}

  std::string path(const std::string& name) {
    files_.push_back(name);
    return (fs::path(opts_.out) / name).string();
  }

  template <class F>
  void write(const std::string& name, F&& writer) {
    const std::string p = path(name);
    try {
      writer(p);
    } catch (const std::runtime_error& e) {
      throw IoError(e.what());
    }
  }

  void report(json body) {
    body["command"] = command_;
    write(command_ + "_" + cfg_.outputs.report, [&](const std::string& p) { export_json(body, p); });
    json m;
    m["tool"] = "ribfront";
    m["version"] = kVersion;
    m["command"] = command_;
    m["config_name"] = cfg_.name;
    m["config_hash_fnv1a64"] = hex64(fnv1a(cfg_.source.dump()));
    m["seed"] = cfg_.seed;
    m["tol_scale"] = opts_.tol_scale;
    m["outputs"] = files_;
    m["json_library"] = std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) +
                        "." + std::to_string(NLOHMANN_JSON_VERSION_PATCH);
    m["compiler"] = __VERSION__;
    if (!opts_.loops.empty()) m["loops_file"] = opts_.loops;
    const std::string name = command_ + "_manifest.json";
    const std::string p = (fs::path(opts_.out) / name).string();
    try {
      export_json(m, p);
    } catch (const std::runtime_error& e) {
      throw IoError(e.what());
    }
  }

private:
  const RunConfig& cfg_;
  const Options& opts_;
  std::string command_;
  std::vector<std::string> files_;
};

TransformOptions search_options(const RunConfig& cfg) {
  TransformOptions t;
  t.search_center = cfg.domain.center;
  t.search_radius = std::max(5.0, 2.0 * cfg.domain.r_out);
  return t;
}

RibaucourPair build_pair(const RunConfig& cfg) {
  const ClosedForm cf = cfg.closed_form();
  return RibaucourPair::build(cfg.weierstrass(), cf.h, cf.k, search_options(cfg));
}

// Loops of the config, or radius-0.1 circles around every finite puncture of the transformed surface.
std::vector<LoopSpec> loops_for(const RunConfig& cfg, const std::vector<Cplx>& punctures) {
  if (!cfg.loops.empty()) return cfg.loops;
  std::vector<LoopSpec> out;
  for (const Cplx z : punctures) out.push_back({z, 0.1, 1});
  return out;
}

std::vector<Cplx> numeric_punctures(const RunConfig& cfg) {
  std::vector<Cplx> out = cfg.punctures;
  for (const LoopSpec& l : cfg.loops) mexpr::add_unique(out, l.center);
  return out;
}

CsvTable trace_table(const RiccatiSolution& sol) {
  CsvTable t;
  t.header = {"z_re", "z_im", "chart", "val_re", "val_im"};
  for (const RiccatiSample& s : sol.samples) {
    t.rows.push_back({format_real(s.z.real()), format_real(s.z.imag()), s.chart == Chart::H ? "h" : "mu",
                      format_real(s.value.real()), format_real(s.value.imag())});
  }
  return t;
}

// Continues the numeric solution from z0 to the loop's start, then integrates g'/h around the loop.
Cplx numeric_loop_period(const RunConfig& cfg, const WeierstrassData& w, const LoopSpec& loop) {
  const NumericSpec& n = *cfg.riccati.numeric;
  std::vector<Cplx> obstacles = w.obstacles();
  for (const LoopSpec& l : cfg.loops) mexpr::add_unique(obstacles, l.center);
  const Cplx start = loop.path().start();
  Cplx h_start = cfg.numeric_h0();
  if (std::abs(start - n.z0) > 0.0) {
    const PathSpec p = default_path(obstacles, n.z0, start);
    h_start = solve_along(w, *cfg.riccati.k, n.z0, h_start, p).back().h();
  }
  return period_numeric(w, *cfg.riccati.k, h_start, loop);
}

bool all_pass(const std::vector<CheckReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.pass; });
}

void print_checks(const std::vector<CheckReport>& reports) {
  for (const auto& r : reports) {
    std::printf("%-24s %-4s max_residual=%-12.4g tolerance=%-8.2g points=%d failures=%d\n", r.name.c_str(),
                r.pass ? "PASS" : "FAIL", r.max_residual, r.tolerance, r.points_tested, r.failures);
  }
}

}  // namespace

RunConfig resolve(const Options& opts) {
  RunConfig cfg = load_config(opts.config);
  if (opts.seed) cfg.seed = *opts.seed;
  if (!opts.loops.empty()) {
    const json j = read_json_file(opts.loops);
    cfg.loops = parse_loops(j.is_object() && j.contains("loops") ? j.at("loops") : j);
  }
  if (!(opts.tol_scale > 0.0)) throw ConfigError("--tol-scale must be positive");
  return cfg;
}

int cmd_transform(const RunConfig& cfg, const Options& opts) {
  const RibaucourPair pair = build_pair(cfg);
  const double s = pair.scale();
  OutputSet out(cfg, opts, "transform");

  DomainSpec d1 = cfg.domain;
  d1.punctures = pair.W.punctures;
  const SurfaceMesh m1 = build_mesh(
      [&](Cplx z) {
        return VertexEval{s * immerse(pair.W, default_path(pair.W.obstacles(), pair.W.base_point, z))};
      },
      sample_grid(d1));
  DomainSpec d2 = cfg.domain;
  d2.punctures = pair.Wt.punctures;
  const SurfaceMesh m2 =
      build_mesh([&](Cplx z) { return VertexEval{s * immerse(pair.Wt, pair.path_to(z))}; }, sample_grid(d2));
  out.write(cfg.outputs.mesh_r3, [&](const std::string& p) { export_obj(m1, p); });
  out.write(cfg.outputs.mesh_r3_transformed, [&](const std::string& p) { export_obj(m2, p); });

  SampleRegion region = SampleRegion::from_domain(d2);
  for (const Cplx z : pair.obstacles()) mexpr::add_unique(region.avoid, z);
  const auto pts = sample_points(region, 1000, cfg.seed);
  const std::vector<CheckReport> checks = {check_riccati(pair.W, pair.k, pair.h, pts, opts.tol_scale),
                                           check_hopf(pair, pts, opts.tol_scale)};
  print_checks(checks);

  json r;
  r["k"] = pair.k;
  r["scale"] = s;
  r["h"] = mexpr::to_string(pair.h);
  r["h_zeros"] = cplx_list_json(pair.h_zeros);
  r["h_poles"] = cplx_list_json(pair.h_poles);
  r["original"] = {{"f", mexpr::to_string(pair.W.f)}, {"g", mexpr::to_string(pair.W.g)},
                   {"punctures", cplx_list_json(pair.W.punctures)}};
  r["transformed"] = {{"f", mexpr::to_string(pair.Wt.f)},
                      {"g", mexpr::to_string(pair.Wt.g)},
                      {"punctures", cplx_list_json(pair.Wt.punctures)},
                      {"base_value", {pair.Wt.base_value.x, pair.Wt.base_value.y, pair.Wt.base_value.z}}};
  r["meshes"] = {{"mesh_r3", mesh_summary(m1)}, {"mesh_r3_transformed", mesh_summary(m2)}};
  r["checks"] = reports_json(checks);
  r["all_pass"] = all_pass(checks);
  out.report(r);
  std::printf("meshes: %zu and %zu vertices\n", m1.vertices.size(), m2.vertices.size());
  return all_pass(checks) ? kOk : kCheckFailure;
}

int cmd_flatfront(const RunConfig& cfg, const Options& opts) {
  FlatFrontData ff;
  std::string route;
  if (cfg.front) {
    const FrontSpec& f = *cfg.front;
    ff = FlatFrontData::normalized(mexpr::parse(f.gp), mexpr::parse(f.gm), f.zb, f.punctures);
    if (f.c0) ff.c0 = *f.c0;
    if (f.c1) ff.c1 = *f.c1;
    route = "explicit";
  } else {
    ff = build_pair(cfg).front();
    route = "pair";
  }
  OutputSet out(cfg, opts, "flatfront");
  DomainSpec d = cfg.domain;
  d.punctures = ff.obstacles();
  double max_ball = 0.0;
  const SurfaceMesh mesh = build_mesh(
      [&](Cplx z) {
        const auto lf = std::make_shared<LocalFront>(ff, z);
        const FrontEvaluator eval = [lf](Cplx w) { return (*lf)(w); };
        const R3Vec p = to_ball((*lf)(z).X);
        max_ball = std::max(max_ball, norm(p));
        return VertexEval{p, is_singular(eval, z), area_density(eval, z)};
      },
      sample_grid(d));
  out.write(cfg.outputs.mesh_h3_ball, [&](const std::string& p) { export_obj(mesh, p); });

  std::vector<CheckReport> checks = {check_hyperboloid(ff, mesh.params, opts.tol_scale),
                                     check_symmetry(ff, mesh.params, opts.tol_scale)};
  CheckReport ball{"inside_ball", max_ball, 1.0, static_cast<int>(mesh.vertices.size()), 0, max_ball < 1.0};
  checks.push_back(ball);
  print_checks(checks);

  json r;
  r["route"] = route;
  r["gp"] = mexpr::to_string(ff.gp);
  r["gm"] = mexpr::to_string(ff.gm);
  r["zb"] = cplx_json(ff.zb);
  r["c0"] = cplx_json(ff.c0);
  r["c1"] = cplx_json(ff.c1);
  r["mesh_h3_ball"] = mesh_summary(mesh);
  r["checks"] = reports_json(checks);
  r["all_pass"] = all_pass(checks);
  out.report(r);
  std::printf("mesh: %zu vertices, %zu singular\n", mesh.vertices.size(),
              static_cast<std::size_t>(std::count(mesh.singular.begin(), mesh.singular.end(), true)));
  return all_pass(checks) ? kOk : kCheckFailure;
}

int cmd_verify(const RunConfig& cfg, const Options& opts) {
  OutputSet out(cfg, opts, "verify");
  std::vector<CheckReport> checks;
  std::optional<RiccatiSolution> trace;
  if (cfg.numeric_mode()) {
    const WeierstrassData w = cfg.weierstrass();
    RiccatiSolution sol;
    checks.push_back(check_riccati_numeric(w, *cfg.riccati.k, cfg.riccati.numeric->z0, cfg.numeric_h0(),
                                           cfg.numeric_path(), opts.tol_scale, &sol));
    if (!sol.samples.empty()) trace = sol;
    CheckReport periods{"periods_numeric", 0.0, tier::quadrature * opts.tol_scale, 0, 0, false};
    for (const LoopSpec& l : loops_for(cfg, numeric_punctures(cfg))) {
      ++periods.points_tested;
      try {
        periods.max_residual = std::max(periods.max_residual, std::abs(numeric_loop_period(cfg, w, l).real()));
      } catch (const std::exception&) {
        ++periods.failures;
      }
    }
    periods.pass = periods.failures == 0 && periods.points_tested > 0 && periods.max_residual < periods.tolerance;
    checks.push_back(periods);
  } else {
    const RibaucourPair pair = build_pair(cfg);
    VerifyOptions vo;
    vo.seed = cfg.seed;
    vo.tol_scale = opts.tol_scale;
    const auto loops = loops_for(cfg, pair.Wt.punctures);
    checks = run_suite(pair, loops, SampleRegion::from_domain(cfg.domain), cfg.domain, vo);
    if (cfg.riccati.numeric) {
      RiccatiSolution sol;
      checks.push_back(check_riccati_against(pair.W, cfg.closed_form(), cfg.riccati.numeric->z0, cfg.numeric_path(),
                                             opts.tol_scale, &sol));
      if (!sol.samples.empty()) trace = sol;
    }
    std::sort(checks.begin(), checks.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  }
  if (trace) out.write(cfg.outputs.traces, [&](const std::string& p) { export_csv(trace_table(*trace), p); });
  print_checks(checks);
  json r;
  r["checks"] = reports_json(checks);
  r["all_pass"] = all_pass(checks);
  if (trace) r["riccati_trace"] = {{"samples", trace->samples.size()}, {"chart_switches", trace->switches}};
  out.report(r);
  return all_pass(checks) ? kOk : kCheckFailure;
}

int cmd_periods(const RunConfig& cfg, const Options& opts) {
  OutputSet out(cfg, opts, "periods");
  const double tol = tier::quadrature * opts.tol_scale;
  json rows = json::array();
  std::printf("%-26s %-8s %-24s %-24s %s\n", "center", "radius", "integral", "front_integral", "well_defined");
  auto emit = [&](const LoopSpec& l, Cplx v, std::optional<Cplx> fv) {
    json row = {{"center", cplx_json(l.center)},
                {"radius", l.radius},
                {"orientation", l.orientation},
                {"integral", cplx_json(v)},
                {"abs_real", std::abs(v.real())},
                {"well_defined", std::abs(v.real()) < tol}};
    if (fv) row["front_integral"] = cplx_json(*fv);
    rows.push_back(row);
    std::printf("(%11.6g,%11.6g)  %-8.3g (%10.3g,%10.3g)  ", l.center.real(), l.center.imag(), l.radius, v.real(),
                v.imag());
    if (fv) std::printf("(%10.3g,%10.3g)  ", fv->real(), fv->imag());
    else std::printf("%-24s  ", "-");
    std::printf("%s\n", std::abs(v.real()) < tol ? "yes" : "no");
  };
  if (cfg.numeric_mode()) {
    const WeierstrassData w = cfg.weierstrass();
    for (const LoopSpec& l : loops_for(cfg, numeric_punctures(cfg))) emit(l, numeric_loop_period(cfg, w, l), {});
  } else {
    const RibaucourPair pair = build_pair(cfg);
    const FlatFrontData ff = pair.front();
    const SmoothMap gp = SmoothMap::holomorphic(ff.gp);
    const SmoothMap gm = SmoothMap::holomorphic(ff.gm);
    for (const LoopSpec& l : loops_for(cfg, pair.Wt.punctures))
      emit(l, period(pair.W, pair.h, l), existence_period(gp, gm, l));
  }
  json r;
  r["tolerance"] = tol;
  r["loops"] = rows;
  out.report(r);
  return kOk;
}

int cmd_classify(const RunConfig& cfg, const Options& opts) {
  const RibaucourPair pair = build_pair(cfg);
  OutputSet out(cfg, opts, "classify");
  json rows = json::array();
  std::printf("%-28s %-6s %-6s %-6s %s\n", "point", "ord_f", "ord_g", "ord_h", "type");
  for (const EndClass& e : classify_all(pair)) {
    json row = {{"at_infinity", e.at_infinity}, {"ord_f", e.ord_f}, {"ord_g", e.ord_g},
                {"ord_h", e.ord_h},             {"type", to_string(e.tag)}};
    row["point"] = e.at_infinity ? json("infinity") : cplx_json(e.point);
    rows.push_back(row);
    char where[64];
    if (e.at_infinity) std::snprintf(where, sizeof where, "infinity");
    else std::snprintf(where, sizeof where, "(%.6g, %.6g)", e.point.real(), e.point.imag());
    std::printf("%-28s %-6d %-6d %-6d %s\n", where, e.ord_f, e.ord_g, e.ord_h, to_string(e.tag).c_str());
  }
  json r;
  r["ends"] = rows;
  out.report(r);
  return kOk;
}

int run(int argc, char** argv) {
  CLI::App app{"Ribaucour transforms of minimal surfaces and their flat fronts in hyperbolic space"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Options opts;
  std::uint64_t seed = 0;
  using Command = std::function<int(const RunConfig&, const Options&)>;
  std::vector<std::pair<CLI::App*, Command>> commands;
  auto add = [&](const char* name, const char* help, Command fn) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opts.config, "run configuration (JSON)")->required();
    sub->add_option("--out", opts.out, "output directory (created if missing)");
    sub->add_option("--seed", seed, "sampling seed (overrides the config)");
    sub->add_option("--tol-scale", opts.tol_scale, "multiplier applied to every check tolerance");
    sub->add_option("--loops", opts.loops, "JSON file with loops replacing the config's");
    commands.emplace_back(sub, std::move(fn));
  };
  add("transform", "build the Ribaucour pair and export both meshes", cmd_transform);
  add("flatfront", "build the flat front and export its Poincare-ball mesh", cmd_flatfront);
  add("verify", "run the full verification suite", cmd_verify);
  add("periods", "loop integrals of the period condition", cmd_periods);
  add("classify", "end classification of the transformed surface", cmd_classify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsageError;
  }
  for (auto& [sub, fn] : commands) {
    if (!sub->parsed()) continue;
    if (sub->count("--seed")) opts.seed = seed;
    try {
      const RunConfig cfg = resolve(opts);
      std::error_code ec;
      fs::create_directories(opts.out, ec);
      if (ec) throw IoError("cannot create " + opts.out + ": " + ec.message());
      return fn(cfg, opts);
    } catch (const ConfigError& e) {
      std::fprintf(stderr, "config error: %s\n", e.what());
      return kUsageError;
    } catch (const mexpr::ParseError& e) {
      std::fprintf(stderr, "expression error: %s\n", e.what());
      return kUsageError;
    } catch (const IoError& e) {
      std::fprintf(stderr, "i/o error: %s\n", e.what());
      return kUsageError;
    } catch (const std::invalid_argument& e) {
      std::fprintf(stderr, "invalid input: %s\n", e.what());
      return kUsageError;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "numerical failure: %s\n", e.what());
      return kNumericalFailure;
    }
  }
  return kUsageError;
}

}  // namespace ribfront::cli
