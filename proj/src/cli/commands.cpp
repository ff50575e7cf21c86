#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "field_spec.hpp"
#include "spherevol/bundle_geometry.hpp"
#include "spherevol/errors.hpp"
#include "spherevol/index_bounds.hpp"
#include "spherevol/minimizers.hpp"
#include "spherevol/surface_mesh.hpp"

#ifndef SPHEREVOL_VERSION
#define SPHEREVOL_VERSION "0.0.0"
#endif

namespace spherevol::cli {

using nlohmann::json;

namespace {

struct Request {
  std::string command;
  std::string field;
  int k = 0;
  QuadratureConfig quad;
  IndexOptions index;
  bool strict = false;

  // optimize
  unsigned long long seed = 1;
  int iters = 5000;
  int grid_alpha = 16;
  int grid_beta = 32;
  double noise = 0.2;
  double grad_tol = 1e-5;
  std::string save_grid;

  // surface
  std::string resolution = "32x128";
  bool mean_curvature = false;
  double h = 1e-3;
  double collar = 0.05;
  std::string export_path;

  // replay
  std::string replay_path;

  Format format = Format::Json;
  std::string manifest_path;
};

void add_output_flags(CLI::App* sub, Request& req) {
  sub->add_flag_callback("--json", [&req] { req.format = Format::Json; },
                         "JSON output (default)");
  sub->add_flag_callback("--csv", [&req] { req.format = Format::Csv; }, "RFC 4180 CSV output");
  sub->add_option("--manifest", req.manifest_path, "Write a run manifest to this path");
}

void add_quadrature_flags(CLI::App* sub, Request& req) {
  sub->add_option("--n-alpha", req.quad.n_alpha, "Latitude panels")->capture_default_str();
  sub->add_option("--gl-order", req.quad.gl_order, "Gauss-Legendre nodes per panel")
      ->capture_default_str();
  sub->add_option("--n-beta", req.quad.n_beta, "Longitude trapezoid points")
      ->capture_default_str();
  sub->add_option("--cutoffs", req.quad.cutoff_sequence,
                  "Decreasing pole cutoffs used for extrapolation")
      ->expected(2, 16);
  sub->add_option("--rel-tol", req.quad.rel_tol, "Relative convergence tolerance")
      ->capture_default_str();
}

void add_field_flag(CLI::App* sub, Request& req) {
  sub->add_option("--field", req.field,
                  "canonical:k | grid:<path> | perturbed:k:amplitude:seed")
      ->required();
}

std::unique_ptr<CLI::App> build_app(Request& req) {
  auto app = std::make_unique<CLI::App>("Volume of unit vector fields on the punctured sphere",
                                        "spherevol");
  app->require_subcommand(1);
  app->set_version_flag("--version", SPHEREVOL_VERSION);

  auto* volume = app->add_subcommand("volume", "Volume of a field");
  add_field_flag(volume, req);
  add_quadrature_flags(volume, req);
  add_output_flags(volume, req);

  auto* bound = app->add_subcommand("bound", "Lower bound pi L(xi_k) for indices (k, 2 - k)");
  bound->add_option("--k", req.k, "Larger pole index")->required()->check(CLI::PositiveNumber);
  add_output_flags(bound, req);

  auto* verify = app->add_subcommand("verify", "Compare a field's volume with its lower bound");
  add_field_flag(verify, req);
  add_quadrature_flags(verify, req);
  add_output_flags(verify, req);

  auto* audit = app->add_subcommand("audit", "Five-element inequality chain for a field");
  add_field_flag(audit, req);
  audit->add_option("--k", req.k, "Index class (default 1 + |winding|)");
  audit->add_flag("--strict", req.strict, "Exit nonzero when the chain increases");
  add_quadrature_flags(audit, req);
  add_output_flags(audit, req);

  auto* index = app->add_subcommand("index", "Poincare indices at both poles");
  add_field_flag(index, req);
  index->add_option("--samples", req.index.n_samples, "Samples on each circle")
      ->capture_default_str();
  index->add_option("--delta", req.index.delta0, "Circle radius around each pole")
      ->capture_default_str();
  add_output_flags(index, req);

  auto* optimize = app->add_subcommand("optimize", "Descend the discrete volume from a noisy v_k");
  optimize->add_option("--k", req.k, "Index class")->required()->check(CLI::PositiveNumber);
  optimize->add_option("--seed", req.seed, "Noise seed")->capture_default_str();
  optimize->add_option("--iters", req.iters, "Iteration cap")->capture_default_str();
  optimize->add_option("--grid-alpha", req.grid_alpha, "Grid rows")->capture_default_str();
  optimize->add_option("--grid-beta", req.grid_beta, "Grid columns")->capture_default_str();
  optimize->add_option("--noise", req.noise, "Uniform noise amplitude")->capture_default_str();
  optimize->add_option("--grad-tol", req.grad_tol, "Gradient norm tolerance")
      ->capture_default_str();
  optimize->add_option("--save-grid", req.save_grid, "Write the final GridField JSON");
  add_output_flags(optimize, req);

  auto* surface = app->add_subcommand("surface", "Closed graph surface of v_k (k even)");
  surface->add_option("--k", req.k, "Even index")->required();
  surface->add_option("--resolution", req.resolution, "NAxNB, e.g. 64x256")
      ->capture_default_str();
  surface->add_flag("--mean-curvature", req.mean_curvature, "Scan |H| over the interior");
  surface->add_option("--fd-step", req.h, "Finite-difference step")->capture_default_str();
  surface->add_option("--collar", req.collar, "Excluded polar collar")->capture_default_str();
  surface->add_option("--export", req.export_path, "Write nOFF mesh plus sidecar JSON");
  add_output_flags(surface, req);

  auto* replay = app->add_subcommand("replay", "Re-run a manifest and compare results");
  replay->add_option("path", req.replay_path, "Manifest path")->required();
  add_output_flags(replay, req);

  return app;
}

// Parses args into req; returns the app so help and errors can be printed.
std::unique_ptr<CLI::App> parse(const std::vector<std::string>& args, Request& req) {
  auto app = build_app(req);
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  app->parse(reversed);
  for (auto* sub : app->get_subcommands()) req.command = sub->get_name();
  req.quad.pole_cutoff = req.quad.cutoff_sequence.empty() ? req.quad.pole_cutoff
                                                          : req.quad.cutoff_sequence.front();
  return app;
}

// args without the output-only flags, for manifests.
std::vector<std::string> replayable_args(const std::vector<std::string>& args) {
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--json" || a == "--csv") continue;
    if (a == "--manifest") {
      ++i;
      continue;
    }
    if (a.rfind("--manifest=", 0) == 0) continue;
    kept.push_back(a);
  }
  return kept;
}

json quad_json(const QuadratureConfig& q) {
  return {{"n_alpha", q.n_alpha},
          {"gl_order", q.gl_order},
          {"n_beta", q.n_beta},
          {"cutoffs", q.cutoff_sequence},
          {"rel_tol", q.rel_tol}};
}

json header(const Request& req) { return {{"schema", 1}, {"command", req.command}}; }

json indices_json(const IndexReport& r) {
  return {{"north", r.index_north}, {"south", r.index_south},
          {"sum", r.index_north + r.index_south}};
}

std::pair<int, int> parse_resolution(const std::string& text) {
  const auto x = text.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument("no x");
    std::size_t used_a = 0, used_b = 0;
    const int na = std::stoi(text.substr(0, x), &used_a);
    const int nb = std::stoi(text.substr(x + 1), &used_b);
    if (used_a != x || used_b != text.size() - x - 1) throw std::invalid_argument("junk");
    return {na, nb};
  } catch (const std::logic_error&) {
    throw InvalidArgument("resolution must look like 64x256, got '" + text + "'");
  }
}

const char* surface_name(const MeshTopology& t) {
  if (!t.closed || t.components != 1) return "other";
  if (t.orientable) {
    if (t.euler == 2) return "sphere";
    if (t.euler == 0) return "torus";
  } else {
    if (t.euler == 1) return "projective_plane";
    if (t.euler == 0) return "klein_bottle";
  }
  return "other";
}

CommandOutcome cmd_volume(const Request& req) {
  const FieldSpec spec = parse_field_spec(req.field);
  const VolumeResult r = volume(spec.field, req.quad);
  json payload = header(req);
  payload["field"] = spec.text;
  payload["value"] = r.value;
  payload["error"] = r.error_estimate;
  payload["converged"] = r.converged;
  payload["quadrature"] = quad_json(req.quad);
  json cuts = json::array();
  for (const auto& [eps, v] : r.per_cutoff) cuts.push_back({{"cutoff", eps}, {"value", v}});
  payload["per_cutoff"] = cuts;
  return {payload, std::nullopt, std::nullopt};
}

CommandOutcome cmd_bound(const Request& req) {
  const double gl = ellipse_length(req.k);
  const double agm = ellipse_length_agm(req.k);
  json payload = header(req);
  payload["k"] = req.k;
  payload["indices"] = {{"north", req.k}, {"south", 2 - req.k}};
  payload["ellipse_axes"] = {req.k, std::abs(req.k - 2)};
  payload["ellipse_length"] = gl;
  payload["ellipse_length_agm"] = agm;
  payload["agm_difference"] = std::abs(gl - agm);
  payload["bound"] = lower_bound(req.k);
  payload["beyond_stated_hypothesis"] = req.k <= 2;
  return {payload, std::nullopt, std::nullopt};
}

CommandOutcome cmd_verify(const Request& req) {
  const FieldSpec spec = parse_field_spec(req.field);
  const BoundReport r = verify_bound(spec.field, req.quad);
  json payload = header(req);
  payload["field"] = spec.text;
  payload["k"] = r.k;
  payload["indices"] = indices_json(r.indices);
  payload["volume"] = r.volume;
  payload["error"] = r.error_estimate;
  payload["bound"] = r.bound;
  payload["margin"] = r.margin;
  payload["violation"] = r.violation;
  payload["beyond_stated_hypothesis"] = r.beyond_stated_hypothesis;
  return {payload, std::nullopt, std::nullopt};
}

CommandOutcome cmd_audit(const Request& req) {
  const FieldSpec spec = parse_field_spec(req.field);
  const int k = req.k > 0 ? req.k : spec.k;
  const ChainAudit a = audit_chain(spec.field, k, req.quad);
  static const char* names[5] = {"volume", "drop_theta2", "tilted_abs", "tilted_signed",
                                 "bound"};
  json payload = header(req);
  payload["field"] = spec.text;
  payload["k"] = a.k;
  payload["mirrored"] = a.mirrored;
  payload["beyond_stated_hypothesis"] = a.beyond_stated_hypothesis;
  json chain = json::array();
  Table table{{"position", "name", "value", "error"}, {}};
  for (int i = 0; i < 5; ++i) {
    chain.push_back({{"position", i + 1},
                     {"name", names[i]},
                     {"value", a.values[i]},
                     {"error", a.errors[i]}});
    table.rows.push_back({i + 1, names[i], a.values[i], a.errors[i]});
  }
  payload["chain"] = chain;
  payload["tolerance"] = a.tolerance;
  payload["monotone"] = a.monotone();
  payload["all_equal"] = a.all_equal();
  payload["first_violation"] = a.first_violation ? json(*a.first_violation) : json(nullptr);
  if (req.strict) a.require_monotone();
  return {payload, table, std::nullopt};
}

CommandOutcome cmd_index(const Request& req) {
  const FieldSpec spec = parse_field_spec(req.field);
  const IndexReport r = index_report(spec.field, req.index);
  json payload = header(req);
  payload["field"] = spec.text;
  payload.update(indices_json(r));
  payload["samples"] = r.samples_used;
  payload["delta"] = req.index.delta0;
  return {payload, std::nullopt, std::nullopt};
}

CommandOutcome cmd_optimize(const Request& req) {
  const GridField init =
      noisy_canonical_grid(req.k, req.grid_alpha, req.grid_beta, req.noise, req.seed);
  OptimizeOptions opts;
  opts.max_iters = req.iters;
  opts.grad_tol = req.grad_tol;
  const OptimizeResult r = optimize_field(req.k, init, opts);
  if (!req.save_grid.empty()) {
    std::ofstream f(req.save_grid);
    if (!f) throw InvalidArgument("cannot write " + req.save_grid);
    f << r.field.to_json() << '\n';
  }
  double lowest = r.trace.front();
  Table table{{"iteration", "volume"}, {}};
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    lowest = std::min(lowest, r.trace[i]);
    table.rows.push_back({static_cast<int>(i), r.trace[i]});
  }
  json payload = header(req);
  payload["k"] = req.k;
  payload["seed"] = req.seed;
  payload["grid"] = {req.grid_alpha, req.grid_beta};
  payload["noise"] = req.noise;
  payload["initial"] = r.trace.front();
  payload["final"] = r.trace.back();
  payload["bound"] = r.bound;
  payload["tol_disc"] = r.tol_disc;
  payload["relative_gap"] = (r.trace.back() - r.bound) / r.bound;
  payload["lowest_iterate"] = lowest;
  payload["iterations"] = r.iterations;
  payload["converged"] = r.converged;
  payload["grad_norm"] = r.grad_norm;
  payload["trace"] = r.trace;
  return {payload, table, req.seed};
}

CommandOutcome cmd_surface(const Request& req) {
  const auto [na, nb] = parse_resolution(req.resolution);
  const SurfaceMesh mesh = graph_surface_mesh(req.k, na, nb);
  const MeshTopology t = analyze_topology(mesh);
  const double area = surface_area(mesh);
  const double bound = lower_bound(req.k);
  json payload = header(req);
  payload["k"] = req.k;
  payload["resolution"] = {na, nb};
  payload["topology"] = {{"vertices", t.vertices},
                         {"edges", t.edges},
                         {"faces", t.faces},
                         {"euler", t.euler},
                         {"closed", t.closed},
                         {"orientable", t.orientable},
                         {"components", t.components},
                         {"surface", surface_name(t)}};
  payload["area"] = area;
  payload["bound"] = bound;
  payload["area_relative_error"] = std::abs(area - bound) / bound;
  if (req.mean_curvature) {
    const CurvatureScan scan =
        mean_curvature_scan(canonical_field(req.k, 0.0), na, nb, req.h, req.collar);
    payload["sup_abs_H"] = scan.sup_abs_h;
    payload["grid"] = {na, nb};
    payload["h"] = req.h;
    payload["collar"] = req.collar;
  }
  if (!req.export_path.empty()) {
    std::ofstream off(req.export_path);
    if (!off) throw InvalidArgument("cannot write " + req.export_path);
    write_off(mesh, off);
    std::string sidecar = req.export_path;
    const auto dot = sidecar.rfind('.');
    const auto slash = sidecar.rfind('/');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
      sidecar.erase(dot);
    }
    sidecar += ".json";
    std::ofstream side(sidecar);
    if (!side) throw InvalidArgument("cannot write " + sidecar);
    side << mesh_sidecar_json(mesh, req.k, na, nb) << '\n';
    payload["export"] = {{"mesh", req.export_path}, {"sidecar", sidecar}};
  }
  return {payload, std::nullopt, std::nullopt};
}

CommandOutcome dispatch(const Request& req) {
  if (req.command == "volume") return cmd_volume(req);
  if (req.command == "bound") return cmd_bound(req);
  if (req.command == "verify") return cmd_verify(req);
  if (req.command == "audit") return cmd_audit(req);
  if (req.command == "index") return cmd_index(req);
  if (req.command == "optimize") return cmd_optimize(req);
  if (req.command == "surface") return cmd_surface(req);
  throw InvalidArgument("unknown command " + req.command);
}

json parameters_of(const std::vector<std::string>& args) {
  // --flag value pairs; bare flags map to true.
  json params = json::object();
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i].rfind("--", 0) != 0) continue;
    const std::string key = args[i].substr(2);
    if (i + 1 < args.size() && args[i + 1].rfind("--", 0) != 0) {
      params[key] = args[++i];
    } else {
      params[key] = true;
    }
  }
  return params;
}

CommandOutcome replay(const Request& req) {
  std::ifstream in(req.replay_path);
  if (!in) throw InvalidArgument("cannot read manifest " + req.replay_path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("manifest is not valid JSON: ") + e.what());
  }
  const RunManifest m = RunManifest::from_json(doc);
  const CommandOutcome again = execute(m.argv);
  json payload = header(req);
  payload["manifest"] = req.replay_path;
  payload["replayed_command"] = m.command;
  payload["reproduced"] = again.payload == m.results;
  payload["results"] = again.payload;
  return {payload, std::nullopt, std::nullopt};
}

}  // namespace

const char* tool_version() { return SPHEREVOL_VERSION; }

json RunManifest::to_json() const {
  return {{"schema", 1},
          {"command", command},
          {"argv", argv},
          {"parameters", parameters},
          {"seed", seed ? json(*seed) : json(nullptr)},
          {"tool_version", tool_version},
          {"wall_time_s", wall_time_s},
          {"results", results}};
}

RunManifest RunManifest::from_json(const json& j) {
  try {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.argv = j.at("argv").get<std::vector<std::string>>();
    m.parameters = j.value("parameters", json::object());
    if (j.contains("seed") && !j.at("seed").is_null()) {
      m.seed = j.at("seed").get<unsigned long long>();
    }
    m.tool_version = j.value("tool_version", "");
    m.wall_time_s = j.value("wall_time_s", 0.0);
    m.results = j.at("results");
    if (m.argv.empty() || m.argv.front() != m.command) {
      throw InvalidArgument("manifest argv does not start with its command");
    }
    return m;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed manifest: ") + e.what());
  }
}

CommandOutcome execute(const std::vector<std::string>& args) {
  Request req;
  try {
    parse(args, req);
  } catch (const CLI::ParseError& e) {
    throw InvalidArgument(e.what());
  }
  if (req.command == "replay") return replay(req);
  return dispatch(req);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Request req;
  std::unique_ptr<CLI::App> app;
  try {
    app = parse(args, req);
  } catch (const CLI::CallForHelp&) {
    Request blank;
    out << build_app(blank)->help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << SPHEREVOL_VERSION << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "spherevol: " << e.what() << '\n';
    return kBadInput;
  }

  try {
    const auto start = std::chrono::steady_clock::now();
    const CommandOutcome outcome = req.command == "replay" ? replay(req) : dispatch(req);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (!req.manifest_path.empty()) {
      RunManifest m;
      m.command = req.command;
      m.argv = replayable_args(args);
      m.parameters = parameters_of(m.argv);
      m.seed = outcome.seed;
      m.tool_version = SPHEREVOL_VERSION;
      m.wall_time_s = wall;
      m.results = outcome.payload;
      std::ofstream f(req.manifest_path);
      if (!f) throw InvalidArgument("cannot write manifest " + req.manifest_path);
      f << m.to_json().dump(2) << '\n';
    }
    if (req.format == Format::Csv) {
      write_csv(outcome.payload, outcome.table, out);
    } else {
      write_json(outcome.payload, out);
    }
    out.flush();

    if (req.command == "replay" && !outcome.payload.at("reproduced").get<bool>()) {
      err << "spherevol: replay did not reproduce the recorded results\n";
      return kReplayMismatch;
    }
    return kOk;
  } catch (const NotConverged& e) {
    err << "spherevol: " << e.what() << " (value " << e.value() << ", error estimate "
        << e.error_estimate() << ")\n";
    return kNotConverged;
  } catch (const InvalidArgument& e) {
    err << "spherevol: " << e.what() << '\n';
    return kBadInput;
  } catch (const Error& e) {
    err << "spherevol: " << e.what() << '\n';
    return kModuleError;
  }
}

}  // namespace spherevol::cli
