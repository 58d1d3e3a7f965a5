/*
 * Copyright 2026 The ldphull Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include "ldphull/cli.hpp"

#include "ldphull/errors.hpp"
#include "ldphull/io.hpp"
#include "ldphull/legendre.hpp"
#include "ldphull/levelset.hpp"
#include "ldphull/montecarlo.hpp"
#include "ldphull/oracle.hpp"
#include "ldphull/polyline.hpp"
#include "ldphull/solver.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

namespace ldphull {

namespace {

using nlohmann::json;

struct Flags {
  std::string dist;
  std::string output;
  std::string output_dir = ".";
  std::string input;
  std::string curve = "oracle_curve.csv";
  std::string orientation = "ccw";
  std::string ell = "1,0";
  std::string tau = "+";
  std::string mode = "tilted";
  double area = 0.0;
  double alpha = 0.0;
  double eps = 0.0;
  double feas_tol = 1e-6;
  double stat_tol = 1e-4;
  int samples = 0;
  int directions = 256;
  int segments = 128;
  int steps = 0;
  int batches = 10;
  int max_outer = 60;
  std::uint64_t seed = 1;
  bool arc = false;
  std::optional<int> threads;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::ofstream open_output(const std::string& path) {
  std::ofstream file(path);
  if (!file) throw IoError("cannot write " + path);
  return file;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  auto file = open_output(path);
  file << text;
  if (!file) throw IoError("cannot write " + path);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

const char* tau_name(Side side) { return side == Side::Positive ? "+" : "-"; }

Vec2 parse_vec2(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument(text);
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::logic_error&) {
    throw ParseError("expected X,Y but got \"" + text + "\"");
  }
}

// The model a rate result was actually computed for.
IncrementModel solved_model(const IncrementModel& model, const RateResult& r) {
  return r.epsilon > model.epsilon() ? regularize(model, r.epsilon - model.epsilon())
                                     : model;
}

double rate_of_velocity(const IncrementModel& model, const Candidate& c,
                        const Vec2& v) {
  if (c.kind == CandidateKind::Graph) return rate_1d(model, v.y());
  return rate(model, v);
}

json candidate_json(const Candidate& c) {
  json j;
  j["kind"] = c.kind == CandidateKind::Graph ? "graph" : "level_arc";
  j["tau"] = tau_name(c.side);
  j["multiplier"] = c.multiplier;
  j["energy"] = c.energy;
  j["energy_trapezoid"] = c.trajectory.energy;
  j["hull_area"] = convex_hull_area(c.trajectory.points);
  j["signed_area"] = signed_area_integral(c.trajectory);
  if (c.kind == CandidateKind::LevelArc) {
    j["alpha"] = c.alpha;
    j["ell"] = {c.ell.x(), c.ell.y()};
    j["lambda"] = c.mass;
    j["half_area"] = c.half_area;
  } else {
    j["u"] = c.mass;
  }
  return j;
}

json rate_json(const RateResult& r) {
  json j;
  j["a"] = r.a;
  j["epsilon"] = r.epsilon;
  j["jA"] = r.jA;
  j["a_max"] = r.a_max ? json(*r.a_max) : json(nullptr);
  j["candidates"] = json::array();
  for (const auto& c : r.candidates) j["candidates"].push_back(candidate_json(c));
  return j;
}

SolverOptions solver_options(const Flags& f) {
  SolverOptions opts;
  opts.samples = f.samples;
  opts.directions = f.directions;
  opts.eps = f.eps;
  return opts;
}

int cmd_rate(const Flags& f, json config, bool trajectories, std::ostream& out) {
  const auto model = load_distribution(f.dist);
  config["dist"] = model_to_json(model);
  const auto result = rate_of_area(model, f.area, solver_options(f));
  json j = rate_json(result);

  if (trajectories) {
    const auto solved = solved_model(model, result);
    std::filesystem::create_directories(f.output_dir);
    for (std::size_t k = 0; k < result.candidates.size(); ++k) {
      const auto& c = result.candidates[k];
      const auto path = (std::filesystem::path(f.output_dir) /
                         ("candidate_" + std::to_string(k) + ".csv"))
                            .string();
      auto file = open_output(path);
      file << "t,h1,h2,dh1,dh2,I\n";
      const auto& traj = c.trajectory;
      for (std::size_t i = 0; i < traj.size(); ++i) {
        file << format_double(traj.times[i]) << ','
             << format_double(traj.points[i].x()) << ','
             << format_double(traj.points[i].y()) << ','
             << format_double(traj.derivs[i].x()) << ','
             << format_double(traj.derivs[i].y()) << ','
             << format_double(rate_of_velocity(solved, c, traj.derivs[i]))
             << '\n';
      }
      if (!file) throw IoError("cannot write " + path);
      j["candidates"][k]["csv"] = path;
    }
  }
  j["config"] = config;
  emit(dump(j), f.output, out);
  return 0;
}

int cmd_levelset(const Flags& f, std::ostream& out) {
  auto model = load_distribution(f.dist);
  if (f.eps > 0.0) model = regularize(model, f.eps);
  std::ostringstream csv;
  if (f.arc) {
    if (f.tau != "+" && f.tau != "-") throw ParseError("--tau must be + or -");
    const Side side = f.tau == "+" ? Side::Positive : Side::Negative;
    const auto arc =
        arc_parametrization(model, f.alpha, parse_vec2(f.ell), side, f.samples);
    csv << "t,gx,gy,dgx,dgy\n";
    for (std::size_t i = 0; i < arc.times.size(); ++i) {
      csv << format_double(arc.times[i]) << ','
          << format_double(arc.samples[i].x()) << ','
          << format_double(arc.samples[i].y()) << ','
          << format_double(arc.derivs[i].x()) << ','
          << format_double(arc.derivs[i].y()) << '\n';
    }
  } else {
    write_points_csv(csv, trace_level(model, f.alpha, f.samples).vertices());
  }
  emit(csv.str(), f.output, out);
  return 0;
}

int cmd_convexify(const Flags& f, std::ostream& out) {
  std::ifstream in(f.input);
  if (!in) throw IoError("cannot read " + f.input);
  const auto points = read_points_csv(in);
  PolygonalLine line = [&] {
    try {
      return PolygonalLine(points);
    } catch (const std::invalid_argument& e) {
      throw ParseError(f.input + ": " + e.what());
    }
  }();
  const auto orientation = f.orientation == "cw" ? Orientation::Clockwise
                                                 : Orientation::Counterclockwise;
  std::ostringstream csv;
  write_points_csv(csv, convexify(line, orientation).vertices());
  emit(csv.str(), f.output, out);
  return 0;
}

int cmd_oracle(const Flags& f, json config, std::ostream& out) {
  auto model = load_distribution(f.dist);
  config["dist"] = model_to_json(model);
  if (f.eps > 0.0 && support_class(model).tag != SupportTag::FullPlane) {
    model = regularize(model, f.eps);
  }
  OracleOptions opts;
  opts.feas_tol = f.feas_tol;
  opts.stat_tol = f.stat_tol;
  opts.max_outer = f.max_outer;
  const auto result = minimize_discrete(model, f.area, f.segments, opts);

  auto file = open_output(f.curve);
  write_points_csv(file, result.curve.points());
  if (!file) throw IoError("cannot write " + f.curve);

  json j;
  j["energy"] = result.curve.energy;
  j["signed_area"] = result.curve.area;
  j["feasibility"] = result.feasibility;
  j["stationarity"] = result.stationarity;
  j["outer_iterations"] = result.outer_iterations;
  j["curve_csv"] = f.curve;
  j["config"] = config;
  emit(dump(j), f.output, out);
  return 0;
}

int cmd_simulate(const Flags& f, json config, std::ostream& out) {
  const auto model = load_distribution(f.dist);
  config["dist"] = model_to_json(model);
  if (f.mode != "naive" && f.mode != "tilted") {
    throw ParseError("--mode must be naive or tilted");
  }
  EstimateOptions opts;
  opts.mode = f.mode == "naive" ? SamplingMode::Naive : SamplingMode::Tilted;
  opts.samples = f.samples;
  opts.seed = f.seed;
  opts.threads = resolve_threads(f.threads);
  opts.batches = f.batches;

  const auto family =
      opts.mode == SamplingMode::Naive
          ? std::vector<std::vector<Vec2>>{std::vector<Vec2>(f.steps, Vec2::Zero())}
          : optimal_tilt_family(model, f.area, f.steps, f.eps);
  const auto est = estimate_with_tilt_family(model, f.area, family, opts);

  json j;
  j["rate_estimate"] = est.zero_hits ? json(nullptr) : json(est.rate_estimate);
  j["stderr"] = est.zero_hits ? json(nullptr) : json(est.stderr);
  j["probability"] = est.probability;
  j["probability_stderr"] = est.probability_stderr;
  j["hits"] = est.hits;
  j["samples"] = est.samples;
  j["zero_hits"] = est.zero_hits;
  j["tilt_components"] = family.size();
  j["config"] = config;
  emit(dump(j), f.output, out);
  return 0;
}

json config_json(const std::string& name, const Flags& f) {
  json c;
  c["subcommand"] = name;
  if (name == "convexify") {
    c["input"] = f.input;
    c["orientation"] = f.orientation;
    return c;
  }
  c["dist_path"] = f.dist;
  c["eps"] = f.eps;
  c["samples"] = f.samples;
  if (name == "levelset") {
    c["alpha"] = f.alpha;
    c["arc"] = f.arc;
    c["ell"] = f.ell;
    c["tau"] = f.tau;
    return c;
  }
  c["area"] = f.area;
  if (name == "rate" || name == "trajectory") {
    c["directions"] = f.directions;
    if (name == "trajectory") c["output_dir"] = f.output_dir;
  } else if (name == "oracle") {
    c["segments"] = f.segments;
    c["curve"] = f.curve;
    c["feas_tol"] = f.feas_tol;
    c["stat_tol"] = f.stat_tol;
    c["max_outer"] = f.max_outer;
  } else if (name == "simulate") {
    c["steps"] = f.steps;
    c["mode"] = f.mode;
    c["seed"] = f.seed;
    c["batches"] = f.batches;
  }
  return c;
}

json error_json(const std::string& kind, const std::string& message) {
  return {{"error", kind}, {"message", message}};
}

}  // namespace

int resolve_threads(std::optional<int> flag) {
  if (flag && *flag > 0) return *flag;
  if (const char* env = std::getenv("LDP_HULL_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0 && n < 1 << 16) {
      return static_cast<int>(n);
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Large deviations of the convex-hull area of planar random walks"};
  app.require_subcommand(1);
  app.fallthrough();  // --threads may follow the subcommand
  Flags f;
  app.add_option("--threads", f.threads,
                 "worker threads (default: $LDP_HULL_THREADS, else all cores)")
      ->check(CLI::PositiveNumber);

  auto add_dist = [&](CLI::App* sub) {
    sub->add_option("--dist", f.dist, "distribution spec (JSON)")->required();
  };
  auto add_area = [&](CLI::App* sub) {
    sub->add_option("--area", f.area, "target hull area a > 0")
        ->required()
        ->check(CLI::PositiveNumber);
  };
  auto add_output = [&](CLI::App* sub, const char* what) {
    sub->add_option("--output,-o", f.output, what);
  };
  auto add_eps = [&](CLI::App* sub) {
    sub->add_option("--eps", f.eps,
                    "Gaussian smoothing for models without full-plane support")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
  };

  std::vector<CLI::App*> rate_like;
  for (const char* name : {"rate", "trajectory"}) {
    auto* sub = app.add_subcommand(
        name, std::string(name) == "rate"
                  ? "solve for J_A(a) and its optimal trajectories (JSON)"
                  : "as rate, plus per-candidate CSV t,h1,h2,dh1,dh2,I");
    add_dist(sub);
    add_area(sub);
    sub->add_option("--directions", f.directions, "half-circle direction scan size")
        ->capture_default_str()
        ->check(CLI::Range(2, 1 << 20));
    sub->add_option("--samples", f.samples, "trajectory grid size")
        ->default_str("1024")
        ->check(CLI::Range(2, 1 << 24));
    add_eps(sub);
    add_output(sub, "JSON output path (default: stdout)");
    rate_like.push_back(sub);
  }
  rate_like[1]
      ->add_option("--output-dir", f.output_dir, "directory for candidate CSVs")
      ->capture_default_str();

  auto* levelset = app.add_subcommand("levelset", "trace K^{-1}(alpha) as CSV");
  add_dist(levelset);
  levelset->add_option("--alpha", f.alpha, "level alpha > 0")
      ->required()
      ->check(CLI::PositiveNumber);
  levelset->add_option("--samples", f.samples, "ray count, or arc grid size")
      ->default_str("2048")
      ->check(CLI::Range(2, 1 << 24));
  levelset->add_flag("--arc", f.arc, "emit the arc t,gx,gy,dgx,dgy instead");
  levelset->add_option("--ell", f.ell, "arc direction X,Y")->capture_default_str();
  levelset->add_option("--tau", f.tau, "arc side + or -")->capture_default_str();
  add_eps(levelset);
  add_output(levelset, "CSV output path (default: stdout)");

  auto* convex = app.add_subcommand("convexify", "convexify a polygonal line (CSV x,y)");
  convex->add_option("--input", f.input, "CSV of vertices")->required();
  convex->add_option("--orientation", f.orientation, "ccw or cw")
      ->capture_default_str()
      ->check(CLI::IsMember({"ccw", "cw"}));
  add_output(convex, "CSV output path (default: stdout)");

  auto* oracle = app.add_subcommand("oracle", "discretized brute-force minimizer");
  add_dist(oracle);
  add_area(oracle);
  oracle->add_option("--segments", f.segments, "segment count n >= 8")
      ->capture_default_str()
      ->check(CLI::Range(8, 1 << 20));
  oracle->add_option("--curve", f.curve, "CSV path for the optimal curve")
      ->capture_default_str();
  oracle->add_option("--feas-tol", f.feas_tol, "constraint tolerance")
      ->capture_default_str();
  oracle->add_option("--stat-tol", f.stat_tol, "scaled stationarity tolerance")
      ->capture_default_str();
  oracle->add_option("--max-outer", f.max_outer, "augmented Lagrangian iterations")
      ->capture_default_str();
  add_eps(oracle);
  add_output(oracle, "JSON output path (default: stdout)");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of the decay rate");
  add_dist(simulate);
  add_area(simulate);
  simulate->add_option("--steps", f.steps, "walk length n")
      ->required()
      ->check(CLI::Range(1, 1 << 24));
  simulate->add_option("--samples", f.samples, "number of walks")
      ->default_str("100000")
      ->check(CLI::Range(2, 1 << 30));
  simulate->add_option("--mode", f.mode, "naive or tilted")
      ->capture_default_str()
      ->check(CLI::IsMember({"naive", "tilted"}));
  simulate->add_option("--seed", f.seed, "PRNG seed")->capture_default_str();
  simulate->add_option("--batches", f.batches, "batches for the standard error")
      ->capture_default_str()
      ->check(CLI::Range(2, 1 << 20));
  add_eps(simulate);
  add_output(simulate, "JSON output path (default: stdout)");

  std::vector<const char*> argv{"ldphull"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << dump(error_json("UsageError", e.what()));
    return 1;
  }

  auto* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  if (f.samples == 0) {
    f.samples = name == "simulate" ? 100000 : name == "levelset" ? 2048 : 1024;
  }

  const json config = config_json(name, f);

  try {
    if (name == "rate") return cmd_rate(f, config, false, out);
    if (name == "trajectory") return cmd_rate(f, config, true, out);
    if (name == "levelset") return cmd_levelset(f, out);
    if (name == "convexify") return cmd_convexify(f, out);
    if (name == "oracle") return cmd_oracle(f, config, out);
    return cmd_simulate(f, config, out);
  } catch (const Error& e) {
    json j = error_json(std::string(to_string(e.kind())), e.what());
    if (e.a_max()) j["a_max"] = *e.a_max();
    err << dump(j);
    return 2;
  } catch (const ParseError& e) {
    err << dump(error_json("ParseError", e.what()));
    return 1;
  } catch (const IoError& e) {
    err << dump(error_json("IoError", e.what()));
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    err << dump(error_json("IoError", e.what()));
    return 1;
  } catch (const std::invalid_argument& e) {
    err << dump(error_json("InvalidArgument", e.what()));
    return 1;
  }
}

}  // namespace ldphull
