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


#include "ldphull/errors.hpp"
#include "ldphull/io.hpp"
#include "ldphull/legendre.hpp"
#include "ldphull/levelset.hpp"
#include "ldphull/montecarlo.hpp"
#include "ldphull/oracle.hpp"
#include "ldphull/polyline.hpp"
#include "ldphull/solver.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace ldphull;

namespace {

using Points = Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>;

Points to_array(const std::vector<Vec2>& points) {
  Points out(points.size(), 2);
  for (std::size_t i = 0; i < points.size(); ++i) out.row(i) = points[i];
  return out;
}

std::vector<Vec2> from_array(const Points& points) {
  std::vector<Vec2> out(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) out[i] = points.row(i);
  return out;
}

py::dict trajectory_dict(const Trajectory& traj) {
  py::dict d;
  d["t"] = traj.times;
  d["points"] = to_array(traj.points);
  d["derivs"] = to_array(traj.derivs);
  d["energy"] = traj.energy;
  return d;
}

py::dict rate_dict(const RateResult& r) {
  py::list candidates;
  for (const auto& c : r.candidates) {
    py::dict d;
    d["kind"] = c.kind == CandidateKind::Graph ? "graph" : "level_arc";
    d["alpha"] = c.alpha;
    d["ell"] = c.ell;
    d["tau"] = static_cast<int>(c.side);
    d["mass"] = c.mass;
    d["half_area"] = c.half_area;
    d["multiplier"] = c.multiplier;
    d["energy"] = c.energy;
    d["trajectory"] = trajectory_dict(c.trajectory);
    candidates.append(d);
  }
  py::dict d;
  d["a"] = r.a;
  d["epsilon"] = r.epsilon;
  d["jA"] = r.jA;
  d["a_max"] = r.a_max ? py::cast(*r.a_max) : py::none();
  d["candidates"] = candidates;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Large deviations of the convex-hull area of planar random walks.";

  static py::exception<Error> domain_error(m, "DomainError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = domain_error;
      py::object instance = exc(e.what());
      instance.attr("kind") = std::string(to_string(e.kind()));
      instance.attr("a_max") = e.a_max() ? py::cast(*e.a_max()) : py::none();
      PyErr_SetObject(exc.ptr(), instance.ptr());
    } catch (const ParseError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  py::class_<IncrementModel>(m, "Model")
      .def_static("gaussian", &IncrementModel::gaussian, py::arg("mean"),
                  py::arg("cov"), py::arg("eps") = 0.0)
      .def_static(
          "atoms",
          [](const Points& points, std::vector<double> probs, double eps) {
            return IncrementModel::atoms(from_array(points), std::move(probs), eps);
          },
          py::arg("points"), py::arg("probs"), py::arg("eps") = 0.0)
      .def_static(
          "graph_atoms",
          [](double mu1, std::vector<double> points, std::vector<double> probs,
             double eps) {
            return IncrementModel::graph(mu1, Atoms1D{std::move(points), std::move(probs)},
                                         eps);
          },
          py::arg("mu1"), py::arg("points"), py::arg("probs"), py::arg("eps") = 0.0)
      .def_static(
          "graph_gaussian",
          [](double mu1, double mean, double variance, double eps) {
            return IncrementModel::graph(mu1, Gaussian1D{mean, variance}, eps);
          },
          py::arg("mu1"), py::arg("mean") = 0.0, py::arg("variance") = 1.0,
          py::arg("eps") = 0.0)
      .def_static(
          "from_json",
          [](const std::string& text) {
            try {
              return model_from_json(nlohmann::json::parse(text));
            } catch (const nlohmann::json::exception& e) {
              throw ParseError(e.what());
            }
          },
          py::arg("text"))
      .def("to_json", [](const IncrementModel& model) { return model_to_json(model).dump(); })
      .def_property_readonly("eps", &IncrementModel::epsilon)
      .def_property_readonly("drift", &IncrementModel::drift)
      .def("regularize", [](const IncrementModel& model, double eps) {
        return regularize(model, eps);
      });

  m.def("cumulant", [](const IncrementModel& model, const Vec2& u) {
    return cumulant(model, u);
  });
  m.def("cumulant_gradient", [](const IncrementModel& model, const Vec2& u) {
    return cumulant_gradient(model, u);
  });
  m.def("rate", [](const IncrementModel& model, const Vec2& v) { return rate(model, v); });
  m.def("rate_gradient", [](const IncrementModel& model, const Vec2& v) {
    return rate_gradient(model, v);
  });

  m.def(
      "trace_level",
      [](const IncrementModel& model, double alpha, int m) {
        return to_array(trace_level(model, alpha, m).vertices());
      },
      py::arg("model"), py::arg("alpha"), py::arg("m") = 2048);
  m.def(
      "sublevel_area",
      [](const IncrementModel& model, double alpha) { return sublevel_area(model, alpha); });

  m.def(
      "rate_of_area",
      [](const IncrementModel& model, double a, int samples, int directions, double eps) {
        SolverOptions opts;
        opts.samples = samples;
        opts.directions = directions;
        opts.eps = eps;
        RateResult result;
        {
          py::gil_scoped_release release;
          result = rate_of_area(model, a, opts);
        }
        return rate_dict(result);
      },
      py::arg("model"), py::arg("a"), py::arg("samples") = 1024,
      py::arg("directions") = 256, py::arg("eps") = 0.0);

  m.def(
      "convexify",
      [](const Points& vertices, bool clockwise) {
        return to_array(convexify(PolygonalLine(from_array(vertices)),
                                  clockwise ? Orientation::Clockwise
                                            : Orientation::Counterclockwise)
                            .vertices());
      },
      py::arg("vertices"), py::arg("clockwise") = false);
  m.def("hull_area", [](const Points& points) {
    return hull_area_points(from_array(points));
  });

  m.def(
      "minimize_discrete",
      [](const IncrementModel& model, double a, int n) {
        OracleResult r;
        {
          py::gil_scoped_release release;
          r = minimize_discrete(model, a, n);
        }
        py::dict d;
        d["energy"] = r.curve.energy;
        d["signed_area"] = r.curve.area;
        d["feasibility"] = r.feasibility;
        d["stationarity"] = r.stationarity;
        d["velocities"] = to_array(r.curve.velocities);
        return d;
      },
      py::arg("model"), py::arg("a"), py::arg("n") = 128);

  m.def(
      "estimate_ldp",
      [](const IncrementModel& model, double a, int n, int samples,
         const std::string& mode, std::uint64_t seed, int threads) {
        if (mode != "naive" && mode != "tilted") {
          throw py::value_error("mode must be 'naive' or 'tilted'");
        }
        EstimateOptions opts;
        opts.mode = mode == "naive" ? SamplingMode::Naive : SamplingMode::Tilted;
        opts.samples = samples;
        opts.seed = seed;
        opts.threads = threads;
        LdpEstimate e;
        {
          py::gil_scoped_release release;
          e = estimate_ldp(model, a, n, opts);
        }
        py::dict d;
        d["rate_estimate"] = e.rate_estimate;
        d["stderr"] = e.stderr;
        d["probability"] = e.probability;
        d["hits"] = e.hits;
        d["samples"] = e.samples;
        d["zero_hits"] = e.zero_hits;
        return d;
      },
      py::arg("model"), py::arg("a"), py::arg("n"), py::arg("samples") = 10000,
      py::arg("mode") = "tilted", py::arg("seed") = 1, py::arg("threads") = 1);
}
