#include <fstream>
#include <memory>
#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spherevol/bundle_geometry.hpp"
#include "spherevol/errors.hpp"
#include "spherevol/grid_field.hpp"
#include "spherevol/index_bounds.hpp"
#include "spherevol/minimizers.hpp"
#include "spherevol/surface_mesh.hpp"

namespace py = pybind11;
using namespace spherevol;

namespace {

using release_gil = py::call_guard<py::gil_scoped_release>;

// Python callables are evaluated from worker threads, so the field holds
// them through a shared_ptr (copies never touch Python reference counts)
// and takes the GIL around each call.
AngleField from_callable(py::function theta, int winding) {
  std::shared_ptr<py::function> fn(new py::function(std::move(theta)), [](py::function* p) {
    py::gil_scoped_acquire gil;
    delete p;
  });
  return AngleField(
      [fn](double a, double b) {
        py::gil_scoped_acquire gil;
        return (*fn)(a, b).cast<double>();
      },
      winding);
}

QuadratureConfig quad_config(int n_alpha, int gl_order, int n_beta, double rel_tol) {
  QuadratureConfig cfg;
  cfg.n_alpha = n_alpha;
  cfg.gl_order = gl_order;
  cfg.n_beta = n_beta;
  cfg.rel_tol = rel_tol;
  return cfg;
}

py::dict topology_dict(const MeshTopology& t) {
  py::dict d;
  d["vertices"] = t.vertices;
  d["edges"] = t.edges;
  d["faces"] = t.faces;
  d["euler"] = t.euler;
  d["degenerate_faces"] = t.degenerate_faces;
  d["boundary_edges"] = t.boundary_edges;
  d["nonmanifold_edges"] = t.nonmanifold_edges;
  d["closed"] = t.closed;
  d["orientable"] = t.orientable;
  d["components"] = t.components;
  return d;
}

py::dict check_dict(const CheckResult& r) {
  py::dict d;
  d["passed"] = r.passed;
  d["samples"] = r.samples;
  d["max_error"] = r.max_error;
  d["detail"] = r.detail;
  d["witness"] = r.witness ? py::cast(*r.witness) : py::none();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Volume of unit vector fields on the punctured sphere";

  auto base = py::register_exception<Error>(m, "SpherevolError", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<NotConverged>(m, "NotConverged", base.ptr());
  py::register_exception<UnwrapAmbiguous>(m, "UnwrapAmbiguous", base.ptr());
  py::register_exception<PoincareHopfViolation>(m, "PoincareHopfViolation", base.ptr());
  py::register_exception<ChainViolation>(m, "ChainViolation", base.ptr());
  py::register_exception<LineSearchStalled>(m, "LineSearchStalled", base.ptr());
  py::register_exception<DegenerateMetric>(m, "DegenerateMetric", base.ptr());

  py::class_<AngleField>(m, "AngleField")
      .def_static("canonical", &canonical_field, py::arg("k"), py::arg("theta0") = kPi / 2)
      .def_static("perturbed", &perturbed_field, py::arg("k"), py::arg("amplitude"),
                  py::arg("seed"))
      .def_static("from_callable", &from_callable, py::arg("theta"), py::arg("winding"),
                  "Field from theta(alpha, beta); partials by central differences.")
      .def_static(
          "from_grid_json",
          [](const std::string& text) { return GridField::from_json(text).to_angle_field(); },
          py::arg("text"))
      .def("theta", &AngleField::theta, py::arg("alpha"), py::arg("beta"))
      .def_property_readonly("winding", &AngleField::winding)
      .def("partials",
           [](const AngleField& f, double a, double b) {
             const AnglePartials d = f.partials(a, b);
             return py::make_tuple(d.d_alpha, d.d_beta);
           })
      .def("mirrored", &AngleField::mirrored)
      .def("offset", &AngleField::offset)
      .def("rotated_about_z", &AngleField::rotated_about_z)
      .def("__repr__", [](const AngleField& f) {
        std::ostringstream s;
        s << "<AngleField winding=" << f.winding() << ">";
        return s.str();
      });

  m.def(
      "volume",
      [](const AngleField& f, int n_alpha, int gl_order, int n_beta, double rel_tol) {
        VolumeResult r;
        {
          py::gil_scoped_release nogil;
          r = volume(f, quad_config(n_alpha, gl_order, n_beta, rel_tol));
        }
        py::dict d;
        d["value"] = r.value;
        d["error"] = r.error_estimate;
        d["converged"] = r.converged;
        d["per_cutoff"] = r.per_cutoff;
        return d;
      },
      py::arg("field"), py::arg("n_alpha") = 32, py::arg("gl_order") = 12,
      py::arg("n_beta") = 64, py::arg("rel_tol") = 1e-6);

  m.def("lower_bound", &lower_bound, py::arg("k"));
  m.def("ellipse_length", &ellipse_length, py::arg("k"));
  m.def("ellipse_length_agm", &ellipse_length_agm, py::arg("k"));
  m.def("complete_elliptic_e", &complete_elliptic_e, py::arg("m"));
  m.def("closed_form_volume", &closed_form_volume, py::arg("k"));
  m.def("connection_pullback_integral", &connection_pullback_integral, py::arg("field"),
        py::arg("alpha"), py::arg("n_beta") = 512, release_gil());

  m.def(
      "poincare_indices",
      [](const AngleField& f) {
        IndexReport r;
        {
          py::gil_scoped_release nogil;
          r = index_report(f);
        }
        return py::make_tuple(r.index_north, r.index_south);
      },
      py::arg("field"));

  m.def(
      "verify_bound",
      [](const AngleField& f) {
        BoundReport r;
        {
          py::gil_scoped_release nogil;
          r = verify_bound(f);
        }
        py::dict d;
        d["k"] = r.k;
        d["volume"] = r.volume;
        d["error"] = r.error_estimate;
        d["bound"] = r.bound;
        d["margin"] = r.margin;
        d["violation"] = r.violation;
        d["beyond_stated_hypothesis"] = r.beyond_stated_hypothesis;
        return d;
      },
      py::arg("field"));

  m.def(
      "audit_chain",
      [](const AngleField& f, int k) {
        ChainAudit a;
        {
          py::gil_scoped_release nogil;
          a = audit_chain(f, k);
        }
        py::dict d;
        d["values"] = a.values;
        d["errors"] = a.errors;
        d["tolerance"] = a.tolerance;
        d["monotone"] = a.monotone();
        d["all_equal"] = a.all_equal();
        d["first_violation"] = a.first_violation ? py::cast(*a.first_violation) : py::none();
        d["mirrored"] = a.mirrored;
        return d;
      },
      py::arg("field"), py::arg("k"));

  m.def(
      "mean_curvature",
      [](const AngleField& f, double alpha, double beta, double h, bool richardson) {
        py::gil_scoped_release nogil;
        return mean_curvature(f, alpha, beta, h, richardson);
      },
      py::arg("field"), py::arg("alpha"), py::arg("beta"), py::arg("h") = 1e-3,
      py::arg("richardson") = true);

  m.def(
      "sup_mean_curvature",
      [](const AngleField& f, int n_alpha, int n_beta, double h, double collar) {
        py::gil_scoped_release nogil;
        return mean_curvature_scan(f, n_alpha, n_beta, h, collar).sup_abs_h;
      },
      py::arg("field"), py::arg("n_alpha") = 40, py::arg("n_beta") = 160, py::arg("h") = 1e-3,
      py::arg("collar") = 0.05);

  m.def(
      "ruled_decomposition_check",
      [](int k, int n, std::uint64_t seed) { return check_dict(ruled_decomposition_check(k, n, seed)); },
      py::arg("k"), py::arg("n_samples") = 10000, py::arg("seed") = 1);
  m.def(
      "immersion_rank_check", [](int k, int n) { return check_dict(immersion_rank_check(k, n)); },
      py::arg("k"), py::arg("n_samples") = 10000);

  py::class_<SurfaceMesh>(m, "SurfaceMesh")
      .def_property_readonly("n_vertices", [](const SurfaceMesh& s) { return s.vertices.size(); })
      .def_property_readonly("n_faces", [](const SurfaceMesh& s) { return s.faces.size(); })
      .def("topology", [](const SurfaceMesh& s) { return topology_dict(analyze_topology(s)); })
      .def("area", &surface_area)
      .def("write_off", [](const SurfaceMesh& s, const std::string& path) {
        std::ofstream out(path);
        if (!out) throw InvalidArgument("cannot write " + path);
        write_off(s, out);
      });
  m.def("graph_surface_mesh", &graph_surface_mesh, py::arg("k"), py::arg("n_alpha"),
        py::arg("n_beta"), release_gil());

  m.def(
      "optimize",
      [](int k, int n_alpha, int n_beta, double noise, std::uint64_t seed, double grad_tol,
         int max_iters) {
        OptimizeResult r{GridField(2, 3, 0), {}, 0.0, 0, false, 0.0, 0.0};
        {
          py::gil_scoped_release nogil;
          OptimizeOptions opts;
          opts.grad_tol = grad_tol;
          opts.max_iters = max_iters;
          r = optimize_field(k, noisy_canonical_grid(k, n_alpha, n_beta, noise, seed), opts);
        }
        py::dict d;
        d["trace"] = r.trace;
        d["bound"] = r.bound;
        d["tol_disc"] = r.tol_disc;
        d["iterations"] = r.iterations;
        d["converged"] = r.converged;
        d["grad_norm"] = r.grad_norm;
        d["grid_json"] = r.field.to_json();
        return d;
      },
      py::arg("k"), py::arg("n_alpha") = 16, py::arg("n_beta") = 32, py::arg("noise") = 0.2,
      py::arg("seed") = 1, py::arg("grad_tol") = 1e-5, py::arg("max_iters") = 5000);
}
