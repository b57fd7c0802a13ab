#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>

#include "flatsc/cli.hpp"
#include "flatsc/cylinder.hpp"
#include "flatsc/rigidity.hpp"

namespace py = pybind11;
using namespace flatsc;

namespace {

// A surface with its own catalog; connections stay valid while it lives.
class PySurface {
 public:
  explicit PySurface(Surface s)
      : surface_(std::make_shared<const Surface>(std::move(s))), catalog_(std::make_shared<Catalog>(*surface_)) {}

  Scalar scalar(const std::string& text) const { return Scalar::parse(text, surface_->field()); }

  py::dict info() const {
    const SurfaceInfo i = surface_->info();
    py::dict d;
    d["genus"] = i.genus;
    d["marked_points"] = i.num_marked;
    d["stratum"] = i.stratum;
    d["area"] = i.total_area.str();
    d["translation"] = i.is_translation;
    d["field"] = surface_->field();
    return d;
  }

  py::list connections(const std::string& len2) {
    py::list out;
    for (const SaddleConnection* sc : catalog_->upto(scalar(len2))) {
      py::dict d;
      d["id"] = sc->id;
      d["hol"] = py::make_tuple(sc->hol.x.str(), sc->hol.y.str());
      d["hol_approx"] = py::make_tuple(sc->hol.x.approx(), sc->hol.y.approx());
      d["len2"] = sc->len2.str();
      out.append(d);
    }
    return out;
  }

  py::dict graph(const std::string& len2) {
    const SCGraph g = build_graph(*catalog_, scalar(len2));
    py::dict d;
    d["ids"] = g.ids;
    d["edges"] = g.edge_list();
    return d;
  }

  int distance(const std::string& a, const std::string& b, const std::string& len2) {
    return flatsc::distance(build_graph(*catalog_, scalar(len2)), a, b);
  }

  std::vector<std::string> triangulate(const std::vector<std::string>& seed) {
    return complete_triangulation(*catalog_, seed).edge_ids();
  }

  py::list cylinders(const std::string& x, const std::string& y) {
    py::list out;
    for (const Cylinder& c : direction_decomposition(*surface_, Vec2(scalar(x), scalar(y))).cylinders) {
      py::dict d;
      d["circumference"] = c.circumference.str();
      d["height"] = c.height.str();
      d["area"] = c.area().str();
      d["simple"] = c.simple();
      out.append(d);
    }
    return out;
  }

  py::dict verify_affine(const std::string& matrix, const std::string& len2) {
    const Mat2 A = Mat2::parse(matrix, surface_->field());
    GraphIso iso = induced_vertex_map(*surface_, A, scalar(len2));
    const TriangleReport t = check_triangle_preserving(iso, 200);
    const DerivativeReport der = derivative_of_iso(iso);
    py::dict d;
    d["valid"] = iso.valid;
    d["problems"] = iso.problems;
    d["triangles_checked"] = t.checked;
    d["triangle_failures"] = t.failures.size();
    d["derivative"] = der.A.str();
    d["orientation"] = der.orientation;
    return d;
  }

  py::dict orbits(const std::vector<std::string>& generators, const std::string& len2, const std::string& factor) {
    std::vector<Mat2> mats;
    for (const std::string& g : generators) mats.push_back(Mat2::parse(g, surface_->field()));
    const SCGraph g = build_graph(*catalog_, scalar(len2));
    const QuotientReport q = flatsc::orbits(*catalog_, g, mats, scalar(factor));
    py::dict d;
    d["vertex_orbits"] = q.vertex_orbit_count;
    d["edge_orbits"] = q.edge_orbit_count;
    d["vertex_certified"] = q.vertex_certified;
    d["edge_certified"] = q.edge_certified;
    d["escaped"] = q.escaped;
    return d;
  }

  std::vector<std::pair<std::string, long>> wedges(const std::string& len2) {
    std::vector<std::pair<std::string, long>> out;
    for (const auto& [w, n] : wedge_histogram(build_graph(*catalog_, scalar(len2)))) out.push_back({w.str(), n});
    return out;
  }

  std::string to_json() const { return surface_to_json(*surface_); }

 private:
  std::shared_ptr<const Surface> surface_;
  std::shared_ptr<Catalog> catalog_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Saddle connection graphs of flat surfaces (exact arithmetic)";

  static py::exception<Error> error(m, "FlatscError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      error((std::string(error_code_name(e.code())) + ": " + e.what()).c_str());
    }
  });

  py::class_<PySurface>(m, "Surface")
      .def_static("builtin", [](const std::string& name) { return PySurface(builtin(name)); })
      .def_static("from_json", [](const std::string& text) { return PySurface(parse_surface(text)); })
      .def_static("builtin_names", &builtin_names)
      .def("info", &PySurface::info)
      .def("to_json", &PySurface::to_json)
      .def("connections", &PySurface::connections, py::arg("len2"))
      .def("graph", &PySurface::graph, py::arg("len2"))
      .def("distance", &PySurface::distance, py::arg("a"), py::arg("b"), py::arg("len2"))
      .def("triangulate", &PySurface::triangulate, py::arg("seed") = std::vector<std::string>{})
      .def("cylinders", &PySurface::cylinders, py::arg("x"), py::arg("y"))
      .def("verify_affine", &PySurface::verify_affine, py::arg("matrix"), py::arg("len2"))
      .def("orbits", &PySurface::orbits, py::arg("generators"), py::arg("len2"), py::arg("ambient_factor") = "4")
      .def("wedges", &PySurface::wedges, py::arg("len2"));

  m.def(
      "run",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = dispatch(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs a command-line subcommand; returns (exit code, stdout, stderr).");
}
