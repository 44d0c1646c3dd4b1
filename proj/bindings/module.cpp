#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "covpath/errors.hpp"
#include "covpath/generator_circle.hpp"
#include "covpath/generator_ellipse.hpp"
#include "covpath/qp.hpp"
#include "covpath/safety.hpp"
#include "covpath/sim.hpp"

namespace py = pybind11;
using namespace covpath;

PYBIND11_MODULE(_core, m) {
  m.doc() = "constraint-driven coverage path generation core";

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<DegeneratePoint>(m, "DegeneratePoint");
  py::register_exception<NonPdShape>(m, "NonPdShape");
  py::register_exception<DegenerateShape>(m, "DegenerateShape");
  py::register_exception<RegionTooSmall>(m, "RegionTooSmall");

  py::enum_<Direction>(m, "Direction")
      .value("RIGHT", Direction::Right)
      .value("LEFT", Direction::Left);

  py::class_<Pose>(m, "Pose")
      .def(py::init([](double x, double y, double heading) {
             return Pose(Vec2{x, y}, heading);
           }),
           py::arg("x"), py::arg("y"), py::arg("heading"))
      .def_property_readonly("x", [](const Pose& p) { return p.position.x(); })
      .def_property_readonly("y", [](const Pose& p) { return p.position.y(); })
      .def_readonly("heading", &Pose::heading);

  m.def("wrap_angle", &wrap_angle, py::arg("angle"),
        "wrap an angle to (-pi, pi]");

  m.def(
      "step_dubins",
      [](const Pose& pose, double omega, double speed, double dt) {
        VehicleState s;
        s.pose = pose;
        s.forward_speed = speed;
        return step_dubins(s, omega, dt).pose;
      },
      py::arg("pose"), py::arg("omega"), py::arg("speed"), py::arg("dt"),
      "advance the constant-speed unicycle by one step");

  m.def("sensing_performance", &sensing_performance, py::arg("p"),
        py::arg("q"), py::arg("sigma"));

  m.def("circle_center", &circle_center, py::arg("radius"), py::arg("pose"),
        py::arg("direction"));
  m.def("circle_arc_angle", &circle_arc_angle, py::arg("center"),
        py::arg("heading"), py::arg("q"), py::arg("direction"));
  m.def("circle_path_score", &circle_path_score, py::arg("radius"),
        py::arg("pose"), py::arg("direction"), py::arg("q"), py::arg("sigma"));

  m.def("ellipse_center", &ellipse_center, py::arg("shape"), py::arg("pose"),
        py::arg("direction"));
  m.def("sampson_distance", &sampson_distance, py::arg("center"),
        py::arg("shape"), py::arg("q"));
  m.def("ellipse_arc_angle", &ellipse_arc_angle, py::arg("center"),
        py::arg("shape"), py::arg("heading"), py::arg("q"),
        py::arg("direction"));
  m.def("ellipse_path_score", &ellipse_path_score, py::arg("shape"),
        py::arg("pose"), py::arg("direction"), py::arg("q"), py::arg("sigma"));
  m.def("ellipse_curvature", &ellipse_curvature, py::arg("p"), py::arg("center"),
        py::arg("shape"), "path curvature at the ellipse point closest to p");

  m.def(
      "shape_barriers",
      [](const Vec3& s, double s_min, double s_max) {
        const ShapeBarriers b = shape_barriers(s, s_min, s_max);
        return py::make_tuple(b.b2, b.b3, b.b4, b.b5);
      },
      py::arg("shape"), py::arg("s_min"), py::arg("s_max"),
      "axis-bound barriers (b2, b3, b4, b5); all nonnegative iff the "
      "eigenvalues lie in [1/s_max, 1/s_min]");

  m.def(
      "solve_qp",
      [](const Eigen::VectorXd& cost_diag, const Eigen::VectorXd& cost_linear,
         const Eigen::MatrixXd& constraints,
         const Eigen::VectorXd& lower_bounds) {
        QpProblem p;
        p.cost_diag = cost_diag;
        p.cost_linear = cost_linear;
        p.constraints = constraints;
        p.lower_bounds = lower_bounds;
        const QpSolution sol = solve_qp(p);
        py::dict out;
        out["optimal"] = sol.status == QpStatus::Optimal;
        out["x"] = sol.x;
        out["iterations"] = sol.iterations;
        return out;
      },
      py::arg("cost_diag"), py::arg("cost_linear"), py::arg("constraints"),
      py::arg("lower_bounds"),
      "minimize x' diag(d) x + q' x subject to A x >= b");

  m.def(
      "pool_barrier",
      [](const Vec2& center, const Vec2& half_extent, double margin,
         const Vec2& p) {
        return 1.0 -
               pool_mu(PoolShape::axis_aligned(center, half_extent, margin), p);
      },
      py::arg("center"), py::arg("half_extent"), py::arg("margin"),
      py::arg("p"), "containment barrier of the shrunk pool, positive inside");

  m.def("default_config_json",
        [] { return SimConfig{}.to_json_text(); });
  m.def(
      "validate_config",
      [](const std::string& text) {
        return validate(SimConfig::from_json_text(text));
      },
      py::arg("json_text"), "list of problems; empty means runnable");
  m.def(
      "run_scenario",
      [](const std::string& json_text, const std::string& out_dir) {
        SimConfig cfg = SimConfig::from_json_text(json_text);
        if (!out_dir.empty()) cfg.output.directory = out_dir;
        const SimLog log = run_simulation(cfg);
        export_log(log, cfg, cfg.output.directory);
        return log.phi.empty() ? 0.0 : log.phi.back().sum_phi;
      },
      py::arg("json_text"), py::arg("out_dir") = std::string(),
      "run a scenario, write its CSV outputs, return the final phi total");
}
