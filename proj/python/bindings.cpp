#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tjdrag/compat.hpp"
#include "tjdrag/diagnostics.hpp"
#include "tjdrag/error.hpp"
#include "tjdrag/fixedpoint.hpp"
#include "tjdrag/flow.hpp"
#include "tjdrag/io.hpp"
#include "tjdrag/scenario.hpp"
#include "tjdrag/stationary.hpp"

namespace py = pybind11;
using namespace tjdrag;

namespace {

// Reports cross the boundary as plain dicts and lists.
py::object to_python(const json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

py::array_t<double> points_array(const Curve& c) {
  py::array_t<double> out({static_cast<py::ssize_t>(c.size()), py::ssize_t{2}});
  auto r = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < c.size(); ++i) {
    r(i, 0) = c[i].x;
    r(i, 1) = c[i].y;
  }
  return out;
}

Curve curve_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2 || a.shape(1) != 2) throw py::value_error("points must have shape (n, 2)");
  auto r = a.unchecked<2>();
  std::vector<Vec2> pts(static_cast<std::size_t>(a.shape(0)));
  for (py::ssize_t i = 0; i < a.shape(0); ++i) pts[static_cast<std::size_t>(i)] = {r(i, 0), r(i, 1)};
  return Curve(std::move(pts));
}

FlowParams make_params(double mu, double nu, std::size_t n, double dt, double t_end,
                       std::size_t snapshot_every, const std::string& scheme,
                       bool halt_on_intersection) {
  FlowParams p;
  p.mu = mu;
  p.nu = nu;
  p.n = n;
  p.dt = dt;
  p.t_end = t_end;
  p.snapshot_every = snapshot_every;
  if (scheme == "explicit") {
    p.scheme = Scheme::Explicit;
  } else if (scheme != "semi_implicit") {
    throw py::value_error("scheme must be 'semi_implicit' or 'explicit'");
  }
  p.halt_on_intersection = halt_on_intersection;
  return p;
}

}  // namespace

PYBIND11_MODULE(_tjdrag, m) {
  m.doc() = "Three-curve network flow with triple-junction drag";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  py::class_<TensionModel>(m, "TensionModel")
      .def_static("constant", &TensionModel::constant, py::arg("value"))
      .def_static("quadratic", &TensionModel::quadratic, py::arg("c"))
      .def_static("read_shockley", &TensionModel::read_shockley, py::arg("a"), py::arg("b"),
                  py::arg("theta_min") = kDefaultReadShockleyClamp)
      .def("sigma", &TensionModel::sigma)
      .def("sigma_prime", &TensionModel::sigma_prime, py::arg("dtheta"), py::arg("kink_tol") = kDefaultKinkTol)
      .def("__repr__", &TensionModel::describe);

  py::class_<Curve>(m, "Curve")
      .def(py::init(&curve_from_array), py::arg("points"))
      .def_property_readonly("points", &points_array)
      .def("__len__", &Curve::size)
      .def("length", [](const Curve& c) { return length(c); })
      .def("min_speed", [](const Curve& c) { return min_speed(c); });

  py::class_<Network>(m, "Network")
      .def(py::init([](const Curve& a, const Curve& b, const Curve& c) {
             return Network::from_curves({a, b, c});
           }),
           py::arg("c1"), py::arg("c2"), py::arg("c3"))
      .def("curve", &Network::curve, py::arg("j"))
      .def_property_readonly("anchors", [](const Network& n) {
        std::vector<std::array<double, 2>> out;
        for (const Vec2& a : n.anchors()) out.push_back({a.x, a.y});
        return out;
      })
      .def_property_readonly("junction", [](const Network& n) {
        return std::array<double, 2>{n.junction().x, n.junction().y};
      })
      .def("to_dict", [](const Network& n) { return to_python(to_json(n)); });

  m.def("stationary_configuration", &stationary_configuration, py::arg("n"));
  m.def("random_network", [](std::size_t n, std::uint64_t seed) {
    SimState s = random_network(n, seed);
    return std::make_pair(s.network, s.theta);
  }, py::arg("n"), py::arg("seed"));
  m.def("compatible_network", [](std::size_t n, std::uint64_t seed, const TensionModel& model,
                                 OrientationState theta, double mu, bool parametric) {
    return compatible_network(n, seed, model, theta, {mu, parametric}).network;
  }, py::arg("n"), py::arg("seed"), py::arg("model"), py::arg("theta"), py::arg("mu") = 1.0,
     py::arg("parametric") = false);
  m.def("intersection_scenario", [](double mu, std::size_t n) {
    return build_intersection_scenario(mu, n).state.network;
  }, py::arg("mu"), py::arg("n") = 257);

  m.def("junction_velocity", [](const Network& net, const TensionModel& model, OrientationState theta, double mu) {
    const Vec2 v = junction_velocity(net, curve_tensions(model, theta), mu);
    return std::array<double, 2>{v.x, v.y};
  }, py::arg("network"), py::arg("model"), py::arg("theta"), py::arg("mu"));
  m.def("network_energy", py::overload_cast<const Network&, const OrientationState&, const TensionModel&>(&network_energy),
        py::arg("network"), py::arg("theta"), py::arg("model"));
  m.def("junction_angles", [](const Network& n) { return junction_angles(n); }, py::arg("network"));
  m.def("detect_intersections", [](const Network& n) {
    json out = json::array();
    for (const auto& e : detect_intersections(n)) out.push_back(to_json(e));
    return to_python(out);
  }, py::arg("network"));

  m.def("simulate", [](const Network& net, OrientationState theta, const TensionModel& model, double mu,
                       double nu, double dt, double t_end, std::size_t snapshot_every,
                       const std::string& scheme, bool halt_on_intersection) {
    const FlowParams p = make_params(mu, nu, net.curve(0).size(), dt, t_end, snapshot_every, scheme,
                                     halt_on_intersection);
    SimRecord rec;
    {
      py::gil_scoped_release release;
      rec = run({net, theta, 0.0}, p, model);
    }
    return to_python(to_json(rec));
  }, py::arg("network"), py::arg("theta"), py::arg("model"), py::arg("mu") = 1.0, py::arg("nu") = 0.0,
     py::arg("dt") = 1e-4, py::arg("t_end") = 1.0, py::arg("snapshot_every") = 100,
     py::arg("scheme") = "semi_implicit", py::arg("halt_on_intersection") = false);

  m.def("closed_circle", [](double r0, std::size_t n, double dt, double t_end) {
    FlowParams p;
    p.n = n;
    p.dt = dt;
    p.t_end = t_end;
    const CircleTrace tr = run_closed_circle(r0, p);
    std::vector<std::pair<double, double>> out;
    for (const auto& s : tr.samples) out.emplace_back(s.t, s.radius);
    return py::make_tuple(out, tr.halted);
  }, py::arg("r0"), py::arg("n"), py::arg("dt"), py::arg("t_end"));

  m.def("classify_stability", [](const TensionModel& model) { return to_python(to_json(classify_stability(model))); },
        py::arg("model"));
  m.def("eigenvalues_formula", &eigenvalues_formula, py::arg("c"));
  m.def("quadratic_threshold", &quadratic_threshold, py::arg("c_max") = 100.0, py::arg("tol") = 1e-8);
  m.def("reduced_max_real_part", [](const TensionModel& model, double mu, double nu) {
    return reduced_ode_jacobian(model, mu, nu).max_real_part;
  }, py::arg("model"), py::arg("mu"), py::arg("nu"));

  m.def("check_parametric", [](const Network& net, OrientationState theta, const TensionModel& model, double mu, double tol) {
    return to_python(to_json(check_parametric(net, theta, model, mu, tol)));
  }, py::arg("network"), py::arg("theta"), py::arg("model"), py::arg("mu"), py::arg("tol"));
  m.def("check_geometric", [](const Network& net, OrientationState theta, const TensionModel& model, double mu, double tol) {
    return to_python(to_json(check_geometric(net, theta, model, mu, tol)));
  }, py::arg("network"), py::arg("theta"), py::arg("model"), py::arg("mu"), py::arg("tol"));
  m.def("reparametrize_to_compatible", &reparametrize_to_compatible, py::arg("network"), py::arg("theta"),
        py::arg("model"), py::arg("mu"), py::arg("tol_geo"), py::arg("stencil_order") = kCompatStencilOrder);

  m.def("iterate_to_fixed_point", [](const Network& net, OrientationState theta, const TensionModel& model,
                                     double mu, double nu, double horizon, double dt, double alpha,
                                     std::size_t max_iter, double tol) {
    const LinearizedProblem prob = make_linearized_problem(net, theta, model, mu, nu, horizon, dt, alpha);
    ContractionReport rep;
    {
      py::gil_scoped_release release;
      rep = iterate_to_fixed_point(prob, max_iter, tol);
    }
    return to_python(to_json(rep));
  }, py::arg("network"), py::arg("theta"), py::arg("model"), py::arg("mu") = 1.0, py::arg("nu") = 0.0,
     py::arg("horizon") = 0.05, py::arg("dt") = 1e-3, py::arg("alpha") = 0.5, py::arg("max_iter") = 60,
     py::arg("tol") = 1e-10);
}
