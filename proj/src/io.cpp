#include "tjdrag/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "tjdrag/error.hpp"

namespace tjdrag {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::ConfigError, what); }

template <class Array>
json array_json(const Array& a) {
  json out = json::array();
  for (const auto& v : a) out.push_back(v);
  return out;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string kind_name(TensionModel::Kind k) {
  switch (k) {
    case TensionModel::Kind::Constant: return "constant";
    case TensionModel::Kind::Quadratic: return "quadratic";
    case TensionModel::Kind::ReadShockley: return "read_shockley";
  }
  return "unknown";
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json to_json(const Vec2& p) { return json::array({p.x, p.y}); }

json to_json(const Curve& c) {
  json pts = json::array();
  for (const Vec2& p : c.points()) pts.push_back(to_json(p));
  return {{"n", c.size()}, {"points", std::move(pts)}};
}

json to_json(const Network& net) {
  json curves = json::array();
  json anchors = json::array();
  for (std::size_t j = 0; j < 3; ++j) {
    curves.push_back(to_json(net.curve(j)));
    anchors.push_back(to_json(net.anchors()[j]));
  }
  return {{"curves", std::move(curves)}, {"anchors", std::move(anchors)}};
}

json to_json(const TensionModel& m) {
  json j{{"kind", kind_name(m.kind())}, {"describe", m.describe()}};
  switch (m.kind()) {
    case TensionModel::Kind::Constant: j["value"] = m.value(); break;
    case TensionModel::Kind::Quadratic: j["c"] = m.c(); break;
    case TensionModel::Kind::ReadShockley:
      j["A"] = m.a();
      j["B"] = m.b();
      j["theta_min"] = m.theta_min();
      break;
  }
  return j;
}

json to_json(const IntersectionEvent& e) {
  return {{"time", e.time},
          {"kind", e.kind == ContactKind::Crossing ? "Crossing" : "Touch"},
          {"self", e.curve_a == e.curve_b},
          {"curve_a", e.curve_a},
          {"segment_a", e.segment_a},
          {"param_a", e.param_a},
          {"curve_b", e.curve_b},
          {"segment_b", e.segment_b},
          {"param_b", e.param_b},
          {"point", to_json(e.point)}};
}

json to_json(const SimEvent& e) {
  json contacts = json::array();
  for (const auto& c : e.contacts) contacts.push_back(to_json(c));
  return {{"kind", to_string(e.kind)},
          {"time", e.time},
          {"detail", e.detail},
          {"contacts", std::move(contacts)}};
}

json to_json(const SimRecord& rec) {
  json trace = json::array();
  for (const TracePoint& t : rec.trace) {
    trace.push_back({{"t", t.t},
                     {"energy", t.energy},
                     {"junction_speed", t.junction_speed},
                     {"theta", array_json(t.theta)}});
  }
  json snaps = json::array();
  for (const SimState& s : rec.snapshots) {
    json n = to_json(s.network);
    n["t"] = s.time;
    n["theta"] = array_json(s.theta);
    snaps.push_back(std::move(n));
  }
  json events = json::array();
  for (const SimEvent& e : rec.events) events.push_back(to_json(e));
  return {{"steps", rec.steps},       {"halted", rec.halted}, {"max_sigma", rec.max_sigma},
          {"trace", std::move(trace)}, {"events", std::move(events)},
          {"snapshots", std::move(snaps)}};
}

json to_json(const CompatReport& rep) {
  json j{{"tol", rep.tol}, {"stencil_order", rep.stencil_order}};
  if (rep.parametric) {
    const auto& p = *rep.parametric;
    j["parametric"] = {{"junction_x", array_json(p.junction_x)},
                       {"junction_y", array_json(p.junction_y)},
                       {"anchor", array_json(p.anchor)},
                       {"junction_mismatch", p.junction_mismatch},
                       {"max", rep.max_parametric()},
                       {"ok", p.ok}};
  }
  if (rep.geometric) {
    const auto& g = *rep.geometric;
    j["geometric"] = {{"junction", array_json(g.junction)},
                      {"anchor", array_json(g.anchor)},
                      {"max", rep.max_geometric()},
                      {"ok", g.ok}};
  }
  return j;
}

json to_json(const StationaryReport& rep) {
  json anchors = json::array();
  for (const Vec2& a : rep.anchors) anchors.push_back(to_json(a));
  json hess = json::array();
  for (int r = 0; r < 4; ++r) {
    json row = json::array();
    for (int c = 0; c < 4; ++c) row.push_back(rep.hessian_F(r, c));
    hess.push_back(std::move(row));
  }
  json grad_f = json::array();
  for (int r = 0; r < 4; ++r) grad_f.push_back(rep.grad_F(r));
  return {{"anchors", std::move(anchors)},
          {"junction", to_json(rep.junction)},
          {"theta", array_json(rep.theta)},
          {"grad_g", array_json(rep.grad_g)},
          {"grad_F", std::move(grad_f)},
          {"hessian_F", std::move(hess)},
          {"eigenvalues_formula",
           rep.eigenvalues_formula ? array_json(*rep.eigenvalues_formula) : json(nullptr)},
          {"eigenvalues_numeric", array_json(rep.eigenvalues_numeric)},
          {"classification", to_string(rep.classification)},
          {"c_threshold", optional_json(rep.c_threshold)}};
}

json to_json(const ContractionReport& rep) {
  const SpaceTimeField& f = rep.final_iterate;
  json final_state = nullptr;
  if (!f.t.empty()) {
    json n = to_json(Network::from_curves(f.curves.back()));
    n["t"] = f.t.back();
    n["theta"] = array_json(f.theta.back());
    final_state = std::move(n);
  }
  return {{"horizon", rep.horizon},
          {"dt", rep.dt},
          {"alpha", rep.alpha},
          {"tol", rep.tol},
          {"distances", rep.distances},
          {"factors", rep.factors},
          {"max_factor", rep.max_factor},
          {"converged", rep.converged},
          {"non_contraction", rep.non_contraction},
          {"below_half", rep.below_half},
          {"below_one", rep.below_one},
          {"levels", f.t.size()},
          {"final", std::move(final_state)}};
}

json to_json(const IntersectionScenario& sc) {
  json knots = json::array();
  for (const auto& curve : sc.knots) {
    json list = json::array();
    for (const HermiteKnot& k : curve) {
      list.push_back({{"x", k.x}, {"p", to_json(k.p)}, {"d1", to_json(k.d1)}, {"d2", to_json(k.d2)}});
    }
    knots.push_back(std::move(list));
  }
  return {{"mu", sc.mu},       {"radius", sc.radius}, {"delta", sc.delta},
          {"x_loop", sc.x_loop}, {"knots", std::move(knots)}};
}

Vec2 vec2_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    bad("a point must be [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Curve curve_from_json(const json& j) {
  if (!j.is_object() || !j.contains("points")) bad("a curve needs \"points\"");
  const json& pts = j.at("points");
  if (!pts.is_array()) bad("\"points\" must be an array");
  std::vector<Vec2> out;
  out.reserve(pts.size());
  for (const json& p : pts) out.push_back(vec2_from_json(p));
  if (j.contains("n") && (!j["n"].is_number_unsigned() || j["n"].get<std::size_t>() != out.size())) {
    bad("\"n\" does not match the number of points");
  }
  try {
    return Curve(std::move(out));
  } catch (const Error& e) {
    bad(e.what());
  }
}

Network network_from_json(const json& j) {
  if (!j.is_object() || !j.contains("curves")) bad("a network needs \"curves\"");
  const json& cs = j.at("curves");
  if (!cs.is_array() || cs.size() != 3) bad("a network has exactly three curves");
  std::array<Curve, 3> curves = {curve_from_json(cs[0]), curve_from_json(cs[1]),
                                 curve_from_json(cs[2])};
  try {
    if (!j.contains("anchors")) return Network::from_curves(std::move(curves));
    const json& an = j.at("anchors");
    if (!an.is_array() || an.size() != 3) bad("\"anchors\" must hold three points");
    return Network(std::move(curves), {vec2_from_json(an[0]), vec2_from_json(an[1]), vec2_from_json(an[2])});
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    bad(e.what());
  }
}

Network read_network_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path.string());
  try {
    return network_from_json(json::parse(in));
  } catch (const json::exception& e) {
    bad(path.string() + ": " + e.what());
  }
}

void write_trace_csv(std::ostream& os, const std::vector<TracePoint>& trace) {
  os << "t,E,junction_speed,theta1,theta2,theta3\n";
  for (const TracePoint& p : trace) {
    os << format_double(p.t) << ',' << format_double(p.energy) << ','
       << format_double(p.junction_speed) << ',' << format_double(p.theta[0]) << ','
       << format_double(p.theta[1]) << ',' << format_double(p.theta[2]) << '\n';
  }
}

void write_snapshot_csv(std::ostream& os, const Network& net) {
  os << "curve,idx,x,y\n";
  for (std::size_t j = 0; j < 3; ++j) {
    const Curve& c = net.curve(j);
    for (std::size_t i = 0; i < c.size(); ++i) {
      os << j + 1 << ',' << i << ',' << format_double(c[i].x) << ',' << format_double(c[i].y) << '\n';
    }
  }
}

void write_eigen_sweep_csv(std::ostream& os, const std::vector<double>& cs) {
  os << "c,lambda1,lambda2,lambda3,lambda4\n";
  for (double c : cs) {
    const auto l = eigenvalues_formula(c);
    os << format_double(c);
    for (double v : l) os << ',' << format_double(v);
    os << '\n';
  }
}

void write_contraction_csv(std::ostream& os, const ContractionReport& rep) {
  os << "iter,distance,factor\n";
  for (std::size_t k = 0; k < rep.distances.size(); ++k) {
    os << k + 1 << ',' << format_double(rep.distances[k]) << ',';
    // factors[k-1] compares iteration k+1 with iteration k
    if (k >= 1 && k - 1 < rep.factors.size()) os << format_double(rep.factors[k - 1]);
    os << '\n';
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
  out << text;
}

}  // namespace tjdrag
