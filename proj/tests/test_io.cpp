#include <cmath>
#include <sstream>
#include <string>

#include "doctest.h"
#include "support.hpp"
#include "tjdrag/error.hpp"
#include "tjdrag/io.hpp"
#include "tjdrag/scenario.hpp"
#include "tjdrag/stationary.hpp"

using namespace tjdrag;
using namespace tjdrag::testing;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_CASE("format_double round-trips") {
  Rng rng(6);
  for (int k = 0; k < 1000; ++k) {
    const double v = std::ldexp(rng.uniform(-1, 1), static_cast<int>(rng.uniform(-300, 300)));
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("network JSON round trip is bit-exact") {
  const SimState s = random_network(65, 3);
  const std::string text = to_json(s.network).dump();
  const Network back = network_from_json(json::parse(text));
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(back.curve(j) == s.network.curve(j));
    CHECK(back.anchors()[j] == s.network.anchors()[j]);
  }
}

TEST_CASE("malformed network JSON is a config error") {
  CHECK(kind_of([] { network_from_json(json::parse(R"({"anchors": []})")); }) == ErrorKind::ConfigError);
  CHECK(kind_of([] { vec2_from_json(json::parse("[1]")); }) == ErrorKind::ConfigError);
  CHECK(kind_of([] { vec2_from_json(json::parse(R"(["a", 1])")); }) == ErrorKind::ConfigError);
  CHECK(kind_of([] { curve_from_json(json::parse(R"({"points": [[0,0],[1,0]]})")); }) == ErrorKind::ConfigError);
  json net = to_json(stationary_configuration(9).first);
  net["curves"].erase(2);
  CHECK(kind_of([&] { network_from_json(net); }) == ErrorKind::ConfigError);
  CHECK(kind_of([] { read_network_file("/nonexistent/network.json"); }) == ErrorKind::ConfigError);
}

TEST_CASE("CSV headers") {
  std::ostringstream trace, snap, eig;
  write_trace_csv(trace, {{0.0, 1.0, 0.0, {0, 1, 2}}});
  CHECK(first_line(trace.str()) == "t,E,junction_speed,theta1,theta2,theta3");
  write_snapshot_csv(snap, stationary_configuration(5).first);
  CHECK(first_line(snap.str()) == "curve,idx,x,y");
  std::istringstream rows(snap.str());
  std::string line;
  std::size_t count = 0;
  while (std::getline(rows, line)) ++count;
  CHECK(count == 1 + 15);
  write_eigen_sweep_csv(eig, {1.0, 2.0});
  CHECK(first_line(eig.str()) == "c,lambda1,lambda2,lambda3,lambda4");

  ContractionReport rep;
  rep.distances = {1.0, 0.25};
  rep.factors = {0.25};
  std::ostringstream con;
  write_contraction_csv(con, rep);
  CHECK(first_line(con.str()) == "iter,distance,factor");
}
