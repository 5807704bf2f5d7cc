#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tjdrag/flow.hpp"
#include "tjdrag/io.hpp"
#include "tjdrag/tension.hpp"

namespace tjdrag {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitConfig = 2, kExitHalted = 3 };

enum class ScenarioKind { Stationary, PerturbedStationary, Random, Intersection, Circle, Custom, Compatible };

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::Stationary;
  double eps = 0.05;          // perturbed_stationary
  double r0 = 5.0;            // circle
  std::string path;           // custom: Network JSON
  bool parametric = true;     // compatible: parametrically compatible sampling
};

struct StationaryOptions {
  std::vector<double> c_values;
};

struct CompatOptions {
  double tol = 1e-8;
  bool reparametrize = true;
};

struct ContractOptions {
  std::vector<double> horizons{0.2, 0.1, 0.05, 0.025};
  double dt = 1e-3;
  double alpha = 0.5;
  std::size_t max_iter = 60;
  double tol = 1e-10;
};

struct IntersectOptions {
  std::vector<double> mu_values{1e2, 1e3, 1e4};
  double horizon_factor = 10.0;  // runs to horizon_factor / mu
};

/// Parsed and validated configuration document. Every section is optional;
/// unknown keys anywhere are rejected.
struct ScenarioConfig {
  ScenarioSpec scenario;
  TensionModel model = TensionModel::constant(1.0);
  std::optional<OrientationState> theta;
  FlowParams flow;
  std::uint64_t seed = 0;
  StationaryOptions stationary;
  CompatOptions compat;
  ContractOptions contract;
  IntersectOptions intersect;
  json source;  // the document as given, echoed into manifests
};

/// Throws ConfigError.
ScenarioConfig parse_config(const json& doc);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Initial state described by the config (not for the circle kind).
SimState build_initial_state(const ScenarioConfig& cfg);

/// Commands write into `out` (created if needed) and report to `log`.
/// Configuration problems are detected before anything is written.
int cmd_simulate(const ScenarioConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_stationary(const ScenarioConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_check_compat(const ScenarioConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_contract_test(const ScenarioConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_intersect_demo(const ScenarioConfig& cfg, const std::filesystem::path& out, std::ostream& log);

}  // namespace tjdrag
