#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "tjdrag/cli.hpp"
#include "tjdrag/error.hpp"

namespace {

tjdrag::json read_document(const std::string& path) {
  if (path.empty()) return tjdrag::json::object();
  std::ifstream in(path);
  if (!in) throw tjdrag::Error(tjdrag::ErrorKind::ConfigError, "cannot open " + path);
  try {
    return tjdrag::json::parse(in);
  } catch (const tjdrag::json::exception& e) {
    throw tjdrag::Error(tjdrag::ErrorKind::ConfigError, path + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-curve network flow with triple-junction drag"};
  app.set_version_flag("--version", tjdrag::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<double> mu;

  const char* names[] = {"simulate", "stationary", "check-compat", "contract-test", "intersect-demo"};
  const char* help[] = {"run the flow and write traces and snapshots",
                        "stationary-state stability report and eigenvalue sweep",
                        "parametric and geometric compatibility table",
                        "fixed-point iteration and contraction factors",
                        "self-intersection scenario for large mu"};
  for (int i = 0; i < 5; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], help[i]);
    sub->add_option("--config", config_path, "JSON configuration")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "seed override");
    sub->add_option("--mu", mu, "junction drag coefficient override");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  tjdrag::ScenarioConfig cfg;
  try {
    tjdrag::json doc = read_document(config_path);
    if (!doc.is_object()) throw tjdrag::Error(tjdrag::ErrorKind::ConfigError, "config must be an object");
    if (seed) doc["seed"] = *seed;
    if (mu) {
      doc["flow"]["mu"] = *mu;
      if (command == "intersect-demo") doc["intersect"]["mu_values"] = {*mu};
    }
    cfg = tjdrag::parse_config(doc);
  } catch (const tjdrag::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return tjdrag::kExitConfig;
  }

  try {
    if (command == "simulate") return tjdrag::cmd_simulate(cfg, out_dir, std::cout);
    if (command == "stationary") return tjdrag::cmd_stationary(cfg, out_dir, std::cout);
    if (command == "check-compat") return tjdrag::cmd_check_compat(cfg, out_dir, std::cout);
    if (command == "contract-test") return tjdrag::cmd_contract_test(cfg, out_dir, std::cout);
    return tjdrag::cmd_intersect_demo(cfg, out_dir, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return tjdrag::kExitCheckFailed;
  }
}
