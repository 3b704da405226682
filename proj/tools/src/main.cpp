#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "aerostt/errors.hpp"
#include "aerostt/harness/config.hpp"
#include "aerostt/harness/context.hpp"
#include "aerostt/harness/experiments.hpp"

namespace {

using namespace aerostt::harness;
using Command = std::function<nlohmann::json(AnalysisContext&, const std::filesystem::path&)>;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-analytical perturbation propagation for aerocapture trajectories"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  int samples = -1;
  std::string methods;
  app.add_option("--config", config_path, "JSON config file (defaults apply to missing keys)")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "Master seed (overrides config)");
  app.add_option("--samples", samples, "Monte Carlo sample count (overrides config)")->check(CLI::NonNegativeNumber);
  app.add_option("--methods", methods, "Comma-separated method list (overrides config)");
  bool print_config = false;
  app.add_flag("--print-config", print_config, "Print the resolved config and exit");

  const std::map<std::string, std::pair<std::string, Command>> commands = {
      {"reference", {"Nominal trajectory, dynamic pressure and acceleration ratio", cmd_reference}},
      {"stt-validate", {"STT finite-difference, order-scaling and composition checks", cmd_stt_validate}},
      {"eig-studies", {"Decomposed CGT, HOCGT family eigenpairs and maximality study", cmd_eig_studies}},
      {"direction-study", {"STM, STT2 and hoDSTT error against direction angle", cmd_direction_study}},
      {"frobenius", {"Per-interval Frobenius error of DSTT approximations", cmd_frobenius}},
      {"monte-carlo", {"Terminal energy and apoapsis error statistics", cmd_monte_carlo}},
  };
  for (const auto& [name, c] : commands) app.add_subcommand(name, c.first);

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg = config_path.empty() ? config_from_json(nlohmann::json::object()) : load_config(config_path);
    if (*seed_opt) {
      cfg.seed = seed;
      cfg.eigen.seed = derive_seed(seed, "eigen");
    }
    if (samples >= 0) cfg.monte_carlo.samples = samples;
    if (!methods.empty()) cfg.methods = split_list(methods);
    validate(cfg);
    if (print_config) {
      std::cout << config_to_json(cfg).dump(2) << "\n";
      return 0;
    }

    const std::filesystem::path out(out_dir);
    std::filesystem::create_directories(out);
    AnalysisContext ctx(cfg);
    for (auto* sub : app.get_subcommands()) {
      const auto summary = commands.at(sub->get_name()).second(ctx, out);
      std::cout << summary.dump(2) << "\n";
    }
  } catch (const aerostt::IntegrationError& e) {
    std::cerr << "integration failed: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
