#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

#include "meissner/cli.hpp"
#include "meissner/fault_injection.hpp"
#include "meissner/kernels.hpp"

namespace {

void apply_thread_override() {
  const char* env = std::getenv("MEISSNER_NUM_THREADS");
  if (env == nullptr || *env == '\0') return;
  try {
    meissner::kernels::set_threads(std::stoi(env));
  } catch (const std::exception&) {
    std::cerr << "ignoring MEISSNER_NUM_THREADS='" << env << "' (not an integer)\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = meissner::cli;
  CLI::App app{"Expelled-field, atom-interferometer and magnetometry calculator"};
  app.require_subcommand(1);

  cli::CommandOptions opts;
  std::string config, out_dir, fault_name;

  // Test hook: deliberately corrupts one closed form so the checks can be
  // shown to catch it.
  app.add_option("--inject-fault", fault_name)->group("");

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "INI configuration file");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--inject-fault", fault_name)->group("");
  };
  auto* field_map = app.add_subcommand("field-map", "write the field map CSV and print a JSON summary");
  auto* phase = app.add_subcommand("phase", "print the interferometer phase as JSON");
  auto* sensitivity = app.add_subcommand("sensitivity", "print the field-sensitivity report as JSON");
  auto* validate = app.add_subcommand("validate", "run the oracle checks");
  for (auto* sub : {field_map, phase, sensitivity, validate}) add_common(sub);
  validate->add_flag("--fast", opts.fast, "reduced mesh and wave grids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::exit_config_error;
  }

  if (!config.empty()) opts.config_path = config;
  if (!out_dir.empty()) opts.out_dir = out_dir;
  if (!fault_name.empty()) {
    const auto fault = meissner::fault::parse(fault_name);
    if (!fault) {
      std::cerr << "unknown fault '" << fault_name << "'\n";
      return cli::exit_config_error;
    }
    meissner::fault::set(*fault);
  }
  apply_thread_override();

  if (*field_map) return cli::cmd_field_map(opts, std::cout, std::cerr);
  if (*phase) return cli::cmd_phase(opts, std::cout, std::cerr);
  if (*sensitivity) return cli::cmd_sensitivity(opts, std::cout, std::cerr);
  return cli::cmd_validate(opts, std::cout, std::cerr);
}
