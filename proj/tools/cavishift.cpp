#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cavishift/errors.hpp"
#include "cavishift/harness.hpp"

namespace hs = cavishift::harness;

namespace {

std::string describe(std::string_view task) {
  if (task == "modes") return "unperturbed resonances in a search box";
  if (task == "shift") return "asymptotic shift or splitting for the configured particles";
  if (task == "oracle") return "perturbed resonances from the exact solver";
  if (task == "sweep") return "asymptotic vs exact over delta, z or eps_c";
  if (task == "pt") return "polarization tensor over a list of contrasts";
  if (task == "invert-size") return "particle size from a measured shift";
  if (task == "invert-count") return "particle count from measured shifts of several modes";
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resonance shifts of open cavities perturbed by small particles"};
  app.require_subcommand(1);
  app.set_version_flag("--version", hs::version());

  std::string config_path, out_path;
  unsigned threads = 1;
  for (const std::string_view task : hs::kTasks) {
    auto* sub = app.add_subcommand(std::string(task), describe(task));
    sub->add_option("--config", config_path, "JSON scenario file")->required();
    sub->add_option("--out", out_path, "CSV output path (default: config 'output' or stdout)");
    sub->add_option("--threads", threads, "maximum worker threads for sweeps")
        ->check(CLI::PositiveNumber);
  }
  CLI11_PARSE(app, argc, argv);
  const std::string task = app.get_subcommands().front()->get_name();

  try {
    const hs::json config = hs::load_config(config_path);
    if (out_path.empty() && config.is_object() && config.contains("output")) {
      if (!config["output"].is_string())
        throw cavishift::Error(cavishift::ErrorKind::ConfigError, "output: expected a string");
      out_path = config["output"].get<std::string>();
    }
    const hs::ResultTable table = hs::run(config, task, {threads});
    if (out_path.empty() || out_path == "-") {
      table.write_csv(std::cout);
    } else {
      std::ofstream out(out_path);
      if (!out)
        throw cavishift::Error(cavishift::ErrorKind::ConfigError, "cannot write '" + out_path + "'");
      table.write_csv(out);
    }
  } catch (const cavishift::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == cavishift::ErrorKind::ConfigError ? hs::kExitConfig : hs::kExitNumeric;
  }
  return hs::kExitOk;
}
