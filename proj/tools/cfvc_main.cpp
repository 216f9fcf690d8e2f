#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "cfvc/demo.hpp"
#include "cfvc/pipeline.hpp"
#include "cfvc/report.hpp"

namespace {

bool verbose_enabled() {
  const char* value = std::getenv("CFVC_VERBOSE");
  return value && *value && std::string(value) != "0";
}

int run_and_emit(const cfvc::PipelineConfig& config) {
  const auto report = cfvc::run_pipeline(config);
  const std::filesystem::path dir(config.output_dir);
  cfvc::emit_report(report, cfvc::ReportFormat::structured_data,
                    (dir / "report.json").string());
  cfvc::emit_report(report, cfvc::ReportFormat::plain_table,
                    (dir / "report.txt").string());
  cfvc::emit_plot_data(report, dir.string());
  if (verbose_enabled()) {
    std::fputs(cfvc::render_plain(report).c_str(), stdout);
  }
  std::printf("report written to %s\n", dir.string().c_str());
  if (!report.failures.empty()) {
    std::fprintf(stderr, "%zu stage failure(s):\n", report.failures.size());
    for (const auto& failure : report.failures) {
      std::fprintf(stderr, "  %s [%s]: %s\n", failure.pair.c_str(),
                   failure.stage.c_str(), failure.message.c_str());
    }
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"monthly funding volumes: unit roots, Granger causality, "
               "cointegration and impulse responses from transaction CSVs"};
  app.require_subcommand(1);

  std::string config_path;
  std::string demo_dir = "demo";
  std::uint64_t demo_seed = 7;

  auto* run = app.add_subcommand("run", "run the pipeline from a config file");
  run->add_option("config", config_path, "JSON config file")->required();
  auto* validate =
      app.add_subcommand("validate", "check a config file without running");
  validate->add_option("config", config_path, "JSON config file")->required();
  auto* demo = app.add_subcommand(
      "demo", "generate a synthetic dataset, then run the pipeline on it");
  demo->add_option("--dir", demo_dir, "directory for dataset and results");
  demo->add_option("--seed", demo_seed, "dataset generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return run_and_emit(cfvc::load_config(config_path));
    }
    if (validate->parsed()) {
      const auto problems = cfvc::validate_config(cfvc::load_config(config_path));
      if (problems.empty()) {
        std::puts("config ok");
        return 0;
      }
      for (const auto& problem : problems) {
        std::fprintf(stderr, "%s\n", problem.c_str());
      }
      return 1;
    }
    const auto dataset = cfvc::write_demo_dataset(demo_dir, demo_seed);
    std::printf("demo dataset written to %s\n", demo_dir.c_str());
    return run_and_emit(cfvc::load_config(dataset.config_json));
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
