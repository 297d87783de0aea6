#include <cstdlib>
#include <algorithm>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cli_config.hpp"
#include "commands.hpp"
#include "usfda/error.hpp"
#include "usfda/version.hpp"

namespace {

int exit_code_for(std::string_view kind) {
  static const std::map<std::string_view, int> codes = {
      {"configuration", 3}, {"ingestion", 4}, {"shape", 5},
      {"integrity", 6},     {"manifest", 6},  {"pairing", 7},
      {"parameter", 8},     {"invalid-input", 8}, {"spectral-inconsistency", 9},
  };
  const auto it = codes.find(kind);
  return it == codes.end() ? 1 : it->second;
}

int report(bool as_json, const std::string& kind, const std::string& message, int code) {
  if (as_json) {
    nlohmann::json j = {{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}};
    std::cout << j.dump() << '\n';
  } else {
    std::cerr << "usfda: " << kind << " error: " << message << '\n';
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = usfda::cli;

  CLI::App app{"Fourier domain adaptation toolkit for ultrasound images", "usfda"};
  app.set_version_flag("--version", std::string(usfda::kVersion));
  app.config_formatter(std::make_shared<cli::JsonConfig>());
  app.set_config("--config", "", "JSON config file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  app.fallthrough();

  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  bool json_output = false;
  app.add_option("--jobs", jobs, "Worker threads for per-image work")->check(CLI::PositiveNumber);
  app.add_flag("--json", json_output, "Print the result or error as JSON on stdout");

  cli::SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate B-mode images from binary shape masks");
  simulate->add_option("--masks", sim.masks, "Directory of binary mask images")->required();
  simulate->add_option("--out", sim.out, "Output directory")->required();
  simulate->add_option("--count", sim.count, "Number of samples")->required();
  simulate->add_option("--seed", sim.seed, "Random seed");
  simulate->add_option("--psf-config", sim.psf_config, "JSON file with PSF parameters");
  simulate->add_option("--size", sim.size, "Output side length in pixels")->capture_default_str();
  simulate->add_option("--n-scatterers", sim.n_scatterers, "Scatterers per phantom")->capture_default_str();
  simulate->add_option("--width-mm", sim.width_mm, "Phantom width in mm")->capture_default_str();
  simulate->add_option("--depth-mm", sim.depth_mm, "Phantom depth in mm")->capture_default_str();
  simulate->add_option("--format", sim.format, "Image format: png or pgm")->capture_default_str();

  cli::AdaptOptions ad;
  auto* adapt = app.add_subcommand("adapt", "Swap low-frequency magnitude from target images into sources");
  adapt->add_option("--source", ad.source, "Source image directory")->required();
  adapt->add_option("--target", ad.target, "Target image directory")->required();
  adapt->add_option("--out", ad.out, "Output directory")->required();
  adapt->add_option("--alpha", ad.alpha, "Low-frequency band half-width in (0,1)")->capture_default_str();
  adapt->add_option("--seed", ad.seed, "Pairing seed");
  adapt->add_option("--pairing", ad.pairing, "random or fixed")->capture_default_str();
  adapt->add_option("--iteration", ad.iteration, "Iteration index for random pairing");
  adapt->add_option("--manifest", ad.manifest, "Reuse the pairing plan recorded in this manifest");
  adapt->add_option("--range", ad.range, "Output range policy: clip or rescale")->capture_default_str();

  cli::SplitOptions sp;
  auto* split = app.add_subcommand("split", "Seeded train/val/test split of an image directory");
  split->add_option("--corpus", sp.corpus, "Image directory")->required();
  split->add_option("--out", sp.out, "Output directory")->required();
  split->add_option("--train", sp.train, "Train count")->required();
  split->add_option("--val", sp.val, "Validation count")->required();
  split->add_option("--test", sp.test, "Test count")->required();
  split->add_option("--seed", sp.seed, "Random seed");

  cli::EvaluateOptions ev;
  auto* evaluate = app.add_subcommand("evaluate", "Dice scores of predicted masks against ground truth");
  evaluate->add_option("--pred", ev.pred, "Predicted mask directory")->required();
  evaluate->add_option("--gt", ev.gt, "Ground-truth mask directory")->required();
  evaluate->add_option("--out", ev.out, "Directory for report.json");
  evaluate->add_option("--epsilon", ev.epsilon, "Smoothing term")->capture_default_str();
  evaluate->add_flag("--table", ev.table, "Also write a text table");

  cli::MaskOptions mk;
  auto* mask = app.add_subcommand("mask", "Write the low-frequency mask as an image");
  mask->add_option("--width", mk.width, "Width in pixels")->capture_default_str();
  mask->add_option("--height", mk.height, "Height in pixels")->capture_default_str();
  mask->add_option("--alpha", mk.alpha, "Band half-width in (0,1)")->capture_default_str();
  mask->add_option("--out", mk.out, "Output image file")->required();

  cli::SpectrumOptions sc;
  auto* spectrum = app.add_subcommand("spectrum", "Write the centered log-magnitude spectrum of an image");
  spectrum->add_option("--input", sc.input, "Input image file")->required();
  spectrum->add_option("--out", sc.out, "Output image file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    if (json_output) return report(true, "usage", e.what(), 2);
    app.exit(e);
    return 2;
  }

  try {
    nlohmann::json result;
    if (*simulate) result = cli::run_simulate(sim, jobs);
    else if (*adapt) result = cli::run_adapt(ad, jobs);
    else if (*split) result = cli::run_split(sp);
    else if (*evaluate) result = cli::run_evaluate(ev, jobs);
    else if (*mask) result = cli::run_mask(mk);
    else if (*spectrum) result = cli::run_spectrum(sc);
    if (json_output) std::cout << result.dump() << '\n';
    return 0;
  } catch (const usfda::Error& e) {
    const int code = exit_code_for(e.kind());
    return report(json_output, e.kind(), e.what(), code);
  } catch (const std::exception& e) {
    return report(json_output, "internal", e.what(), 1);
  }
}
