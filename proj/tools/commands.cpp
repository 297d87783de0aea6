#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "usfda/dataset.hpp"
#include "usfda/error.hpp"
#include "usfda/fda.hpp"
#include "usfda/image_io.hpp"
#include "usfda/metrics.hpp"
#include "usfda/simulator.hpp"
#include "usfda/spectral.hpp"
#include "usfda/version.hpp"

namespace usfda::cli {
namespace {

using nlohmann::json;

std::string tool_version() { return std::string("usfda ") + kVersion; }

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigurationError(path.string() + ": cannot open for writing");
  out << j.dump(2) << '\n';
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigurationError(dir.string() + ": cannot create output directory");
}

std::string opt_path(const std::optional<fs::path>& p) { return p ? p->string() : std::string(); }

// Resolved-config file next to a single-file output: out.png -> out.config.json
fs::path config_beside(const fs::path& file) {
  return file.parent_path() / (file.stem().string() + ".config.json");
}

std::vector<dataset::SampleId> ids_of(const std::vector<fs::path>& files) {
  std::vector<dataset::SampleId> ids;
  for (const auto& f : files) ids.push_back(f.filename().string());
  return ids;
}

}  // namespace

json run_simulate(const SimulateOptions& opt, unsigned jobs) {
  if (opt.format != "png" && opt.format != "pgm")
    throw ConfigurationError("--format must be png or pgm, got '" + opt.format + "'");
  if (opt.count == 0) throw ConfigurationError("--count must be at least 1");

  simulator::DatasetParams params;
  if (opt.psf_config) {
    std::ifstream in(*opt.psf_config);
    if (!in) throw ConfigurationError(opt.psf_config->string() + ": cannot read PSF config");
    try {
      params.psf = simulator::psf_from_json(json::parse(in));
    } catch (const json::exception& e) {
      throw ConfigurationError(opt.psf_config->string() + ": " + e.what());
    }
  }
  params.out_size = opt.size;
  params.n_scatterers = opt.n_scatterers;
  params.width_mm = opt.width_mm;
  params.depth_mm = opt.depth_mm;

  const auto samples = simulator::generate_dataset(opt.masks, opt.count, opt.seed, params, jobs);

  for (const char* sub : {"bmode", "ground_truth", "envelope", "provenance"}) make_dir(opt.out / sub);
  dataset::DatasetManifest manifest;
  manifest.tool_version = tool_version();
  json sample_list = json::array();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    char stem[32];
    std::snprintf(stem, sizeof stem, "sample_%04zu", i);
    const fs::path bmode = opt.out / "bmode" / (std::string(stem) + "." + opt.format);
    const fs::path gt = opt.out / "ground_truth" / (std::string(stem) + "." + opt.format);
    const fs::path env = opt.out / "envelope" / (std::string(stem) + ".f32");
    const fs::path prov = opt.out / "provenance" / (std::string(stem) + ".json");
    io::write_image(bmode, samples[i].bmode);
    io::write_image(gt, samples[i].ground_truth);
    io::write_float32(env, samples[i].envelope);
    write_json(prov, simulator::provenance_json(samples[i]));
    for (const auto& f : {bmode, gt, env, io::sidecar_path(env), prov})
      manifest.corpus.push_back(dataset::make_entry(opt.out, f));
    sample_list.push_back({{"id", stem}, {"mask", samples[i].phantom.mask_name}, {"seed", samples[i].phantom.seed}});
  }
  manifest.simulator = {{"psf", simulator::to_json(params.psf)},
                        {"width_mm", params.width_mm},
                        {"depth_mm", params.depth_mm},
                        {"n_scatterers", params.n_scatterers},
                        {"out_size", params.out_size},
                        {"dynamic_range_db", simulator::kDynamicRangeDb},
                        {"seed", opt.seed},
                        {"samples", sample_list}};
  dataset::write_manifest(manifest, opt.out / "manifest.json");

  write_json(opt.out / "config.json", {{"command", "simulate"},
                                       {"masks", opt.masks.string()},
                                       {"out", opt.out.string()},
                                       {"count", opt.count},
                                       {"seed", opt.seed},
                                       {"psf_config", opt_path(opt.psf_config)},
                                       {"psf", simulator::to_json(params.psf)},
                                       {"size", opt.size},
                                       {"n_scatterers", opt.n_scatterers},
                                       {"width_mm", opt.width_mm},
                                       {"depth_mm", opt.depth_mm},
                                       {"format", opt.format},
                                       {"version", tool_version()}});
  return {{"command", "simulate"}, {"samples", samples.size()}, {"out", opt.out.string()}};
}

json run_adapt(const AdaptOptions& opt, unsigned jobs) {
  const auto mode = dataset::parse_pairing_mode(opt.pairing);
  const fda::FdaParams params{opt.alpha, fda::parse_range_policy(opt.range)};
  (void)fda::build_mask(1, 1, params.alpha);  // validates alpha before any I/O

  const auto source_files = io::list_image_files(opt.source);
  const auto target_files = io::list_image_files(opt.target);
  if (target_files.empty()) throw ConfigurationError(opt.target.string() + ": target directory has no images");
  const auto sources = ids_of(source_files);
  const auto targets = ids_of(target_files);

  dataset::PairingPlan plan;
  if (opt.manifest) {
    const auto recorded = dataset::load_manifest(*opt.manifest);
    const auto it = std::find_if(recorded.pairings.begin(), recorded.pairings.end(),
                                 [&](const dataset::PairingRecord& r) { return r.plan.mode == mode; });
    if (it == recorded.pairings.end())
      throw ManifestError(opt.manifest->string() + ": no " + std::string(dataset::to_string(mode)) + " pairing plan");
    plan = it->plan;
  } else {
    plan = dataset::make_plan(sources, targets, mode, opt.seed);
  }
  const auto assignment = dataset::resolve(plan, sources, opt.iteration);
  const auto indices = dataset::to_indices(assignment, sources, targets);

  std::vector<Image2D> src_imgs, tgt_imgs;
  for (const auto& f : source_files) src_imgs.push_back(io::read_image(f));
  for (const auto& f : target_files) tgt_imgs.push_back(io::read_image(f));
  const auto adapted = fda::adapt_batch(src_imgs, tgt_imgs, indices, params, jobs);

  make_dir(opt.out);
  dataset::DatasetManifest manifest;
  manifest.tool_version = tool_version();
  for (std::size_t i = 0; i < adapted.size(); ++i) {
    const fs::path out_file = opt.out / source_files[i].filename();
    io::write_image(out_file, adapted[i]);
  }
  for (const auto& f : source_files) manifest.corpus.push_back(dataset::make_entry(opt.out, f));
  for (const auto& f : target_files) manifest.corpus.push_back(dataset::make_entry(opt.out, f));
  for (const auto& f : source_files) {
    const fs::path out_file = opt.out / f.filename();
    manifest.corpus.push_back(dataset::make_entry(opt.out, out_file));
    if (out_file.extension() == ".f32") manifest.corpus.push_back(dataset::make_entry(opt.out, io::sidecar_path(out_file)));
  }
  std::optional<std::uint64_t> iteration;
  if (mode == dataset::PairingMode::random_per_iteration) iteration = opt.iteration;
  manifest.pairings.push_back({"adapt", plan, iteration, assignment});
  manifest.fda = params;
  dataset::write_manifest(manifest, opt.out / "manifest.json");

  write_json(opt.out / "config.json", {{"command", "adapt"},
                                       {"source", opt.source.string()},
                                       {"target", opt.target.string()},
                                       {"out", opt.out.string()},
                                       {"alpha", opt.alpha},
                                       {"seed", opt.seed},
                                       {"pairing", std::string(dataset::to_string(mode))},
                                       {"iteration", opt.iteration},
                                       {"manifest", opt_path(opt.manifest)},
                                       {"range", opt.range},
                                       {"version", tool_version()}});
  return {{"command", "adapt"}, {"images", adapted.size()}, {"out", opt.out.string()}};
}

json run_split(const SplitOptions& opt) {
  const auto files = io::list_image_files(opt.corpus);
  const auto ids = ids_of(files);
  const dataset::SplitSpec spec{opt.train, opt.val, opt.test, opt.seed};
  const auto result = dataset::split(ids, spec);

  make_dir(opt.out);
  write_json(opt.out / "split.json", {{"train", result.train},
                                      {"val", result.val},
                                      {"test", result.test},
                                      {"unassigned", result.unassigned},
                                      {"spec", {{"train", spec.train}, {"val", spec.val}, {"test", spec.test}, {"seed", spec.seed}}}});
  dataset::DatasetManifest manifest;
  manifest.tool_version = tool_version();
  for (const auto& f : files) manifest.corpus.push_back(dataset::make_entry(opt.out, f));
  manifest.split_spec = spec;
  manifest.split = result;
  dataset::write_manifest(manifest, opt.out / "manifest.json");
  write_json(opt.out / "config.json", {{"command", "split"},
                                       {"corpus", opt.corpus.string()},
                                       {"out", opt.out.string()},
                                       {"train", opt.train},
                                       {"val", opt.val},
                                       {"test", opt.test},
                                       {"seed", opt.seed},
                                       {"version", tool_version()}});
  return {{"command", "split"},
          {"train", result.train.size()},
          {"val", result.val.size()},
          {"test", result.test.size()},
          {"unassigned", result.unassigned.size()}};
}

json run_evaluate(const EvaluateOptions& opt, unsigned jobs) {
  const auto report = metrics::evaluate_batch(opt.pred, opt.gt, opt.epsilon, jobs);
  const json rj = metrics::to_json(report);
  if (opt.out) {
    make_dir(*opt.out);
    write_json(*opt.out / "report.json", rj);
    if (opt.table) {
      std::ofstream(*opt.out / "report.txt", std::ios::binary) << metrics::format_table(report);
    }
    write_json(*opt.out / "config.json", {{"command", "evaluate"},
                                          {"pred", opt.pred.string()},
                                          {"gt", opt.gt.string()},
                                          {"out", opt.out->string()},
                                          {"epsilon", opt.epsilon},
                                          {"table", opt.table},
                                          {"version", tool_version()}});
  } else if (opt.table) {
    std::cout << metrics::format_table(report);
  }
  return {{"command", "evaluate"},
          {"count", report.ids.size()},
          {"mean", report.mean},
          {"median", report.median},
          {"std", report.std}};
}

json run_mask(const MaskOptions& opt) {
  const auto mask = fda::build_mask(opt.width, opt.height, opt.alpha);
  io::write_image(opt.out, mask.to_image());
  write_json(config_beside(opt.out), {{"command", "mask"},
                                      {"width", opt.width},
                                      {"height", opt.height},
                                      {"alpha", opt.alpha},
                                      {"out", opt.out.string()},
                                      {"version", tool_version()}});
  return {{"command", "mask"}, {"ones", mask.count()}, {"out", opt.out.string()}};
}

json run_spectrum(const SpectrumOptions& opt) {
  const auto img = io::read_image(opt.input);
  io::write_image(opt.out, spectral::log_magnitude_image(spectral::forward_dft(img)));
  write_json(config_beside(opt.out), {{"command", "spectrum"},
                                      {"input", opt.input.string()},
                                      {"out", opt.out.string()},
                                      {"version", tool_version()}});
  return {{"command", "spectrum"}, {"width", img.width()}, {"height", img.height()}, {"out", opt.out.string()}};
}

}  // namespace usfda::cli
