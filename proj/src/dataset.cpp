#include "usfda/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>

#include "usfda/error.hpp"
#include "usfda/hash.hpp"
#include "usfda/rng.hpp"

namespace usfda::dataset {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kSplitStream = 0x5b1;
constexpr std::uint64_t kRandomPairStream = 0x9a1;
constexpr std::uint64_t kFixedPairStream = 0xf1d;

std::size_t draw_index(std::uint64_t stream, std::size_t n) {
  auto gen = rng::engine(stream);
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen);
}

std::size_t draw_for(std::uint64_t seed, std::uint64_t tag, std::uint64_t iteration, const SampleId& source,
                     std::size_t pool) {
  const std::uint64_t stream = rng::derive(rng::derive(rng::derive(seed, tag), iteration), rng::hash_string(source));
  return draw_index(stream, pool);
}

// nlohmann::json gets/sets, kept local so the public header stays lean.
json split_spec_json(const SplitSpec& s) {
  return {{"train", s.train}, {"val", s.val}, {"test", s.test}, {"seed", s.seed}};
}

SplitSpec split_spec_from(const json& j) {
  return {j.at("train").get<std::size_t>(), j.at("val").get<std::size_t>(), j.at("test").get<std::size_t>(),
          j.at("seed").get<std::uint64_t>()};
}

json plan_json(const PairingPlan& p) {
  return {{"mode", to_string(p.mode)}, {"assignments", p.assignments}, {"target_pool", p.target_pool}, {"seed", p.seed}};
}

PairingPlan plan_from(const json& j) {
  PairingPlan p;
  p.mode = parse_pairing_mode(j.at("mode").get<std::string>());
  p.assignments = j.at("assignments").get<Assignment>();
  p.target_pool = j.at("target_pool").get<std::vector<SampleId>>();
  p.seed = j.at("seed").get<std::uint64_t>();
  return p;
}

}  // namespace

SplitResult split(std::span<const SampleId> corpus, const SplitSpec& spec) {
  const std::size_t wanted = spec.train + spec.val + spec.test;
  if (wanted > corpus.size())
    throw ConfigurationError("split asks for " + std::to_string(wanted) + " ids but the corpus has " +
                             std::to_string(corpus.size()));
  if (std::set<SampleId>(corpus.begin(), corpus.end()).size() != corpus.size())
    throw ConfigurationError("corpus contains duplicate sample ids");

  std::vector<SampleId> ids(corpus.begin(), corpus.end());
  auto gen = rng::engine(rng::derive(spec.seed, kSplitStream));
  std::shuffle(ids.begin(), ids.end(), gen);

  SplitResult out;
  auto it = ids.begin();
  auto take = [&](std::size_t n, std::vector<SampleId>& dst) {
    dst.assign(it, it + static_cast<std::ptrdiff_t>(n));
    it += static_cast<std::ptrdiff_t>(n);
  };
  take(spec.train, out.train);
  take(spec.val, out.val);
  take(spec.test, out.test);
  out.unassigned.assign(it, ids.end());
  return out;
}

PairingMode parse_pairing_mode(std::string_view name) {
  if (name == "random" || name == "random_per_iteration") return PairingMode::random_per_iteration;
  if (name == "fixed") return PairingMode::fixed;
  throw ConfigurationError("unknown pairing mode '" + std::string(name) + "' (expected random|fixed)");
}

std::string_view to_string(PairingMode mode) {
  return mode == PairingMode::fixed ? "fixed" : "random_per_iteration";
}

PairingPlan make_plan(std::span<const SampleId> sources, std::span<const SampleId> targets, PairingMode mode,
                      std::uint64_t seed) {
  if (targets.empty()) throw ConfigurationError("target pool is empty");
  PairingPlan plan;
  plan.mode = mode;
  plan.seed = seed;
  plan.target_pool.assign(targets.begin(), targets.end());
  if (mode == PairingMode::fixed) {
    for (const SampleId& s : sources)
      plan.assignments[s] = targets[draw_for(seed, kFixedPairStream, 0, s, targets.size())];
  }
  return plan;
}

Assignment resolve(const PairingPlan& plan, std::span<const SampleId> sources, std::uint64_t iteration) {
  if (plan.target_pool.empty()) throw ConfigurationError("target pool is empty");
  Assignment out;
  if (plan.mode == PairingMode::fixed) {
    const std::set<SampleId> pool(plan.target_pool.begin(), plan.target_pool.end());
    for (const SampleId& s : sources) {
      const auto it = plan.assignments.find(s);
      if (it == plan.assignments.end()) throw PairingError("fixed pairing has no target for source '" + s + "'");
      if (!pool.contains(it->second))
        throw PairingError("fixed pairing maps '" + s + "' to '" + it->second + "', which is not in the target pool");
      out.emplace(s, it->second);
    }
    return out;
  }
  for (const SampleId& s : sources)
    out[s] = plan.target_pool[draw_for(plan.seed, kRandomPairStream, iteration, s, plan.target_pool.size())];
  return out;
}

Assignment make_pairing(std::span<const SampleId> sources, std::span<const SampleId> targets, PairingMode mode,
                        std::uint64_t seed, std::uint64_t iteration) {
  return resolve(make_plan(sources, targets, mode, seed), sources, iteration);
}

std::vector<std::size_t> to_indices(const Assignment& assignment, std::span<const SampleId> sources,
                                    std::span<const SampleId> targets) {
  std::map<SampleId, std::size_t> index;
  for (std::size_t i = 0; i < targets.size(); ++i) index.emplace(targets[i], i);
  std::vector<std::size_t> out;
  out.reserve(sources.size());
  for (const SampleId& s : sources) {
    const auto a = assignment.find(s);
    if (a == assignment.end()) throw PairingError("no target assigned to source '" + s + "'");
    const auto t = index.find(a->second);
    if (t == index.end()) throw PairingError("assigned target '" + a->second + "' is not available");
    out.push_back(t->second);
  }
  return out;
}

CorpusEntry make_entry(const fs::path& base_dir, const fs::path& file) {
  const fs::path rel = fs::absolute(file).lexically_normal().lexically_relative(fs::absolute(base_dir).lexically_normal());
  return {rel.generic_string(), sha256_file(file)};
}

json to_json(const DatasetManifest& m) {
  json corpus = json::array();
  for (const auto& e : m.corpus) corpus.push_back({{"path", e.path}, {"sha256", e.sha256}});
  json pairings = json::array();
  for (const auto& p : m.pairings) {
    pairings.push_back({{"name", p.name},
                        {"plan", plan_json(p.plan)},
                        {"iteration", p.iteration ? json(*p.iteration) : json(nullptr)},
                        {"resolved", p.resolved}});
  }
  json j = {{"tool_version", m.tool_version}, {"corpus", corpus}, {"pairings", pairings},
            {"simulator", m.simulator}};
  j["split_spec"] = m.split_spec ? split_spec_json(*m.split_spec) : json(nullptr);
  j["split"] = m.split ? json{{"train", m.split->train},
                              {"val", m.split->val},
                              {"test", m.split->test},
                              {"unassigned", m.split->unassigned}}
                       : json(nullptr);
  j["fda"] = m.fda ? json{{"alpha", m.fda->alpha}, {"range_policy", fda::to_string(m.fda->range_policy)}}
                   : json(nullptr);
  return j;
}

DatasetManifest manifest_from_json(const json& j) {
  try {
    DatasetManifest m;
    m.tool_version = j.at("tool_version").get<std::string>();
    for (const auto& e : j.at("corpus")) m.corpus.push_back({e.at("path").get<std::string>(), e.at("sha256").get<std::string>()});
    for (const auto& p : j.at("pairings")) {
      PairingRecord r;
      r.name = p.at("name").get<std::string>();
      r.plan = plan_from(p.at("plan"));
      if (!p.at("iteration").is_null()) r.iteration = p.at("iteration").get<std::uint64_t>();
      r.resolved = p.at("resolved").get<Assignment>();
      m.pairings.push_back(std::move(r));
    }
    if (!j.at("split_spec").is_null()) m.split_spec = split_spec_from(j.at("split_spec"));
    if (const auto& s = j.at("split"); !s.is_null()) {
      m.split = SplitResult{s.at("train").get<std::vector<SampleId>>(), s.at("val").get<std::vector<SampleId>>(),
                            s.at("test").get<std::vector<SampleId>>(), s.at("unassigned").get<std::vector<SampleId>>()};
    }
    if (const auto& f = j.at("fda"); !f.is_null())
      m.fda = fda::FdaParams{f.at("alpha").get<double>(), fda::parse_range_policy(f.at("range_policy").get<std::string>())};
    m.simulator = j.at("simulator");
    return m;
  } catch (const json::exception& e) {
    throw ManifestError(std::string("malformed manifest: ") + e.what());
  } catch (const ConfigurationError& e) {
    throw ManifestError(std::string("malformed manifest: ") + e.what());
  } catch (const ParameterError& e) {
    throw ManifestError(std::string("malformed manifest: ") + e.what());
  }
}

void write_manifest(const DatasetManifest& manifest, const fs::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ManifestError(file.string() + ": cannot open for writing");
  out << to_json(manifest).dump(2) << '\n';
  if (!out) throw ManifestError(file.string() + ": write failed");
}

DatasetManifest load_manifest(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IntegrityError(file.string() + ": manifest not found");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ManifestError(file.string() + ": " + e.what());
  }
  DatasetManifest m = manifest_from_json(j);
  const fs::path base = file.parent_path();
  for (const auto& entry : m.corpus) {
    const fs::path path = base / fs::path(entry.path);
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) throw IntegrityError(path.string() + ": referenced file is missing");
    if (sha256_file(path) != entry.sha256) throw IntegrityError(path.string() + ": content hash mismatch");
  }
  return m;
}

}  // namespace usfda::dataset
