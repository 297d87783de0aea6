#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "usfda/fda.hpp"

namespace usfda::dataset {

// Sample ids are file paths relative to their dataset directory.
using SampleId = std::string;

struct SplitSpec {
  std::size_t train = 0;
  std::size_t val = 0;
  std::size_t test = 0;
  std::uint64_t seed = 0;

  bool operator==(const SplitSpec&) const = default;
};

struct SplitResult {
  std::vector<SampleId> train;
  std::vector<SampleId> val;
  std::vector<SampleId> test;
  std::vector<SampleId> unassigned;

  bool operator==(const SplitResult&) const = default;
};

// Seeded shuffle followed by a contiguous partition train | val | test |
// unassigned. Throws ConfigurationError when the counts exceed the corpus
// or the corpus holds duplicate ids.
SplitResult split(std::span<const SampleId> corpus, const SplitSpec& spec);

enum class PairingMode { random_per_iteration, fixed };

PairingMode parse_pairing_mode(std::string_view name);
std::string_view to_string(PairingMode mode);

// source id -> target id
using Assignment = std::map<SampleId, SampleId>;

struct PairingPlan {
  PairingMode mode = PairingMode::random_per_iteration;
  Assignment assignments;  // fixed mode only
  std::vector<SampleId> target_pool;
  std::uint64_t seed = 0;

  bool operator==(const PairingPlan&) const = default;
};

// Builds a plan over `targets`. A fixed plan draws one target per source
// up front and stores it; a random plan stores only the pool and seed.
PairingPlan make_plan(std::span<const SampleId> sources, std::span<const SampleId> targets,
                      PairingMode mode, std::uint64_t seed);

// Target for every source at `iteration`. Random mode draws from a stream
// derived from (seed, iteration, source id), so any single draw can be
// replayed on its own; fixed mode returns the stored map and ignores the
// iteration. Throws ConfigurationError on an empty pool and PairingError
// when a fixed plan lacks a source or points outside its pool.
Assignment resolve(const PairingPlan& plan, std::span<const SampleId> sources,
                   std::uint64_t iteration);

Assignment make_pairing(std::span<const SampleId> sources, std::span<const SampleId> targets,
                        PairingMode mode, std::uint64_t seed, std::uint64_t iteration);

// Assignment as target indices aligned with `sources`, for fda::adapt_batch.
std::vector<std::size_t> to_indices(const Assignment& assignment,
                                    std::span<const SampleId> sources,
                                    std::span<const SampleId> targets);

struct CorpusEntry {
  std::string path;  // relative to the manifest's directory, '/'-separated
  std::string sha256;

  bool operator==(const CorpusEntry&) const = default;
};

struct PairingRecord {
  std::string name;
  PairingPlan plan;
  std::optional<std::uint64_t> iteration;
  Assignment resolved;

  bool operator==(const PairingRecord&) const = default;
};

struct DatasetManifest {
  std::string tool_version;
  std::vector<CorpusEntry> corpus;
  std::optional<SplitSpec> split_spec;
  std::optional<SplitResult> split;
  std::vector<PairingRecord> pairings;
  std::optional<fda::FdaParams> fda;
  nlohmann::json simulator;  // simulator provenance; null when absent

  bool operator==(const DatasetManifest&) const = default;
};

// Hashes `file` and records it relative to `base_dir`.
CorpusEntry make_entry(const std::filesystem::path& base_dir, const std::filesystem::path& file);

nlohmann::json to_json(const DatasetManifest& manifest);
DatasetManifest manifest_from_json(const nlohmann::json& j);

// Writes UTF-8 JSON with sorted keys.
void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& file);

// Parses and verifies every corpus entry against its hash, resolving paths
// relative to the manifest's directory. Throws IntegrityError naming the
// first missing or mismatching file, ManifestError on malformed JSON.
DatasetManifest load_manifest(const std::filesystem::path& file);

}  // namespace usfda::dataset
