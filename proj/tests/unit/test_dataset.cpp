#include <doctest.h>

#include <fstream>
#include <random>
#include <set>

#include "../support/temp_dir.hpp"
#include "usfda/dataset.hpp"
#include "usfda/error.hpp"
#include "usfda/hash.hpp"

using namespace usfda;
using namespace usfda::dataset;
using usfda::testing::TempDir;

namespace {

std::vector<SampleId> make_ids(std::size_t n, const std::string& prefix = "img_") {
  std::vector<SampleId> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back(prefix + std::to_string(i) + ".png");
  return ids;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << content;
}

}  // namespace

TEST_CASE("split of 163 ids into 20/20/123 is a disjoint partition") {
  const auto ids = make_ids(163);
  const auto s = split(ids, {20, 20, 123, 7});
  CHECK(s.train.size() == 20);
  CHECK(s.val.size() == 20);
  CHECK(s.test.size() == 123);
  CHECK(s.unassigned.empty());

  std::multiset<SampleId> all;
  for (const auto* part : {&s.train, &s.val, &s.test, &s.unassigned}) all.insert(part->begin(), part->end());
  CHECK(all == std::multiset<SampleId>(ids.begin(), ids.end()));

  CHECK(split(ids, {20, 20, 123, 7}) == s);
  CHECK(split(ids, {20, 20, 123, 8}) != s);
}

TEST_CASE("split partition property on random specs") {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(0, 60)(gen);
    const auto ids = make_ids(n);
    std::uniform_int_distribution<std::size_t> part(0, n / 3);
    const SplitSpec spec{part(gen), part(gen), part(gen), gen()};
    const auto s = split(ids, spec);
    CHECK(s.train.size() == spec.train);
    CHECK(s.val.size() == spec.val);
    CHECK(s.test.size() == spec.test);
    CHECK(s.unassigned.size() == n - spec.train - spec.val - spec.test);
    std::set<SampleId> seen;
    for (const auto* p : {&s.train, &s.val, &s.test, &s.unassigned})
      for (const auto& id : *p) CHECK(seen.insert(id).second);
    CHECK(seen.size() == n);
  }
}

TEST_CASE("split edge cases") {
  const auto ids = make_ids(5);
  const auto empty = split(ids, {0, 0, 0, 1});
  CHECK(empty.train.empty());
  CHECK(empty.val.empty());
  CHECK(empty.test.empty());
  CHECK(empty.unassigned.size() == 5);
  CHECK_THROWS_AS((void)split(ids, {3, 2, 1, 0}), ConfigurationError);
  const std::vector<SampleId> dup{"a", "b", "a"};
  CHECK_THROWS_AS((void)split(dup, {1, 0, 0, 0}), ConfigurationError);
}

TEST_CASE("fixed pairing returns the stored map at every iteration") {
  const auto sources = make_ids(10, "src_");
  const auto targets = make_ids(4, "tgt_");
  PairingPlan plan;
  plan.mode = PairingMode::fixed;
  plan.target_pool = targets;
  for (std::size_t i = 0; i < sources.size(); ++i) plan.assignments[sources[i]] = targets[i % 4];
  for (std::uint64_t it : {0u, 1u, 99u}) CHECK(resolve(plan, sources, it) == plan.assignments);

  const auto drawn = make_plan(sources, targets, PairingMode::fixed, 5);
  CHECK(drawn.assignments.size() == sources.size());
  CHECK(resolve(drawn, sources, 0) == resolve(drawn, sources, 17));

  auto missing = plan;
  missing.assignments.erase(sources[3]);
  CHECK_THROWS_AS((void)resolve(missing, sources, 0), PairingError);
  auto stray = plan;
  stray.assignments[sources[0]] = "elsewhere.png";
  CHECK_THROWS_AS((void)resolve(stray, sources, 0), PairingError);
}

TEST_CASE("random pairing is reproducible per (seed, iteration) and varies across iterations") {
  const auto sources = make_ids(1000, "src_");
  const auto targets = make_ids(40, "tgt_");
  const auto a = make_pairing(sources, targets, PairingMode::random_per_iteration, 11, 3);
  const auto b = make_pairing(sources, targets, PairingMode::random_per_iteration, 11, 3);
  const auto c = make_pairing(sources, targets, PairingMode::random_per_iteration, 11, 4);
  CHECK(a == b);
  CHECK(a != c);
  const std::set<SampleId> pool(targets.begin(), targets.end());
  for (const auto& [s, t] : a) CHECK(pool.contains(t));
  CHECK(a.size() == sources.size());

  // A single source resolves identically on its own.
  const std::vector<SampleId> one{sources[123]};
  CHECK(make_pairing(one, targets, PairingMode::random_per_iteration, 11, 3).at(sources[123]) == a.at(sources[123]));
}

TEST_CASE("random pairing is uniform over the target pool") {
  const auto sources = make_ids(1000, "src_");
  const auto targets = make_ids(40, "tgt_");
  const auto plan = make_plan(sources, targets, PairingMode::random_per_iteration, 2021);
  std::vector<double> counts(40, 0.0);
  const std::size_t iterations = 25;
  for (std::uint64_t it = 0; it < iterations; ++it) {
    const auto idx = to_indices(resolve(plan, sources, it), sources, targets);
    for (std::size_t i : idx) {
      REQUIRE(i < 40);
      counts[i] += 1.0;
    }
  }
  const double expected = 1000.0 * iterations / 40.0;
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 0.999 quantile of chi-square with 39 degrees of freedom.
  CHECK(chi2 < 72.0547);
}

TEST_CASE("pairing rejects an empty target pool") {
  const auto sources = make_ids(3);
  CHECK_THROWS_AS((void)make_pairing(sources, {}, PairingMode::random_per_iteration, 0, 0), ConfigurationError);
  PairingPlan plan;
  CHECK_THROWS_AS((void)resolve(plan, sources, 0), ConfigurationError);
  CHECK(parse_pairing_mode("random") == PairingMode::random_per_iteration);
  CHECK_THROWS_AS(parse_pairing_mode("round-robin"), ConfigurationError);
}

TEST_CASE("manifest write then load is lossless") {
  TempDir dir;
  write_file(dir / "data/a.png", "alpha");
  write_file(dir / "data/b.png", "beta");

  DatasetManifest m;
  m.tool_version = "test";
  m.corpus = {make_entry(dir.path(), dir / "data/a.png"), make_entry(dir.path(), dir / "data/b.png")};
  CHECK(m.corpus[0].path == "data/a.png");
  CHECK(m.corpus[0].sha256 == sha256_hex(std::span(reinterpret_cast<const unsigned char*>("alpha"), 5)));
  m.split_spec = SplitSpec{1, 1, 0, 42};
  m.split = split(std::vector<SampleId>{"a.png", "b.png"}, *m.split_spec);
  const std::vector<SampleId> src{"a.png"}, tgt{"b.png"};
  const auto plan = make_plan(src, tgt, PairingMode::fixed, 9);
  m.pairings.push_back({"validation", plan, std::nullopt, resolve(plan, src, 0)});
  m.fda = fda::FdaParams{0.014, fda::RangePolicy::rescale};
  m.simulator = {{"psf", {{"f_number", 2.0}}}};

  write_manifest(m, dir / "manifest.json");
  CHECK(load_manifest(dir / "manifest.json") == m);
}

TEST_CASE("manifest round trip holds for generated manifests") {
  std::mt19937_64 gen(8);
  std::uniform_int_distribution<int> small(0, 6);
  for (int trial = 0; trial < 20; ++trial) {
    TempDir dir;
    DatasetManifest m;
    m.tool_version = "v" + std::to_string(trial) + " \xc3\xa9";
    std::vector<SampleId> ids;
    const int files = small(gen);
    for (int f = 0; f < files; ++f) {
      const std::string name = "f" + std::to_string(f) + "_\xce\xbb.pgm";
      write_file(dir / name, std::to_string(gen()));
      m.corpus.push_back(make_entry(dir.path(), dir / name));
      ids.push_back(name);
    }
    if (small(gen) % 2) {
      m.split_spec = SplitSpec{0, 0, static_cast<std::size_t>(files), gen()};
      m.split = split(ids, *m.split_spec);
    }
    if (!ids.empty() && small(gen) % 2) {
      const auto mode = small(gen) % 2 ? PairingMode::fixed : PairingMode::random_per_iteration;
      const auto plan = make_plan(ids, ids, mode, gen());
      const std::uint64_t it = gen();
      m.pairings.push_back({"p" + std::to_string(trial), plan, it, resolve(plan, ids, it)});
    }
    if (small(gen) % 2) {
      m.fda = fda::FdaParams{std::uniform_real_distribution<double>(1e-6, 0.999)(gen), fda::RangePolicy::clip};
    }
    if (small(gen) % 2) m.simulator = {{"seed", gen()}, {"value", std::uniform_real_distribution<double>()(gen)}};
    write_manifest(m, dir / "m.json");
    CHECK(load_manifest(dir / "m.json") == m);
  }
}

TEST_CASE("manifest load detects tampering and missing files") {
  TempDir dir;
  write_file(dir / "x.png", "original");
  DatasetManifest m;
  m.tool_version = "t";
  m.corpus = {make_entry(dir.path(), dir / "x.png")};
  write_manifest(m, dir / "manifest.json");

  write_file(dir / "x.png", "tampered");
  try {
    (void)load_manifest(dir / "manifest.json");
    FAIL("expected IntegrityError");
  } catch (const IntegrityError& e) {
    CHECK(std::string(e.what()).find("x.png") != std::string::npos);
  }

  std::filesystem::remove(dir / "x.png");
  try {
    (void)load_manifest(dir / "manifest.json");
    FAIL("expected IntegrityError");
  } catch (const IntegrityError& e) {
    CHECK(std::string(e.what()).find("x.png") != std::string::npos);
  }

  write_file(dir / "bad.json", "{\"tool_version\": 3}");
  CHECK_THROWS_AS((void)load_manifest(dir / "bad.json"), ManifestError);
}

TEST_CASE("sha256 of known vectors") {
  CHECK(sha256_hex({}) == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  const std::string abc = "abc";
  CHECK(sha256_hex(std::span(reinterpret_cast<const unsigned char*>(abc.data()), abc.size())) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
