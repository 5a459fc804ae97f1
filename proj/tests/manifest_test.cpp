#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <random>

#include "attncrop/error.hpp"
#include "attncrop/manifest.hpp"
#include "synthetic.hpp"

namespace attncrop {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

ManifestRecord random_record(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::uniform_int_distribution<int> i(0, 500);
  ManifestRecord r;
  r.source_path = "class_" + std::to_string(i(rng)) + "/img " + std::to_string(i(rng)) + "-é.jpg";
  r.outputs = {{"orig", "x/" + std::to_string(i(rng)) + ".orig.jpg"}, {"ac", "x/y.ac.jpg"}};
  if (i(rng) % 2) r.label = "class_" + std::to_string(i(rng));
  r.box = {i(rng), i(rng), i(rng) + 500, i(rng) + 500};
  r.th = u(rng);
  r.scale_index = i(rng) % 8;
  r.sigma = u(rng);
  r.entropy = u(rng) / 3.0;
  r.clusters_found = 1 + i(rng) % 3;
  r.fallback = i(rng) % 2 == 0;
  r.degenerate = i(rng) % 3 == 0;
  r.source_width = i(rng) + 1;
  r.source_height = i(rng) + 1;
  r.seed = rng();
  if (i(rng) % 2) r.elapsed_ms = u(rng);
  return r;
}

TEST(Manifest, EmptyListWritesEmptyFile) {
  TempDir dir("manifest");
  write_manifest({}, dir.path() / "m.jsonl");
  ASSERT_TRUE(fs::exists(dir.path() / "m.jsonl"));
  EXPECT_EQ(fs::file_size(dir.path() / "m.jsonl"), 0u);
  EXPECT_TRUE(read_manifest(dir.path() / "m.jsonl").empty());
}

TEST(Manifest, LinesSortedBySourcePath) {
  TempDir dir("manifest");
  std::vector<ManifestRecord> records(3);
  records[0].source_path = "b/2.png";
  records[1].source_path = "a/9.png";
  records[2].source_path = "b/10.png";
  write_manifest(records, dir.path() / "m.jsonl");

  std::ifstream in(dir.path() / "m.jsonl");
  std::vector<std::string> paths;
  for (std::string line; std::getline(in, line);) paths.push_back(nlohmann::json::parse(line).at("source_path"));
  EXPECT_EQ(paths, (std::vector<std::string>{"a/9.png", "b/10.png", "b/2.png"}));
}

TEST(Manifest, RoundTripPreservesRecords) {
  TempDir dir("manifest");
  std::mt19937_64 rng(123);
  std::vector<ManifestRecord> records;
  for (int n = 0; n < 40; ++n) records.push_back(random_record(rng));
  write_manifest(records, dir.path() / "m.jsonl");
  auto sorted = records;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.source_path < b.source_path; });
  EXPECT_EQ(read_manifest(dir.path() / "m.jsonl"), sorted);
}

TEST(Manifest, CarriesSchemaVersionAndOmitsTimingByDefault) {
  ManifestRecord r;
  r.source_path = "a.png";
  const auto j = nlohmann::json::parse(to_json_line(r));
  EXPECT_EQ(j.at("schema_version"), "1");
  EXPECT_FALSE(j.contains("elapsed_ms"));
  EXPECT_TRUE(j.at("label").is_null());
}

TEST(Manifest, RejectsForeignSchemaAndMalformedLines) {
  ManifestRecord r;
  auto j = nlohmann::json::parse(to_json_line(r));
  j["schema_version"] = "2";
  EXPECT_THROW(parse_json_line(j.dump()), InvalidInput);
  EXPECT_THROW(parse_json_line("{not json"), InvalidInput);
  EXPECT_THROW(parse_json_line(R"({"schema_version":"1"})"), InvalidInput);
}

TEST(Manifest, NoTemporaryLeftBehindAndOldContentReplaced) {
  TempDir dir("manifest");
  const auto path = dir.path() / "m.jsonl";
  std::ofstream(path) << "stale\n";
  ManifestRecord r;
  r.source_path = "z.png";
  write_manifest({r}, path);
  EXPECT_EQ(read_manifest(path).size(), 1u);
  int files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir.path())) ++files;
  EXPECT_EQ(files, 1);
}

TEST(Manifest, UnwritablePathIsFatal) {
  EXPECT_THROW(write_manifest({}, "/nonexistent-dir/m.jsonl"), IoError);
}

}  // namespace
}  // namespace attncrop
