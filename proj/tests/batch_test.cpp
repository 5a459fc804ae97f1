#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "attncrop/batch.hpp"
#include "attncrop/error.hpp"
#include "attncrop/image_io.hpp"
#include "attncrop/manifest.hpp"
#include "synthetic.hpp"

namespace attncrop {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

JobConfig job(const fs::path& in, const fs::path& out, RunMode mode) {
  JobConfig c;
  c.input_dir = in;
  c.output_dir = out;
  c.mode = mode;
  return c;
}

TEST(RunMode, ParsesCliSpellings) {
  EXPECT_EQ(parse_run_mode("crop"), RunMode::kCrop);
  EXPECT_EQ(parse_run_mode("augment"), RunMode::kAugment);
  EXPECT_EQ(parse_run_mode("saliency-debug"), RunMode::kSaliencyDebug);
  EXPECT_FALSE(parse_run_mode("random"));
  EXPECT_EQ(to_string(RunMode::kSaliencyDebug), "saliency-debug");
}

TEST(DiscoverImages, FiltersExtensionsCaseInsensitively) {
  TempDir dir("discover");
  fs::create_directories(dir.path() / "b");
  for (const char* name : {"a.PNG", "b/c.jpeg", "b/d.JPG", "notes.txt", "b/e.gif"})
    std::ofstream(dir.path() / name) << "x";
  EXPECT_EQ(discover_images(dir.path(), JobConfig{}.image_extensions),
            (std::vector<std::string>{"a.PNG", "b/c.jpeg", "b/d.JPG"}));
  EXPECT_THROW(discover_images(dir.path() / "missing", {".png"}), IoError);
}

TEST(ImageSeed, StableAndPathDependent) {
  EXPECT_EQ(image_seed("a/b.png", 1), image_seed("a/b.png", 1));
  EXPECT_NE(image_seed("a/b.png", 1), image_seed("a/c.png", 1));
  EXPECT_NE(image_seed("a/b.png", 1), image_seed("a/b.png", 2));
}

TEST(RunBatch, EmptyInputDirectory) {
  TempDir in("in");
  TempDir out("out");
  const auto summary = run_batch(job(in.path(), out.path(), RunMode::kCrop));
  EXPECT_EQ(summary.discovered, 0u);
  EXPECT_EQ(summary.processed, 0u);
  EXPECT_EQ(summary.manifest_path, out.path() / "manifest.jsonl");
  EXPECT_EQ(fs::file_size(summary.manifest_path), 0u);
}

TEST(RunBatch, AugmentEmitsOriginalAndCroppedVariants) {
  TempDir in("in");
  TempDir out("out");
  fs::create_directories(in.path() / "roses");
  write_image(in.path() / "roses" / "r1.png", testing::scene_image(80, 100, 1), ImageFormat::kPng);

  const auto summary = run_batch(job(in.path(), out.path(), RunMode::kAugment));
  EXPECT_EQ(summary.processed, 1u);
  EXPECT_EQ(summary.failed, 0u);
  EXPECT_TRUE(fs::exists(out.path() / "roses" / "r1.orig.png"));
  EXPECT_TRUE(fs::exists(out.path() / "roses" / "r1.ac.png"));

  const auto records = read_manifest(summary.manifest_path);
  ASSERT_EQ(records.size(), 1u);
  const auto& rec = records[0];
  EXPECT_EQ(rec.source_path, "roses/r1.png");
  EXPECT_EQ(rec.label, "roses");
  ASSERT_EQ(rec.outputs.size(), 2u);
  EXPECT_EQ(rec.outputs[0], (ManifestOutput{"orig", "roses/r1.orig.png"}));
  EXPECT_EQ(rec.outputs[1], (ManifestOutput{"ac", "roses/r1.ac.png"}));
  EXPECT_EQ(testing::read_file(out.path() / "roses" / "r1.orig.png"),
            testing::read_file(in.path() / "roses" / "r1.png"));
  EXPECT_FALSE(rec.elapsed_ms);
}

TEST(RunBatch, RecordedBoxReproducesOutput) {
  TempDir in("in");
  TempDir out("out");
  for (int i = 0; i < 3; ++i)
    write_image(in.path() / ("s" + std::to_string(i) + ".png"), testing::scene_image(90, 120, 10 + i),
                ImageFormat::kPng);
  const auto summary = run_batch(job(in.path(), out.path(), RunMode::kCrop));
  for (const auto& rec : read_manifest(summary.manifest_path)) {
    const Image src = read_image(in.path() / rec.source_path).image;
    const Image emitted = read_image(out.path() / rec.outputs.at(0).path).image;
    EXPECT_EQ(apply_crop(src, rec.box), emitted) << rec.source_path;
    EXPECT_FALSE(rec.label);
  }
}

TEST(RunBatch, TargetSizeAppliesToBothVariants) {
  TempDir in("in");
  TempDir out("out");
  write_image(in.path() / "a.jpg", testing::scene_image(100, 150, 3), ImageFormat::kJpeg);
  auto config = job(in.path(), out.path(), RunMode::kAugment);
  config.ac.target_size = TargetSize{64, 48};
  run_batch(config);
  for (const char* name : {"a.orig.jpg", "a.ac.jpg"}) {
    const auto decoded = read_image(out.path() / name);
    EXPECT_EQ(decoded.format, ImageFormat::kJpeg);
    EXPECT_EQ(decoded.image.width(), 64);
    EXPECT_EQ(decoded.image.height(), 48);
  }
}

TEST(RunBatch, SaliencyDebugWritesIntermediates) {
  TempDir in("in");
  TempDir out("out");
  write_image(in.path() / "blob.png", testing::blob_image(64, 28, 35, 0.2, 1.0), ImageFormat::kPng);
  const auto summary = run_batch(job(in.path(), out.path(), RunMode::kSaliencyDebug));
  ASSERT_EQ(summary.processed, 1u);
  EXPECT_TRUE(summary.warnings.empty());

  const Image saliency = read_image(out.path() / "blob.saliency.png").image;
  const Image labels = read_image(out.path() / "blob.labels.png").image;
  EXPECT_EQ(saliency.height(), 64);
  EXPECT_EQ(labels.width(), 64);

  // Brightest debug pixel falls inside the blob.
  int best_r = 0, best_c = 0;
  for (int r = 0; r < 64; ++r)
    for (int c = 0; c < 64; ++c)
      if (saliency(r, c).r > saliency(best_r, best_c).r) {
        best_r = r;
        best_c = c;
      }
  EXPECT_TRUE(best_r >= 28 && best_r <= 35 && best_c >= 28 && best_c <= 35);

  std::set<std::tuple<double, double, double>> colours;
  for (const auto& px : labels.values()) colours.insert({px.r, px.g, px.b});
  EXPECT_EQ(colours.size(), 3u);

  const auto records = read_manifest(summary.manifest_path);
  ASSERT_EQ(records.at(0).outputs.size(), 3u);
  EXPECT_EQ(records[0].outputs[1].path, "blob.saliency.png");
}

TEST(RunBatch, BadFilesAreRecordedNotFatal) {
  TempDir in("in");
  TempDir out("out");
  write_image(in.path() / "good.png", testing::scene_image(50, 50, 1), ImageFormat::kPng);
  std::ofstream(in.path() / "bad.jpg") << "not a jpeg";
  std::ofstream(in.path() / "ignored.txt") << "skip me";
  const auto summary = run_batch(job(in.path(), out.path(), RunMode::kCrop));
  EXPECT_EQ(summary.discovered, 2u);
  EXPECT_EQ(summary.processed, 1u);
  EXPECT_EQ(summary.failed, 1u);
  EXPECT_EQ(summary.processed + summary.failed, summary.discovered);
  ASSERT_EQ(summary.failures.size(), 1u);
  EXPECT_EQ(summary.failures[0].source_path, "bad.jpg");
  EXPECT_EQ(read_manifest(summary.manifest_path).size(), 1u);
}

TEST(RunBatch, MissingInputIsFatal) {
  TempDir out("out");
  EXPECT_THROW(run_batch(job(out.path() / "nope", out.path(), RunMode::kCrop)), IoError);
  auto bad = job(out.path(), out.path() / "o", RunMode::kCrop);
  bad.workers = 0;
  EXPECT_THROW(run_batch(bad), InvalidConfig);
}

TEST(RunBatch, WorkerCountDoesNotChangeBytes) {
  TempDir in("in");
  testing::write_corpus(in.path(), 12, 96, 128, ImageFormat::kJpeg, 500);
  TempDir out1("out");
  TempDir out4("out");
  auto c1 = job(in.path(), out1.path(), RunMode::kAugment);
  auto c4 = job(in.path(), out4.path(), RunMode::kAugment);
  c1.workers = 1;
  c4.workers = 4;
  run_batch(c1);
  run_batch(c4);
  EXPECT_EQ(testing::snapshot_tree(out1.path()), testing::snapshot_tree(out4.path()));
}

TEST(RunBatch, TimingOptIn) {
  TempDir in("in");
  TempDir out("out");
  write_image(in.path() / "a.png", testing::scene_image(40, 40, 1), ImageFormat::kPng);
  auto config = job(in.path(), out.path(), RunMode::kCrop);
  config.record_timing = true;
  config.manifest_path = out.path() / "sub" / "m.jsonl";
  const auto summary = run_batch(config);
  const auto records = read_manifest(out.path() / "sub" / "m.jsonl");
  ASSERT_EQ(records.size(), 1u);
  ASSERT_TRUE(records[0].elapsed_ms);
  EXPECT_GT(*records[0].elapsed_ms, 0.0);
  EXPECT_GT(summary.images_per_second, 0.0);
}

}  // namespace
}  // namespace attncrop
