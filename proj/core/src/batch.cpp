#include "attncrop/batch.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <exception>
#include <thread>
#include <variant>

#include "attncrop/error.hpp"
#include "attncrop/image_io.hpp"
#include "attncrop/manifest.hpp"

namespace fs = std::filesystem;

namespace attncrop {

std::string_view to_string(RunMode mode) {
  switch (mode) {
    case RunMode::kCrop:
      return "crop";
    case RunMode::kAugment:
      return "augment";
    case RunMode::kSaliencyDebug:
      return "saliency-debug";
  }
  return "crop";
}

std::optional<RunMode> parse_run_mode(std::string_view text) {
  if (text == "crop") return RunMode::kCrop;
  if (text == "augment") return RunMode::kAugment;
  if (text == "saliency-debug") return RunMode::kSaliencyDebug;
  return std::nullopt;
}

fs::path JobConfig::resolved_manifest_path() const {
  return manifest_path ? *manifest_path : output_dir / "manifest.jsonl";
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// "a/b.jpg" + ".ac" -> "a/b.ac.jpg"
std::string with_suffix(const std::string& relative, std::string_view suffix) {
  const fs::path p(relative);
  fs::path out = p.parent_path() / p.stem();
  out += suffix;
  out += p.extension();
  return out.generic_string();
}

std::string without_extension(const std::string& relative) {
  const fs::path p(relative);
  return (p.parent_path() / p.stem()).generic_string();
}

void ensure_parent(const fs::path& file) {
  if (file.parent_path().empty()) return;
  std::error_code ec;
  fs::create_directories(file.parent_path(), ec);
  if (ec && !fs::is_directory(file.parent_path())) throw IoError("cannot create " + file.parent_path().string());
}

struct Processed {
  ManifestRecord record;
  std::vector<ImageFailure> warnings;
};

using Outcome = std::variant<std::monostate, Processed, ImageFailure>;

Processed process_one(const JobConfig& config, const std::string& relative) {
  const fs::path source = config.input_dir / relative;
  const DecodedImage decoded = read_image(source);

  ACConfig ac = config.ac;
  ac.kmeans.seed = image_seed(relative, config.global_seed);
  const bool debug = config.mode == RunMode::kSaliencyDebug;
  ACTrace trace;
  if (debug) {
    trace = attention_crop_traced(decoded.image, config.saliency, ac);
  } else {
    ACResult result = attention_crop(decoded.image, config.saliency, ac);
    trace.image = std::move(result.image);
    trace.record = result.record;
  }

  Processed out;
  ManifestRecord& rec = out.record;
  rec.source_path = relative;
  if (config.class_labels) {
    const auto parent = fs::path(relative).parent_path();
    if (!parent.empty()) rec.label = parent.filename().string();
  }
  rec.box = trace.record.box;
  rec.th = trace.record.th;
  rec.scale_index = trace.record.scale_index;
  rec.sigma = trace.record.sigma;
  rec.entropy = trace.record.entropy;
  rec.clusters_found = trace.record.clusters_found;
  rec.fallback = trace.record.fallback;
  rec.degenerate = trace.record.degenerate;
  rec.source_width = trace.record.source_width;
  rec.source_height = trace.record.source_height;
  rec.seed = ac.kmeans.seed;

  if (config.mode == RunMode::kAugment) {
    const std::string orig = with_suffix(relative, ".orig");
    const fs::path orig_path = config.output_dir / orig;
    ensure_parent(orig_path);
    if (config.ac.target_size) {
      write_image(orig_path, resize_to_target(decoded.image, *config.ac.target_size), decoded.format,
                  config.jpeg_quality);
    } else {
      std::error_code ec;
      fs::copy_file(source, orig_path, fs::copy_options::overwrite_existing, ec);
      if (ec) throw IoError("cannot copy " + source.string() + ": " + ec.message());
    }
    rec.outputs.push_back({"orig", orig});
  }

  const std::string ac_rel = config.mode == RunMode::kAugment ? with_suffix(relative, ".ac") : relative;
  const fs::path ac_path = config.output_dir / ac_rel;
  ensure_parent(ac_path);
  write_image(ac_path, trace.image, decoded.format, config.jpeg_quality);
  rec.outputs.push_back({"ac", ac_rel});

  if (debug) {
    const std::string prefix = without_extension(relative);
    try {
      emit_debug_artifacts(trace.saliency, trace.labels, config.output_dir / prefix);
      rec.outputs.push_back({"saliency", prefix + ".saliency.png"});
      rec.outputs.push_back({"labels", prefix + ".labels.png"});
    } catch (const std::exception& e) {
      out.warnings.push_back({relative, e.what()});
    }
  }

  if (config.record_timing) rec.elapsed_ms = trace.record.elapsed_ms;
  return out;
}

}  // namespace

std::vector<std::string> discover_images(const fs::path& root, const std::vector<std::string>& extensions) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw IoError("input directory does not exist: " + root.string());
  std::vector<std::string> wanted;
  for (const auto& e : extensions) wanted.push_back(lower(e));

  std::vector<std::string> found;
  fs::recursive_directory_iterator it(root, fs::directory_options::follow_directory_symlink, ec);
  if (ec) throw IoError("cannot read input directory " + root.string() + ": " + ec.message());
  for (const fs::recursive_directory_iterator end; it != end; it.increment(ec)) {
    if (ec) throw IoError("cannot walk input directory " + root.string() + ": " + ec.message());
    if (!it->is_regular_file(ec)) continue;
    const std::string ext = lower(it->path().extension().string());
    if (std::find(wanted.begin(), wanted.end(), ext) == wanted.end()) continue;
    found.push_back(fs::relative(it->path(), root).generic_string());
  }
  std::sort(found.begin(), found.end());
  return found;
}

std::uint64_t image_seed(std::string_view relative_path, std::uint64_t global_seed) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : relative_path) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t z = h ^ (global_seed + 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

DebugArtifacts emit_debug_artifacts(const SaliencyMap& saliency, const LabelRaster& labels,
                                    const fs::path& out_prefix) {
  DebugArtifacts paths;
  paths.saliency_png = out_prefix;
  paths.saliency_png += ".saliency.png";
  paths.labels_png = out_prefix;
  paths.labels_png += ".labels.png";
  ensure_parent(paths.saliency_png);
  write_gray_png(paths.saliency_png, saliency.values);
  write_label_png(paths.labels_png, labels);
  return paths;
}

RunSummary run_batch(const JobConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  if (config.workers < 1) throw InvalidConfig("workers must be >= 1");
  config.saliency.validate();
  config.ac.validate();

  const std::vector<std::string> images = discover_images(config.input_dir, config.image_extensions);
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (!fs::is_directory(config.output_dir)) throw IoError("cannot create output directory " + config.output_dir.string());

  std::vector<Outcome> outcomes(images.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < images.size(); i = next.fetch_add(1)) {
      try {
        outcomes[i] = process_one(config, images[i]);
      } catch (const std::exception& e) {
        outcomes[i] = ImageFailure{images[i], e.what()};
      }
    }
  };
  {
    const auto count = std::min<std::size_t>(static_cast<std::size_t>(config.workers), std::max<std::size_t>(images.size(), 1));
    std::vector<std::jthread> pool;
    pool.reserve(count);
    for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
  }

  RunSummary summary;
  summary.discovered = images.size();
  summary.manifest_path = config.resolved_manifest_path();
  std::vector<ManifestRecord> records;
  for (auto& outcome : outcomes) {
    if (auto* done = std::get_if<Processed>(&outcome)) {
      ++summary.processed;
      if (done->record.fallback) ++summary.fallbacks;
      for (auto& w : done->warnings) summary.warnings.push_back(std::move(w));
      records.push_back(std::move(done->record));
    } else if (auto* failure = std::get_if<ImageFailure>(&outcome)) {
      ++summary.failed;
      summary.failures.push_back(std::move(*failure));
    }
  }
  ensure_parent(summary.manifest_path);
  write_manifest(std::move(records), summary.manifest_path);

  summary.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  summary.images_per_second =
      summary.total_seconds > 0.0 ? static_cast<double>(summary.processed) / summary.total_seconds : 0.0;
  return summary;
}

}  // namespace attncrop
