#include "attncrop/manifest.hpp"

#include <unistd.h>

#include <algorithm>
#include <fstream>
#include <nlohmann/json.hpp>
#include <system_error>

#include "attncrop/error.hpp"

namespace attncrop {

using nlohmann::json;

std::string to_json_line(const ManifestRecord& r) {
  json outputs = json::array();
  for (const auto& o : r.outputs) outputs.push_back({{"variant", o.variant}, {"path", o.path}});
  json j = {
      {"schema_version", kManifestSchemaVersion},
      {"source_path", r.source_path},
      {"outputs", std::move(outputs)},
      {"label", r.label ? json(*r.label) : json(nullptr)},
      {"box",
       {{"row_start", r.box.row_start},
        {"col_start", r.box.col_start},
        {"row_end", r.box.row_end},
        {"col_end", r.box.col_end}}},
      {"th", r.th},
      {"scale_index", r.scale_index},
      {"sigma", r.sigma},
      {"entropy", r.entropy},
      {"clusters_found", r.clusters_found},
      {"fallback", r.fallback},
      {"degenerate", r.degenerate},
      {"source_width", r.source_width},
      {"source_height", r.source_height},
      {"seed", r.seed},
  };
  if (r.elapsed_ms) j["elapsed_ms"] = *r.elapsed_ms;
  return j.dump();
}

ManifestRecord parse_json_line(const std::string& line) {
  try {
    const json j = json::parse(line);
    if (j.at("schema_version").get<std::string>() != kManifestSchemaVersion)
      throw InvalidInput("unsupported manifest schema_version " + j.at("schema_version").dump());
    ManifestRecord r;
    j.at("source_path").get_to(r.source_path);
    for (const auto& o : j.at("outputs")) r.outputs.push_back({o.at("variant"), o.at("path")});
    if (!j.at("label").is_null()) r.label = j.at("label").get<std::string>();
    const auto& box = j.at("box");
    box.at("row_start").get_to(r.box.row_start);
    box.at("col_start").get_to(r.box.col_start);
    box.at("row_end").get_to(r.box.row_end);
    box.at("col_end").get_to(r.box.col_end);
    j.at("th").get_to(r.th);
    j.at("scale_index").get_to(r.scale_index);
    j.at("sigma").get_to(r.sigma);
    j.at("entropy").get_to(r.entropy);
    j.at("clusters_found").get_to(r.clusters_found);
    j.at("fallback").get_to(r.fallback);
    j.at("degenerate").get_to(r.degenerate);
    j.at("source_width").get_to(r.source_width);
    j.at("source_height").get_to(r.source_height);
    j.at("seed").get_to(r.seed);
    if (auto it = j.find("elapsed_ms"); it != j.end()) r.elapsed_ms = it->get<double>();
    return r;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed manifest line: ") + e.what());
  }
}

void write_manifest(std::vector<ManifestRecord> records, const std::filesystem::path& path) {
  std::stable_sort(records.begin(), records.end(),
                   [](const ManifestRecord& a, const ManifestRecord& b) { return a.source_path < b.source_path; });

  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write manifest " + tmp.string());
    for (const auto& r : records) out << to_json_line(r) << '\n';
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw IoError("failed writing manifest " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw IoError("cannot move manifest into place at " + path.string() + ": " + ec.message());
  }
}

std::vector<ManifestRecord> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read manifest " + path.string());
  std::vector<ManifestRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    records.push_back(parse_json_line(line));
  }
  return records;
}

}  // namespace attncrop
