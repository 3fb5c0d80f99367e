#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bebold/core/error.hpp"
#include "bebold/core/rng.hpp"
#include "bebold/harness/config.hpp"

namespace bebold {

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + p.string());
  out << content;
  if (!out) throw ConfigError("write failed for " + p.string());
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// Plain-text run manifest:
///   bebold-manifest 1
///   experiment <name>
///   config_digest <hex>
///   [config]
///   <canonical key = value lines>
///   [artifacts]
///   <relative path> <bytes> <fnv1a64 hex>
/// Artifacts are sorted by path; the manifest never lists itself.
inline void write_manifest(const std::filesystem::path& out_dir, const std::string& experiment, const Config& cfg,
                           std::vector<std::string> artifacts) {
  std::sort(artifacts.begin(), artifacts.end());
  artifacts.erase(std::unique(artifacts.begin(), artifacts.end()), artifacts.end());
  std::string text = "bebold-manifest 1\nexperiment " + experiment + "\nconfig_digest " + cfg.digest() + "\n[config]\n" +
                     cfg.canonical() + "[artifacts]\n";
  for (const auto& a : artifacts) {
    const auto content = read_file(out_dir / a);
    text += a + " " + std::to_string(content.size()) + " " + hex64(fnv1a64(content)) + "\n";
  }
  write_file(out_dir / "manifest.txt", text);
}

struct ManifestEntry {
  std::string path;
  std::size_t bytes = 0;
  std::string digest;
};

inline std::vector<ManifestEntry> read_manifest_artifacts(const std::filesystem::path& manifest) {
  std::istringstream in(read_file(manifest));
  std::string line;
  std::getline(in, line);
  if (line != "bebold-manifest 1") throw ConfigError("not a bebold manifest");
  bool in_artifacts = false;
  std::vector<ManifestEntry> out;
  while (std::getline(in, line)) {
    if (line == "[artifacts]") {
      in_artifacts = true;
      continue;
    }
    if (!in_artifacts || line.empty()) continue;
    std::istringstream ls(line);
    ManifestEntry e;
    ls >> e.path >> e.bytes >> e.digest;
    out.push_back(e);
  }
  return out;
}

}  // namespace bebold
