#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

// Reproducibility record written next to every command's outputs: the exact
// invocation, version, seed, resolved configuration, content digests of the
// inputs, and the produced files.  Wall-clock time is the only
// run-dependent field.

namespace treeagg {

struct RunManifest {
  std::string command;
  std::string version;
  std::vector<std::pair<std::string, std::string>> config;  // ordered
  std::vector<std::pair<std::string, std::string>> inputs;  // path -> digest
  std::vector<std::string> outputs;
  double wall_seconds = 0.0;
};

// FNV-1a 64-bit content digest, rendered as 16 hex digits.
std::string fnv1a_file_digest(const std::filesystem::path& path);

void write_manifest(const std::filesystem::path& path, const RunManifest& m);

}  // namespace treeagg
