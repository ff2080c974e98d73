#include "treeagg/manifest.hpp"

#include <fstream>
#include <stdexcept>

#include "treeagg/io.hpp"

namespace treeagg {

std::string fnv1a_file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot digest " + path.string());
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  char buf[1 << 14];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    const auto got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 0x100000001b3ULL;
    }
  }
  char hex[17];
  static const char digits[] = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    hex[i] = digits[hash & 0xf];
    hash >>= 4;
  }
  hex[16] = '\0';
  return hex;
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "command=" << m.command << "\n";
  out << "version=" << m.version << "\n";
  for (const auto& [k, v] : m.config) out << "config." << k << "=" << v << "\n";
  for (const auto& [file, digest] : m.inputs)
    out << "input." << file << "=fnv1a:" << digest << "\n";
  for (std::size_t i = 0; i < m.outputs.size(); ++i)
    out << "output." << i << "=" << m.outputs[i] << "\n";
  out << "wall_seconds=" << io::format(m.wall_seconds) << "\n";
}

}  // namespace treeagg
