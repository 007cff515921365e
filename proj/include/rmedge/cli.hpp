#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rmedge::cli {

inline constexpr const char* kVersion = "0.1.0";

// Written as <output>.manifest.json beside every output file.
struct RunManifest {
  std::string command;
  std::map<std::string, std::vector<std::string>> params;  // long flag name -> values as given
  std::string version;
  std::optional<std::uint64_t> seed;
  double wall_seconds = 0.0;
  std::vector<std::string> outputs;

  bool operator==(const RunManifest&) const = default;
};

std::string to_json(const RunManifest& m);
RunManifest manifest_from_json(const std::string& text);
RunManifest read_manifest(const std::string& path);

// Subcommand followed by the flags that reproduce the run.
std::vector<std::string> manifest_args(const RunManifest& m);

// args excludes the program name. Exit codes: 0 ok, 1 numerical or I/O error,
// 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace rmedge::cli
