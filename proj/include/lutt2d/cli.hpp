#pragma once

#include <map>
#include <string>
#include <vector>

namespace lutt2d {

/// Version string embedded in every output file.
const char* version();

/// Flat key = value config. Accepts plain `key = value` lines, the
/// `# config.key = value` header of emitted CSV files, or the "config"
/// object of emitted JSON files. `command` selects the subcommand.
std::map<std::string, std::string> load_config(const std::string& path);

/// Command-line entry point: 0 on success, 1 on domain error or failed
/// verification, 2 on usage error.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args);

}  // namespace lutt2d
