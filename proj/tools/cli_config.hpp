#pragma once

#include <CLI11.hpp>

namespace usfda::cli {

// JSON config files for CLI11. Top-level keys set options of the main app;
// an object keyed by a subcommand name sets that subcommand's options:
//
//   { "jobs": 4, "simulate": { "count": 100, "seed": 7 } }
//
// Flags given on the command line take precedence over the file.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool write_description,
                        std::string prefix) const override;
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override;
};

}  // namespace usfda::cli
