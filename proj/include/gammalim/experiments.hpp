#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace gammalim {

/// Process exit statuses shared by the runners and the command line tool.
enum ExitStatus : int { exit_ok = 0, exit_config_error = 2, exit_numerical_failure = 3 };

struct RunOptions {
    std::filesystem::path out_dir = ".";
    /// Overrides the `resolution` entry of the config when set.
    std::optional<double> resolution;
    /// Receives diagnostics; may be null.
    std::ostream* log = nullptr;
};

/// Each runner parses and validates the whole JSON config before writing
/// anything; a config error leaves the output directory untouched. Outputs
/// are byte-identical for identical inputs.
int run_minimize_sweep(std::string_view config_json, const RunOptions& opts);
int run_recovery(std::string_view config_json, const RunOptions& opts);
int run_kwc(std::string_view config_json, const RunOptions& opts);
int run_unfold(std::string_view config_json, const RunOptions& opts);

/// Reads a config file, mapping an unreadable file to exit_config_error.
int run_from_file(int (*runner)(std::string_view, const RunOptions&), const std::filesystem::path& config,
                  const RunOptions& opts);

}  // namespace gammalim
