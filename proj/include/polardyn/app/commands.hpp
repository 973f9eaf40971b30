#pragma once

// The four CLI commands. Each returns the full output document so callers can
// write it wherever they like; the text is byte-identical for a fixed config
// regardless of the thread count.

#include <optional>
#include <string>

#include "polardyn/app/config.hpp"

namespace polardyn::app {

enum class OutputFormat { csv, json };

struct CommandOptions {
  OutputFormat format = OutputFormat::csv;
  std::optional<double> tol;  ///< overrides tolerances.normality
  int threads = 1;
};

/// Resolves the format from (in order) the flag, the config, then `fallback`.
OutputFormat resolve_format(const std::optional<std::string>& flag, const RunConfig& cfg,
                            OutputFormat fallback);

std::string cmd_evolve(const RunConfig& cfg, const CommandOptions& opts);
std::string cmd_entropy(const RunConfig& cfg, const CommandOptions& opts);
/// Always JSON.
std::string cmd_decompose(const RunConfig& cfg, const CommandOptions& opts);
/// Always JSON.
std::string cmd_verify(const RunConfig& cfg, const CommandOptions& opts);

}  // namespace polardyn::app
