#pragma once

#include <filesystem>
#include <string>

#include "hmcf/config/problem.hpp"

namespace hmcf::config {

/// Parses a JSON problem description, filling defaults for omitted keys.
/// Unknown keys and missing `geometry` raise ConfigError naming the field.
/// A top-level `run` object (written by the trainer into manifests) is ignored.
ProblemSpec parse_problem(const std::string& text);
ProblemSpec load_problem(const std::filesystem::path& path);

/// Fully resolved JSON, suitable to be fed back to parse_problem.
std::string dump_problem(const ProblemSpec& spec, int indent = 2);

/// Output root override: $HMCF_OUTPUT_ROOT/<output_dir> when set and output_dir is relative.
std::filesystem::path resolve_output_dir(const ProblemSpec& spec);

}  // namespace hmcf::config
