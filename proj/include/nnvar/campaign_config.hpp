#pragma once

#include <filesystem>
#include <string_view>

#include "nnvar/experiments.hpp"

namespace nnvar {

/// Parses a campaign file of `key = value` lines. Values are quoted strings,
/// integers, or bracketed number lists; `#` starts a comment.
///
///   name = "normal_d1"
///   spec = "normal(d=1)"
///   n_grid = [250, 1000, 4000]
///   replications = 200
///   seed = 20240501
///   estimand = "varentropy"        # entropy | varentropy | both
///   transform_matrix = [2, 1, 0, 1] # optional, d x d row-major
///   transform_shift = [0.5, -1]     # optional, defaults to zero
///
/// Throws ParseError for malformed lines (with line number) and ConfigError
/// for missing, unknown or invalid keys.
CampaignConfig parse_campaign_config(std::string_view text);

/// Reads and parses `path`; throws ConfigError if it cannot be read.
CampaignConfig load_campaign_config(const std::filesystem::path& path);

}  // namespace nnvar
