#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"
#include "nnvar/conditions.hpp"
#include "nnvar/estimators.hpp"
#include "nnvar/experiments.hpp"
#include "nnvar/sample.hpp"

namespace nnvar {

/// Version tag written as the top-level "schema" field of every document.
inline constexpr const char* kSchemaVersion = "1";

/// Headerless CSV, one row per point, ',' between coordinates; the
/// dimension is the column count. Throws ParseError naming the 1-based row
/// and column of the first bad cell, and EmptySampleError for fewer than two
/// rows.
Sample read_dataset_csv(std::istream& in);
Sample read_dataset_csv(const std::filesystem::path& path);

/// Writes coordinates in shortest round-trip form.
void write_dataset_csv(std::ostream& out, const Sample& sample);

/// Shortest decimal string that reads back to the same double.
std::string format_double(double v);

nlohmann::json to_json(const EstimateReport& report, bool emit_zeta);
nlohmann::json to_json(const FunctionalEstimate& estimate);
nlohmann::json to_json(const DensityRatioCheck& check);
nlohmann::json to_json(const ConditionReport& report);
/// Runtime per row is included only when `include_runtime`.
nlohmann::json to_json(const McReport& report, bool include_runtime);
nlohmann::json to_json(const NormalityTestResult& result);

/// Columns n, mean, bias, variance, mse, stderr_mean, stderr_mse for one
/// estimand (Entropy or Varentropy). NaN cells are left empty.
void write_campaign_csv(std::ostream& out, const McReport& report, Estimand which);

}  // namespace nnvar
