#include "nnvar/report_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "nnvar/errors.hpp"

namespace nnvar {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_cell(std::size_t row, std::size_t col, const std::string& what) {
  throw ParseError("row " + std::to_string(row) + ", column " + std::to_string(col) + ": " + what);
}

json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

json optional_number(const std::optional<double>& v) {
  if (v) return number_or_null(*v);
  return nullptr;
}

json stats_json(const EstimandStats& s) {
  return {{"truth", optional_number(s.truth)},  {"mean", number_or_null(s.mean)},
          {"bias", number_or_null(s.bias)},     {"variance", number_or_null(s.variance)},
          {"mse", number_or_null(s.mse)},       {"mse_direct", number_or_null(s.mse_direct)},
          {"stderr_mean", number_or_null(s.stderr_mean)},
          {"stderr_mse", number_or_null(s.stderr_mse)}};
}

void write_cell(std::ostream& out, double v) {
  if (std::isfinite(v)) out << format_double(v);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Sample read_dataset_csv(std::istream& in) {
  std::vector<double> data;
  std::size_t dim = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  bool saw_blank = false;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty()) {
      saw_blank = true;
      continue;
    }
    if (saw_blank) throw ParseError("row " + std::to_string(line_no - 1) + ": empty row");
    ++rows;
    std::size_t col = 0;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = view.find(',', start);
      const std::string_view cell =
          trim(view.substr(start, comma == std::string_view::npos ? view.npos : comma - start));
      ++col;
      if (cell.empty()) bad_cell(line_no, col, "empty cell");
      std::string_view num = cell;
      if (num.front() == '+') num.remove_prefix(1);
      double v = 0.0;
      const auto res = std::from_chars(num.data(), num.data() + num.size(), v);
      if (res.ec != std::errc() || res.ptr != num.data() + num.size()) {
        bad_cell(line_no, col, "cannot parse '" + std::string(cell) + "' as a number");
      }
      if (!std::isfinite(v)) bad_cell(line_no, col, "non-finite value '" + std::string(cell) + "'");
      data.push_back(v);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (dim == 0) {
      dim = col;
    } else if (col != dim) {
      throw ParseError("row " + std::to_string(line_no) + ": expected " + std::to_string(dim) +
                       " columns, found " + std::to_string(col));
    }
  }
  if (rows < 2) {
    throw EmptySampleError("dataset has " + std::to_string(rows) +
                           " rows; at least 2 points are required");
  }
  return Sample(rows, dim, std::move(data));
}

Sample read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open dataset '" + path.string() + "'");
  return read_dataset_csv(in);
}

void write_dataset_csv(std::ostream& out, const Sample& sample) {
  std::string line;
  for (std::size_t i = 0; i < sample.n(); ++i) {
    line.clear();
    for (std::size_t k = 0; k < sample.dim(); ++k) {
      if (k > 0) line += ',';
      line += format_double(sample(i, k));
    }
    line += '\n';
    out << line;
  }
}

nlohmann::json to_json(const EstimateReport& report, bool emit_zeta) {
  json j = {{"n", report.n},
            {"dim", report.dim},
            {"entropy", number_or_null(report.entropy)},
            {"second_moment", number_or_null(report.second_moment)},
            {"varentropy", number_or_null(report.varentropy)},
            {"unstable", report.unstable}};
  if (emit_zeta) j["zeta"] = report.zeta;
  return j;
}

nlohmann::json to_json(const FunctionalEstimate& estimate) {
  json params = json::object();
  for (const auto& [k, v] : estimate.params) params[k] = v;
  json estimates = json::array();
  json stderrs = json::array();
  for (double v : estimate.estimates) estimates.push_back(number_or_null(v));
  for (double v : estimate.stderrs) stderrs.push_back(number_or_null(v));
  json j = {{"functional", estimate.functional},
            {"params", params},
            {"budgets", estimate.budgets},
            {"estimates", estimates},
            {"stderr", stderrs},
            {"verdict", to_string(estimate.verdict)}};
  if (estimate.functional == "T") j["floor_hits"] = estimate.floor_hits;
  return j;
}

nlohmann::json to_json(const DensityRatioCheck& check) {
  return {{"R", check.R},
          {"eps", check.eps},
          {"draws", check.draws},
          {"c_estimate", number_or_null(check.c_estimate)},
          {"power_integral", number_or_null(check.power_integral)},
          {"power_integral_error", number_or_null(check.power_integral_error)},
          {"power_integral_finite", check.power_integral_finite},
          {"t_bound", number_or_null(check.t_bound)},
          {"verdict", to_string(check.verdict)}};
}

nlohmann::json to_json(const ConditionReport& report) {
  const ConditionParams& p = report.params;
  json functionals = json::array();
  for (const auto& k : report.k_alpha) functionals.push_back(to_json(k));
  functionals.push_back(to_json(report.q));
  functionals.push_back(to_json(report.t));
  return {{"schema", kSchemaVersion},
          {"distribution", report.distribution},
          {"params",
           {{"eps0", p.eps0},
            {"eps1", p.eps1},
            {"eps2", p.eps2},
            {"R1", p.R1},
            {"R2", p.R2},
            {"alphas", p.alphas},
            {"budget", p.budget},
            {"doublings", p.mc.doublings},
            {"grid_size", p.mc.grid_size},
            {"seed", p.mc.seed}}},
          {"functionals", functionals},
          {"density_ratio", to_json(report.density_ratio)},
          {"density_bound", number_or_null(report.density_bound)}};
}

nlohmann::json to_json(const McReport& report, bool include_runtime) {
  json rows = json::array();
  for (const McRow& row : report.rows) {
    json r = {{"n", row.n}, {"redraws", row.redraws}};
    if (row.entropy) r["entropy"] = stats_json(*row.entropy);
    if (row.varentropy) r["varentropy"] = stats_json(*row.varentropy);
    if (include_runtime) r["runtime_seconds"] = row.runtime_seconds;
    rows.push_back(std::move(r));
  }
  return {{"schema", kSchemaVersion},
          {"name", report.name},
          {"spec", report.spec},
          {"replications", report.replications},
          {"seed", report.seed},
          {"estimand", to_string(report.estimand)},
          {"transformed", report.transformed},
          {"rows", rows}};
}

nlohmann::json to_json(const NormalityTestResult& result) {
  return {{"schema", kSchemaVersion},
          {"n", result.n},
          {"dim", result.dim},
          {"varentropy", number_or_null(result.varentropy)},
          {"statistic", number_or_null(result.statistic)},
          {"p_value", result.p_value},
          {"level", result.level},
          {"reject", result.reject},
          {"calibration", {{"replications", result.calibration_replications},
                           {"seed", result.calibration_seed}}}};
}

void write_campaign_csv(std::ostream& out, const McReport& report, Estimand which) {
  if (which == Estimand::Both) throw InvalidParamsError("campaign CSV holds a single estimand");
  out << "n,mean,bias,variance,mse,stderr_mean,stderr_mse\n";
  for (const McRow& row : report.rows) {
    const auto& stats = which == Estimand::Entropy ? row.entropy : row.varentropy;
    if (!stats) continue;
    out << row.n;
    for (double v : {stats->mean, stats->bias, stats->variance, stats->mse, stats->stderr_mean,
                     stats->stderr_mse}) {
      out << ',';
      write_cell(out, v);
    }
    out << '\n';
  }
}

}  // namespace nnvar
