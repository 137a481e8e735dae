#include "nnvar/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "nnvar/errors.hpp"
#include "nnvar/nn_graph.hpp"
#include "nnvar/parallel.hpp"

namespace nnvar {

namespace {

constexpr std::uint64_t kTagNull = 0x6e75;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double determinant(std::vector<double> a, std::size_t d) {
  double det = 1.0;
  for (std::size_t c = 0; c < d; ++c) {
    std::size_t pivot = c;
    for (std::size_t r = c + 1; r < d; ++r) {
      if (std::abs(a[r * d + c]) > std::abs(a[pivot * d + c])) pivot = r;
    }
    if (a[pivot * d + c] == 0.0) return 0.0;
    if (pivot != c) {
      for (std::size_t k = 0; k < d; ++k) std::swap(a[c * d + k], a[pivot * d + k]);
      det = -det;
    }
    det *= a[c * d + c];
    for (std::size_t r = c + 1; r < d; ++r) {
      const double factor = a[r * d + c] / a[c * d + c];
      for (std::size_t k = c; k < d; ++k) a[r * d + k] -= factor * a[c * d + k];
    }
  }
  return det;
}

std::uint64_t replication_seed(std::uint64_t seed, std::size_t n, std::size_t r, int attempt) {
  if (attempt == 0) return derive_stream_seed(seed, {n, r});
  return derive_stream_seed(seed, {n, r, static_cast<std::uint64_t>(attempt)});
}

struct Replicate {
  EstimateReport report;
  std::size_t redraws = 0;
};

Replicate run_replication(const CampaignConfig& config, std::size_t n, std::size_t r) {
  for (int attempt = 0;; ++attempt) {
    Rng rng(replication_seed(config.seed, n, r, attempt));
    Sample sample = config.spec.sample(n, rng);
    if (config.transform) {
      sample = affine_transform(sample, config.transform->matrix, config.transform->shift);
    }
    try {
      Replicate out;
      out.report = estimate(sample);
      out.redraws = static_cast<std::size_t>(attempt);
      return out;
    } catch (const DuplicatePointsError&) {
      if (attempt + 1 >= kMaxDrawAttempts) throw;
    }
  }
}

OracleValues campaign_truth(const CampaignConfig& config) {
  OracleValues truth;
  try {
    truth = oracle_values(config.spec);
  } catch (const UnsupportedQuadratureDimensionError&) {
    return {};
  }
  if (config.transform && truth.entropy) {
    const double det = determinant(config.transform->matrix, config.spec.dim());
    *truth.entropy += std::log(std::abs(det));
  }
  return truth;
}

}  // namespace

std::string to_string(Estimand e) {
  switch (e) {
    case Estimand::Entropy:
      return "entropy";
    case Estimand::Varentropy:
      return "varentropy";
    case Estimand::Both:
      return "both";
  }
  return "";
}

Estimand parse_estimand(std::string_view text) {
  if (text == "entropy") return Estimand::Entropy;
  if (text == "varentropy") return Estimand::Varentropy;
  if (text == "both") return Estimand::Both;
  throw ConfigError("estimand must be one of entropy, varentropy, both (got '" +
                    std::string(text) + "')");
}

void validate(const CampaignConfig& config) {
  if (config.n_grid.empty()) throw ConfigError("n_grid must not be empty");
  for (std::size_t i = 0; i < config.n_grid.size(); ++i) {
    if (config.n_grid[i] < 2) throw ConfigError("every n_grid entry must be at least 2");
    if (i > 0 && config.n_grid[i] <= config.n_grid[i - 1]) {
      throw ConfigError("n_grid must be strictly ascending");
    }
  }
  if (config.replications < 1) throw ConfigError("replications must be at least 1");
  if (config.transform) {
    const std::size_t d = config.spec.dim();
    if (config.transform->matrix.size() != d * d || config.transform->shift.size() != d) {
      throw ConfigError("transform must be a d x d matrix with a length-d shift");
    }
    for (double v : config.transform->matrix) {
      if (!std::isfinite(v)) throw ConfigError("transform entries must be finite");
    }
    for (double v : config.transform->shift) {
      if (!std::isfinite(v)) throw ConfigError("transform entries must be finite");
    }
    if (determinant(config.transform->matrix, d) == 0.0) {
      throw ConfigError("transform matrix must be invertible");
    }
  }
}

EstimandStats summarize(std::vector<double> values, std::optional<double> truth) {
  EstimandStats s;
  s.truth = truth;
  const std::size_t R = values.size();
  const double Rd = static_cast<double>(R);
  s.mean = pairwise_sum(values) / Rd;
  std::vector<double> centered(R);
  for (std::size_t i = 0; i < R; ++i) {
    const double c = values[i] - s.mean;
    centered[i] = c * c;
  }
  const double ss = pairwise_sum(centered);
  s.variance = ss / Rd;
  const bool report_stderr = R >= kMinReplicationsForStderr;
  s.stderr_mean = report_stderr ? std::sqrt(ss / (Rd - 1.0) / Rd) : kNaN;
  if (truth) {
    s.bias = s.mean - *truth;
    s.mse = s.bias * s.bias + s.variance;
    std::vector<double> sq(R);
    for (std::size_t i = 0; i < R; ++i) {
      const double e = values[i] - *truth;
      sq[i] = e * e;
    }
    s.mse_direct = pairwise_sum(sq) / Rd;
    if (report_stderr) {
      std::vector<double> dev(R);
      for (std::size_t i = 0; i < R; ++i) {
        const double c = sq[i] - s.mse_direct;
        dev[i] = c * c;
      }
      s.stderr_mse = std::sqrt(pairwise_sum(dev) / (Rd - 1.0) / Rd);
    } else {
      s.stderr_mse = kNaN;
    }
  } else {
    s.bias = s.mse = s.mse_direct = s.stderr_mse = kNaN;
  }
  s.values = std::move(values);
  return s;
}

std::vector<PlannedStream> plan_campaign(const CampaignConfig& config) {
  validate(config);
  std::vector<PlannedStream> out;
  for (std::size_t n : config.n_grid) {
    for (std::size_t r = 0; r < config.replications; ++r) {
      out.push_back({n, r, replication_seed(config.seed, n, r, 0)});
    }
  }
  return out;
}

McReport run_campaign(const CampaignConfig& config) {
  validate(config);
  const OracleValues truth = campaign_truth(config);
  McReport report;
  report.name = config.name;
  report.spec = config.spec.name();
  report.replications = config.replications;
  report.seed = config.seed;
  report.estimand = config.estimand;
  report.transformed = config.transform.has_value();
  const bool want_h = config.estimand != Estimand::Varentropy;
  const bool want_v = config.estimand != Estimand::Entropy;
  for (std::size_t n : config.n_grid) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<double> h(config.replications);
    std::vector<double> v(config.replications);
    std::vector<std::size_t> redraws(config.replications);
    parallel_for(config.replications, config.threads, [&](std::size_t r) {
      const Replicate rep = run_replication(config, n, r);
      h[r] = rep.report.entropy;
      v[r] = rep.report.varentropy;
      redraws[r] = rep.redraws;
    });
    McRow row;
    row.n = n;
    for (std::size_t c : redraws) row.redraws += c;
    if (want_h) row.entropy = summarize(std::move(h), truth.entropy);
    if (want_v) row.varentropy = summarize(std::move(v), truth.varentropy);
    row.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.rows.push_back(std::move(row));
  }
  return report;
}

NullCalibration calibrate_normality(std::size_t n, std::size_t dim,
                                    const NormalityCalibration& calibration, unsigned threads) {
  if (n < kMinNormalityPoints) {
    throw TooFewPointsError("normality screen needs at least " +
                            std::to_string(kMinNormalityPoints) + " points (got " +
                            std::to_string(n) + ")");
  }
  if (calibration.replications < kMinCalibrationReplications) {
    throw CalibrationBudgetTooSmallError("calibration needs at least " +
                                         std::to_string(kMinCalibrationReplications) +
                                         " replications (got " +
                                         std::to_string(calibration.replications) + ")");
  }
  if (dim < 1) throw InvalidParamsError("dimension must be at least 1");
  NullCalibration null;
  null.n = n;
  null.dim = dim;
  null.replications = calibration.replications;
  null.seed = calibration.seed;
  null.statistics.resize(calibration.replications);
  const Distribution normal = Distribution::standard_normal(dim);
  const double centre = 0.5 * static_cast<double>(dim);
  parallel_for(calibration.replications, threads, [&](std::size_t r) {
    for (int attempt = 0;; ++attempt) {
      Rng rng = Rng::stream(calibration.seed, {kTagNull, n, dim, r, static_cast<std::uint64_t>(attempt)});
      try {
        null.statistics[r] = estimate(normal.sample(n, rng)).varentropy - centre;
        return;
      } catch (const DuplicatePointsError&) {
        if (attempt + 1 >= kMaxDrawAttempts) throw;
      }
    }
  });
  std::sort(null.statistics.begin(), null.statistics.end());
  return null;
}

NormalityTestResult normality_screen(const Sample& sample, double level,
                                     const NullCalibration& null) {
  if (sample.n() < kMinNormalityPoints) {
    throw TooFewPointsError("normality screen needs at least " +
                            std::to_string(kMinNormalityPoints) + " points (got " +
                            std::to_string(sample.n()) + ")");
  }
  if (!(level > 0.0 && level < 1.0)) throw InvalidParamsError("level must be in (0, 1)");
  if (null.n != sample.n() || null.dim != sample.dim()) {
    throw InvalidParamsError("null calibration was built for a different (n, d)");
  }
  if (null.statistics.size() < kMinCalibrationReplications) {
    throw CalibrationBudgetTooSmallError("calibration has too few replications");
  }
  NormalityTestResult out;
  out.varentropy = estimate(sample).varentropy;
  out.statistic = out.varentropy - 0.5 * static_cast<double>(sample.dim());
  const auto& cal = null.statistics;
  const auto below = std::upper_bound(cal.begin(), cal.end(), out.statistic) - cal.begin();
  const auto above = cal.end() - std::lower_bound(cal.begin(), cal.end(), out.statistic);
  const double R = static_cast<double>(cal.size());
  const double tail = static_cast<double>(std::min(below, above)) + 1.0;
  out.p_value = std::min(1.0, 2.0 * tail / (R + 1.0));
  out.level = level;
  out.reject = out.p_value <= level;
  out.n = sample.n();
  out.dim = sample.dim();
  out.calibration_replications = cal.size();
  out.calibration_seed = null.seed;
  return out;
}

NormalityTestResult normality_screen(const Sample& sample, double level,
                                     const NormalityCalibration& calibration, unsigned threads) {
  if (sample.n() < kMinNormalityPoints) {
    throw TooFewPointsError("normality screen needs at least " +
                            std::to_string(kMinNormalityPoints) + " points (got " +
                            std::to_string(sample.n()) + ")");
  }
  if (!(level > 0.0 && level < 1.0)) throw InvalidParamsError("level must be in (0, 1)");
  return normality_screen(sample, level,
                          calibrate_normality(sample.n(), sample.dim(), calibration, threads));
}

}  // namespace nnvar
