#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nnvar/distributions.hpp"
#include "nnvar/estimators.hpp"
#include "nnvar/sample.hpp"

namespace nnvar {

enum class Estimand { Entropy, Varentropy, Both };

std::string to_string(Estimand e);
/// Accepts "entropy", "varentropy", "both". Throws ConfigError.
Estimand parse_estimand(std::string_view text);

/// x -> A x + b applied to every drawn sample before estimation.
struct AffineMap {
  std::vector<double> matrix;  // d x d row-major
  std::vector<double> shift;   // length d
};

/// Replications needed before standard errors are reported.
inline constexpr std::size_t kMinReplicationsForStderr = 30;
/// Draws per replication before a run gives up on duplicate points.
inline constexpr int kMaxDrawAttempts = 5;

struct CampaignConfig {
  std::string name = "campaign";
  Distribution spec = Distribution::standard_normal(1);
  std::vector<std::size_t> n_grid;
  std::size_t replications = 200;
  std::uint64_t seed = 1;
  Estimand estimand = Estimand::Varentropy;
  std::optional<AffineMap> transform;
  unsigned threads = 1;
};

/// Throws ConfigError unless n_grid is nonempty, strictly ascending with every
/// entry >= 2, replications >= 1, and the transform (if any) is d x d and
/// invertible.
void validate(const CampaignConfig& config);

/// Summary of one estimand at one sample size.
struct EstimandStats {
  std::optional<double> truth;  // oracle value; absent when unavailable
  double mean = 0.0;
  double bias = 0.0;          // mean - truth
  double variance = 0.0;      // population variance over replications
  double mse = 0.0;           // bias^2 + variance
  double mse_direct = 0.0;    // mean of (estimate - truth)^2
  double stderr_mean = 0.0;   // NaN when replications < kMinReplicationsForStderr
  double stderr_mse = 0.0;
  std::vector<double> values;  // per replication, in replication order
};

struct McRow {
  std::size_t n = 0;
  std::optional<EstimandStats> entropy;
  std::optional<EstimandStats> varentropy;
  std::size_t redraws = 0;     // replications re-drawn after duplicate points
  double runtime_seconds = 0.0;
};

struct McReport {
  std::string name;
  std::string spec;
  std::size_t replications = 0;
  std::uint64_t seed = 0;
  Estimand estimand = Estimand::Varentropy;
  bool transformed = false;
  std::vector<McRow> rows;
};

/// Runs every (n, replication) pair. Replication r at size n draws from the
/// stream (seed, n, r); after a DuplicatePointsError it is re-drawn from
/// (seed, n, r, attempt), attempt = 1..kMaxDrawAttempts-1. The report does not
/// depend on config.threads (except runtime_seconds).
McReport run_campaign(const CampaignConfig& config);

/// Stream ids a campaign would use, for dry runs.
struct PlannedStream {
  std::size_t n;
  std::size_t replication;
  std::uint64_t stream_seed;
};
std::vector<PlannedStream> plan_campaign(const CampaignConfig& config);

/// Summary of `values` against `truth`; exposed for cross-checks.
EstimandStats summarize(std::vector<double> values, std::optional<double> truth);

// Normality screen on the statistic V_N - d/2.

inline constexpr std::size_t kMinNormalityPoints = 50;
inline constexpr std::size_t kMinCalibrationReplications = 199;

struct NormalityCalibration {
  std::size_t replications = 999;
  std::uint64_t seed = 1;
};

/// Null distribution of V_N - d/2 over standard normal samples of size n in
/// dimension dim.
struct NullCalibration {
  std::size_t n = 0;
  std::size_t dim = 0;
  std::size_t replications = 0;
  std::uint64_t seed = 0;
  std::vector<double> statistics;  // sorted ascending
};

/// Throws TooFewPointsError / CalibrationBudgetTooSmallError.
NullCalibration calibrate_normality(std::size_t n, std::size_t dim,
                                    const NormalityCalibration& calibration,
                                    unsigned threads = 1);

struct NormalityTestResult {
  double varentropy = 0.0;
  double statistic = 0.0;  // V_N - d/2
  double p_value = 1.0;
  double level = 0.05;
  bool reject = false;  // p_value <= level
  std::size_t n = 0;
  std::size_t dim = 0;
  std::size_t calibration_replications = 0;
  std::uint64_t calibration_seed = 0;
};

/// Two-sided Monte Carlo p-value
///   p = min(1, 2 min(1 + #{T_cal >= T}, 1 + #{T_cal <= T}) / (R_cal + 1)).
NormalityTestResult normality_screen(const Sample& sample, double level,
                                     const NormalityCalibration& calibration,
                                     unsigned threads = 1);

/// Same test against a precomputed null; throws InvalidParamsError if the
/// calibration was built for a different (n, d).
NormalityTestResult normality_screen(const Sample& sample, double level,
                                     const NullCalibration& null);

}  // namespace nnvar
