#pragma once

#include <cstddef>
#include <numbers>
#include <vector>

#include "nnvar/nn_graph.hpp"
#include "nnvar/sample.hpp"

namespace nnvar {

namespace constants {

/// Euler-Mascheroni constant, 17 significant digits.
inline constexpr double euler_gamma = 0.57721566490153286;
inline constexpr double pi_sq_over_6 = std::numbers::pi * std::numbers::pi / 6.0;

}  // namespace constants

/// Below this many points the varentropy estimate is flagged unstable.
inline constexpr std::size_t kUnstableBelow = 10;

struct EstimateReport {
  std::vector<double> zeta;  // per-point log-scaled NN statistic
  double entropy = 0.0;        // H_N = mean(zeta)
  double second_moment = 0.0;  // S^2_N = mean(zeta^2) - pi^2/6
  double varentropy = 0.0;     // V_N = S^2_N - H_N^2, reported even when negative
  std::size_t n = 0;
  std::size_t dim = 0;
  bool unstable = false;  // n < kUnstableBelow
};

/// pi^{d/2} / Gamma(d/2 + 1).
double unit_ball_volume(int dim);
double log_unit_ball_volume(int dim);

/// log(rho^d V_d e^gamma (n - 1)), evaluated as a sum of logs so tiny rho in
/// high dimension does not underflow. Throws NonpositiveDistanceError.
double zeta(double rho, int dim, std::size_t n);

/// Entropy / varentropy estimates from precomputed NN distances.
EstimateReport estimate_from_distances(const NnDistances& distances);

/// Builds NN distances with `engine` and evaluates the estimators.
/// Propagates DuplicatePointsError / EmptySampleError.
EstimateReport estimate(const Sample& sample, NnEngine engine = NnEngine::Tree,
                        unsigned threads = 1);

/// Moments of log(xi) for xi ~ Exponential with rate lambda (mean 1/lambda):
/// order 1 gives -log(lambda) - gamma, order 2 gives (log(lambda) + gamma)^2 + pi^2/6.
/// Throws UnsupportedOrderError for other orders.
double gumbel_log_moment(double lambda, int order);

}  // namespace nnvar
