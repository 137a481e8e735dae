#pragma once

// Shared test helpers: frozen reference values and straight-line reference
// implementations that avoid the library's code paths.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "nnvar/sample.hpp"

namespace oracle {

// High-precision reference values (50-digit evaluation, rounded).
inline constexpr double student_t3_entropy = 1.77347757186329094809;
inline constexpr double student_t3_varentropy = 1.15947253478581149178;
inline constexpr double pareto3_entropy = 0.23472104466522364194;
inline constexpr double pareto3_varentropy = 16.0 / 9.0;
inline constexpr double normal_half_mass_r1 = 0.34134474606854294859;  // (Phi(1) - Phi(-1)) / 2
inline constexpr double log2_moment_exp1 = 1.97811199065594511079;     // int log^2 t e^{-t} dt
inline constexpr double normal_log_density_0 = -0.91893853320467274178;
inline constexpr double zeta_tiny_rho = -728.19852942869513233245;     // rho=1e-160, d=2, n=1000
inline constexpr double pareto3_log_density_2 = -1.67397643357167154627;
inline constexpr double lemma2_part1_uniform = 7.57025410628764110919;
inline constexpr double lemma2_part2_exponential = 0.05178833459672546684;
// int f^{1/2} for Pareto(alpha=3, xm=1).
inline constexpr double pareto3_root_density_integral = 1.7320508075688772935;

inline constexpr double euler_gamma = 0.57721566490153286061;

}  // namespace oracle

namespace ref {

/// Unit-ball volume from the half-integer Gamma recurrences.
inline double unit_ball_volume(int d) {
  const double pi = std::numbers::pi;
  if (d % 2 == 0) {
    const int k = d / 2;
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    return std::pow(pi, k) / fact;
  }
  const int k = (d - 1) / 2;
  double kf = 1.0;
  for (int i = 2; i <= k; ++i) kf *= i;
  double df = 1.0;
  for (int i = 2; i <= d; ++i) df *= i;
  return std::pow(2.0, d) * std::pow(pi, k) * kf / df;
}

/// O(n^2) nearest-neighbor distances.
inline std::vector<double> brute_rho(const nnvar::Sample& s) {
  std::vector<double> rho(s.n(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < s.n(); ++i) {
    for (std::size_t j = 0; j < s.n(); ++j) {
      if (i == j) continue;
      double acc = 0.0;
      for (std::size_t k = 0; k < s.dim(); ++k) {
        const double diff = s(i, k) - s(j, k);
        acc += diff * diff;
      }
      rho[i] = std::min(rho[i], std::sqrt(acc));
    }
  }
  return rho;
}

struct Estimates {
  double entropy;
  double second_moment;
  double varentropy;
};

/// Direct formula: zeta = log(rho^d V_d e^gamma (n-1)), plain sums.
inline Estimates direct_estimate(const nnvar::Sample& s) {
  const auto rho = brute_rho(s);
  const double d = static_cast<double>(s.dim());
  const double vd = unit_ball_volume(static_cast<int>(s.dim()));
  long double sum = 0.0L;
  long double sum2 = 0.0L;
  for (double r : rho) {
    const long double z =
        std::log(std::pow(r, d) * vd * std::exp(oracle::euler_gamma) * static_cast<double>(s.n() - 1));
    sum += z;
    sum2 += z * z;
  }
  const double n = static_cast<double>(s.n());
  const double H = static_cast<double>(sum / n);
  const double S = static_cast<double>(sum2 / n) - std::numbers::pi * std::numbers::pi / 6.0;
  return {H, S, S - H * H};
}

/// Haar-random orthogonal matrix (row-major) by Gram-Schmidt on Gaussian rows.
inline std::vector<double> random_orthogonal(std::size_t d, std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  std::vector<double> q(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (;;) {
      for (std::size_t k = 0; k < d; ++k) q[i * d + k] = normal(gen);
      for (std::size_t j = 0; j < i; ++j) {
        double dot = 0.0;
        for (std::size_t k = 0; k < d; ++k) dot += q[i * d + k] * q[j * d + k];
        for (std::size_t k = 0; k < d; ++k) q[i * d + k] -= dot * q[j * d + k];
      }
      double norm = 0.0;
      for (std::size_t k = 0; k < d; ++k) norm += q[i * d + k] * q[i * d + k];
      norm = std::sqrt(norm);
      if (norm < 1e-6) continue;
      for (std::size_t k = 0; k < d; ++k) q[i * d + k] /= norm;
      break;
    }
  }
  return q;
}

inline nnvar::Sample random_sample(std::size_t n, std::size_t d, std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  std::vector<double> data(n * d);
  for (double& v : data) v = normal(gen);
  return nnvar::Sample(n, d, std::move(data));
}

}  // namespace ref
