#pragma once

#include <functional>

namespace nnvar {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-12;
  int max_intervals = 4000;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;  // Kronrod-Gauss difference summed over intervals
  int evaluations = 0;
  bool converged = false;
};

/// Globally adaptive 15-point Gauss-Kronrod integration on [lower, upper].
///
/// Either bound may be infinite; half-lines are mapped to (0, 1] by
/// x = a + (1 - t) / t and the whole line is split at 0. The interval with
/// the largest error estimate is bisected until
/// error <= max(abs_tol, rel_tol * |value|) or max_intervals is reached.
/// The integrand is never evaluated at the endpoints.
QuadratureResult integrate(const std::function<double(double)>& f, double lower, double upper,
                           const QuadratureOptions& options = {});

/// As integrate(), but throws QuadratureNonconvergenceError when the
/// tolerance is not met.
QuadratureResult integrate_checked(const std::function<double(double)>& f, double lower,
                                   double upper, const QuadratureOptions& options = {});

}  // namespace nnvar
