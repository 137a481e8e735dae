#include "nnvar/quadrature.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "nnvar/errors.hpp"

namespace nnvar {

namespace {

// 15-point Kronrod abscissae (nonnegative half) and weights; the odd-indexed
// abscissae are the 7-point Gauss nodes.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Interval& other) const { return error < other.error; }
};

Interval gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kNodes[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[j] * pair;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

QuadratureResult adaptive(const std::function<double(double)>& f, double a, double b,
                          const QuadratureOptions& options) {
  std::priority_queue<Interval> heap;
  heap.push(gauss_kronrod(f, a, b));
  QuadratureResult result;
  result.evaluations = 15;
  double value = heap.top().value;
  double error = heap.top().error;
  int intervals = 1;
  while (true) {
    if (!std::isfinite(value) || !std::isfinite(error)) break;
    if (error <= std::max(options.abs_tol, options.rel_tol * std::abs(value))) {
      result.converged = true;
      break;
    }
    if (intervals >= options.max_intervals) break;
    const Interval worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // interval no longer splittable
    heap.pop();
    const Interval left = gauss_kronrod(f, worst.a, mid);
    const Interval right = gauss_kronrod(f, mid, worst.b);
    result.evaluations += 30;
    ++intervals;
    heap.push(left);
    heap.push(right);
    // Re-sum from scratch occasionally to avoid drift from incremental updates.
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    if (intervals % 64 == 0) {
      auto copy = heap;
      value = 0.0;
      error = 0.0;
      while (!copy.empty()) {
        value += copy.top().value;
        error += copy.top().error;
        copy.pop();
      }
    }
  }
  result.value = value;
  result.abs_error = error;
  return result;
}

QuadratureResult combine(const QuadratureResult& x, const QuadratureResult& y) {
  return {x.value + y.value, x.abs_error + y.abs_error, x.evaluations + y.evaluations,
          x.converged && y.converged};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double lower, double upper,
                           const QuadratureOptions& options) {
  if (std::isnan(lower) || std::isnan(upper)) throw InvalidParamsError("NaN integration bound");
  if (lower == upper) return {0.0, 0.0, 0, true};
  if (lower > upper) {
    QuadratureResult r = integrate(f, upper, lower, options);
    r.value = -r.value;
    return r;
  }
  const bool lower_inf = std::isinf(lower);
  const bool upper_inf = std::isinf(upper);
  if (lower_inf && upper_inf) {
    QuadratureOptions half = options;
    half.abs_tol *= 0.5;
    return combine(integrate(f, lower, 0.0, half), integrate(f, 0.0, upper, half));
  }
  if (upper_inf) {
    auto mapped = [&](double t) {
      const double x = lower + (1.0 - t) / t;
      return f(x) / (t * t);
    };
    return adaptive(mapped, 0.0, 1.0, options);
  }
  if (lower_inf) {
    auto mapped = [&](double t) {
      const double x = upper - (1.0 - t) / t;
      return f(x) / (t * t);
    };
    return adaptive(mapped, 0.0, 1.0, options);
  }
  return adaptive(f, lower, upper, options);
}

QuadratureResult integrate_checked(const std::function<double(double)>& f, double lower,
                                   double upper, const QuadratureOptions& options) {
  QuadratureResult r = integrate(f, lower, upper, options);
  if (!r.converged) {
    std::ostringstream msg;
    msg.precision(3);
    msg << "quadrature did not converge on [" << lower << ", " << upper
        << "]: value " << r.value << ", error estimate " << r.abs_error;
    throw QuadratureNonconvergenceError(msg.str());
  }
  return r;
}

}  // namespace nnvar
