#include "nnvar/estimators.hpp"

#include <cmath>
#include <string>

#include "nnvar/errors.hpp"
#include "nnvar/parallel.hpp"

namespace nnvar {

double log_unit_ball_volume(int dim) {
  if (dim < 1) throw InvalidParamsError("dimension must be >= 1");
  const double half = 0.5 * dim;
  return half * std::log(std::numbers::pi) - std::lgamma(half + 1.0);
}

// V_d = V_{d-2} 2 pi / d keeps d = 1, 2 exact.
double unit_ball_volume(int dim) {
  if (dim < 1) throw InvalidParamsError("dimension must be >= 1");
  double v = dim % 2 == 1 ? 2.0 : std::numbers::pi;
  for (int k = dim % 2 == 1 ? 3 : 4; k <= dim; k += 2) v *= 2.0 * std::numbers::pi / k;
  return v;
}

namespace {

double zeta_offset(int dim, std::size_t n) {
  return log_unit_ball_volume(dim) + constants::euler_gamma +
         std::log(static_cast<double>(n - 1));
}

}  // namespace

double zeta(double rho, int dim, std::size_t n) {
  if (!(rho > 0.0)) {
    throw NonpositiveDistanceError("nearest-neighbor distance must be positive, got " +
                                   std::to_string(rho));
  }
  if (n < 2) throw EmptySampleError("zeta needs n >= 2");
  return dim * std::log(rho) + zeta_offset(dim, n);
}

EstimateReport estimate_from_distances(const NnDistances& distances) {
  const std::size_t n = distances.n;
  if (n < 2 || distances.rho.size() != n) throw EmptySampleError("need at least 2 distances");
  const int dim = static_cast<int>(distances.dim);

  EstimateReport report;
  report.n = n;
  report.dim = distances.dim;
  report.unstable = n < kUnstableBelow;
  report.zeta.resize(n);

  const double offset = zeta_offset(dim, n);
  CompensatedSum sum;
  CompensatedSum sum_sq;
  for (std::size_t i = 0; i < n; ++i) {
    const double rho = distances.rho[i];
    if (!(rho > 0.0)) {
      throw NonpositiveDistanceError("rho[" + std::to_string(i) + "] is not positive");
    }
    const double z = dim * std::log(rho) + offset;
    report.zeta[i] = z;
    sum.add(z);
    sum_sq.add(z * z);
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  report.entropy = sum.value() * inv_n;
  report.second_moment = sum_sq.value() * inv_n - constants::pi_sq_over_6;
  // Same quantity as second_moment - entropy^2, evaluated in centered form so
  // a large common offset in zeta does not cancel catastrophically.
  CompensatedSum centered;
  for (double z : report.zeta) {
    const double dz = z - report.entropy;
    centered.add(dz * dz);
  }
  report.varentropy = centered.value() * inv_n - constants::pi_sq_over_6;
  return report;
}

EstimateReport estimate(const Sample& sample, NnEngine engine, unsigned threads) {
  return estimate_from_distances(build_nn_distances(sample, engine, threads));
}

double gumbel_log_moment(double lambda, int order) {
  if (!(lambda > 0.0)) throw InvalidParamsError("rate must be positive");
  const double shift = std::log(lambda) + constants::euler_gamma;
  switch (order) {
    case 1:
      return -shift;
    case 2:
      return shift * shift + constants::pi_sq_over_6;
    default:
      throw UnsupportedOrderError("log-moment order must be 1 or 2, got " +
                                  std::to_string(order));
  }
}

}  // namespace nnvar
