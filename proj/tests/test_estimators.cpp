#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "nnvar/distributions.hpp"
#include "nnvar/errors.hpp"
#include "nnvar/estimators.hpp"
#include "nnvar/quadrature.hpp"
#include "support.hpp"

using namespace nnvar;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// E log xi for xi = (n-1) 2 e^gamma rho, rho the distance from 0 to the
// nearest of n-1 standard normal points, by quadrature of its exact law.
double exact_zeta_mean_at_zero(std::size_t n) {
  const Distribution normal = Distribution::standard_normal(1);
  const double scale = static_cast<double>(n - 1) * 2.0 * std::exp(constants::euler_gamma);
  auto log_survival = [&](double t) {
    const double r = std::exp(t) / scale;
    return static_cast<double>(n - 1) * std::log1p(-normal.interval_mass(-r, r));
  };
  QuadratureOptions opts;
  opts.abs_tol = 1e-12;
  opts.rel_tol = 1e-12;
  opts.max_intervals = 20000;
  const double upper =
      integrate_checked([&](double t) { return std::exp(log_survival(t)); }, 0.0, kInf, opts).value;
  const double lower =
      integrate_checked([&](double t) { return -std::expm1(log_survival(t)); }, -kInf, 0.0, opts)
          .value;
  return upper - lower;
}

}  // namespace

TEST_CASE("constants") {
  CHECK(std::abs(constants::euler_gamma - 0.57721566490153286) <= 1e-15);
  CHECK(std::abs(constants::pi_sq_over_6 - kPi * kPi / 6.0) <= 1e-15);
  CHECK(constants::euler_gamma == doctest::Approx(std::numbers::egamma).epsilon(1e-16));
}

TEST_CASE("unit ball volume") {
  CHECK(unit_ball_volume(1) == 2.0);
  CHECK(unit_ball_volume(2) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(std::abs(unit_ball_volume(3) - 4.0 * kPi / 3.0) <= 1e-12);
  for (int d = 1; d <= 10; ++d) {
    CHECK(std::abs(unit_ball_volume(d) - ref::unit_ball_volume(d)) <= 1e-12);
    CHECK(log_unit_ball_volume(d) == doctest::Approx(std::log(ref::unit_ball_volume(d))).epsilon(1e-14));
  }
  // Sphere-volume cross-check: V_3 = int_{-1}^{1} pi (1 - x^2) dx.
  const auto v3 = integrate_checked([](double x) { return kPi * (1.0 - x * x); }, -1.0, 1.0);
  CHECK(std::abs(v3.value - unit_ball_volume(3)) <= 1e-12);
}

TEST_CASE("zeta examples") {
  const double g = constants::euler_gamma;
  CHECK(zeta(1.0, 1, 2) == doctest::Approx(std::log(2.0) + g).epsilon(1e-15));
  CHECK(zeta(1.0, 1, 2) == doctest::Approx(1.27036).epsilon(1e-5));
  CHECK(zeta(1.0, 2, 2) == doctest::Approx(std::log(kPi) + g).epsilon(1e-15));
  const double tiny = zeta(1e-160, 2, 1000);
  CHECK(std::isfinite(tiny));
  CHECK(std::abs(tiny - oracle::zeta_tiny_rho) <= 1e-12 * std::abs(oracle::zeta_tiny_rho));
  // rho^d underflows here, the log-domain form does not.
  CHECK(std::pow(1e-160, 8) == 0.0);
  CHECK(std::isfinite(zeta(1e-160, 8, 1000)));
}

TEST_CASE("zeta rejects nonpositive distances") {
  CHECK_THROWS_AS(zeta(0.0, 1, 10), NonpositiveDistanceError);
  CHECK_THROWS_AS(zeta(-1.0, 2, 10), NonpositiveDistanceError);
}

TEST_CASE("two-point samples give V_N = -pi^2/6") {
  std::mt19937_64 gen(1);
  for (int trial = 0; trial < 200; ++trial) {
    const Sample s = ref::random_sample(2, 1 + trial % 6, gen);
    const EstimateReport r = estimate(s);
    CHECK(std::abs(r.varentropy + constants::pi_sq_over_6) <= 1e-12);
    CHECK(r.unstable);
  }
}

TEST_CASE("report invariants") {
  const Sample s = Distribution::standard_normal(2).sample(777, 3);
  const EstimateReport r = estimate(s);
  REQUIRE(r.zeta.size() == 777);
  long double sum = 0.0L;
  long double sum2 = 0.0L;
  for (double z : r.zeta) {
    sum += z;
    sum2 += static_cast<long double>(z) * z;
  }
  const double mean = static_cast<double>(sum / 777.0L);
  CHECK(r.entropy == doctest::Approx(mean).epsilon(1e-15));
  CHECK(r.second_moment ==
        doctest::Approx(static_cast<double>(sum2 / 777.0L) - constants::pi_sq_over_6).epsilon(1e-13));
  CHECK(std::abs(r.varentropy - (r.second_moment - r.entropy * r.entropy)) <= 1e-12);
  CHECK_FALSE(r.unstable);
  CHECK(r.n == 777);
  CHECK(r.dim == 2);
  // Reproducible given the sample, for any engine and worker count.
  const EstimateReport again = estimate(s, NnEngine::BruteForce, 3);
  CHECK(again.zeta == r.zeta);
  CHECK(again.varentropy == r.varentropy);
}

TEST_CASE("ten-point sample against the straight-line reference") {
  const Sample s = Distribution::standard_normal(2).sample(10, 2024);
  const EstimateReport r = estimate(s);
  const ref::Estimates e = ref::direct_estimate(s);
  CHECK(r.entropy == doctest::Approx(e.entropy).epsilon(1e-12));
  CHECK(r.second_moment == doctest::Approx(e.second_moment).epsilon(1e-12));
  CHECK(r.varentropy == doctest::Approx(e.varentropy).epsilon(1e-12));
  CHECK_FALSE(r.unstable);
}

TEST_CASE("unstable flag below ten points") {
  CHECK(estimate(Distribution::standard_normal(1).sample(9, 1)).unstable);
  CHECK_FALSE(estimate(Distribution::standard_normal(1).sample(10, 1)).unstable);
}

TEST_CASE("normal sample of 5000 points has varentropy near one half") {
  const EstimateReport r = estimate(Distribution::standard_normal(1).sample(5000, 17));
  CHECK(std::abs(r.varentropy - 0.5) < 0.15);
  CHECK(std::abs(r.entropy - 0.5 * std::log(2.0 * kPi * std::numbers::e)) < 0.1);
}

TEST_CASE("estimate propagates errors") {
  CHECK_THROWS_AS(estimate(Sample::from_column({1.0, 1.0, 2.0})), DuplicatePointsError);
}

TEST_CASE("Gumbel log moments") {
  const double g = constants::euler_gamma;
  CHECK(gumbel_log_moment(1.0, 1) == doctest::Approx(-g).epsilon(1e-15));
  CHECK(gumbel_log_moment(1.0, 2) == doctest::Approx(oracle::log2_moment_exp1).epsilon(1e-14));
  CHECK(gumbel_log_moment(std::numbers::e, 1) == doctest::Approx(-1.0 - g).epsilon(1e-15));
  CHECK_THROWS_AS(gumbel_log_moment(1.0, 3), UnsupportedOrderError);
  CHECK_THROWS_AS(gumbel_log_moment(1.0, 0), UnsupportedOrderError);
  CHECK_THROWS_AS(gumbel_log_moment(0.0, 1), InvalidParamsError);

  // Quadrature of E log^k xi for xi ~ Exp(rate lambda), written in s = log xi.
  for (double lambda : {0.25, 1.0, 7.0}) {
    for (int k : {1, 2}) {
      auto integrand = [&](double s) {
        return std::pow(s, k) * std::exp(std::log(lambda) + s - lambda * std::exp(s));
      };
      const double q = integrate_checked(integrand, -kInf, kInf).value;
      CHECK(q == doctest::Approx(gumbel_log_moment(lambda, k)).epsilon(1e-10));
    }
  }
}

TEST_CASE("Gumbel variance identity reproduces pi^2/6") {
  QuadratureOptions opts;
  opts.abs_tol = 1e-13;
  opts.rel_tol = 1e-14;
  auto moment = [&](int k) {
    return integrate_checked(
               [k](double s) { return std::pow(s, k) * std::exp(s - std::exp(s)); }, -kInf, kInf,
               opts)
        .value;
  };
  const double m1 = moment(1);
  const double m2 = moment(2);
  CHECK(std::abs(m2 - m1 * m1 - constants::pi_sq_over_6) <= 1e-9);
  CHECK(std::abs(m2 - oracle::log2_moment_exp1) <= 1e-9);
  CHECK(std::abs(m1 + constants::euler_gamma) <= 1e-9);
}

TEST_CASE("similarity invariance of V_N and shift of H_N") {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> log_c(std::log(1e-3), std::log(1e3));
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 10 + gen() % 400;
    const std::size_t d = 1 + gen() % 6;
    const Sample s = ref::random_sample(n, d, gen);
    const double c = std::exp(log_c(gen));
    std::vector<double> m = ref::random_orthogonal(d, gen);
    for (double& v : m) v *= c;
    std::vector<double> b(d);
    for (double& v : b) v = 5.0 * c * normal(gen);
    const EstimateReport r0 = estimate(s);
    const EstimateReport r1 = estimate(affine_transform(s, m, b));
    CHECK(std::abs(r1.varentropy - r0.varentropy) <= 1e-9 * (1.0 + std::abs(r0.varentropy)));
    CHECK(std::abs(r1.entropy - r0.entropy - static_cast<double>(d) * std::log(c)) <= 1e-9);
  }
}

TEST_CASE("zeta mean at a Lebesgue point approaches -log f(0)") {
  const double target = -oracle::normal_log_density_0;
  std::vector<double> errors;
  for (std::size_t n : {100u, 316u, 1000u, 3162u, 10000u}) {
    errors.push_back(std::abs(exact_zeta_mean_at_zero(n) - target));
  }
  for (std::size_t k = 1; k < errors.size(); ++k) CHECK(errors[k] < errors[k - 1]);
  CHECK(errors.back() < 1e-4);

  // Simulation agrees with the exact law.
  const Distribution normal = Distribution::standard_normal(1);
  for (std::size_t n : {100u, 1000u}) {
    const std::size_t reps = n == 100 ? 100000 : 20000;
    Rng rng = Rng::stream(5, {n});
    double sum = 0.0;
    double sum2 = 0.0;
    double x = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      double rho = kInf;
      for (std::size_t j = 0; j + 1 < n; ++j) {
        normal.draw(rng, std::span<double>(&x, 1));
        rho = std::min(rho, std::abs(x));
      }
      const double z = zeta(rho, 1, n);
      sum += z;
      sum2 += z * z;
    }
    const double mean = sum / reps;
    const double se = std::sqrt((sum2 / reps - mean * mean) / reps);
    CHECK(std::abs(mean - exact_zeta_mean_at_zero(n)) < 4.0 * se);
  }
}
