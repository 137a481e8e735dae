// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <unistd.h>

#include "json.hpp"
#include "nnvar/conditions.hpp"
#include "nnvar/distributions.hpp"
#include "nnvar/estimators.hpp"
#include "nnvar/experiments.hpp"
#include "nnvar/nn_graph.hpp"
#include "nnvar/parallel.hpp"
#include "nnvar/quadrature.hpp"
#include "support.hpp"

using namespace nnvar;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kSeed = 20240501;

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << what << " [" << detail
            << "]" << std::endl;
  if (!ok) ++failures;
}

std::string num(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

McReport campaign(const Distribution& spec, std::vector<std::size_t> grid, Estimand estimand) {
  CampaignConfig c;
  c.spec = spec;
  c.n_grid = std::move(grid);
  c.replications = 200;
  c.seed = kSeed;
  c.estimand = estimand;
  c.threads = default_thread_count();
  return run_campaign(c);
}

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::ostringstream detail;
  auto check = [&](const char* label, double mean, double target, double tol) {
    const bool pass = std::abs(mean - target) <= tol;
    ok = ok && pass;
    detail << label << "=" << num(mean) << " (target " << num(target) << " +- " << tol << ") ";
  };
  const McReport n1 = campaign(Distribution::standard_normal(1), {5000}, Estimand::Both);
  check("normal V", n1.rows[0].varentropy->mean, 0.5, 0.05);
  check("normal H", n1.rows[0].entropy->mean, 0.5 * std::log(2.0 * kPi * std::numbers::e), 0.03);
  check("exponential V",
        campaign(Distribution::exponential(1.0), {5000}, Estimand::Varentropy).rows[0].varentropy->mean,
        1.0, 0.08);
  check("uniform V",
        campaign(Distribution::uniform(0.0, 1.0), {5000}, Estimand::Varentropy).rows[0].varentropy->mean,
        0.0, 0.05);
  check("normal d=3 V",
        campaign(Distribution::standard_normal(3), {5000}, Estimand::Varentropy).rows[0].varentropy->mean,
        1.5, 0.10);
  detail << "runtime " << num(seconds_since(t0)) << " s";
  report(1, ok, "known-value recovery, R=200, n=5000", detail.str());
}

void criterion2() {
  const McReport r = campaign(Distribution::standard_normal(1), {250, 1000, 4000}, Estimand::Varentropy);
  bool ok = true;
  std::ostringstream detail;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto& s = *r.rows[i].varentropy;
    detail << "MSE(" << r.rows[i].n << ")=" << num(s.mse) << "+-" << num(s.stderr_mse) << " ";
  }
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    const auto& big = *r.rows[i - 1].varentropy;
    const auto& small = *r.rows[i].varentropy;
    const double gap = big.mse - small.mse;
    const double se = std::hypot(big.stderr_mse, small.stderr_mse);
    ok = ok && gap > 2.0 * se;
    detail << "gap " << num(gap) << " vs 2se " << num(2.0 * se) << " ";
  }
  report(2, ok, "MSE decreases over n = 250, 1000, 4000", detail.str());
}

void criterion3() {
  std::mt19937_64 gen(kSeed);
  std::uniform_real_distribution<double> log_scale(-20.0, 20.0);
  double worst = 0.0;
  std::size_t trials = 0;
  for (int t = 0; t < 10000; ++t) {
    const std::size_t d = 1 + t % 8;
    const Sample base = ref::random_sample(2, d, gen);
    std::vector<double> data(base.data().begin(), base.data().end());
    const double c = std::exp(log_scale(gen));
    for (double& v : data) v *= c;
    const EstimateReport r = estimate(Sample(2, d, data));
    worst = std::max(worst, std::abs(r.varentropy + constants::pi_sq_over_6));
    ++trials;
  }
  report(3, worst <= 1e-12, "two-point identity V_N = -pi^2/6",
         std::to_string(trials) + " samples, max |V_N + pi^2/6| = " + num(worst));
}

void criterion4() {
  std::mt19937_64 gen(kSeed + 4);
  std::uniform_real_distribution<double> log_c(std::log(1e-3), std::log(1e3));
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 10 + gen() % 491;
    const std::size_t d = 1 + gen() % 8;
    const Sample s = ref::random_sample(n, d, gen);
    const double c = std::exp(log_c(gen));
    std::vector<double> m = ref::random_orthogonal(d, gen);
    for (double& v : m) v *= c;
    std::vector<double> b(d);
    for (double& v : b) v = 10.0 * c * normal(gen);
    const double v0 = estimate(s).varentropy;
    const double v1 = estimate(affine_transform(s, m, b)).varentropy;
    worst = std::max(worst, std::abs(v1 - v0) / (1.0 + std::abs(v0)));
  }
  report(4, worst <= 1e-9, "similarity invariance of V_N",
         "100 samples, max |dV|/(1+|V|) = " + num(worst));
}

void criterion5() {
  std::mt19937_64 gen(kSeed + 5);
  std::size_t mismatches = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 2 + gen() % 499;
    const std::size_t d = 1 + gen() % 8;
    const Sample s = ref::random_sample(n, d, gen);
    if (build_nn_distances(s, NnEngine::Tree).rho != build_nn_distances(s, NnEngine::BruteForce).rho) {
      ++mismatches;
    }
  }
  report(5, mismatches == 0, "Tree and BruteForce NN distances identical",
         "1000 samples, " + std::to_string(mismatches) + " mismatches");
}

void criterion6() {
  QuadratureOptions opts;
  opts.abs_tol = 1e-13;
  opts.rel_tol = 1e-14;
  // Moments of log(xi), xi ~ Exp(1), in the variable s = log xi.
  auto moment = [&](int k) {
    return integrate_checked([k](double s) { return std::pow(s, k) * std::exp(s - std::exp(s)); },
                             -kInf, kInf, opts)
        .value;
  };
  const double m1 = moment(1);
  const double var = moment(2) - m1 * m1;
  const double err = std::abs(var - kPi * kPi / 6.0);
  double worst_vol = 0.0;
  for (int d = 1; d <= 10; ++d) {
    worst_vol = std::max(worst_vol, std::abs(unit_ball_volume(d) - ref::unit_ball_volume(d)));
  }
  report(6, err <= 1e-9 && worst_vol <= 1e-12, "pi^2/6 by quadrature and unit-ball volumes",
         "|Var log xi - pi^2/6| = " + num(err) + ", max volume error d=1..10 = " + num(worst_vol));
}

void criterion7() {
  double worst = 0.0;
  for (const Distribution& d : {Distribution::exponential(1.0), Distribution::uniform(0.0, 1.0)}) {
    const CdfHandle F = cdf_handle(d);
    for (AppendixIdentity which : {AppendixIdentity::Lemma2Part1, AppendixIdentity::Lemma2Part2,
                                   AppendixIdentity::Lemma3Part1, AppendixIdentity::Lemma3Part2}) {
      worst = std::max(worst, appendix_identity_check(which, F).abs_diff);
    }
  }
  const InequalityReport ineq = inequality_suite(100000, kSeed);
  std::ostringstream detail;
  detail << "max identity |lhs-rhs| = " << num(worst);
  for (const auto& r : ineq.results) detail << ", " << r.name << " " << r.violations << "/" << r.trials;
  report(7, worst <= 1e-6 && ineq.passed(), "integration-by-parts identities and inequality suite",
         detail.str());
}

void criterion8() {
  const std::filesystem::path out =
      std::filesystem::temp_directory_path() / ("nnvar_acceptance_" + std::to_string(::getpid()) + ".json");
  const std::string cmd = std::string("'") + NNVAR_CLI_PATH + "' --json --no-meta conditions 'normal(d=1)' >'" +
                          out.string() + "'";
  const int status = std::system(cmd.c_str());
  bool ok = status == 0;
  std::ostringstream detail;
  double worst_change = 0.0;
  if (ok) {
    std::ifstream in(out);
    const nlohmann::json j = nlohmann::json::parse(in);
    for (const auto& f : j["functionals"]) {
      std::string label = f["functional"].get<std::string>();
      if (f["params"].contains("alpha")) label += std::to_string(f["params"]["alpha"].get<int>());
      const bool pass = f["verdict"] == "FinitePass";
      ok = ok && pass;
      const auto& est = f["estimates"];
      for (std::size_t i = 1; i < est.size(); ++i) {
        if (est[i].is_null() || est[i - 1].is_null()) {
          ok = false;
          continue;
        }
        const double prev = est[i - 1].get<double>();
        worst_change = std::max(worst_change, std::abs(est[i].get<double>() - prev) / std::abs(prev));
      }
      detail << label << " " << f["verdict"].get<std::string>() << " ";
    }
  }
  std::filesystem::remove(out);
  ok = ok && worst_change < kFiniteRelativeChange;
  detail << "max relative change " << num(worst_change);
  report(8, ok, "conditions on normal(d=1): K1-K4, Q, T FinitePass", detail.str());
}

void criterion9() {
  const double x = 0.0;
  const double avg = local_average(Distribution::standard_normal(1), std::span<const double>(&x, 1), 1e-4);
  const double err = std::abs(avg - std::exp(oracle::normal_log_density_0));
  report(9, err <= 1e-4, "local average at r=1e-4 approaches phi(0)", "|I - phi(0)| = " + num(err));
}

void criterion10() {
  const unsigned threads = default_thread_count();
  const NullCalibration null = calibrate_normality(2000, 1, {999, kSeed}, threads);
  std::size_t size_rejects = 0;
  std::size_t power_rejects = 0;
  constexpr std::size_t kTrials = 400;
  for (std::size_t t = 0; t < kTrials; ++t) {
    const Sample g = Distribution::standard_normal(1).sample(2000, derive_stream_seed(kSeed, {10, 0, t}));
    const Sample e = Distribution::exponential(1.0).sample(2000, derive_stream_seed(kSeed, {10, 1, t}));
    if (normality_screen(g, 0.05, null).reject) ++size_rejects;
    if (normality_screen(e, 0.05, null).reject) ++power_rejects;
  }
  const double size = static_cast<double>(size_rejects) / kTrials;
  const double power = static_cast<double>(power_rejects) / kTrials;
  report(10, size >= 0.02 && size <= 0.09 && power > 0.95, "normality screen size and power, n=2000",
         "size " + num(size) + " (target [0.02, 0.09]), power " + num(power) + " (target > 0.95)");
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << " in "
            << num(seconds_since(t0)) << " s" << std::endl;
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
