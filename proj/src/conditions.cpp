#include "nnvar/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "nnvar/errors.hpp"
#include "nnvar/estimators.hpp"
#include "nnvar/kd_tree.hpp"
#include "nnvar/parallel.hpp"
#include "nnvar/quadrature.hpp"

namespace nnvar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kBlockSize = 1024;

// Stream tags; every Monte Carlo consumer gets its own family of streams.
constexpr std::uint64_t kTagLocalAverage = 0x1a;
constexpr std::uint64_t kTagK = 0x4b;
constexpr std::uint64_t kTagQ = 0x51;
constexpr std::uint64_t kTagT = 0x54;
constexpr std::uint64_t kTagRatio = 0x52;
constexpr std::uint64_t kTagInequality = 0x1e;

void require_point(const Distribution& dist, std::span<const double> x) {
  if (x.size() != dist.dim()) {
    throw DimensionMismatchError("point has " + std::to_string(x.size()) +
                                 " coordinates, distribution has dimension " +
                                 std::to_string(dist.dim()));
  }
}

void require_budget(std::size_t budget, std::size_t floor, const char* what) {
  if (budget < floor) {
    throw BudgetTooSmallError(std::string(what) + ": budget " + std::to_string(budget) +
                              " is below the minimum " + std::to_string(floor));
  }
}

std::size_t ceil_sqrt(std::size_t b) {
  auto m = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(b))));
  while (m > 0 && (m - 1) * (m - 1) >= b) --m;
  while (m * m < b) ++m;
  return m;
}

std::vector<std::size_t> budget_ladder(std::size_t budget, int doublings) {
  if (doublings < 1 || doublings > 20) {
    throw InvalidParamsError("doublings must be in [1, 20]");
  }
  std::vector<std::size_t> out;
  for (int k = 0; k <= doublings; ++k) out.push_back(budget << k);
  return out;
}

// Mean and standard error of the mean.
std::pair<double, double> mean_stderr(std::span<const double> values) {
  const double m = static_cast<double>(values.size());
  const double mean = pairwise_sum(values) / m;
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double c = values[i] - mean;
    sq[i] = c * c;
  }
  const double var = values.size() > 1 ? pairwise_sum(sq) / (m - 1.0) : 0.0;
  return {mean, std::sqrt(var / m)};
}

void uniform_on_sphere(Rng& rng, std::span<double> u) {
  if (u.size() == 1) {
    u[0] = rng.uniform() < 0.5 ? -1.0 : 1.0;
    return;
  }
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (double& c : u) {
      c = rng.normal();
      norm2 += c * c;
    }
  } while (norm2 == 0.0);
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& c : u) c *= inv;
}

double uniform_interval_average(const family::Uniform& u, double x, double r) {
  // Overlap of (x - r, x + r) with (a, b) as a sum of half-widths, so a ball
  // inside the support gives exactly 2r.
  const double left = std::clamp(x - u.a, 0.0, r);
  const double right = std::clamp(u.b - x, 0.0, r);
  if (x < u.a - r || x > u.b + r) return 0.0;
  double len = 0.0;
  if (x >= u.a && x <= u.b) {
    len = left + right;
  } else {
    len = std::min(x + r, u.b) - std::max(x - r, u.a);
  }
  return len > 0.0 ? len / (2.0 * r) / (u.b - u.a) : 0.0;
}

}  // namespace

double g_function(double t) {
  if (std::isnan(t) || t < 0.0) throw NegativeArgumentError("G is defined for t >= 0");
  if (t < 1.0) return 0.0;
  if (std::isinf(t)) return kInf;
  return t * std::log(t);
}

double local_average(const Distribution& dist, std::span<const double> x, double r,
                     std::size_t budget, std::uint64_t seed) {
  require_point(dist, x);
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidParamsError("radius must be positive");
  const std::size_t d = dist.dim();
  if (d == 1) {
    if (const auto* u = std::get_if<family::Uniform>(&dist.family())) {
      return uniform_interval_average(*u, x[0], r);
    }
    return dist.interval_mass(x[0] - r, x[0] + r) / (2.0 * r);
  }
  require_budget(budget, kMinLocalAverageBudget, "local_average");
  Rng rng = Rng::stream(seed, {kTagLocalAverage});
  std::vector<double> y(d);
  std::vector<double> dir(d);
  CompensatedSum sum;
  for (std::size_t j = 0; j < budget; ++j) {
    uniform_on_sphere(rng, dir);
    const double radius = r * std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
    for (std::size_t k = 0; k < d; ++k) y[k] = x[k] + radius * dir[k];
    sum.add(dist.density(y));
  }
  return sum.value() / static_cast<double>(budget);
}

MaximalProfile maximal_profile(const Distribution& dist, std::span<const double> x, double R,
                               std::size_t grid_size, const ProfileOptions& options) {
  require_point(dist, x);
  if (!(R > 0.0) || !std::isfinite(R)) throw InvalidParamsError("R must be positive");
  if (grid_size < 8) throw InvalidParamsError("grid_size must be at least 8");
  if (!(options.ratio > 1.0) || !std::isfinite(options.ratio)) {
    throw InvalidParamsError("grid ratio must exceed 1");
  }
  MaximalProfile p;
  p.x.assign(x.begin(), x.end());
  p.R = R;
  p.radii.resize(grid_size);
  p.values.resize(grid_size);
  for (std::size_t k = 0; k < grid_size; ++k) {
    p.radii[k] = R * std::pow(options.ratio, -static_cast<double>(k));
    // Same seed at every radius: the Monte Carlo points are one unit-ball
    // cloud rescaled, so nested grids see identical values.
    p.values[k] = local_average(dist, x, p.radii[k], options.budget, options.seed);
  }
  for (std::size_t k = 1; k < grid_size; ++k) {
    if (p.values[k] < p.values[p.argmin]) p.argmin = k;
    if (p.values[k] > p.values[p.argmax]) p.argmax = k;
  }
  p.m_value = p.values[p.argmin];
  p.M_value = p.values[p.argmax];
  return p;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::FinitePass:
      return "FinitePass";
    case Verdict::Diverging:
      return "Diverging";
    case Verdict::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

Verdict classify_doubling(std::span<const double> estimates) {
  if (estimates.size() < 2) return Verdict::Inconclusive;
  for (double e : estimates) {
    if (!std::isfinite(e)) return Verdict::Inconclusive;
  }
  bool stable = true;
  bool growing = estimates.size() >= 4;
  for (std::size_t k = 1; k < estimates.size(); ++k) {
    const double prev = estimates[k - 1];
    const double next = estimates[k];
    double change = 0.0;
    if (prev != 0.0) {
      change = (next - prev) / std::abs(prev);
    } else if (next != 0.0) {
      change = next > 0.0 ? kInf : -kInf;
    }
    if (!(std::abs(change) < kFiniteRelativeChange)) stable = false;
    if (!(change > kDivergingRelativeGrowth)) growing = false;
  }
  if (stable) return Verdict::FinitePass;
  if (growing) return Verdict::Diverging;
  return Verdict::Inconclusive;
}

namespace {

// Inner integral of K by importance sampling from the defensive mixture
// q = f/2 + g/2, where g places y = x + rho u with u uniform on the sphere
// and L = d log(s / rho) ~ Gamma(alpha + 1). The integrand G(|log rho|^alpha)
// vanishes on [1/e, e], so g only covers rho < s = 1/e, where the log
// singularity sits. The weight f/q never exceeds 2.
class KInnerSampler {
 public:
  KInnerSampler(const Distribution& dist, int alpha)
      : dist_(dist),
        d_(dist.dim()),
        alpha_(alpha),
        shape_(alpha + 1.0),
        log_norm_(std::lgamma(shape_) + log_unit_ball_volume(static_cast<int>(d_)) -
                  static_cast<double>(d_)),  // log(Gamma(k) V_d s^d) with s = 1/e
        y_(d_),
        dir_(d_) {}

  double draw(Rng& rng, std::span<const double> x) {
    for (;;) {
      if (rng.uniform() < 0.5) {
        dist_.draw(rng, y_);
      } else {
        const double L = rng.gamma(shape_);
        const double rho = std::exp(-1.0 - L / static_cast<double>(d_));
        uniform_on_sphere(rng, dir_);
        for (std::size_t k = 0; k < d_; ++k) y_[k] = x[k] + rho * dir_[k];
      }
      const double rho2 = detail::squared_distance(x, y_);
      if (rho2 == 0.0) continue;
      const double log_rho = 0.5 * std::log(rho2);
      const double t = std::pow(std::abs(log_rho), alpha_);
      if (t < 1.0) return 0.0;
      const double log_f = dist_.log_density(y_);
      if (log_f == -kInf) return 0.0;
      double log_g = -kInf;
      if (log_rho < -1.0) {
        const double L = static_cast<double>(d_) * (-1.0 - log_rho);
        log_g = (shape_ - 1.0) * std::log(L) - log_norm_;
      }
      const double weight = 2.0 / (1.0 + std::exp(log_g - log_f));
      return t * std::log(t) * weight;
    }
  }

 private:
  const Distribution& dist_;
  std::size_t d_;
  double alpha_;
  double shape_;
  double log_norm_;
  std::vector<double> y_;
  std::vector<double> dir_;
};

// Shared driver. `per_budget(B, values)` fills one value per outer draw.
template <typename Fill>
FunctionalEstimate run_ladder(std::string name, std::vector<std::pair<std::string, double>> params,
                              std::size_t budget, const McOptions& options, Fill&& fill) {
  FunctionalEstimate out;
  out.functional = std::move(name);
  out.params = std::move(params);
  out.budgets = budget_ladder(budget, options.doublings);
  for (std::size_t B : out.budgets) {
    std::vector<double> values;
    std::size_t floor_hits = 0;
    fill(B, values, floor_hits);
    const auto [mean, se] = mean_stderr(values);
    out.estimates.push_back(mean);
    out.stderrs.push_back(se);
    out.floor_hits = std::max(out.floor_hits, floor_hits);
  }
  out.verdict = classify_doubling(out.estimates);
  return out;
}

// Fills values[i] = transform(profile at x_i) for the outer draws of Q and T.
template <typename Transform>
void profile_draws(const Distribution& dist, double R, std::size_t budget,
                   const McOptions& options, std::uint64_t tag, std::vector<double>& values,
                   Transform&& transform) {
  const std::size_t d = dist.dim();
  if (d == 1) {
    values.assign(budget, 0.0);
    const std::size_t blocks = (budget + kBlockSize - 1) / kBlockSize;
    parallel_for(blocks, options.threads, [&](std::size_t b) {
      Rng rng = Rng::stream(options.seed, {tag, b});
      double x = 0.0;
      const std::size_t end = std::min(budget, (b + 1) * kBlockSize);
      for (std::size_t i = b * kBlockSize; i < end; ++i) {
        dist.draw(rng, std::span<double>(&x, 1));
        const MaximalProfile p =
            maximal_profile(dist, std::span<const double>(&x, 1), R, options.grid_size);
        values[i] = transform(p, std::span<const double>(&x, 1));
      }
    });
    return;
  }
  const std::size_t outer = ceil_sqrt(budget);
  const std::size_t inner = std::max(kMinLocalAverageBudget, outer);
  values.assign(outer, 0.0);
  parallel_for(outer, options.threads, [&](std::size_t i) {
    Rng rng = Rng::stream(options.seed, {tag, i});
    std::vector<double> x(d);
    dist.draw(rng, x);
    ProfileOptions po;
    po.budget = inner;
    po.seed = derive_stream_seed(options.seed, {tag, i, 1});
    const MaximalProfile p = maximal_profile(dist, x, R, options.grid_size, po);
    values[i] = transform(p, std::span<const double>(x));
  });
}

}  // namespace

FunctionalEstimate estimate_K(const Distribution& dist, int alpha, double eps0,
                              std::size_t budget, const McOptions& options) {
  require_budget(budget, kMinFunctionalBudget, "estimate_K");
  if (alpha < 1 || alpha > 4) throw InvalidParamsError("alpha must be in {1, 2, 3, 4}");
  if (!(eps0 > 0.0) || !std::isfinite(eps0)) throw InvalidParamsError("eps0 must be positive");
  const std::size_t d = dist.dim();
  return run_ladder(
      "K", {{"alpha", static_cast<double>(alpha)}, {"eps0", eps0}}, budget, options,
      [&](std::size_t B, std::vector<double>& values, std::size_t&) {
        const std::size_t m = ceil_sqrt(B);
        values.assign(m, 0.0);
        parallel_for(m, options.threads, [&](std::size_t i) {
          Rng rng = Rng::stream(options.seed, {kTagK, static_cast<std::uint64_t>(alpha), i});
          std::vector<double> x(d);
          dist.draw(rng, x);
          KInnerSampler sampler(dist, alpha);
          CompensatedSum sum;
          for (std::size_t j = 0; j < m; ++j) sum.add(sampler.draw(rng, x));
          values[i] = std::pow(sum.value() / static_cast<double>(m), 1.0 + eps0);
        });
      });
}

FunctionalEstimate estimate_Q(const Distribution& dist, double eps1, double R1,
                              std::size_t budget, const McOptions& options) {
  require_budget(budget, kMinFunctionalBudget, "estimate_Q");
  if (!(eps1 > 0.0 && eps1 <= 1.0)) throw InvalidParamsError("eps1 must be in (0, 1]");
  if (!(R1 > 0.0) || !std::isfinite(R1)) throw InvalidParamsError("R1 must be positive");
  return run_ladder("Q", {{"eps1", eps1}, {"R1", R1}}, budget, options,
                    [&](std::size_t B, std::vector<double>& values, std::size_t&) {
                      profile_draws(dist, R1, B, options, kTagQ, values,
                                    [&](const MaximalProfile& p, std::span<const double>) {
                                      return std::pow(p.M_value, eps1);
                                    });
                    });
}

FunctionalEstimate estimate_T(const Distribution& dist, double eps2, double R2,
                              std::size_t budget, const McOptions& options) {
  require_budget(budget, kMinFunctionalBudget, "estimate_T");
  if (!(eps2 > 0.0) || !std::isfinite(eps2)) throw InvalidParamsError("eps2 must be positive");
  if (!(R2 > 0.0) || !std::isfinite(R2)) throw InvalidParamsError("R2 must be positive");
  FunctionalEstimate out = run_ladder("T", {{"eps2", eps2}, {"R2", R2}}, budget, options,
                    [&](std::size_t B, std::vector<double>& values, std::size_t& floor_hits) {
                      profile_draws(dist, R2, B, options, kTagT, values,
                                    [](const MaximalProfile& p, std::span<const double>) {
                                      return p.m_value;
                                    });
                      floor_hits = 0;
                      for (double& v : values) {
                        if (v < kDensityFloor) {
                          v = kDensityFloor;
                          ++floor_hits;
                        }
                        v = std::pow(v, -eps2);
                      }
                    });
  // Clamped draws make the estimate a lower bound, so stability proves nothing.
  if (out.floor_hits > 0 && out.verdict == Verdict::FinitePass) out.verdict = Verdict::Inconclusive;
  return out;
}

std::pair<double, double> density_power_integral(const Distribution& dist, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidParamsError("eps must be positive");
  const double d = static_cast<double>(dist.dim());
  // For eps >= 1, f^{1-eps} >= (sup f)^{1-eps} on the support, so only a
  // bounded support keeps the integral finite.
  const bool bounded = std::holds_alternative<family::Uniform>(dist.family());
  if (eps >= 1.0 && !bounded) return {kInf, 0.0};
  const double pi2 = 2.0 * std::numbers::pi;
  return std::visit(
      [&](const auto& f) -> std::pair<double, double> {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, family::NormalDiag>) {
          double log_det = 0.0;
          for (double s : f.sigma) log_det += 2.0 * std::log(s);
          return {std::exp(0.5 * d * eps * std::log(pi2) + 0.5 * eps * log_det -
                           0.5 * d * std::log1p(-eps)),
                  0.0};
        } else if constexpr (std::is_same_v<T, family::NormalFull>) {
          return {std::exp(0.5 * d * eps * std::log(pi2) + 0.5 * eps * f.log_det -
                           0.5 * d * std::log1p(-eps)),
                  0.0};
        } else if constexpr (std::is_same_v<T, family::Uniform>) {
          return {std::exp(d * eps * std::log(f.b - f.a)), 0.0};
        } else if constexpr (std::is_same_v<T, family::Exponential>) {
          return {std::pow(f.rate, -eps) / (1.0 - eps), 0.0};
        } else {
          // Tail decay x^{-p}: f^{1-eps} is integrable iff p (1 - eps) > 1.
          double p = 0.0;
          if constexpr (std::is_same_v<T, family::StudentT>) p = f.nu + 1.0;
          if constexpr (std::is_same_v<T, family::Pareto>) p = f.alpha + 1.0;
          if (!(p * (1.0 - eps) > 1.0)) return {kInf, 0.0};
          // int_0^1 f(Q(u))^{-eps} du, each half mapped by u = e^{-z} to remove
          // the endpoint singularity.
          auto half = [&](bool upper) {
            return [&, upper](double z) {
              const double u = std::exp(-z);
              if (u == 0.0) return 0.0;
              const double q = upper ? dist.upper_quantile(u) : dist.quantile(u);
              // Deep in the tail the quantile overflows; the integrand is already negligible.
              if (!std::isfinite(q)) return 0.0;
              const double x[1] = {q};
              const double v = std::exp(-eps * dist.log_density(x) - z);
              return std::isfinite(v) ? v : 0.0;
            };
          };
          QuadratureOptions opts;
          opts.abs_tol = 1e-11;
          opts.rel_tol = 1e-12;
          opts.max_intervals = 20000;
          const double z0 = std::numbers::ln2;
          const QuadratureResult lo = integrate_checked(half(false), z0, kInf, opts);
          const QuadratureResult hi = integrate_checked(half(true), z0, kInf, opts);
          return {lo.value + hi.value, lo.abs_error + hi.abs_error};
        }
      },
      dist.family());
}

DensityRatioCheck check_density_ratio(const Distribution& dist, double R, double eps,
                                      std::size_t budget, const McOptions& options) {
  require_budget(budget, kMinFunctionalBudget, "check_density_ratio");
  if (!(R > 0.0) || !std::isfinite(R)) throw InvalidParamsError("R must be positive");
  DensityRatioCheck out;
  out.R = R;
  out.eps = eps;
  std::vector<double> ratios;
  profile_draws(dist, R, budget, options, kTagRatio, ratios,
                [&](const MaximalProfile& p, std::span<const double> x) {
                  return p.m_value / dist.density(x);
                });
  out.draws = ratios.size();
  out.c_estimate = *std::min_element(ratios.begin(), ratios.end());
  const auto [value, error] = density_power_integral(dist, eps);
  out.power_integral = value;
  out.power_integral_error = error;
  out.power_integral_finite = std::isfinite(value);
  if (!out.power_integral_finite) {
    out.t_bound = kInf;
    out.verdict = Verdict::Diverging;
  } else if (out.c_estimate > 0.0) {
    out.t_bound = std::pow(out.c_estimate, -eps) * value;
    out.verdict = Verdict::FinitePass;
  } else {
    out.t_bound = kInf;
    out.verdict = Verdict::Inconclusive;
  }
  return out;
}

ConditionReport check_conditions(const Distribution& dist, const ConditionParams& params) {
  require_budget(params.budget, kMinFunctionalBudget, "check_conditions");
  ConditionReport report;
  report.distribution = dist.name();
  report.params = params;
  for (int alpha : params.alphas) {
    report.k_alpha.push_back(estimate_K(dist, alpha, params.eps0, params.budget, params.mc));
  }
  report.q = estimate_Q(dist, params.eps1, params.R1, params.budget, params.mc);
  report.t = estimate_T(dist, params.eps2, params.R2, params.budget, params.mc);
  report.density_ratio = check_density_ratio(dist, params.R2, params.eps2, params.budget, params.mc);
  report.density_bound = dist.density_bound();
  return report;
}

std::string to_string(AppendixIdentity which) {
  switch (which) {
    case AppendixIdentity::Lemma2Part1:
      return "Lemma2_part1";
    case AppendixIdentity::Lemma2Part2:
      return "Lemma2_part2";
    case AppendixIdentity::Lemma3Part1:
      return "Lemma3_part1";
    case AppendixIdentity::Lemma3Part2:
      return "Lemma3_part2";
  }
  return "";
}

CdfHandle cdf_handle(const Distribution& dist) {
  if (dist.dim() != 1) throw DimensionMismatchError("cdf_handle needs a 1-d distribution");
  if (dist.support().first < 0.0) {
    throw InvalidParamsError("identity checks need F(0) = 0, i.e. support in [0, inf)");
  }
  CdfHandle h;
  h.cdf = [dist](double u) { return dist.cdf(u); };
  h.survival = [dist](double u) { return dist.ccdf(u); };
  h.density = [dist](double u) {
    const double x[1] = {u};
    return dist.density(x);
  };
  return h;
}

IdentityCheck appendix_identity_check(AppendixIdentity which, const CdfHandle& F) {
  // Substitute u = e^{-s} (part 1, u in (0, 1/e]) or u = e^{s} (part 2,
  // u in [e, inf)), s in [1, inf). With p = 3 (Lemma 2) or p = 4 (Lemma 3):
  //   lhs = int s^p log s f(u) u ds
  //   rhs = p int W(u) s^{p-1} (log s + 1/p) ds,  W = F (part 1) or 1 - F (part 2)
  const bool lower = which == AppendixIdentity::Lemma2Part1 || which == AppendixIdentity::Lemma3Part1;
  const double p =
      (which == AppendixIdentity::Lemma2Part1 || which == AppendixIdentity::Lemma2Part2) ? 3.0 : 4.0;
  auto u_of = [lower](double s) { return lower ? std::exp(-s) : std::exp(s); };
  auto lhs_integrand = [&](double s) {
    const double u = u_of(s);
    if (u == 0.0 || !std::isfinite(u)) return 0.0;
    const double fu = F.density(u);
    if (fu == 0.0) return 0.0;
    return std::pow(s, p) * std::log(s) * fu * u;
  };
  auto rhs_integrand = [&](double s) {
    const double u = u_of(s);
    const double w = lower ? (u == 0.0 ? 0.0 : F.cdf(u)) : (std::isfinite(u) ? F.survival(u) : 0.0);
    if (w == 0.0) return 0.0;
    return p * w * std::pow(s, p - 1.0) * (std::log(s) + 1.0 / p);
  };
  QuadratureOptions opts;
  opts.abs_tol = 1e-10;
  opts.rel_tol = 1e-11;
  opts.max_intervals = 20000;
  IdentityCheck out;
  out.lhs = integrate_checked(lhs_integrand, 1.0, kInf, opts).value;
  out.rhs = integrate_checked(rhs_integrand, 1.0, kInf, opts).value;
  out.abs_diff = std::abs(out.lhs - out.rhs);
  return out;
}

DominationConstants g_domination_constants(int dim, int alpha) {
  if (dim < 1) throw InvalidParamsError("dimension must be at least 1");
  if (alpha < 1) throw InvalidParamsError("alpha must be at least 1");
  const double a_ = static_cast<double>(alpha);
  const double c0 = log_unit_ball_volume(dim) + constants::euler_gamma;
  const double c1 =
      std::pow(2.0, a_ - 1.0) * (std::pow(static_cast<double>(dim), a_) + std::pow(std::abs(c0), a_));
  DominationConstants out;
  out.a = c1 * (1.0 + std::max(0.0, std::log(c1)));
  out.b = g_function(std::numbers::e * c1);
  return out;
}

bool InequalityReport::passed() const {
  return std::all_of(results.begin(), results.end(),
                     [](const InequalityResult& r) { return r.violations == 0; });
}

InequalityReport inequality_suite(std::size_t trials, std::uint64_t seed) {
  constexpr double kSlack = 1e-12;
  auto record = [](InequalityResult& res, double lhs, double rhs) {
    const double excess = lhs - rhs;
    res.max_excess = res.trials == 0 ? excess : std::max(res.max_excess, excess);
    ++res.trials;
    if (excess > kSlack * std::max(1.0, std::abs(rhs))) ++res.violations;
  };
  auto log_uniform = [](Rng& rng, double lo, double hi) {
    return std::exp(std::log(lo) + rng.uniform() * (std::log(hi) - std::log(lo)));
  };

  InequalityReport report;

  {
    InequalityResult res{"bernoulli_power", 0, 0, 0.0};
    Rng rng = Rng::stream(seed, {kTagInequality, 1});
    for (std::size_t i = 0; i < trials; ++i) {
      const double N = std::floor(log_uniform(rng, 1.0, 1e7));
      double x = 0.0;
      switch (i % 4) {
        case 0: x = rng.uniform(); break;
        case 1: x = log_uniform(rng, 1e-12, 1.0) / N; break;
        case 2: x = 1.0 / N; break;
        default: x = rng.uniform() < 0.5 ? 0.0 : 1.0; break;
      }
      const double eps = i % 4 == 2 ? 1.0 : 1.0 - rng.uniform();
      const double lhs = x >= 1.0 ? 1.0 : -std::expm1(N * std::log1p(-x));
      const double rhs = std::pow(N * x, eps);
      record(res, lhs, rhs);
    }
    report.results.push_back(res);
  }

  {
    // Compared in the log domain: -t <= -delta log t.
    InequalityResult res{"exponential_power_tail", 0, 0, 0.0};
    Rng rng = Rng::stream(seed, {kTagInequality, 2});
    for (std::size_t i = 0; i < trials; ++i) {
      double t = log_uniform(rng, 1e-8, 1e8);
      double delta = std::numbers::e * (1.0 - rng.uniform());
      if (i % 10 == 0) {
        t = std::numbers::e;
        delta = std::numbers::e;
      }
      record(res, -t, -delta * std::log(t));
    }
    report.results.push_back(res);
  }

  {
    // With L = log w = 1 + D + L', L' >= 0, the ratio is evaluated through
    // L - 1 so that L' = 0 reproduces the bound's expression exactly.
    InequalityResult res{"log_ratio_bound", 0, 0, 0.0};
    Rng rng = Rng::stream(seed, {kTagInequality, 3});
    for (std::size_t i = 0; i < trials; ++i) {
      const double D = log_uniform(rng, 1e-6, 1e3);
      const double extra = i % 10 == 0 ? 0.0 : log_uniform(rng, 1e-9, 1e9);
      const double lm1 = D + extra;
      const double lhs = std::log1p(1.0 + lm1) / std::log1p(lm1);
      const double rhs = std::log1p(1.0 + D) / std::log1p(D);
      record(res, lhs, rhs);
    }
    report.results.push_back(res);
  }

  {
    InequalityResult res{"g_domination", 0, 0, 0.0};
    Rng rng = Rng::stream(seed, {kTagInequality, 4});
    double b_emp = 0.0;
    for (std::size_t i = 0; i < trials; ++i) {
      const int d = 1 + static_cast<int>(rng.uniform() * 10.0);
      const int alpha = 1 + static_cast<int>(rng.uniform() * 4.0);
      const double log_rho = (rng.uniform() * 2.0 - 1.0) * (i % 2 == 0 ? 5.0 : 200.0);
      const DominationConstants c = g_domination_constants(d, alpha);
      const double log_xi =
          static_cast<double>(d) * log_rho + log_unit_ball_volume(d) + constants::euler_gamma;
      const double lhs = g_function(std::pow(std::abs(log_xi), alpha));
      const double g_rho = g_function(std::pow(std::abs(log_rho), alpha));
      b_emp = std::max(b_emp, lhs - c.a * g_rho);
      record(res, lhs, c.a * g_rho + c.b);
    }
    report.lemma5_empirical_b = b_emp;
    report.results.push_back(res);
  }
  return report;
}

}  // namespace nnvar
