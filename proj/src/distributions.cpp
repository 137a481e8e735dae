#include "nnvar/distributions.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

#include "nnvar/errors.hpp"
#include "nnvar/quadrature.hpp"

namespace nnvar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log(2 pi) / 2

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidParamsError(std::string(what) + " must be positive and finite");
  }
}

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw InvalidParamsError(std::string(what) + " must be finite");
  }
}

// Standard-normal P(Z < z) without cancellation in either tail.
double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double std_normal_mass(double lo, double hi) {
  if (lo >= 0.0) {
    return 0.5 * (std::erfc(lo / std::numbers::sqrt2) - std::erfc(hi / std::numbers::sqrt2));
  }
  if (hi <= 0.0) {
    return 0.5 * (std::erfc(-hi / std::numbers::sqrt2) - std::erfc(-lo / std::numbers::sqrt2));
  }
  return 0.5 * (std::erf(hi / std::numbers::sqrt2) - std::erf(lo / std::numbers::sqrt2));
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_list(std::span<const double> v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_number(v[i]);
  }
  return out + "]";
}

}  // namespace

Distribution Distribution::normal_diag(std::vector<double> mean, std::vector<double> sigma) {
  if (sigma.empty()) throw InvalidParamsError("normal needs dimension >= 1");
  if (mean.size() != sigma.size()) throw InvalidParamsError("mu and sigma lengths differ");
  require_finite(mean, "mu");
  for (double s : sigma) require_positive(s, "sigma");
  const std::size_t d = sigma.size();
  return Distribution(family::NormalDiag{std::move(mean), std::move(sigma)}, d);
}

Distribution Distribution::standard_normal(std::size_t dim) {
  return normal_diag(std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0));
}

Distribution Distribution::normal_full(std::vector<double> mean, std::vector<double> cov) {
  const std::size_t d = mean.size();
  if (d == 0) throw InvalidParamsError("normal needs dimension >= 1");
  if (cov.size() != d * d) throw InvalidParamsError("covariance must be d x d");
  require_finite(mean, "mu");
  require_finite(cov, "covariance");
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < r; ++c) {
      const double a = cov[r * d + c];
      const double b = cov[c * d + r];
      if (std::abs(a - b) > 1e-12 * std::max({1.0, std::abs(a), std::abs(b)})) {
        throw InvalidParamsError("covariance must be symmetric");
      }
    }
  }
  std::vector<double> L(d * d, 0.0);
  double log_det = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double diag = cov[j * d + j];
    for (std::size_t k = 0; k < j; ++k) diag -= L[j * d + k] * L[j * d + k];
    if (!(diag > 0.0)) throw InvalidParamsError("covariance must be positive-definite");
    const double ljj = std::sqrt(diag);
    L[j * d + j] = ljj;
    log_det += 2.0 * std::log(ljj);
    for (std::size_t i = j + 1; i < d; ++i) {
      double v = cov[i * d + j];
      for (std::size_t k = 0; k < j; ++k) v -= L[i * d + k] * L[j * d + k];
      L[i * d + j] = v / ljj;
    }
  }
  return Distribution(family::NormalFull{std::move(mean), std::move(cov), std::move(L), log_det},
                      d);
}

Distribution Distribution::exponential(double rate) {
  require_positive(rate, "lambda");
  return Distribution(family::Exponential{rate}, 1);
}

Distribution Distribution::uniform(double a, double b, std::size_t dim) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(b > a)) {
    throw InvalidParamsError("uniform needs finite a < b");
  }
  if (dim == 0) throw InvalidParamsError("uniform needs dimension >= 1");
  return Distribution(family::Uniform{a, b, dim}, dim);
}

Distribution Distribution::student_t(double nu) {
  require_positive(nu, "nu");
  return Distribution(family::StudentT{nu}, 1);
}

Distribution Distribution::pareto(double alpha, double scale) {
  require_positive(alpha, "alpha");
  require_positive(scale, "xm");
  return Distribution(family::Pareto{alpha, scale}, 1);
}

bool Distribution::is_normal() const noexcept {
  return std::holds_alternative<family::NormalDiag>(family_) ||
         std::holds_alternative<family::NormalFull>(family_);
}

std::string Distribution::name() const {
  return std::visit(
      Overloaded{
          [&](const family::NormalDiag& f) {
            return "normal(d=" + std::to_string(dim_) + ", mu=" + format_list(f.mean) +
                   ", sigma=" + format_list(f.sigma) + ")";
          },
          [&](const family::NormalFull& f) {
            return "normal(d=" + std::to_string(dim_) + ", mu=" + format_list(f.mean) +
                   ", cov=" + format_list(f.cov) + ")";
          },
          [](const family::Exponential& f) {
            return "exponential(lambda=" + format_number(f.rate) + ")";
          },
          [](const family::Uniform& f) {
            return "uniform(a=" + format_number(f.a) + ", b=" + format_number(f.b) +
                   ", d=" + std::to_string(f.dim) + ")";
          },
          [](const family::StudentT& f) { return "student_t(nu=" + format_number(f.nu) + ")"; },
          [](const family::Pareto& f) {
            return "pareto(alpha=" + format_number(f.alpha) + ", xm=" + format_number(f.scale) +
                   ")";
          },
      },
      family_);
}

void Distribution::draw(Rng& rng, std::span<double> out) const {
  std::visit(Overloaded{
                 [&](const family::NormalDiag& f) {
                   for (std::size_t k = 0; k < dim_; ++k) out[k] = f.mean[k] + f.sigma[k] * rng.normal();
                 },
                 [&](const family::NormalFull& f) {
                   std::vector<double> z(dim_);
                   for (double& v : z) v = rng.normal();
                   for (std::size_t r = 0; r < dim_; ++r) {
                     double acc = f.mean[r];
                     for (std::size_t c = 0; c <= r; ++c) acc += f.cholesky[r * dim_ + c] * z[c];
                     out[r] = acc;
                   }
                 },
                 [&](const family::Exponential& f) { out[0] = rng.exponential() / f.rate; },
                 [&](const family::Uniform& f) {
                   for (std::size_t k = 0; k < dim_; ++k) out[k] = f.a + (f.b - f.a) * rng.uniform_open();
                 },
                 [&](const family::StudentT& f) {
                   const double chi2 = 2.0 * rng.gamma(0.5 * f.nu);
                   out[0] = rng.normal() / std::sqrt(chi2 / f.nu);
                 },
                 [&](const family::Pareto& f) {
                   out[0] = f.scale * std::pow(rng.uniform_open(), -1.0 / f.alpha);
                 },
             },
             family_);
}

Sample Distribution::sample(std::size_t n, Rng& rng) const {
  if (n < 2) throw EmptySampleError("sample size must be >= 2");
  std::vector<double> data(n * dim_);
  for (std::size_t i = 0; i < n; ++i) draw(rng, std::span<double>(data).subspan(i * dim_, dim_));
  return Sample(n, dim_, std::move(data));
}

Sample Distribution::sample(std::size_t n, std::uint64_t seed) const {
  Rng rng = Rng::stream(seed, {});
  return sample(n, rng);
}

double Distribution::log_density(std::span<const double> x) const {
  if (x.size() != dim_) {
    throw DimensionMismatchError("point has dimension " + std::to_string(x.size()) +
                                 ", distribution has " + std::to_string(dim_));
  }
  return std::visit(
      Overloaded{
          [&](const family::NormalDiag& f) {
            double acc = 0.0;
            for (std::size_t k = 0; k < dim_; ++k) {
              const double z = (x[k] - f.mean[k]) / f.sigma[k];
              acc += -kLogSqrt2Pi - std::log(f.sigma[k]) - 0.5 * z * z;
            }
            return acc;
          },
          [&](const family::NormalFull& f) {
            // Solve L w = x - mu; the quadratic form is |w|^2.
            std::vector<double> w(dim_);
            double q = 0.0;
            for (std::size_t r = 0; r < dim_; ++r) {
              double v = x[r] - f.mean[r];
              for (std::size_t c = 0; c < r; ++c) v -= f.cholesky[r * dim_ + c] * w[c];
              w[r] = v / f.cholesky[r * dim_ + r];
              q += w[r] * w[r];
            }
            return -static_cast<double>(dim_) * kLogSqrt2Pi - 0.5 * f.log_det - 0.5 * q;
          },
          [&](const family::Exponential& f) {
            return x[0] < 0.0 ? -kInf : std::log(f.rate) - f.rate * x[0];
          },
          [&](const family::Uniform& f) {
            for (double v : x) {
              if (v < f.a || v > f.b) return -kInf;
            }
            return -static_cast<double>(dim_) * std::log(f.b - f.a);
          },
          [&](const family::StudentT& f) {
            const double nu = f.nu;
            return std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                   0.5 * std::log(nu * std::numbers::pi) -
                   0.5 * (nu + 1.0) * std::log1p(x[0] * x[0] / nu);
          },
          [&](const family::Pareto& f) {
            if (x[0] < f.scale) return -kInf;
            return std::log(f.alpha) + f.alpha * std::log(f.scale) -
                   (f.alpha + 1.0) * std::log(x[0]);
          },
      },
      family_);
}

double Distribution::density(std::span<const double> x) const { return std::exp(log_density(x)); }

double Distribution::density_bound() const {
  return std::visit(
      Overloaded{
          [&](const family::NormalDiag& f) {
            double acc = 0.0;
            for (double s : f.sigma) acc += -kLogSqrt2Pi - std::log(s);
            return std::exp(acc);
          },
          [&](const family::NormalFull& f) {
            return std::exp(-static_cast<double>(dim_) * kLogSqrt2Pi - 0.5 * f.log_det);
          },
          [](const family::Exponential& f) { return f.rate; },
          [&](const family::Uniform& f) {
            return std::pow(f.b - f.a, -static_cast<double>(dim_));
          },
          [&](const family::StudentT&) {
            const double zero = 0.0;
            return density(std::span<const double>(&zero, 1));
          },
          [](const family::Pareto& f) { return f.alpha / f.scale; },
      },
      family_);
}

void Distribution::require_1d(const char* what) const {
  if (dim_ != 1) {
    throw DimensionMismatchError(std::string(what) + " is only defined for 1-d distributions");
  }
}

double Distribution::cdf(double x) const {
  require_1d("cdf");
  return std::visit(
      Overloaded{
          [&](const family::NormalDiag& f) { return std_normal_cdf((x - f.mean[0]) / f.sigma[0]); },
          [&](const family::NormalFull& f) {
            return std_normal_cdf((x - f.mean[0]) / f.cholesky[0]);
          },
          [&](const family::Exponential& f) { return x <= 0.0 ? 0.0 : -std::expm1(-f.rate * x); },
          [&](const family::Uniform& f) { return std::clamp((x - f.a) / (f.b - f.a), 0.0, 1.0); },
          [&](const family::StudentT& f) {
            return boost::math::cdf(boost::math::students_t_distribution<double>(f.nu), x);
          },
          [&](const family::Pareto& f) {
            return x <= f.scale ? 0.0 : -std::expm1(f.alpha * std::log(f.scale / x));
          },
      },
      family_);
}

double Distribution::ccdf(double x) const {
  require_1d("ccdf");
  return std::visit(
      Overloaded{
          [&](const family::NormalDiag& f) { return std_normal_cdf(-(x - f.mean[0]) / f.sigma[0]); },
          [&](const family::NormalFull& f) {
            return std_normal_cdf(-(x - f.mean[0]) / f.cholesky[0]);
          },
          [&](const family::Exponential& f) { return x <= 0.0 ? 1.0 : std::exp(-f.rate * x); },
          [&](const family::Uniform& f) { return std::clamp((f.b - x) / (f.b - f.a), 0.0, 1.0); },
          [&](const family::StudentT& f) {
            return boost::math::cdf(
                boost::math::complement(boost::math::students_t_distribution<double>(f.nu), x));
          },
          [&](const family::Pareto& f) {
            return x <= f.scale ? 1.0 : std::pow(f.scale / x, f.alpha);
          },
      },
      family_);
}

double Distribution::quantile(double u) const {
  require_1d("quantile");
  if (!(u > 0.0 && u < 1.0)) throw InvalidParamsError("quantile level must lie in (0, 1)");
  return std::visit(
      Overloaded{
          [&](const family::NormalDiag& f) {
            return f.mean[0] +
                   f.sigma[0] * boost::math::quantile(boost::math::normal_distribution<double>(), u);
          },
          [&](const family::NormalFull& f) {
            return f.mean[0] + f.cholesky[0] *
                                   boost::math::quantile(boost::math::normal_distribution<double>(), u);
          },
          [&](const family::Exponential& f) { return -std::log1p(-u) / f.rate; },
          [&](const family::Uniform& f) { return f.a + (f.b - f.a) * u; },
          [&](const family::StudentT& f) {
            return boost::math::quantile(boost::math::students_t_distribution<double>(f.nu), u);
          },
          [&](const family::Pareto& f) {
            return f.scale * std::exp(-std::log1p(-u) / f.alpha);
          },
      },
      family_);
}

double Distribution::upper_quantile(double s) const {
  require_1d("upper_quantile");
  if (!(s > 0.0 && s < 1.0)) throw InvalidParamsError("tail probability must lie in (0, 1)");
  return std::visit(
      Overloaded{
          [&](const family::NormalDiag& f) {
            return f.mean[0] - f.sigma[0] * boost::math::quantile(
                                                boost::math::normal_distribution<double>(), s);
          },
          [&](const family::NormalFull& f) {
            return f.mean[0] - f.cholesky[0] * boost::math::quantile(
                                                   boost::math::normal_distribution<double>(), s);
          },
          [&](const family::Exponential& f) { return -std::log(s) / f.rate; },
          [&](const family::Uniform& f) { return f.b - (f.b - f.a) * s; },
          [&](const family::StudentT& f) {
            return boost::math::quantile(
                boost::math::complement(boost::math::students_t_distribution<double>(f.nu), s));
          },
          [&](const family::Pareto& f) { return f.scale * std::pow(s, -1.0 / f.alpha); },
      },
      family_);
}

double Distribution::interval_mass(double lo, double hi) const {
  require_1d("interval_mass");
  if (!(hi > lo)) return 0.0;
  return std::visit(
      Overloaded{
          [&](const family::NormalDiag& f) {
            return std_normal_mass((lo - f.mean[0]) / f.sigma[0], (hi - f.mean[0]) / f.sigma[0]);
          },
          [&](const family::NormalFull& f) {
            const double s = f.cholesky[0];
            return std_normal_mass((lo - f.mean[0]) / s, (hi - f.mean[0]) / s);
          },
          [&](const family::Exponential& f) {
            const double a = std::max(lo, 0.0);
            if (hi <= a) return 0.0;
            return std::exp(-f.rate * a) * -std::expm1(-f.rate * (hi - a));
          },
          [&](const family::Uniform& f) {
            if (lo >= f.a && hi <= f.b) return (hi - lo) / (f.b - f.a);
            const double len = std::min(hi, f.b) - std::max(lo, f.a);
            return len > 0.0 ? len / (f.b - f.a) : 0.0;
          },
          [&](const family::StudentT&) {
            if (lo >= 0.0) return ccdf(lo) - ccdf(hi);
            return cdf(hi) - cdf(lo);
          },
          [&](const family::Pareto& f) {
            const double a = std::max(lo, f.scale);
            if (hi <= a) return 0.0;
            // (xm/a)^alpha (1 - (a/hi)^alpha)
            return std::pow(f.scale / a, f.alpha) * -std::expm1(f.alpha * std::log(a / hi));
          },
      },
      family_);
}

std::pair<double, double> Distribution::support() const {
  require_1d("support");
  return std::visit(Overloaded{
                        [](const family::Exponential&) { return std::pair{0.0, kInf}; },
                        [](const family::Uniform& f) { return std::pair{f.a, f.b}; },
                        [](const family::Pareto& f) { return std::pair{f.scale, kInf}; },
                        [](const auto&) { return std::pair{-kInf, kInf}; },
                    },
                    family_);
}

OracleValues oracle_values(const Distribution& dist) {
  constexpr double log_2pi_e = 2.8378770664093454836;  // log(2 pi e)
  const double d = static_cast<double>(dist.dim());
  return std::visit(
      Overloaded{
          [&](const family::NormalDiag& f) {
            double h = 0.0;
            for (double s : f.sigma) h += 0.5 * log_2pi_e + std::log(s);
            return OracleValues{h, 0.5 * d, Provenance::ClosedForm, 0.0};
          },
          [&](const family::NormalFull& f) {
            return OracleValues{0.5 * (d * log_2pi_e + f.log_det), 0.5 * d,
                                Provenance::ClosedForm, 0.0};
          },
          [](const family::Exponential& f) {
            return OracleValues{1.0 - std::log(f.rate), 1.0, Provenance::ClosedForm, 0.0};
          },
          [&](const family::Uniform& f) {
            return OracleValues{d * std::log(f.b - f.a), 0.0, Provenance::ClosedForm, 0.0};
          },
          [&](const auto&) {
            if (dist.dim() > 2) {
              throw UnsupportedQuadratureDimensionError(
                  "no closed form and quadrature is limited to d <= 2");
            }
            return quadrature_oracle(dist);
          },
      },
      dist.family());
}

OracleValues quadrature_oracle(const Distribution& dist) {
  if (dist.dim() != 1) {
    throw UnsupportedQuadratureDimensionError("quadrature oracle supports 1-d families only");
  }
  // Lower half uses x = F^{-1}(u), upper half x = F^{-1}(1 - s); both on (0, 1/2].
  auto log_f_lower = [&](double u) {
    const double x = dist.quantile(u);
    return dist.log_density(std::span<const double>(&x, 1));
  };
  auto log_f_upper = [&](double s) {
    const double x = dist.upper_quantile(s);
    return dist.log_density(std::span<const double>(&x, 1));
  };
  QuadratureOptions opts;
  opts.abs_tol = 1e-12;
  opts.rel_tol = 1e-13;
  opts.max_intervals = 20000;
  auto integrate_half = [&](auto&& g, bool squared) {
    return integrate_checked(
        [&](double u) {
          const double v = g(u);
          return squared ? v * v : v;
        },
        0.0, 0.5, opts);
  };
  const QuadratureResult m1a = integrate_half(log_f_lower, false);
  const QuadratureResult m1b = integrate_half(log_f_upper, false);
  const QuadratureResult m2a = integrate_half(log_f_lower, true);
  const QuadratureResult m2b = integrate_half(log_f_upper, true);

  const double entropy = -(m1a.value + m1b.value);
  const double second = m2a.value + m2b.value;
  const double err_h = m1a.abs_error + m1b.abs_error;
  const double err_s = m2a.abs_error + m2b.abs_error;
  return OracleValues{entropy, second - entropy * entropy, Provenance::Quadrature,
                      err_s + 2.0 * std::abs(entropy) * err_h + err_h * err_h};
}

}  // namespace nnvar
