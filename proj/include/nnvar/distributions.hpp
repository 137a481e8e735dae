#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "nnvar/rng.hpp"
#include "nnvar/sample.hpp"

namespace nnvar {

namespace family {

struct NormalDiag {
  std::vector<double> mean;
  std::vector<double> sigma;
};

struct NormalFull {
  std::vector<double> mean;
  std::vector<double> cov;       // d x d row-major, symmetric positive-definite
  std::vector<double> cholesky;  // lower factor L with L L^T = cov
  double log_det = 0.0;
};

struct Exponential {
  double rate;
};

/// Product of Uniform(a, b) over `dim` coordinates.
struct Uniform {
  double a;
  double b;
  std::size_t dim;
};

struct StudentT {
  double nu;
};

struct Pareto {
  double alpha;
  double scale;  // x_m
};

}  // namespace family

using Family = std::variant<family::NormalDiag, family::NormalFull, family::Exponential,
                            family::Uniform, family::StudentT, family::Pareto>;

enum class Provenance { ClosedForm, Quadrature };

struct OracleValues {
  std::optional<double> entropy;
  std::optional<double> varentropy;
  Provenance provenance = Provenance::ClosedForm;
  double error_estimate = 0.0;  // bound on |varentropy error| for quadrature values
};

/// A reference density family: sampler, density evaluator and 1-d CDF tools.
///
/// Construct through the named factories, which validate parameters and
/// throw InvalidParamsError.
class Distribution {
 public:
  static Distribution normal_diag(std::vector<double> mean, std::vector<double> sigma);
  static Distribution standard_normal(std::size_t dim);
  static Distribution normal_full(std::vector<double> mean, std::vector<double> cov);
  static Distribution exponential(double rate);
  static Distribution uniform(double a, double b, std::size_t dim = 1);
  static Distribution student_t(double nu);
  static Distribution pareto(double alpha, double scale);

  const Family& family() const noexcept { return family_; }
  std::size_t dim() const noexcept { return dim_; }
  bool is_normal() const noexcept;

  /// Canonical spec string; parse_distribution(name()) reproduces this object.
  std::string name() const;

  /// Writes one draw into `out` (size dim()).
  void draw(Rng& rng, std::span<double> out) const;
  Sample sample(std::size_t n, Rng& rng) const;
  /// Deterministic in (*this, n, seed). Throws EmptySampleError for n < 2.
  Sample sample(std::size_t n, std::uint64_t seed) const;

  /// log f(x); -infinity outside the support. Throws DimensionMismatchError.
  double log_density(std::span<const double> x) const;
  double density(std::span<const double> x) const;

  /// sup_x f(x), which is finite for every shipped family.
  double density_bound() const;

  // One-dimensional tools; each throws DimensionMismatchError when dim() != 1.

  double cdf(double x) const;
  /// 1 - F(x), evaluated without cancellation in the upper tail.
  double ccdf(double x) const;
  /// F^{-1}(u) for u in (0, 1).
  double quantile(double u) const;
  /// F^{-1}(1 - s) for s in (0, 1), accurate for small s.
  double upper_quantile(double s) const;
  /// P(lo < X < hi), accurate for narrow intervals.
  double interval_mass(double lo, double hi) const;
  /// Closure of the support.
  std::pair<double, double> support() const;

 private:
  Distribution(Family family, std::size_t dim) : family_(std::move(family)), dim_(dim) {}
  void require_1d(const char* what) const;

  Family family_;
  std::size_t dim_;
};

/// Parses the distribution grammar, e.g. `normal(d=2, sigma=[1,2])`,
/// `normal(d=2, cov=[2,0.5,0.5,1])`, `exponential(lambda=1)`,
/// `uniform(a=0,b=1,d=3)`, `student_t(nu=3)`, `pareto(alpha=3, xm=1)`.
/// Throws ParseError on syntax errors and unknown keys, InvalidParamsError on
/// invalid values.
Distribution parse_distribution(std::string_view text);

/// Closed-form entropy/varentropy where known, otherwise quadrature (1-d).
/// Throws UnsupportedQuadratureDimensionError for multivariate families
/// without a closed form.
OracleValues oracle_values(const Distribution& dist);

/// Entropy/varentropy of a 1-d family by adaptive quadrature in the
/// probability scale u = F(x): H = -int_0^1 log f(F^{-1}(u)) du and
/// S = int_0^1 log^2 f(F^{-1}(u)) du, V = S - H^2.
OracleValues quadrature_oracle(const Distribution& dist);

}  // namespace nnvar
