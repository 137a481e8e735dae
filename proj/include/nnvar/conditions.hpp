#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nnvar/distributions.hpp"

namespace nnvar {

/// 0 on [0, 1), t log t on [1, inf). Throws NegativeArgumentError for t < 0.
double g_function(double t);

/// Budget floors.
inline constexpr std::size_t kMinLocalAverageBudget = 1000;
inline constexpr std::size_t kMinFunctionalBudget = 10000;

/// Ball average I_f(x, r) = P(B(x, r)) / (r^d V_d).
///
/// For d = 1 the ball mass comes from the family's CDF (exact up to
/// rounding; `budget` and `seed` are ignored). Otherwise it is the Monte
/// Carlo mean of f over `budget` points drawn uniformly in B(x, r); throws
/// BudgetTooSmallError if budget < kMinLocalAverageBudget.
double local_average(const Distribution& dist, std::span<const double> x, double r,
                     std::size_t budget = 1 << 14, std::uint64_t seed = 0);

/// I_f(x, r) on the geometric grid r_k = R ratio^{-k}, k = 0..grid_size-1,
/// with its extrema. m_value and M_value are grid approximations of the
/// infimum and supremum over (0, R].
struct MaximalProfile {
  std::vector<double> x;
  double R = 0.0;
  std::vector<double> radii;   // descending, radii[0] = R
  std::vector<double> values;  // I_f(x, radii[k])
  double m_value = 0.0;
  double M_value = 0.0;
  std::size_t argmin = 0;
  std::size_t argmax = 0;
};

struct ProfileOptions {
  double ratio = 2.0;
  std::size_t budget = 1 << 14;  // MC points per radius when d > 1
  std::uint64_t seed = 0;
};

/// Throws InvalidParamsError unless R > 0, grid_size >= 8 and ratio > 1.
MaximalProfile maximal_profile(const Distribution& dist, std::span<const double> x, double R,
                               std::size_t grid_size, const ProfileOptions& options = {});

enum class Verdict { FinitePass, Diverging, Inconclusive };

std::string to_string(Verdict v);

/// Doubling diagnostic over estimates at budgets B, 2B, 4B, ...:
/// FinitePass if every relative change between consecutive estimates is
/// below 5%; Diverging if there are at least 3 doublings and the estimate
/// grows by more than 20% at each of them; Inconclusive otherwise.
Verdict classify_doubling(std::span<const double> estimates);

inline constexpr double kFiniteRelativeChange = 0.05;
inline constexpr double kDivergingRelativeGrowth = 0.20;
inline constexpr double kDensityFloor = 1e-300;

/// One hypothesis functional estimated at a ladder of budgets.
struct FunctionalEstimate {
  std::string functional;  // "K", "Q" or "T"
  std::vector<std::pair<std::string, double>> params;
  std::vector<std::size_t> budgets;
  std::vector<double> estimates;
  std::vector<double> stderrs;
  Verdict verdict = Verdict::Inconclusive;
  std::size_t floor_hits = 0;  // T only: draws with m_f below kDensityFloor
};

struct McOptions {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  int doublings = 3;           // budgets B, 2B, ..., 2^doublings B
  std::size_t grid_size = 20;  // radius grid for Q and T
};

/// K_{f,alpha}(eps0) = int (int G(|log rho(x,y)|^alpha) f(y) dy)^{1+eps0} f(x) dx by
/// nested Monte Carlo: ceil(sqrt(B)) outer x-draws, each with ceil(sqrt(B))
/// inner y-draws; the power is applied to each inner mean.
FunctionalEstimate estimate_K(const Distribution& dist, int alpha, double eps0,
                              std::size_t budget, const McOptions& options = {});

/// Q_f(eps1, R1) = int M_f(x, R1)^{eps1} f(x) dx over x-draws. In d = 1 every
/// draw gets an exact profile and B draws are used; for d > 1 ceil(sqrt(B))
/// draws with Monte Carlo profiles of ceil(sqrt(B)) points per radius.
FunctionalEstimate estimate_Q(const Distribution& dist, double eps1, double R1,
                              std::size_t budget, const McOptions& options = {});

/// T_f(eps2, R2) = int m_f(x, R2)^{-eps2} f(x) dx, same sampling as Q.
/// Values of m_f below kDensityFloor are clamped and counted in floor_hits.
FunctionalEstimate estimate_T(const Distribution& dist, double eps2, double R2,
                              std::size_t budget, const McOptions& options = {});

/// Replacement route for T_f: condition m_f(x, R) >= c f(x) together with
/// int f^{1-eps} dx < inf, which bounds T_f(eps, R) by c^{-eps} int f^{1-eps}.
struct DensityRatioCheck {
  double R = 0.0;
  double eps = 0.0;
  std::size_t draws = 0;
  double c_estimate = 0.0;        // min over draws of m_f(x, R) / f(x)
  double power_integral = 0.0;    // int f^{1-eps} dx
  double power_integral_error = 0.0;
  bool power_integral_finite = false;
  double t_bound = 0.0;           // c^{-eps} int f^{1-eps}
  Verdict verdict = Verdict::Inconclusive;
};

DensityRatioCheck check_density_ratio(const Distribution& dist, double R, double eps,
                                      std::size_t budget, const McOptions& options = {});

/// int f^{1-eps} dx: closed form for normal and uniform families, quadrature
/// in the probability scale for other 1-d families. Returns (value, error);
/// value is +infinity when the integral diverges. Throws InvalidParamsError
/// unless eps > 0.
std::pair<double, double> density_power_integral(const Distribution& dist, double eps);

struct ConditionParams {
  double eps0 = 0.5;
  double eps1 = 0.5;
  double eps2 = 0.5;
  double R1 = 1.0;
  double R2 = 1.0;
  std::vector<int> alphas{1, 2, 3, 4};
  std::size_t budget = 1 << 18;
  McOptions mc;
};

struct ConditionReport {
  std::string distribution;
  ConditionParams params;
  std::vector<FunctionalEstimate> k_alpha;
  FunctionalEstimate q;
  FunctionalEstimate t;
  DensityRatioCheck density_ratio;
  double density_bound = 0.0;  // sup f, condition (B)
};

/// Throws BudgetTooSmallError if params.budget < kMinFunctionalBudget.
ConditionReport check_conditions(const Distribution& dist, const ConditionParams& params);

// Integration-by-parts identities for a CDF F with F(0) = 0.

enum class AppendixIdentity { Lemma2Part1, Lemma2Part2, Lemma3Part1, Lemma3Part2 };

std::string to_string(AppendixIdentity which);

/// CDF with its density (for the Stieltjes side) and survival function.
struct CdfHandle {
  std::function<double(double)> cdf;
  std::function<double(double)> survival;
  std::function<double(double)> density;
};

/// Handle for a 1-d distribution; throws InvalidParamsError unless F(0) = 0.
CdfHandle cdf_handle(const Distribution& dist);

struct IdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_diff = 0.0;
};

/// Evaluates both sides by adaptive quadrature:
///   Lemma2Part1: int_(0,1/e] (-log u)^3 log(-log u) dF = 3 int_(0,1/e] F log^2 u / u [log(-log u) + 1/3] du
///   Lemma2Part2: int_[e,inf) log^3 u log(log u) dF = 3 int_[e,inf) (1-F) log^2 u / u [log log u + 1/3] du
///   Lemma3Part1: int_(0,1/e] log^4 u log(-log u) dF = 4 int_(0,1/e] F (-log^3 u) / u [log(-log u) + 1/4] du
///   Lemma3Part2: int_[e,inf) log^4 u log(log u) dF = 4 int_[e,inf) (1-F) log^3 u / u [log log u + 1/4] du
/// Throws QuadratureNonconvergenceError.
IdentityCheck appendix_identity_check(AppendixIdentity which, const CdfHandle& F);

/// Constants (a, b) with G(|log xi|^alpha) <= a G(|log rho|^alpha) + b, where
/// xi = V_d e^gamma rho^d. With c0 = log(V_d e^gamma) and
/// c1 = 2^{alpha-1} (d^alpha + |c0|^alpha): a = c1 (1 + log c1), b = G(e c1).
struct DominationConstants {
  double a = 0.0;
  double b = 0.0;
};

DominationConstants g_domination_constants(int dim, int alpha);

struct InequalityResult {
  std::string name;
  std::size_t trials = 0;
  std::size_t violations = 0;
  double max_excess = 0.0;  // max of lhs - rhs (<= 0 when the bound holds)
};

struct InequalityReport {
  std::vector<InequalityResult> results;
  double lemma5_empirical_b = 0.0;  // max of G(|log xi|^alpha) - a G(|log rho|^alpha)
  bool passed() const;
};

/// Randomized checks, `trials` each:
///   (i)   1 - (1-x)^N <= (N x)^eps,        x in [0,1], eps in (0,1], N >= 1
///   (ii)  e^{-t} <= t^{-delta},            t > 0, delta in (0, e]
///   (iii) log(1+log w)/log(log w) <= log(2+D)/log(1+D),  w >= e^{1+D}, D > 0
///   (iv)  G(|log xi|^alpha) <= a G(|log rho|^alpha) + b  with g_domination_constants
/// A trial counts as a violation when lhs exceeds rhs by more than a relative
/// 1e-12 (floating-point rounding of the two sides).
InequalityReport inequality_suite(std::size_t trials = 100000, std::uint64_t seed = 1);

}  // namespace nnvar
