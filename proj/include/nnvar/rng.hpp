#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace nnvar {

/// SplitMix64 output function applied to `state`, advancing it.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Seed for the stream identified by (seed, ids...).
///
/// Stream-splitting rule: every id is folded into a SplitMix64 state in
/// order, one mixing step per id. A campaign replication uses the ids
/// (n, replication, attempt); Monte Carlo blocks use (tag, block). Distinct id
/// tuples give statistically independent mt19937_64 streams, and the mapping
/// does not depend on thread count or scheduling.
std::uint64_t derive_stream_seed(std::uint64_t seed,
                                 std::initializer_list<std::uint64_t> ids) noexcept;

/// Explicitly seeded generator with portable variate transforms.
///
/// The engine is std::mt19937_64 (bit-exact across standard libraries). The
/// transforms are implemented here rather than through <random> distribution
/// objects, whose algorithms are implementation-defined, so samples are
/// reproducible across toolchains.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng stream(std::uint64_t seed, std::initializer_list<std::uint64_t> ids) {
    return Rng(derive_stream_seed(seed, ids));
  }

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1).
  double uniform_open();
  /// Standard normal (Marsaglia polar method).
  double normal();
  /// Standard exponential.
  double exponential();
  /// Gamma(shape, 1) (Marsaglia-Tsang, with the shape < 1 boost).
  double gamma(double shape);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace nnvar
