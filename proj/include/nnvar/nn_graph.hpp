#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nnvar/sample.hpp"

namespace nnvar {

enum class NnEngine { Tree, BruteForce };

/// rho[i]: Euclidean distance from point i to its nearest other point.
struct NnDistances {
  std::vector<double> rho;
  std::size_t dim = 0;
  std::size_t n = 0;
};

/// Exact nearest-neighbor distance for every point.
///
/// Both engines compute squared distances with the same (ascending
/// coordinate) summation order, so their outputs are bit-identical. Queries
/// are distributed over `threads` workers (0 = all cores); the result does not
/// depend on the worker count.
///
/// Throws DuplicatePointsError, listing every coincident index pair, if any
/// rho[i] is zero; see apply_jitter for the opt-in alternative.
NnDistances build_nn_distances(const Sample& sample, NnEngine engine = NnEngine::Tree,
                               unsigned threads = 1);

/// min over i < j of ||x_i - x_j|| by exhaustive scan.
double pairwise_min_distance(const Sample& sample);

/// Copy of `sample` with independent Uniform(-half_width, half_width) noise
/// added to every coordinate. Opt-in remedy for tied points.
Sample apply_jitter(const Sample& sample, double half_width, std::uint64_t seed);

}  // namespace nnvar
