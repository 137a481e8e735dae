#include "nnvar/nn_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "nnvar/errors.hpp"
#include "nnvar/kd_tree.hpp"
#include "nnvar/parallel.hpp"
#include "nnvar/rng.hpp"

namespace nnvar {

namespace {

std::string describe_pairs(const std::vector<DuplicatePointsError::IndexPair>& pairs) {
  std::ostringstream out;
  out << "duplicate points at index pairs";
  const std::size_t shown = std::min<std::size_t>(pairs.size(), 10);
  for (std::size_t k = 0; k < shown; ++k) {
    out << (k == 0 ? " " : ", ") << '(' << pairs[k].first << ',' << pairs[k].second << ')';
  }
  if (pairs.size() > shown) out << " and " << pairs.size() - shown << " more";
  return out.str();
}

// Gathers every j != i coincident with some i whose rho_i is zero.
[[noreturn]] void throw_duplicates(const Sample& sample, const std::vector<double>& rho) {
  std::set<DuplicatePointsError::IndexPair> pairs;
  for (std::size_t i = 0; i < sample.n(); ++i) {
    if (rho[i] != 0.0) continue;
    for (std::size_t j = 0; j < sample.n(); ++j) {
      if (j == i) continue;
      if (detail::squared_distance(sample.point(i), sample.point(j)) == 0.0) {
        pairs.emplace(std::min(i, j), std::max(i, j));
      }
    }
  }
  throw DuplicatePointsError({pairs.begin(), pairs.end()});
}

}  // namespace

DuplicatePointsError::DuplicatePointsError(std::vector<IndexPair> pairs)
    : Error(describe_pairs(pairs)), pairs_(std::move(pairs)) {}

NnDistances build_nn_distances(const Sample& sample, NnEngine engine, unsigned threads) {
  const std::size_t n = sample.n();
  NnDistances out{std::vector<double>(n), sample.dim(), n};

  constexpr std::size_t kChunk = 256;
  const std::size_t chunks = (n + kChunk - 1) / kChunk;

  if (engine == NnEngine::Tree) {
    const KdTree tree(sample);
    parallel_for(chunks, threads, [&](std::size_t c) {
      const std::size_t end = std::min(n, (c + 1) * kChunk);
      for (std::size_t i = c * kChunk; i < end; ++i) {
        out.rho[i] = std::sqrt(tree.nearest(sample.point(i), i).squared_distance);
      }
    });
  } else {
    parallel_for(chunks, threads, [&](std::size_t c) {
      const std::size_t end = std::min(n, (c + 1) * kChunk);
      for (std::size_t i = c * kChunk; i < end; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i) continue;
          best = std::min(best, detail::squared_distance(sample.point(i), sample.point(j)));
        }
        out.rho[i] = std::sqrt(best);
      }
    });
  }

  if (std::find(out.rho.begin(), out.rho.end(), 0.0) != out.rho.end()) {
    throw_duplicates(sample, out.rho);
  }
  return out;
}

double pairwise_min_distance(const Sample& sample) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sample.n(); ++i) {
    for (std::size_t j = i + 1; j < sample.n(); ++j) {
      best = std::min(best, detail::squared_distance(sample.point(i), sample.point(j)));
    }
  }
  return std::sqrt(best);
}

Sample apply_jitter(const Sample& sample, double half_width, std::uint64_t seed) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw InvalidParamsError("jitter half-width must be positive and finite");
  }
  Rng rng = Rng::stream(seed, {0x6a17ULL});
  std::vector<double> data(sample.data().begin(), sample.data().end());
  for (double& v : data) v += half_width * (2.0 * rng.uniform() - 1.0);
  return Sample(sample.n(), sample.dim(), std::move(data));
}

}  // namespace nnvar
