#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "nnvar/sample.hpp"

namespace nnvar {

namespace detail {

/// Squared Euclidean distance, accumulated in ascending coordinate order.
/// Every NN engine goes through this function so their results agree bitwise.
inline double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    s += diff * diff;
  }
  return s;
}

}  // namespace detail

struct Neighbor {
  std::size_t index = std::numeric_limits<std::size_t>::max();
  double squared_distance = std::numeric_limits<double>::infinity();
};

/// Exact 1-NN kd-tree over a fixed point set.
///
/// Median split on the coordinate of largest spread (lowest index on ties);
/// the median is selected under the order (coordinate, original index), so
/// construction is deterministic. Leaves hold at most `leaf_size` points.
/// Queries backtrack with ball-hyperplane pruning and return the true nearest
/// neighbor. The tree owns a reordered copy of the points and is immutable
/// after construction, so concurrent queries are safe.
class KdTree {
 public:
  static constexpr std::size_t kDefaultLeafSize = 16;

  explicit KdTree(const Sample& sample, std::size_t leaf_size = kDefaultLeafSize);

  /// Nearest stored point to `query`, skipping the point whose original index
  /// is `exclude` (if given).
  Neighbor nearest(std::span<const double> query,
                   std::optional<std::size_t> exclude = std::nullopt) const;

  std::size_t size() const noexcept { return index_.size(); }
  std::size_t dim() const noexcept { return dim_; }

 private:
  struct Node {
    std::uint32_t begin;
    std::uint32_t end;
    std::int32_t left = -1;  // -1 marks a leaf
    std::int32_t right = -1;
    std::uint32_t split_dim = 0;
    double split_value = 0.0;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end, const Sample& sample);
  void search(std::int32_t node, std::span<const double> query, std::size_t exclude,
              Neighbor& best) const;

  std::span<const double> stored_point(std::size_t slot) const noexcept {
    return {points_.data() + slot * dim_, dim_};
  }

  std::size_t dim_;
  std::size_t leaf_size_;
  std::vector<std::size_t> index_;  // slot -> original index
  std::vector<double> points_;      // slot-major copy of the points
  std::vector<Node> nodes_;
};

}  // namespace nnvar
