#include "nnvar/kd_tree.hpp"

#include <algorithm>
#include <numeric>

#include "nnvar/errors.hpp"

namespace nnvar {

KdTree::KdTree(const Sample& sample, std::size_t leaf_size)
    : dim_(sample.dim()), leaf_size_(std::max<std::size_t>(leaf_size, 1)) {
  if (sample.n() > std::numeric_limits<std::uint32_t>::max()) {
    throw InvalidParamsError("kd-tree supports at most 2^32 - 1 points");
  }
  index_.resize(sample.n());
  std::iota(index_.begin(), index_.end(), std::size_t{0});
  nodes_.reserve(2 * (sample.n() / leaf_size_ + 1));
  build(0, static_cast<std::uint32_t>(sample.n()), sample);

  points_.resize(sample.n() * dim_);
  for (std::size_t slot = 0; slot < index_.size(); ++slot) {
    const auto p = sample.point(index_[slot]);
    std::copy(p.begin(), p.end(), points_.begin() + static_cast<std::ptrdiff_t>(slot * dim_));
  }
}

std::int32_t KdTree::build(std::uint32_t begin, std::uint32_t end, const Sample& sample) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{begin, end});
  if (end - begin <= leaf_size_) return id;

  std::size_t best_dim = 0;
  double best_spread = -1.0;
  for (std::size_t k = 0; k < dim_; ++k) {
    double lo = sample(index_[begin], k);
    double hi = lo;
    for (std::uint32_t s = begin + 1; s < end; ++s) {
      const double v = sample(index_[s], k);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > best_spread) {
      best_spread = hi - lo;
      best_dim = k;
    }
  }
  if (best_spread <= 0.0) return id;  // all points identical: keep as one leaf

  const std::uint32_t mid = begin + (end - begin) / 2;
  auto first = index_.begin() + begin;
  std::nth_element(first, index_.begin() + mid, index_.begin() + end,
                   [&](std::size_t a, std::size_t b) {
                     const double va = sample(a, best_dim);
                     const double vb = sample(b, best_dim);
                     return va < vb || (va == vb && a < b);
                   });
  const double split = sample(index_[mid], best_dim);

  const std::int32_t left = build(begin, mid, sample);
  const std::int32_t right = build(mid, end, sample);
  Node& node = nodes_[static_cast<std::size_t>(id)];
  node.left = left;
  node.right = right;
  node.split_dim = static_cast<std::uint32_t>(best_dim);
  node.split_value = split;
  return id;
}

Neighbor KdTree::nearest(std::span<const double> query, std::optional<std::size_t> exclude) const {
  if (query.size() != dim_) throw DimensionMismatchError("query dimension does not match tree");
  Neighbor best;
  search(0, query, exclude.value_or(std::numeric_limits<std::size_t>::max()), best);
  return best;
}

void KdTree::search(std::int32_t node_id, std::span<const double> query, std::size_t exclude,
                    Neighbor& best) const {
  const Node& node = nodes_[static_cast<std::size_t>(node_id)];
  if (node.left < 0) {
    for (std::uint32_t slot = node.begin; slot < node.end; ++slot) {
      if (index_[slot] == exclude) continue;
      const double d2 = detail::squared_distance(query, stored_point(slot));
      if (d2 < best.squared_distance) {
        best.squared_distance = d2;
        best.index = index_[slot];
      }
    }
    return;
  }
  // Left points have coordinate <= split, right points >= split, so the
  // plane gap lower-bounds the distance to every point on the far side.
  const double gap = query[node.split_dim] - node.split_value;
  const std::int32_t near_side = gap < 0.0 ? node.left : node.right;
  const std::int32_t far_side = gap < 0.0 ? node.right : node.left;
  search(near_side, query, exclude, best);
  if (gap * gap < best.squared_distance) search(far_side, query, exclude, best);
}

}  // namespace nnvar
