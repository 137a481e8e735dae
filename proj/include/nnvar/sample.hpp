#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nnvar {

/// N x d matrix of i.i.d. observations, stored row-major.
///
/// Invariants (enforced on construction): n >= 2, dim >= 1, every coordinate
/// finite.
class Sample {
 public:
  /// Throws EmptySampleError if n < 2, InvalidParamsError on a shape mismatch,
  /// dim == 0 or a non-finite coordinate.
  Sample(std::size_t n, std::size_t dim, std::vector<double> data);

  static Sample from_rows(const std::vector<std::vector<double>>& rows);
  static Sample from_column(const std::vector<double>& values);

  std::size_t n() const noexcept { return n_; }
  std::size_t dim() const noexcept { return dim_; }

  std::span<const double> point(std::size_t i) const noexcept {
    return {data_.data() + i * dim_, dim_};
  }
  double operator()(std::size_t i, std::size_t k) const noexcept {
    return data_[i * dim_ + k];
  }

  std::span<const double> data() const noexcept { return data_; }

 private:
  std::size_t n_;
  std::size_t dim_;
  std::vector<double> data_;
};

/// y = A x + b applied to every row; `matrix` is dim x dim row-major.
Sample affine_transform(const Sample& sample, std::span<const double> matrix,
                        std::span<const double> shift);

}  // namespace nnvar
