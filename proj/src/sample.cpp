#include "nnvar/sample.hpp"

#include <cmath>
#include <string>

#include "nnvar/errors.hpp"

namespace nnvar {

Sample::Sample(std::size_t n, std::size_t dim, std::vector<double> data)
    : n_(n), dim_(dim), data_(std::move(data)) {
  if (n_ < 2) {
    throw EmptySampleError("sample needs at least 2 points, got " + std::to_string(n_));
  }
  if (dim_ == 0) throw InvalidParamsError("sample dimension must be >= 1");
  if (data_.size() != n_ * dim_) {
    throw InvalidParamsError("sample data size " + std::to_string(data_.size()) +
                             " does not match " + std::to_string(n_) + " x " +
                             std::to_string(dim_));
  }
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw InvalidParamsError("non-finite coordinate at row " + std::to_string(i / dim_) +
                               ", column " + std::to_string(i % dim_));
    }
  }
}

Sample Sample::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t dim = rows.empty() ? 1 : rows.front().size();
  std::vector<double> data;
  data.reserve(rows.size() * dim);
  for (const auto& row : rows) {
    if (row.size() != dim) throw InvalidParamsError("ragged rows in sample");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Sample(rows.size(), dim, std::move(data));
}

Sample Sample::from_column(const std::vector<double>& values) {
  return Sample(values.size(), 1, values);
}

Sample affine_transform(const Sample& sample, std::span<const double> matrix,
                        std::span<const double> shift) {
  const std::size_t d = sample.dim();
  if (matrix.size() != d * d || shift.size() != d) {
    throw DimensionMismatchError("affine map does not match sample dimension");
  }
  std::vector<double> out(sample.n() * d);
  for (std::size_t i = 0; i < sample.n(); ++i) {
    const auto x = sample.point(i);
    for (std::size_t r = 0; r < d; ++r) {
      double acc = shift[r];
      for (std::size_t c = 0; c < d; ++c) acc += matrix[r * d + c] * x[c];
      out[i * d + r] = acc;
    }
  }
  return Sample(sample.n(), d, std::move(out));
}

}  // namespace nnvar
