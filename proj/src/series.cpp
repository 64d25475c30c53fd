#include "trajbound/series.hpp"

#include <cmath>
#include <string>

#include "trajbound/error.hpp"

namespace trajbound {

SeriesMatrix::SeriesMatrix(std::size_t rows, std::size_t cols, SeriesKind kind)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0), kind_(kind) {}

SeriesMatrix::SeriesMatrix(std::size_t rows, std::size_t cols, std::vector<double> data,
                           SeriesKind kind)
    : rows_(rows), cols_(cols), data_(std::move(data)), kind_(kind) {
  if (data_.size() != rows_ * cols_) {
    throw DomainError("SeriesMatrix: data size " + std::to_string(data_.size()) +
                      " does not match " + std::to_string(rows_) + "x" + std::to_string(cols_));
  }
}

std::vector<double> SeriesMatrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

void SeriesMatrix::append_row(std::span<const double> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  if (values.size() != cols_) throw DomainError("SeriesMatrix: row width mismatch");
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

void SeriesMatrix::validate(std::size_t min_rows) const {
  if (rows_ < min_rows) {
    throw DomainError("SeriesMatrix: need at least " + std::to_string(min_rows) + " rows, got " +
                      std::to_string(rows_));
  }
  if (cols_ < 1) throw DomainError("SeriesMatrix: need at least one column");
  for (double v : data_) {
    if (!std::isfinite(v)) throw DomainError("SeriesMatrix: non-finite entry");
  }
}

}  // namespace trajbound
