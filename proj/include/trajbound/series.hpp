#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace trajbound {

enum class SeriesKind { generic, sgn, loss_vectors };

// Row-major K x d matrix of per-iteration vectors.
class SeriesMatrix {
 public:
  SeriesMatrix() = default;
  SeriesMatrix(std::size_t rows, std::size_t cols, SeriesKind kind = SeriesKind::generic);
  SeriesMatrix(std::size_t rows, std::size_t cols, std::vector<double> data,
               SeriesKind kind = SeriesKind::generic);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  SeriesKind kind() const noexcept { return kind_; }
  void set_kind(SeriesKind kind) noexcept { kind_ = kind; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::vector<double> column(std::size_t c) const;

  void append_row(std::span<const double> values);

  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  // Throws DomainError unless rows >= min_rows, cols >= 1 and every entry is finite.
  void validate(std::size_t min_rows = 2) const;

  bool operator==(const SeriesMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
  SeriesKind kind_ = SeriesKind::generic;
};

}  // namespace trajbound
