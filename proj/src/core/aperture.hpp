// SPDX-License-Identifier: Apache-2.0
// lcris: LC reflective surface simulator. Copyright (C) 2026 lcris developers

#pragma once

#include <cstddef>
#include <ostream>
#include <string_view>
#include <vector>

namespace lcris {

enum class GridKind { rectangular, triangular };

GridKind parse_grid_kind(std::string_view text);
std::string_view to_string(GridKind kind);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Element positions of an M x N aperture, row-major with row 0 at minimum y.
/// Triangular grids shift odd rows by dx/2. The centroid sits at the origin.
class ApertureLayout {
public:
  ApertureLayout() = default;

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return positions_.size(); }
  double dx() const noexcept { return dx_; }
  double dy() const noexcept { return dy_; }
  GridKind grid() const noexcept { return grid_; }

  const std::vector<Point2>& positions() const noexcept { return positions_; }
  const Point2& position(std::size_t i) const { return positions_.at(i); }
  std::size_t column_of(std::size_t i) const { return column_of_.at(i); }
  std::size_t row_of(std::size_t i) const { return i / cols_; }

  /// Copy with every position shifted by (ox, oy); used by invariance tests.
  ApertureLayout translated(double ox, double oy) const;

  void write_csv(std::ostream& out) const;

  friend ApertureLayout build_layout(std::size_t, std::size_t, double, double, GridKind);

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  double dx_ = 0.0;
  double dy_ = 0.0;
  GridKind grid_ = GridKind::rectangular;
  std::vector<Point2> positions_;
  std::vector<std::size_t> column_of_;
};

ApertureLayout build_layout(std::size_t rows, std::size_t cols, double dx, double dy, GridKind grid);

/// dx * dy * M * N.
double aperture_area(const ApertureLayout& layout);

/// One element-index list per column, ordered by x; a partition of all elements.
std::vector<std::vector<std::size_t>> column_groups(const ApertureLayout& layout);

}  // namespace lcris
