// SPDX-License-Identifier: Apache-2.0
// lcris: LC reflective surface simulator. Copyright (C) 2026 lcris developers

#include "aperture.hpp"

#include <fmt/format.h>

#include "errors.hpp"

namespace lcris {

GridKind parse_grid_kind(std::string_view text) {
  if (text == "rectangular") return GridKind::rectangular;
  if (text == "triangular") return GridKind::triangular;
  throw DomainError(fmt::format("unknown grid kind '{}'", text));
}

std::string_view to_string(GridKind kind) {
  return kind == GridKind::triangular ? "triangular" : "rectangular";
}

ApertureLayout build_layout(std::size_t rows, std::size_t cols, double dx, double dy, GridKind grid) {
  if (rows < 1 || cols < 1) throw DomainError(fmt::format("layout needs rows, cols >= 1 (got {}x{})", rows, cols));
  if (!(dx > 0.0) || !(dy > 0.0)) throw DomainError("element spacings must be positive");

  ApertureLayout layout;
  layout.rows_ = rows;
  layout.cols_ = cols;
  layout.dx_ = dx;
  layout.dy_ = dy;
  layout.grid_ = grid;
  layout.positions_.reserve(rows * cols);
  layout.column_of_.reserve(rows * cols);

  double sx = 0.0, sy = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    const double shift = (grid == GridKind::triangular && r % 2 == 1) ? 0.5 * dx : 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      const Point2 p{static_cast<double>(c) * dx + shift, static_cast<double>(r) * dy};
      sx += p.x;
      sy += p.y;
      layout.positions_.push_back(p);
      layout.column_of_.push_back(c);
    }
  }
  const double n = static_cast<double>(layout.positions_.size());
  const double cx = sx / n, cy = sy / n;
  for (auto& p : layout.positions_) {
    p.x -= cx;
    p.y -= cy;
  }
  return layout;
}

ApertureLayout ApertureLayout::translated(double ox, double oy) const {
  ApertureLayout out = *this;
  for (auto& p : out.positions_) {
    p.x += ox;
    p.y += oy;
  }
  return out;
}

void ApertureLayout::write_csv(std::ostream& out) const {
  out << "index,x_m,y_m,column\n";
  for (std::size_t i = 0; i < positions_.size(); ++i)
    out << fmt::format("{},{:.9e},{:.9e},{}\n", i, positions_[i].x, positions_[i].y, column_of_[i]);
}

double aperture_area(const ApertureLayout& layout) {
  if (layout.size() == 0) throw DomainError("empty layout");
  return layout.dx() * layout.dy() * static_cast<double>(layout.rows()) *
         static_cast<double>(layout.cols());
}

std::vector<std::vector<std::size_t>> column_groups(const ApertureLayout& layout) {
  std::vector<std::vector<std::size_t>> groups(layout.cols());
  for (std::size_t i = 0; i < layout.size(); ++i) groups[layout.column_of(i)].push_back(i);
  return groups;
}

}  // namespace lcris
