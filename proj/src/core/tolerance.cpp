// SPDX-License-Identifier: Apache-2.0
// lcris: LC reflective surface simulator. Copyright (C) 2026 lcris developers

#include "tolerance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <fmt/format.h>

#include "errors.hpp"

namespace lcris {

double Misalignment::magnitude() const { return std::hypot(dx_off, dy_off); }

void ToleranceField::write_csv(std::ostream& out, const ApertureLayout& layout) const {
  out << "index,x_m,y_m,t_lc_m\n";
  for (std::size_t i = 0; i < t_lc_per_element.size(); ++i) {
    const auto& p = layout.position(i);
    out << fmt::format("{},{:.9e},{:.9e},{:.9e}\n", i, p.x, p.y, t_lc_per_element[i]);
  }
}

ToleranceField uniform_field(const ApertureLayout& layout, double t_nom) {
  if (!(t_nom > 0.0)) throw DomainError("nominal LC thickness must be positive");
  ToleranceField field;
  field.t_lc_per_element.assign(layout.size(), t_nom);
  field.descriptor = UniformThickness{};
  field.t_nom = t_nom;
  return field;
}

std::vector<double> tilted_thickness(std::span<const Point2> positions, double t_nom, double gx,
                                     double gy) {
  std::vector<double> t(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    t[i] = t_nom + gx * positions[i].x + gy * positions[i].y;
    if (!(t[i] > 0.0))
      throw DomainError(fmt::format(
          "tilted LC thickness is {:.3e} m at element {} (corner x={:.4e} m, y={:.4e} m)", t[i], i,
          positions[i].x, positions[i].y));
  }
  return t;
}

ToleranceField tilted_field(const ApertureLayout& layout, double t_nom, double gx, double gy) {
  if (!(t_nom > 0.0)) throw DomainError("nominal LC thickness must be positive");
  ToleranceField field;
  field.t_lc_per_element = tilted_thickness(layout.positions(), t_nom, gx, gy);
  field.descriptor = TiltedThickness{gx, gy};
  field.t_nom = t_nom;
  return field;
}

namespace {

std::vector<double> white_noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> z(n);
  for (auto& v : z) v = normal(rng);
  return z;
}

std::vector<double> cholesky_field(std::span<const Point2> pos, double corr_len, std::uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(pos.size());
  Eigen::MatrixXd cov(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double d = std::hypot(pos[i].x - pos[j].x, pos[i].y - pos[j].y);
      cov(i, j) = cov(j, i) = std::exp(-d / corr_len);
    }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) throw NumericError("covariance factorization failed");
  const auto z = white_noise(pos.size(), seed);
  const Eigen::VectorXd sample = llt.matrixL() * Eigen::Map<const Eigen::VectorXd>(z.data(), n);
  return {sample.data(), sample.data() + n};
}

// Moving-average approximation for large apertures: white noise on the
// elements smoothed by a Gaussian kernel of width corr_len / sqrt(2) and
// renormalized to unit variance per element. Correlation at distance
// corr_len matches exp(-1); the shape is Gaussian rather than exponential.
std::vector<double> moving_average_field(std::span<const Point2> pos, double corr_len,
                                         std::uint64_t seed) {
  const auto z = white_noise(pos.size(), seed);
  const double width = corr_len / std::sqrt(2.0);
  const double reach = 3.0 * width;
  const double cell = std::max(reach, 1e-12);

  double xmin = pos[0].x, ymin = pos[0].y;
  for (const auto& p : pos) {
    xmin = std::min(xmin, p.x);
    ymin = std::min(ymin, p.y);
  }
  auto key = [&](double x, double y) {
    return std::pair<long, long>{static_cast<long>((x - xmin) / cell), static_cast<long>((y - ymin) / cell)};
  };
  std::vector<std::pair<std::pair<long, long>, std::size_t>> cells(pos.size());
  for (std::size_t i = 0; i < pos.size(); ++i) cells[i] = {key(pos[i].x, pos[i].y), i};
  std::sort(cells.begin(), cells.end());

  std::vector<double> out(pos.size());
  for (std::size_t i = 0; i < pos.size(); ++i) {
    const auto [cx, cy] = key(pos[i].x, pos[i].y);
    double acc = 0.0, norm = 0.0;
    for (long gx = cx - 1; gx <= cx + 1; ++gx)
      for (long gy = cy - 1; gy <= cy + 1; ++gy) {
        auto it = std::lower_bound(cells.begin(), cells.end(),
                                   std::pair<std::pair<long, long>, std::size_t>{{gx, gy}, 0});
        for (; it != cells.end() && it->first == std::pair<long, long>{gx, gy}; ++it) {
          const auto& q = pos[it->second];
          const double d2 = (q.x - pos[i].x) * (q.x - pos[i].x) + (q.y - pos[i].y) * (q.y - pos[i].y);
          if (d2 > reach * reach) continue;
          const double w = std::exp(-d2 / (width * width));
          acc += w * z[it->second];
          norm += w * w;
        }
      }
    out[i] = acc / std::sqrt(norm);
  }
  return out;
}

}  // namespace

std::vector<double> correlated_gaussian(std::span<const Point2> positions, double corr_len,
                                        std::uint64_t seed) {
  if (!(corr_len > 0.0)) throw DomainError("correlation length must be positive");
  if (positions.empty()) return {};
  if (positions.size() <= kCholeskyLimit) return cholesky_field(positions, corr_len, seed);
  return moving_average_field(positions, corr_len, seed);
}

ToleranceField random_field(const ApertureLayout& layout, double t_nom, double sigma,
                            double corr_len, std::uint64_t seed) {
  if (!(t_nom > 0.0)) throw DomainError("nominal LC thickness must be positive");
  if (!(sigma >= 0.0)) throw DomainError("sigma must be >= 0");
  if (!(corr_len > 0.0)) throw DomainError("correlation length must be positive");

  ToleranceField field;
  field.descriptor = RandomThickness{sigma, corr_len};
  field.seed = seed;
  field.t_nom = t_nom;
  if (sigma == 0.0) {
    field.t_lc_per_element.assign(layout.size(), t_nom);
    return field;
  }
  const auto g = correlated_gaussian(layout.positions(), corr_len, seed);
  field.t_lc_per_element.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    double t = t_nom + sigma * g[i];
    if (t < kMinRandomThickness) {
      t = kMinRandomThickness;
      ++field.clamp_events;
    }
    field.t_lc_per_element[i] = t;
  }
  return field;
}

double MisalignmentModel::window_width(const Misalignment& offset, double f0) const {
  const double um = offset.magnitude() / 1e-6;
  if (um == 0.0) return std::numeric_limits<double>::infinity();
  return f0 * width_coeff * std::pow(um, -exponent);
}

double misalignment_response(const Misalignment& offset, double frequency, double f0,
                             const MisalignmentModel& model) {
  const double b = model.window_width(offset, f0);
  if (std::isinf(b)) return 1.0;
  const double x = (frequency - f0) / b;
  return std::exp(-x * x);
}

}  // namespace lcris
