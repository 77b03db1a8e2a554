// SPDX-License-Identifier: Apache-2.0
// lcris: LC reflective surface simulator. Copyright (C) 2026 lcris developers

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "aperture.hpp"

namespace lcris {

struct UniformThickness {};
struct TiltedThickness {
  double gx = 0.0;  // m/m
  double gy = 0.0;
};
struct RandomThickness {
  double sigma = 0.0;     // m
  double corr_len = 1.0;  // m
};
using ThicknessDescriptor = std::variant<UniformThickness, TiltedThickness, RandomThickness>;

struct Misalignment {
  double dx_off = 0.0;  // m
  double dy_off = 0.0;
  double magnitude() const;
};

struct ToleranceField {
  std::vector<double> t_lc_per_element;
  Misalignment misalignment;
  std::uint64_t seed = 0;
  ThicknessDescriptor descriptor;
  double t_nom = 4.6e-6;
  std::size_t clamp_events = 0;

  std::size_t size() const noexcept { return t_lc_per_element.size(); }
  void write_csv(std::ostream& out, const ApertureLayout& layout) const;
};

/// Floor applied to random thickness samples.
inline constexpr double kMinRandomThickness = 0.5e-6;
/// Element count above which random fields use the moving-average fallback.
inline constexpr std::size_t kCholeskyLimit = 2000;

ToleranceField uniform_field(const ApertureLayout& layout, double t_nom);
ToleranceField tilted_field(const ApertureLayout& layout, double t_nom, double gx, double gy);
ToleranceField random_field(const ApertureLayout& layout, double t_nom, double sigma,
                            double corr_len, std::uint64_t seed);

/// Position-level kernels behind the layout overloads.
std::vector<double> tilted_thickness(std::span<const Point2> positions, double t_nom, double gx,
                                     double gy);
/// Zero-mean, unit-variance Gaussian samples with covariance exp(-d / corr_len).
std::vector<double> correlated_gaussian(std::span<const Point2> positions, double corr_len,
                                        std::uint64_t seed);

/// Band-narrowing window for metallization misalignment:
/// g(f) = exp(-((f - f0) / B)^2), B = f0 * width_coeff * (|offset| / 1 um)^-exponent.
struct MisalignmentModel {
  double width_coeff = 2.65;
  double exponent = 1.0;

  double window_width(const Misalignment& offset, double f0) const;  // Hz, +inf for zero offset
};

double misalignment_response(const Misalignment& offset, double frequency, double f0,
                             const MisalignmentModel& model = {});

}  // namespace lcris
