// SPDX-License-Identifier: Apache-2.0
// lcris: LC reflective surface simulator. Copyright (C) 2026 lcris developers

#pragma once

#include <cmath>
#include <numbers>

namespace lcris {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = std::numbers::pi;

inline constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

inline double wavelength(double frequency_hz) { return kSpeedOfLight / frequency_hz; }
inline double wavenumber(double frequency_hz) { return 2.0 * kPi * frequency_hz / kSpeedOfLight; }

inline double db10(double power_ratio) { return 10.0 * std::log10(power_ratio); }
inline double db20(double amplitude_ratio) { return 20.0 * std::log10(amplitude_ratio); }
inline double from_db10(double db) { return std::pow(10.0, db / 10.0); }
inline double from_db20(double db) { return std::pow(10.0, db / 20.0); }

}  // namespace lcris
