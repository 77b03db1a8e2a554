// SPDX-License-Identifier: Apache-2.0
// lcris: LC reflective surface simulator. Copyright (C) 2026 lcris developers

#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "scattering.hpp"

namespace lcris {

/// Long-format CSV: f_hz,theta_deg,phi_deg,re,im,mag_db.
void write_grid_csv(std::ostream& out, const FarFieldGrid& grid);

/// Binary grid, little-endian:
///   char[8]  magic "LCRISGRD"
///   uint32   n_freq, n_theta, n_phi
///   uint32   normalization (0 raw, 1 rcs_m2, 2 rel_metal_plate_db)
///   float64  freq axis [n_freq], theta axis [n_theta], phi axis [n_phi]
///   complex64 values (float32 re, float32 im), row-major (freq, theta, phi)
void write_grid_binary(std::ostream& out, const FarFieldGrid& grid);
FarFieldGrid read_grid_binary(std::istream& in);

/// Columns freq_hz, s21_ris_db, s21_mp_db (header required, any column order).
/// Malformed rows raise DataError naming the 1-based line number.
struct TraceColumns {
  std::vector<double> freq_hz, s21_ris_db, s21_mp_db;
};
TraceColumns read_trace_csv(std::istream& in);

/// Buffered output set: files are only created by `commit()`, so a failing
/// command leaves no partial outputs behind.
class OutputSet {
public:
  explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}
  std::ostream& open(const std::string& name);
  void commit() const;
  const std::filesystem::path& dir() const { return dir_; }
  std::vector<std::string> names() const;

private:
  std::filesystem::path dir_;
  std::vector<std::unique_ptr<std::ostringstream>> streams_;
  std::vector<std::string> stream_names_;
};

/// Formats a value with an SI prefix, e.g. 0.0215 W -> "21.5 mW".
std::string si_format(double value, const std::string& unit, int significant = 4);

}  // namespace lcris
