// SPDX-License-Identifier: Apache-2.0
// lcris: LC reflective surface simulator. Copyright (C) 2026 lcris developers

#include "io.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "constants.hpp"
#include "errors.hpp"

namespace lcris {

static_assert(std::endian::native == std::endian::little, "binary grid writer assumes a little-endian host");

void write_grid_csv(std::ostream& out, const FarFieldGrid& grid) {
  out << "f_hz,theta_deg,phi_deg,re,im,mag_db\n";
  for (std::size_t fi = 0; fi < grid.freq_axis.size(); ++fi)
    for (std::size_t ti = 0; ti < grid.theta_axis.size(); ++ti)
      for (std::size_t pi = 0; pi < grid.phi_axis.size(); ++pi) {
        const cplx v = grid.at(fi, ti, pi);
        const double mag = std::abs(v);
        out << fmt::format("{:.6f},{:.4f},{:.4f},{:.9e},{:.9e},{:.6f}\n", grid.freq_axis[fi],
                           grid.theta_axis[ti], grid.phi_axis[pi], v.real(), v.imag(),
                           mag > 0.0 ? db20(mag) : -999.0);
      }
}

namespace {

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw DataError("truncated binary grid");
  return v;
}

constexpr std::array<char, 8> kMagic{'L', 'C', 'R', 'I', 'S', 'G', 'R', 'D'};

}  // namespace

void write_grid_binary(std::ostream& out, const FarFieldGrid& grid) {
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(grid.freq_axis.size()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(grid.theta_axis.size()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(grid.phi_axis.size()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(grid.normalization));
  for (const auto* axis : {&grid.freq_axis, &grid.theta_axis, &grid.phi_axis})
    for (double v : *axis) put<double>(out, v);
  for (const auto& v : grid.values) {
    put<float>(out, static_cast<float>(v.real()));
    put<float>(out, static_cast<float>(v.imag()));
  }
}

FarFieldGrid read_grid_binary(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw DataError("not a binary grid file");
  FarFieldGrid grid;
  const auto nf = get<std::uint32_t>(in), nt = get<std::uint32_t>(in), np = get<std::uint32_t>(in);
  const auto norm = get<std::uint32_t>(in);
  if (norm > 2) throw DataError("unknown grid normalization tag");
  grid.normalization = static_cast<GridNormalization>(norm);
  grid.freq_axis.resize(nf);
  grid.theta_axis.resize(nt);
  grid.phi_axis.resize(np);
  for (auto* axis : {&grid.freq_axis, &grid.theta_axis, &grid.phi_axis})
    for (auto& v : *axis) v = get<double>(in);
  grid.values.resize(static_cast<std::size_t>(nf) * nt * np);
  for (auto& v : grid.values) {
    const float re = get<float>(in), im = get<float>(in);
    v = {re, im};
  }
  return grid;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& cell, std::size_t line_no, const char* column) {
  if (cell.empty()) throw DataError(fmt::format("row {}: empty {} value", line_no, column));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != cell.size()) throw DataError(fmt::format("row {}: cannot parse {} value '{}'", line_no, column, cell));
  return v;
}

}  // namespace

TraceColumns read_trace_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw DataError("trace file is empty");
  ++line_no;
  const auto header = split_csv(line);
  int ci_f = -1, ci_ris = -1, ci_mp = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "freq_hz") ci_f = static_cast<int>(i);
    if (header[i] == "s21_ris_db") ci_ris = static_cast<int>(i);
    if (header[i] == "s21_mp_db") ci_mp = static_cast<int>(i);
  }
  if (ci_f < 0 || ci_ris < 0 || ci_mp < 0)
    throw DataError("row 1: header must contain freq_hz, s21_ris_db and s21_mp_db");

  TraceColumns cols;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size())
      throw DataError(fmt::format("row {}: expected {} columns, found {}", line_no, header.size(), cells.size()));
    const double f = parse_number(cells[static_cast<std::size_t>(ci_f)], line_no, "freq_hz");
    if (!cols.freq_hz.empty() && !(f > cols.freq_hz.back()))
      throw DataError(fmt::format("row {}: frequencies must be strictly increasing", line_no));
    cols.freq_hz.push_back(f);
    cols.s21_ris_db.push_back(parse_number(cells[static_cast<std::size_t>(ci_ris)], line_no, "s21_ris_db"));
    cols.s21_mp_db.push_back(parse_number(cells[static_cast<std::size_t>(ci_mp)], line_no, "s21_mp_db"));
  }
  if (cols.freq_hz.empty()) throw DataError("trace file has no data rows");
  return cols;
}

std::ostream& OutputSet::open(const std::string& name) {
  streams_.push_back(std::make_unique<std::ostringstream>());
  stream_names_.push_back(name);
  return *streams_.back();
}

std::vector<std::string> OutputSet::names() const { return stream_names_; }

void OutputSet::commit() const {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw IoError(fmt::format("cannot create output directory '{}': {}", dir_.string(), ec.message()));
  for (std::size_t i = 0; i < streams_.size(); ++i) {
    const auto path = dir_ / stream_names_[i];
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    const std::string data = streams_[i]->str();
    if (!f || !f.write(data.data(), static_cast<std::streamsize>(data.size())))
      throw IoError(fmt::format("cannot write '{}'", path.string()));
  }
}

std::string si_format(double value, const std::string& unit, int significant) {
  static constexpr std::array<std::pair<double, const char*>, 9> prefixes{{
      {1e9, "G"}, {1e6, "M"}, {1e3, "k"}, {1.0, ""}, {1e-3, "m"}, {1e-6, "u"}, {1e-9, "n"}, {1e-12, "p"}, {1e-15, "f"}}};
  if (value == 0.0 || !std::isfinite(value)) return fmt::format("{} {}", value, unit);
  const double mag = std::abs(value);
  for (const auto& [scale, prefix] : prefixes)
    if (mag >= scale * (1.0 - 1e-12)) return fmt::format("{:.{}g} {}{}", value / scale, significant, prefix, unit);
  return fmt::format("{:.{}g} {}", value, significant, unit);
}

}  // namespace lcris
