#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "curveflow/curve.hpp"
#include "curveflow/errors.hpp"
#include "curveflow/stepper.hpp"

namespace curveflow {

// Shortest decimal representation that parses back to the identical double.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{}) throw Error("could not parse number: '" + std::string(text) + "'");
  return v;
}

inline std::string snapshot_filename(long step) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "curve_%06ld.csv", step);
  return buf;
}

// One "x,y" pair per line, no header; the polygon closes implicitly.
inline void write_curve_csv(const DiscreteCurve& curve, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw Error("cannot open for writing: " + file.string());
  for (const Vec2& p : curve.x) out << format_double(p.x) << ',' << format_double(p.y) << '\n';
  if (!out) throw Error("write failed: " + file.string());
}

inline std::vector<Vec2> read_curve_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open for reading: " + file.string());
  std::vector<Vec2> pts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error("bad curve line " + std::to_string(line_no) + " in " + file.string());
    }
    pts.push_back({parse_double(std::string_view(line).substr(0, comma)),
                   parse_double(std::string_view(line).substr(comma + 1))});
  }
  return pts;
}

inline constexpr std::string_view metrics_header =
    "step,t,L,area,uniformity,k_min,k_max,gs_iters_k,gs_iters_x";

// Writes curve_<step>.csv into out_dir and appends one row to metrics.csv
// (created with its header on first use).
inline void write_snapshot(const Snapshot& snap, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create output directory " + out_dir.string() + ": " + ec.message());

  write_curve_csv(snap.curve, out_dir / snapshot_filename(snap.step));

  const std::filesystem::path metrics = out_dir / "metrics.csv";
  const bool fresh = !std::filesystem::exists(metrics);
  std::ofstream out(metrics, std::ios::app);
  if (!out) throw Error("cannot open for writing: " + metrics.string());
  if (fresh) out << metrics_header << '\n';
  out << snap.step << ',' << format_double(snap.curve.t) << ','
      << format_double(snap.diag.total_length) << ',' << format_double(snap.area) << ','
      << format_double(snap.uniformity) << ',' << format_double(snap.k_min) << ','
      << format_double(snap.k_max) << ',' << snap.diag.gs_iters_curvature << ','
      << snap.diag.gs_iters_position << '\n';
  if (!out) throw Error("write failed: " + metrics.string());
}

}  // namespace curveflow
